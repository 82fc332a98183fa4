#include "crtgemm/reconstruct.hpp"

#include "crtgemm/errors.hpp"

namespace crtgemm {

ResidueProducts reduce_products_u8(const std::vector<Int32ProductMatrix>& prods, const CrtConstants& c) {
    if (static_cast<int>(prods.size()) != c.n())
        throw InputError("reduce_products_u8: product count does not match modulus count");
    ResidueProducts out;
    out.u.reserve(prods.size());
    for (int i = 0; i < c.n(); ++i) {
        const auto& src = prods[static_cast<std::size_t>(i)].data;
        Matrix<std::uint8_t> u(src.rows, src.cols);
        for (std::int64_t e = 0; e < src.size(); ++e)
            u.data[static_cast<std::size_t>(e)] = mod_u8(src.data[static_cast<std::size_t>(e)], i, c);
        out.u.push_back(std::move(u));
    }
    return out;
}

std::pair<Matrix<double>, Matrix<double>> accumulate(const ResidueProducts& u, const CrtConstants& c) {
    if (static_cast<int>(u.u.size()) != c.n())
        throw InputError("accumulate: residue count does not match modulus count");
    const std::int64_t rows = u.u.front().rows, cols = u.u.front().cols;
    Matrix<double> c1(rows, cols), c2(rows, cols);
    for (int i = 0; i < c.n(); ++i) {
        const double s1 = c.s1[static_cast<std::size_t>(i)];
        const double s2 = c.s2[static_cast<std::size_t>(i)];
        const auto& ui = u.u[static_cast<std::size_t>(i)];
        for (std::int64_t e = 0; e < rows * cols; ++e) {
            const auto v = static_cast<double>(ui.data[static_cast<std::size_t>(e)]);
            c1.data[static_cast<std::size_t>(e)] += s1 * v;
            c2.data[static_cast<std::size_t>(e)] += s2 * v;
        }
    }
    return {std::move(c1), std::move(c2)};
}

Matrix<double> crt_reduce(const Matrix<double>& c1, const Matrix<double>& c2, const CrtConstants& c) {
    if (c1.rows != c2.rows || c1.cols != c2.cols) throw InputError("crt_reduce: shape mismatch");
    Matrix<double> out(c1.rows, c1.cols);
    for (std::int64_t e = 0; e < c1.size(); ++e)
        out.data[static_cast<std::size_t>(e)] =
            crt_reduce_element(c1.data[static_cast<std::size_t>(e)], c2.data[static_cast<std::size_t>(e)], c);
    return out;
}

EmulationResult unscale(const Matrix<double>& cpp, const ScalePair& scales, const CrtConstants& c) {
    const std::int64_t m = cpp.rows, n = cpp.cols;
    if (static_cast<std::int64_t>(scales.mu.size()) != m ||
        static_cast<std::int64_t>(scales.nu.size()) != n)
        throw InputError("unscale: scale vector length mismatch");
    EmulationResult res;
    res.n_moduli = c.n();
    res.mode = scales.mode;
    res.precision = c.precision;
    res.c = Matrix<double>(m, n);
    std::vector<int> mu_exp(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) mu_exp[static_cast<std::size_t>(i)] = std::ilogb(scales.mu[static_cast<std::size_t>(i)]);
    for (std::int64_t j = 0; j < n; ++j) {
        const int ne = std::ilogb(scales.nu[static_cast<std::size_t>(j)]);
        const double* src = cpp.col(j);
        double* dst = res.c.col(j);
        for (std::int64_t i = 0; i < m; ++i)
            dst[i] = std::ldexp(src[i], -(mu_exp[static_cast<std::size_t>(i)] + ne));
    }
    return res;
}

}  // namespace crtgemm
