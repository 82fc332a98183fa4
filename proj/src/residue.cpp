#include "crtgemm/residue.hpp"

namespace crtgemm {

namespace {

template <typename T>
Matrix<T> truncate_scale_impl(const Matrix<T>& m, const std::vector<double>& scale, Side side) {
    Matrix<T> out(m.rows, m.cols);
    for (std::int64_t j = 0; j < m.cols; ++j) {
        const T* src = m.col(j);
        T* dst = out.col(j);
        if (side == Side::Col) {
            const T s = static_cast<T>(scale[static_cast<std::size_t>(j)]);
            for (std::int64_t i = 0; i < m.rows; ++i) dst[i] = std::trunc(src[i] * s);
        } else {
            for (std::int64_t i = 0; i < m.rows; ++i)
                dst[i] = std::trunc(src[i] * static_cast<T>(scale[static_cast<std::size_t>(i)]));
        }
    }
    return out;
}

template <typename T>
ResidueSlices to_residue_slices_impl(const Matrix<T>& m, const CrtConstants& c) {
    ResidueSlices rs;
    rs.n_moduli = c.n();
    rs.rows = m.rows;
    rs.cols = m.cols;
    rs.slices.reserve(static_cast<std::size_t>(c.n()));
    for (int idx = 0; idx < c.n(); ++idx) {
        const int p = c.modulus_set.moduli[idx];
        const double pinv64 = c.pinv64[idx];
        const float pinv32 = c.pinv32[idx];
        Matrix<std::int8_t> slice(m.rows, m.cols);
        for (std::int64_t e = 0; e < m.size(); ++e)
            slice.data[static_cast<std::size_t>(e)] =
                rmod_fast(m.data[static_cast<std::size_t>(e)], p, pinv64, pinv32, c.n());
        rs.slices.push_back(std::move(slice));
    }
    return rs;
}

}  // namespace

Matrix<double> truncate_scale(const Matrix<double>& m, const std::vector<double>& scale, Side side) {
    return truncate_scale_impl(m, scale, side);
}
Matrix<float> truncate_scale(const Matrix<float>& m, const std::vector<double>& scale, Side side) {
    return truncate_scale_impl(m, scale, side);
}
ResidueSlices to_residue_slices(const Matrix<double>& m, const CrtConstants& c) {
    return to_residue_slices_impl(m, c);
}
ResidueSlices to_residue_slices(const Matrix<float>& m, const CrtConstants& c) {
    return to_residue_slices_impl(m, c);
}

}  // namespace crtgemm
