#include "crtgemm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crtgemm/crt_tables.hpp"
#include "crtgemm/errors.hpp"

namespace crtgemm {

namespace {

// one FP value as mant53 * 2^exp2 (mant53 == 0 for zero)
struct Fixed {
    std::int64_t mant = 0;
    long exp2 = 0;
};

template <typename T>
Fixed decompose(T v) {
    Fixed f;
    if (v == T(0)) return f;
    int ex = 0;
    const double frac = std::frexp(static_cast<double>(v), &ex);  // |frac| in [0.5, 1)
    f.mant = static_cast<std::int64_t>(std::ldexp(frac, 53));     // exact
    f.exp2 = ex - 53;
    return f;
}

}  // namespace

double ExactMatrix::value_rounded(std::int64_t i, std::int64_t j) const {
    const mpz_class& z = m(i, j);
    if (z == 0) return 0.0;
    return std::ldexp(to_double_nearest(z), static_cast<int>(e(i, j)));
}

template <typename T>
static ExactMatrix exact_gemm_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols != b.rows) throw InputError("exact_gemm: inner dimensions disagree");
    const std::int64_t m = a.rows, k = a.cols, n = b.cols;

    // integers per row of A (row-major for the inner loop) and column of B,
    // after factoring out the per-row / per-column minimum exponent
    std::vector<Fixed> fa(static_cast<std::size_t>(m * k)), fb(static_cast<std::size_t>(k * n));
    std::vector<long> rowexp(static_cast<std::size_t>(m), 0), colexp(static_cast<std::size_t>(n), 0);
    std::vector<bool> rowhas(static_cast<std::size_t>(m), false), colhas(static_cast<std::size_t>(n), false);
    for (std::int64_t j = 0; j < k; ++j)
        for (std::int64_t i = 0; i < m; ++i) {
            const Fixed f = decompose(a(i, j));
            fa[static_cast<std::size_t>(i * k + j)] = f;
            if (f.mant != 0) {
                auto ii = static_cast<std::size_t>(i);
                rowexp[ii] = rowhas[ii] ? std::min(rowexp[ii], f.exp2) : f.exp2;
                rowhas[ii] = true;
            }
        }
    for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < k; ++i) {
            const Fixed f = decompose(b(i, j));
            fb[static_cast<std::size_t>(j * k + i)] = f;
            if (f.mant != 0) {
                auto jj = static_cast<std::size_t>(j);
                colexp[jj] = colhas[jj] ? std::min(colexp[jj], f.exp2) : f.exp2;
                colhas[jj] = true;
            }
        }
    std::vector<mpz_class> za(static_cast<std::size_t>(m * k)), zb(static_cast<std::size_t>(k * n));
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < k; ++j) {
            const Fixed& f = fa[static_cast<std::size_t>(i * k + j)];
            if (f.mant == 0) continue;
            mpz_class& z = za[static_cast<std::size_t>(i * k + j)];
            z = f.mant;
            z <<= static_cast<unsigned long>(f.exp2 - rowexp[static_cast<std::size_t>(i)]);
        }
    for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < k; ++i) {
            const Fixed& f = fb[static_cast<std::size_t>(j * k + i)];
            if (f.mant == 0) continue;
            mpz_class& z = zb[static_cast<std::size_t>(j * k + i)];
            z = f.mant;
            z <<= static_cast<unsigned long>(f.exp2 - colexp[static_cast<std::size_t>(j)]);
        }

    ExactMatrix out;
    out.rows = m;
    out.cols = n;
    out.mant.resize(static_cast<std::size_t>(m * n));
    out.exp2.resize(static_cast<std::size_t>(m * n));
    mpz_class acc;
    for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < m; ++i) {
            acc = 0;
            const mpz_class* ra = &za[static_cast<std::size_t>(i * k)];
            const mpz_class* cb = &zb[static_cast<std::size_t>(j * k)];
            for (std::int64_t h = 0; h < k; ++h)
                mpz_addmul(acc.get_mpz_t(), ra[h].get_mpz_t(), cb[h].get_mpz_t());
            out.mant[static_cast<std::size_t>(i + j * m)] = acc;
            out.exp2[static_cast<std::size_t>(i + j * m)] =
                rowexp[static_cast<std::size_t>(i)] + colexp[static_cast<std::size_t>(j)];
        }
    return out;
}

ExactMatrix exact_gemm(const Matrix<double>& a, const Matrix<double>& b) { return exact_gemm_impl(a, b); }
ExactMatrix exact_gemm(const Matrix<float>& a, const Matrix<float>& b) { return exact_gemm_impl(a, b); }

ErrorReport compare(const Matrix<double>& c, const ExactMatrix& ref) {
    if (c.rows != ref.rows || c.cols != ref.cols) throw InputError("compare: shape mismatch");
    ErrorReport rep;
    rep.n_elements = c.rows * c.cols;
    std::vector<double> errs;
    errs.reserve(static_cast<std::size_t>(rep.n_elements));
    mpz_class cz, rz;
    for (std::int64_t j = 0; j < c.cols; ++j)
        for (std::int64_t i = 0; i < c.rows; ++i) {
            const double cv = c(i, j);
            const mpz_class& rm = ref.m(i, j);
            if (rm == 0) {
                if (cv == 0.0) {
                    errs.push_back(0.0);
                } else {
                    errs.push_back(std::numeric_limits<double>::infinity());
                    rep.exact_match = false;
                }
                continue;
            }
            // exact equality: compare c and rm*2^e on a common grid
            const Fixed fc = decompose(cv);
            bool equal = false;
            if (fc.mant != 0) {
                const long re = ref.e(i, j);
                const long g = std::min(fc.exp2, re);
                cz = fc.mant;
                cz <<= static_cast<unsigned long>(fc.exp2 - g);
                rz = rm;
                rz <<= static_cast<unsigned long>(re - g);
                equal = cz == rz;
            }
            if (equal) {
                errs.push_back(0.0);
                continue;
            }
            rep.exact_match = false;
            const double rv = ref.value_rounded(i, j);
            errs.push_back(std::fabs(cv - rv) / std::fabs(rv));
        }
    for (double e : errs) rep.max_rel_err = std::max(rep.max_rel_err, e);
    std::sort(errs.begin(), errs.end());
    const std::size_t mid = errs.size() / 2;
    rep.median_rel_err =
        errs.size() % 2 == 1 ? errs[mid] : (errs.empty() ? 0.0 : 0.5 * (errs[mid - 1] + errs[mid]));
    if (rep.exact_match) rep.max_rel_err = 0.0;
    return rep;
}

template <typename T>
static Matrix<T> plain_gemm_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols != b.rows) throw InputError("plain_gemm: inner dimensions disagree");
    Matrix<T> out(a.rows, b.cols);
    for (std::int64_t j = 0; j < b.cols; ++j)
        for (std::int64_t i = 0; i < a.rows; ++i) {
            T acc = T(0);
            for (std::int64_t h = 0; h < a.cols; ++h) acc += a(i, h) * b(h, j);
            out(i, j) = acc;
        }
    return out;
}

Matrix<double> plain_gemm(const Matrix<double>& a, const Matrix<double>& b) { return plain_gemm_impl(a, b); }
Matrix<float> plain_gemm(const Matrix<float>& a, const Matrix<float>& b) { return plain_gemm_impl(a, b); }

Matrix<double> widen(const Matrix<float>& m) {
    Matrix<double> out(m.rows, m.cols);
    for (std::int64_t e = 0; e < m.size(); ++e)
        out.data[static_cast<std::size_t>(e)] = static_cast<double>(m.data[static_cast<std::size_t>(e)]);
    return out;
}

}  // namespace crtgemm
