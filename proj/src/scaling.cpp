#include "crtgemm/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "crtgemm/errors.hpp"

namespace crtgemm {

namespace {

// Scaled magnitudes above 2^72 (2^44 for the FP32 path) would push the fast
// residue extraction outside its exactness range, so the per-row exponent is
// capped to keep mu_i * max|a_i| strictly below these limits.
int magnitude_cap(Precision p) { return p == Precision::Fp64 ? 72 : 44; }

// Keep mu and 1/mu inside the normal range of the working format.
int exponent_clamp(Precision p) { return p == Precision::Fp64 ? 1021 : 125; }

template <typename T>
std::vector<double> row_abs_max(const Matrix<T>& a) {
    std::vector<double> mx(static_cast<std::size_t>(a.rows), 0.0);
    for (std::int64_t j = 0; j < a.cols; ++j) {
        const T* col = a.col(j);
        for (std::int64_t i = 0; i < a.rows; ++i) {
            const double v = std::fabs(static_cast<double>(col[i]));
            if (v > mx[static_cast<std::size_t>(i)]) mx[static_cast<std::size_t>(i)] = v;
        }
    }
    return mx;
}

template <typename T>
std::vector<double> col_abs_max(const Matrix<T>& a) {
    std::vector<double> mx(static_cast<std::size_t>(a.cols), 0.0);
    for (std::int64_t j = 0; j < a.cols; ++j) {
        const T* col = a.col(j);
        double v = 0.0;
        for (std::int64_t i = 0; i < a.rows; ++i) v = std::max(v, std::fabs(static_cast<double>(col[i])));
        mx[static_cast<std::size_t>(j)] = v;
    }
    return mx;
}

double sum_upper_bound(double s, std::int64_t terms) {
    return s * (1.0 + 2.0 * static_cast<double>(terms + 2) * 0x1.0p-53);
}

// exponent of the fast-mode scale for one row/column
int fast_exponent(double norm_sq_ub, int max_exp, const CrtConstants& c) {
    const double t = std::max(1.0, 0.51 * std::log2(norm_sq_ub));
    int e = static_cast<int>(std::floor(static_cast<double>(c.pp_fast) - t));
    e = std::min(e, magnitude_cap(c.precision) - 1 - max_exp);
    const int clamp = exponent_clamp(c.precision);
    return std::clamp(e, -clamp, clamp);
}

template <typename T>
ScalePair scale_fast_impl(const Matrix<T>& a, const Matrix<T>& b, const CrtConstants& c) {
    ScalePair s;
    s.mode = ScaleMode::Fast;
    s.mu.assign(static_cast<std::size_t>(a.rows), 1.0);
    s.nu.assign(static_cast<std::size_t>(b.cols), 1.0);

    const auto amax = row_abs_max(a);
    std::vector<int> gexp(amax.size(), 0);
    for (std::size_t i = 0; i < amax.size(); ++i)
        if (amax[i] != 0.0) gexp[i] = std::ilogb(amax[i]);
    std::vector<double> sums(amax.size(), 0.0);
    for (std::int64_t j = 0; j < a.cols; ++j) {
        const T* col = a.col(j);
        for (std::int64_t i = 0; i < a.rows; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            if (amax[ii] == 0.0) continue;
            const double nh = std::ldexp(static_cast<double>(col[i]), -gexp[ii]);
            sums[ii] += nh * nh;
        }
    }
    for (std::size_t i = 0; i < amax.size(); ++i) {
        if (amax[i] == 0.0) continue;  // sentinel row
        s.mu[i] = std::ldexp(1.0, fast_exponent(sum_upper_bound(sums[i], a.cols), gexp[i], c));
    }

    for (std::int64_t j = 0; j < b.cols; ++j) {
        const T* col = b.col(j);
        double mx = 0.0;
        for (std::int64_t i = 0; i < b.rows; ++i) mx = std::max(mx, std::fabs(static_cast<double>(col[i])));
        if (mx == 0.0) continue;
        const int g = std::ilogb(mx);
        double sum = 0.0;
        for (std::int64_t i = 0; i < b.rows; ++i) {
            const double nh = std::ldexp(static_cast<double>(col[i]), -g);
            sum += nh * nh;
        }
        s.nu[static_cast<std::size_t>(j)] =
            std::ldexp(1.0, fast_exponent(sum_upper_bound(sum, b.rows), g, c));
    }
    return s;
}

template <typename T>
ScalePair scale_accurate_impl(const Matrix<T>& a, const Matrix<T>& b, const CrtConstants& c,
                              std::int64_t block_k, int n_threads) {
    const std::int64_t m = a.rows, k = a.cols, n = b.cols;
    ScalePair s;
    s.mode = ScaleMode::Accurate;
    s.mu.assign(static_cast<std::size_t>(m), 1.0);
    s.nu.assign(static_cast<std::size_t>(n), 1.0);

    const auto amax = row_abs_max(a);
    const auto bmax = col_abs_max(b);
    std::vector<int> ma(amax.size(), 0), nb(bmax.size(), 0);  // exponents of mu', nu'
    for (std::size_t i = 0; i < amax.size(); ++i)
        if (amax[i] != 0.0) ma[i] = 5 - std::ilogb(amax[i]);
    for (std::size_t j = 0; j < bmax.size(); ++j)
        if (bmax[j] != 0.0) nb[j] = 5 - std::ilogb(bmax[j]);

    // ceil(mu'|A|) and ceil(|B|nu'); entries land in [0, 64]
    Matrix<std::int8_t> abar(m, k), bbar(k, n);
    for (std::int64_t j = 0; j < k; ++j) {
        const T* col = a.col(j);
        std::int8_t* dst = abar.col(j);
        for (std::int64_t i = 0; i < m; ++i)
            dst[i] = static_cast<std::int8_t>(
                std::ceil(std::ldexp(std::fabs(static_cast<double>(col[i])), ma[static_cast<std::size_t>(i)])));
    }
    for (std::int64_t j = 0; j < n; ++j) {
        const T* col = b.col(j);
        std::int8_t* dst = bbar.col(j);
        const int e = nb[static_cast<std::size_t>(j)];
        for (std::int64_t i = 0; i < k; ++i)
            dst[i] = static_cast<std::int8_t>(std::ceil(std::ldexp(std::fabs(static_cast<double>(col[i])), e)));
    }

    // Cbar row/column maxima; blocks keep each INT8 product within range and
    // the int64 totals cannot wrap
    std::vector<std::int64_t> rowmax(static_cast<std::size_t>(m), 0), colmax(static_cast<std::size_t>(n), 0);
    {
        Matrix<std::int64_t> cbar(m, n);
        for (const auto& blk : blocked_int8_gemm(abar, bbar, std::min(block_k, kEngineMaxK), n_threads))
            for (std::int64_t e = 0; e < m * n; ++e)
                cbar.data[static_cast<std::size_t>(e)] += blk.data.data[static_cast<std::size_t>(e)];
        for (std::int64_t j = 0; j < n; ++j)
            for (std::int64_t i = 0; i < m; ++i) {
                const std::int64_t v = cbar(i, j);
                rowmax[static_cast<std::size_t>(i)] = std::max(rowmax[static_cast<std::size_t>(i)], v);
                colmax[static_cast<std::size_t>(j)] = std::max(colmax[static_cast<std::size_t>(j)], v);
            }
    }

    const int cap = magnitude_cap(c.precision) - 6;  // mu'*max|a| < 2^6
    const int clamp = exponent_clamp(c.precision);
    auto budget = [&](std::int64_t cmax, int base) {
        int e = 0;  // guarded log2: zero row/column keeps the mu' sentinel
        if (cmax > 0) {
            e = static_cast<int>(
                std::floor(static_cast<double>(c.pp_accu) - 0.51 * std::log2(static_cast<double>(cmax))));
            e = std::min(e, cap);
        }
        return std::clamp(base + e, -clamp, clamp);
    };
    for (std::size_t i = 0; i < amax.size(); ++i)
        if (amax[i] != 0.0) s.mu[i] = std::ldexp(1.0, budget(rowmax[i], ma[i]));
    for (std::size_t j = 0; j < bmax.size(); ++j)
        if (bmax[j] != 0.0) s.nu[j] = std::ldexp(1.0, budget(colmax[j], nb[j]));
    return s;
}

}  // namespace

ScalePair scale_fast(const Matrix<double>& a, const Matrix<double>& b, const CrtConstants& c) {
    return scale_fast_impl(a, b, c);
}
ScalePair scale_fast(const Matrix<float>& a, const Matrix<float>& b, const CrtConstants& c) {
    return scale_fast_impl(a, b, c);
}
ScalePair scale_accurate(const Matrix<double>& a, const Matrix<double>& b, const CrtConstants& c,
                         std::int64_t block_k, int n_threads) {
    return scale_accurate_impl(a, b, c, block_k, n_threads);
}
ScalePair scale_accurate(const Matrix<float>& a, const Matrix<float>& b, const CrtConstants& c,
                         std::int64_t block_k, int n_threads) {
    return scale_accurate_impl(a, b, c, block_k, n_threads);
}

}  // namespace crtgemm
