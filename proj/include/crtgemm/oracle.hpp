#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "crtgemm/matrix.hpp"

namespace crtgemm {

// Exact product entries as mantissa * 2^exp2. Mantissas are arbitrary
// precision; the per-element exponent is the row/column scaling residue.
struct ExactMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<mpz_class> mant;
    std::vector<long> exp2;

    const mpz_class& m(std::int64_t i, std::int64_t j) const {
        return mant[static_cast<std::size_t>(i + j * rows)];
    }
    long e(std::int64_t i, std::int64_t j) const { return exp2[static_cast<std::size_t>(i + j * rows)]; }

    // nearest FP64 value of element (i, j)
    double value_rounded(std::int64_t i, std::int64_t j) const;
};

struct ErrorReport {
    double max_rel_err = 0.0;
    double median_rel_err = 0.0;
    bool exact_match = true;
    std::int64_t n_elements = 0;
};

// Exact rational matrix product: every FP value is taken as the exact binary
// rational it represents, products and sums carry no rounding.
ExactMatrix exact_gemm(const Matrix<double>& a, const Matrix<double>& b);
ExactMatrix exact_gemm(const Matrix<float>& a, const Matrix<float>& b);

// Componentwise relative error |c - r| / |r| against the exact reference,
// with error 0 at r = 0 when c = 0 and +inf otherwise. The exact_match flag
// is decided in exact arithmetic, not from the rounded errors.
ErrorReport compare(const Matrix<double>& c, const ExactMatrix& ref);

// Straightforward triple-loop products in the native precision, the accuracy
// baselines the emulation is measured against.
Matrix<double> plain_gemm(const Matrix<double>& a, const Matrix<double>& b);
Matrix<float> plain_gemm(const Matrix<float>& a, const Matrix<float>& b);

// Widen an FP32 matrix (baseline results feed the FP64 compare path).
Matrix<double> widen(const Matrix<float>& m);

}  // namespace crtgemm
