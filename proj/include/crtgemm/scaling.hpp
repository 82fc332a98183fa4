#pragma once

#include <cstdint>
#include <vector>

#include "crtgemm/crt_tables.hpp"
#include "crtgemm/int8_engine.hpp"
#include "crtgemm/matrix.hpp"

namespace crtgemm {

enum class ScaleMode { Fast, Accurate };

inline const char* to_string(ScaleMode m) { return m == ScaleMode::Fast ? "fast" : "accu"; }

// Power-of-two row scales for A and column scales for B. Zero rows/columns
// carry the sentinel value 1; their pipeline output is exactly zero anyway.
struct ScalePair {
    std::vector<double> mu;
    std::vector<double> nu;
    ScaleMode mode = ScaleMode::Fast;
};

// Cauchy-Schwarz bound on the scaled row/column norms. The row sum of squares
// is computed on entries pre-normalized by the row max (exact power-of-two
// shifts) and inflated by (1 + 2(k+2)u), a round-to-nearest upper bound that
// replaces directed rounding.
ScalePair scale_fast(const Matrix<double>& a, const Matrix<double>& b, const CrtConstants& c);
ScalePair scale_fast(const Matrix<float>& a, const Matrix<float>& b, const CrtConstants& c);

// Direct bound: Cbar = ceil(mu'|A|) * ceil(|B|nu') via the INT8 engine, then
// per-row/column budgets from the row/column maxima of Cbar.
ScalePair scale_accurate(const Matrix<double>& a, const Matrix<double>& b, const CrtConstants& c,
                         std::int64_t block_k = kEngineMaxK, int n_threads = 1);
ScalePair scale_accurate(const Matrix<float>& a, const Matrix<float>& b, const CrtConstants& c,
                         std::int64_t block_k = kEngineMaxK, int n_threads = 1);

}  // namespace crtgemm
