#pragma once

#include <cstdint>
#include <vector>

#include "crtgemm/matrix.hpp"

namespace crtgemm {

// Inner dimension above which a single INT8 product could wrap more than the
// one tolerated boundary case (k = 2^17 with the 256 modulus).
inline constexpr std::int64_t kEngineMaxK = std::int64_t(1) << 17;

struct Int32ProductMatrix {
    Matrix<std::int32_t> data;
    std::int64_t k_used = 0;
};

// C = A*B with signed-8-bit inputs and 32-bit two's-complement (wrapping)
// accumulation. Exact for k < 2^17; at k = 2^17 the single possible +2^31
// result wraps to -2^31, which later mod-256 reduction absorbs.
// Throws InputError for k > 2^17 (callers must block).
Int32ProductMatrix int8_gemm(const Matrix<std::int8_t>& a, const Matrix<std::int8_t>& b,
                             int n_threads = 1);

// Plain triple loop, used as an in-tree cross-check for the tiled kernel.
Int32ProductMatrix int8_gemm_reference(const Matrix<std::int8_t>& a, const Matrix<std::int8_t>& b);

// Partition the inner dimension into blocks of at most block_k columns/rows
// and multiply each pair. The caller reduces every block product mod p_i and
// merges the residues before CRT reconstruction.
std::vector<Int32ProductMatrix> blocked_int8_gemm(const Matrix<std::int8_t>& a,
                                                  const Matrix<std::int8_t>& b, std::int64_t block_k,
                                                  int n_threads = 1);

}  // namespace crtgemm
