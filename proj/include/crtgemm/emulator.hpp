#pragma once

#include <cstdint>

#include "crtgemm/crt_tables.hpp"
#include "crtgemm/matrix.hpp"
#include "crtgemm/reconstruct.hpp"
#include "crtgemm/scaling.hpp"

namespace crtgemm {

struct EmuConfig {
    int n_moduli = 15;
    ScaleMode mode = ScaleMode::Fast;
    Precision precision = Precision::Fp64;
    std::int64_t block_k = kEngineMaxK;  // inner-dimension block size, <= 2^17
    int threads = 1;                     // INT8 engine workers
};

// C ~= A*B through the full pipeline: scaling, truncation, residue slicing,
// INT8 products (blocked when k > block_k), fused mod/weighted accumulation,
// CRT reduction, unscaling. Output is FP64 for both input precisions.
EmulationResult gemm_emulated(const Matrix<double>& a, const Matrix<double>& b, const EmuConfig& cfg);

// FP32 input variant; cfg.precision must be Fp32.
EmulationResult gemm_emulated(const Matrix<float>& a, const Matrix<float>& b, const EmuConfig& cfg);

// Overloads taking an explicit constant table (test instrumentation).
EmulationResult gemm_emulated(const Matrix<double>& a, const Matrix<double>& b, const EmuConfig& cfg,
                              const CrtConstants& consts);
EmulationResult gemm_emulated(const Matrix<float>& a, const Matrix<float>& b, const EmuConfig& cfg,
                              const CrtConstants& consts);

// Convenience down-cast of the FP64 result.
Matrix<float> to_fp32(const Matrix<double>& m);

}  // namespace crtgemm
