#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "crtgemm/crt_tables.hpp"
#include "crtgemm/matrix.hpp"

namespace crtgemm {

enum class Side { Row, Col };

// Refinement thresholds of the fast residue extraction. One extra FMA pass
// runs when N reaches the first threshold, a second at the second; they keep
// the intermediate remainder small enough for the final pass to be exact.
inline constexpr int kRmodRefine1F64 = 13;
inline constexpr int kRmodRefine2F64 = 19;
inline constexpr int kRmodRefine1F32 = 5;
inline constexpr int kRmodRefine2F32 = 11;

// N signed-8-bit residue matrices of one scaled integer-valued input.
// Slices are column-major with leading dimension == rows.
struct ResidueSlices {
    int n_moduli = 0;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<Matrix<std::int8_t>> slices;
};

// trunc(diag(scale) * M) for Side::Row, trunc(M * diag(scale)) for Side::Col.
// Scale entries are powers of two, so the multiplication itself is exact.
Matrix<double> truncate_scale(const Matrix<double>& m, const std::vector<double>& scale, Side side);
Matrix<float> truncate_scale(const Matrix<float>& m, const std::vector<double>& scale, Side side);

// Nearest-representative remainder of an integer-valued x modulo p, computed
// as round/FMA sequences. The +128 result possible for p = 256 wraps to -128
// on the INT8 cast, which is the same residue class.
inline std::int8_t rmod_fast(double x, int p, double pinv64, float pinv32, int n_moduli) {
    auto y = static_cast<float>(std::fma(std::nearbyint(x * pinv64), -static_cast<double>(p), x));
    const auto pf = static_cast<float>(p);
    if (n_moduli >= kRmodRefine1F64) y = std::fmaf(std::nearbyintf(y * pinv32), -pf, y);
    if (n_moduli >= kRmodRefine2F64) y = std::fmaf(std::nearbyintf(y * pinv32), -pf, y);
    return static_cast<std::int8_t>(static_cast<std::int32_t>(y));
}

inline std::int8_t rmod_fast(float x, int p, double /*pinv64*/, float pinv32, int n_moduli) {
    const auto pf = static_cast<float>(p);
    float y = std::fmaf(std::nearbyintf(x * pinv32), -pf, x);
    if (n_moduli >= kRmodRefine1F32) y = std::fmaf(std::nearbyintf(y * pinv32), -pf, y);
    if (n_moduli >= kRmodRefine2F32) y = std::fmaf(std::nearbyintf(y * pinv32), -pf, y);
    return static_cast<std::int8_t>(static_cast<std::int32_t>(y));
}

template <typename T>
std::int8_t rmod_fast(T x, int modulus_index, const CrtConstants& c) {
    return rmod_fast(x, c.modulus_set.moduli[modulus_index], c.pinv64[modulus_index],
                     c.pinv32[modulus_index], c.n());
}

ResidueSlices to_residue_slices(const Matrix<double>& m, const CrtConstants& c);
ResidueSlices to_residue_slices(const Matrix<float>& m, const CrtConstants& c);

}  // namespace crtgemm
