#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "crtgemm/crt_tables.hpp"
#include "crtgemm/int8_engine.hpp"
#include "crtgemm/matrix.hpp"
#include "crtgemm/scaling.hpp"

namespace crtgemm {

// Nonnegative residue matrices U_i = mod(C'_i, p_i), kept only by the debug
// path; the production path folds the reduction into the weighted sum.
struct ResidueProducts {
    std::vector<Matrix<std::uint8_t>> u;
};

struct EmulationResult {
    Matrix<double> c;
    int n_moduli = 0;
    ScaleMode mode = ScaleMode::Fast;
    Precision precision = Precision::Fp64;
};

// x mod p in [0, p-1] via a high-half multiply by floor(2^32/p - 1) and two
// one-sided corrections. Truncating integer division is what makes mod (not
// rmod) the right reduction here.
inline std::uint8_t mod_u8(std::int32_t x, std::int32_t p, std::int32_t pinv_mulhi) {
    const auto hi = static_cast<std::int32_t>((static_cast<std::int64_t>(x) * pinv_mulhi) >> 32);
    std::int64_t y = x - static_cast<std::int64_t>(hi) * p;  // in (-p, 2p)
    if (y >= p) y -= p;
    if (y < 0) y += p;
    return static_cast<std::uint8_t>(y);
}

inline std::uint8_t mod_u8(std::int32_t x, int modulus_index, const CrtConstants& c) {
    return mod_u8(x, c.modulus_set.moduli[modulus_index], c.pinv_mulhi[modulus_index]);
}

// Debug reduction materializing every U_i.
ResidueProducts reduce_products_u8(const std::vector<Int32ProductMatrix>& prods, const CrtConstants& c);

// C1 = sum_i s1_i*U_i and C2 = sum_i s2_i*U_i, each elementwise in FP64 with
// the modulus index ascending. The s1 sum is exact by the beta_i construction.
std::pair<Matrix<double>, Matrix<double>> accumulate(const ResidueProducts& u, const CrtConstants& c);

// Q = round(P_inv*C1); C'' = fma(-P2, Q, fma(-P1, Q, C1) + C2).
inline double crt_reduce_element(double c1, double c2, const CrtConstants& c) {
    const double q = std::nearbyint(c.P_inv * c1);
    return std::fma(-c.P2, q, std::fma(-c.P1, q, c1) + c2);
}

Matrix<double> crt_reduce(const Matrix<double>& c1, const Matrix<double>& c2, const CrtConstants& c);

// diag(mu^-1) * C'' * diag(nu^-1); exact exponent shifts.
EmulationResult unscale(const Matrix<double>& cpp, const ScalePair& scales, const CrtConstants& c);

}  // namespace crtgemm
