#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace crtgemm {

enum class Precision { Fp64, Fp32 };

inline const char* to_string(Precision p) { return p == Precision::Fp64 ? "fp64" : "fp32"; }

// Valid modulus-count ranges. The fp32 limit comes from the validity range of
// the fast residue extraction when inputs carry 24-bit significands.
inline constexpr int kMinModuli = 2;
inline constexpr int kMaxModuliF64 = 20;
inline constexpr int kMaxModuliF32 = 18;

inline int max_moduli(Precision p) { return p == Precision::Fp64 ? kMaxModuliF64 : kMaxModuliF32; }

// Pairwise-coprime moduli, descending from 256. Exactly one even member (256).
struct ModulusSet {
    int n_moduli = 0;
    std::vector<int> moduli;
};

// All derived per-N constants used by the emulation pipeline.
//
// s1/s2 split the exact CRT weights W_i = (P/p_i)*q_i into a bit-limited head
// (at most beta_i significant bits, all lying on a bit grid common to every i)
// plus a rounded tail, so that sum_i s1_i*U_i with U_i < 256 accumulates in
// FP64 without rounding. For fp32 tables s1 is the full nearest-double weight
// and s2 = P2 = 0.
//
// pp_fast/pp_accu are the per-side scale budgets in bits,
//   0.5*log2(P-1) - 1.5  and  0.5*log2(P-1) - 0.5,
// so the product of the row-side and column-side scaled norms stays below P.
struct CrtConstants {
    ModulusSet modulus_set;
    Precision precision = Precision::Fp64;

    mpz_class big_P;               // P = prod p_i
    std::vector<long> q;           // (P/p_i)*q_i == 1 (mod p_i), q_i in [1, p_i-1]
    std::vector<int> beta;         // significant-bit budget of s1_i

    double P1 = 0.0;               // double(P)
    double P2 = 0.0;               // double(P - P1); 0 for fp32 tables
    double P_inv = 0.0;            // double(1/P)
    float pp_fast = 0.0f;
    float pp_accu = 0.0f;

    std::vector<double> s1;
    std::vector<double> s2;
    std::vector<double> pinv64;    // double(1/p_i)
    std::vector<float> pinv32;     // single(1/p_i)
    std::vector<std::int32_t> pinv_mulhi;  // floor(2^32/p_i - 1)

    int n() const { return modulus_set.n_moduli; }
};

// First N members of the greedy descending pairwise-coprime scan from 256.
// Throws ConfigError for N outside [2, 20].
ModulusSet select_moduli(int n_moduli);

// q in [1, m-1] with a*q == 1 (mod m). Throws std::domain_error when gcd(a, m) != 1.
long mod_inverse(long a, long m);

// Build (or fetch from the immutable per-(N, precision) cache) the constant table.
const CrtConstants& build_constants(int n_moduli, Precision precision);

// Debug dump: one row per modulus with p_i, q_i, beta_i and hex-float s1/s2.
std::string dump_tables_csv(const CrtConstants& c);

// Helpers shared with tests: exact big-integer <-> FP64 conversions.
double to_double_nearest(const mpz_class& z);
double ratio_to_double_nearest(const mpz_class& num, const mpz_class& den);
double log2_mpz(const mpz_class& z);  // z > 0

}  // namespace crtgemm
