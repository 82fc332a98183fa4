#include "crtgemm/crt_tables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "crtgemm/errors.hpp"

namespace crtgemm {

ModulusSet select_moduli(int n_moduli) {
    if (n_moduli < kMinModuli || n_moduli > kMaxModuliF64)
        throw ConfigError("modulus count must be in [2, 20], got " + std::to_string(n_moduli));
    ModulusSet set;
    set.n_moduli = n_moduli;
    for (int cand = 256; cand >= 2 && static_cast<int>(set.moduli.size()) < n_moduli; --cand) {
        bool ok = true;
        for (int kept : set.moduli)
            if (std::gcd(kept, cand) != 1) {
                ok = false;
                break;
            }
        if (ok) set.moduli.push_back(cand);
    }
    return set;
}

long mod_inverse(long a, long m) {
    if (m < 2) throw std::domain_error("modulus must be >= 2");
    // extended Euclid on (a mod m, m)
    long r0 = m, r1 = ((a % m) + m) % m;
    long t0 = 0, t1 = 1;
    while (r1 != 0) {
        long quot = r0 / r1;
        long r2 = r0 - quot * r1;
        long t2 = t0 - quot * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw std::domain_error("arguments are not coprime");
    return ((t0 % m) + m) % m;
}

double to_double_nearest(const mpz_class& zin) {
    if (zin == 0) return 0.0;
    mpz_class z = abs(zin);
    const long bits = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
    double mag;
    if (bits <= 53) {
        mag = z.get_d();  // exact
    } else {
        const long drop = bits - 53;
        mpz_class low = z & ((mpz_class(1) << (drop - 1)) - 1);
        const bool roundbit = mpz_tstbit(z.get_mpz_t(), static_cast<mp_bitcnt_t>(drop - 1)) != 0;
        const bool sticky = low != 0;
        mpz_class head = z >> drop;
        if (roundbit && (sticky || mpz_tstbit(head.get_mpz_t(), 0))) head += 1;  // half to even
        mag = std::ldexp(head.get_d(), static_cast<int>(drop));
    }
    return zin < 0 ? -mag : mag;
}

double ratio_to_double_nearest(const mpz_class& num, const mpz_class& den) {
    if (num == 0) return 0.0;
    if (den == 0) throw std::domain_error("zero denominator");
    const bool neg = (num < 0) != (den < 0);
    mpz_class n = abs(num), d = abs(den);
    const long e = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) -
                   static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
    const long s = 55 - e;  // quotient gets 54..56 bits
    if (s > 0)
        n <<= s;
    else
        d <<= -s;
    mpz_class quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    const long qbits = static_cast<long>(mpz_sizeinbase(quot.get_mpz_t(), 2));
    const long drop = qbits - 53;
    bool sticky = rem != 0;
    if (drop > 0) {
        mpz_class low = quot & ((mpz_class(1) << (drop - 1)) - 1);
        const bool roundbit = mpz_tstbit(quot.get_mpz_t(), static_cast<mp_bitcnt_t>(drop - 1)) != 0;
        sticky = sticky || low != 0;
        quot >>= drop;
        if (roundbit && (sticky || mpz_tstbit(quot.get_mpz_t(), 0))) quot += 1;
    }
    const double mag = std::ldexp(quot.get_d(), static_cast<int>(std::max(drop, 0L) - s));
    return neg ? -mag : mag;
}

double log2_mpz(const mpz_class& z) {
    if (z <= 0) throw std::domain_error("log2 of non-positive value");
    const long bits = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
    // exact floor from the bit length, fraction from the top 64 bits
    const long shift = std::max(bits - 64, 0L);
    mpz_class head = z >> shift;
    const double m = head.get_d();  // < 2^64, exact to 53 bits
    return std::log2(m) + static_cast<double>(shift);
}

namespace {

int ceil_log2_int(int n) {
    int b = 0;
    while ((1 << b) < n) ++b;
    return b;
}

std::unique_ptr<CrtConstants> make_constants(int n_moduli, Precision precision) {
    auto c = std::make_unique<CrtConstants>();
    c->modulus_set = select_moduli(n_moduli);
    c->precision = precision;
    const auto& p = c->modulus_set.moduli;

    c->big_P = 1;
    for (int pi : p) c->big_P *= pi;

    // residue of P/p_i mod p_i stays below p_i^2 < 2^16, so plain longs suffice
    c->q.resize(n_moduli);
    for (int i = 0; i < n_moduli; ++i) {
        long r = 1;
        for (int j = 0; j < n_moduli; ++j)
            if (j != i) r = (r * (p[j] % p[i])) % p[i];
        c->q[i] = mod_inverse(r, p[i]);
    }

    c->P1 = to_double_nearest(c->big_P);
    mpz_class p1z(c->P1);
    c->P2 = precision == Precision::Fp64 ? to_double_nearest(c->big_P - p1z) : 0.0;
    c->P_inv = ratio_to_double_nearest(1, c->big_P);

    const double half_log = 0.5 * log2_mpz(c->big_P - 1);
    c->pp_fast = static_cast<float>(half_log - 1.5);
    c->pp_accu = static_cast<float>(half_log - 0.5);

    // weights W_i = P/p_i * q_i and the common-grid head/tail split
    std::vector<mpz_class> w(n_moduli);
    std::vector<long> wbits(n_moduli);
    long wbits_max = 0;
    for (int i = 0; i < n_moduli; ++i) {
        w[i] = (c->big_P / p[i]) * c->q[i];
        wbits[i] = static_cast<long>(mpz_sizeinbase(w[i].get_mpz_t(), 2));
        wbits_max = std::max(wbits_max, wbits[i]);
    }
    const int cl2n = ceil_log2_int(n_moduli);
    const long lmax = wbits_max - 1;

    c->beta.resize(n_moduli);
    c->s1.resize(n_moduli);
    c->s2.resize(n_moduli);
    for (int i = 0; i < n_moduli; ++i) {
        const long li = wbits[i] - 1;
        c->beta[i] = static_cast<int>(53 - 8 - cl2n + (li - lmax));
        if (precision == Precision::Fp32) {
            c->s1[i] = to_double_nearest(w[i]);
            c->s2[i] = 0.0;
            continue;
        }
        // keep the top beta_i bits of W_i; the cut position lmax + ceil(log2 N) - 44
        // is the same for every i, which is what makes the U-weighted sum exact
        const long cut = std::max(lmax + cl2n - 44, 0L);
        mpz_class head = (w[i] >> cut) << cut;
        c->s1[i] = to_double_nearest(head);  // exact: head has <= beta_i <= 45 bits
        c->s2[i] = to_double_nearest(w[i] - head);
    }

    c->pinv64.resize(n_moduli);
    c->pinv32.resize(n_moduli);
    c->pinv_mulhi.resize(n_moduli);
    for (int i = 0; i < n_moduli; ++i) {
        c->pinv64[i] = 1.0 / static_cast<double>(p[i]);
        c->pinv32[i] = 1.0f / static_cast<float>(p[i]);
        c->pinv_mulhi[i] = static_cast<std::int32_t>((std::uint64_t(1) << 32) / p[i] - 1);
    }
    return c;
}

}  // namespace

const CrtConstants& build_constants(int n_moduli, Precision precision) {
    if (n_moduli < kMinModuli || n_moduli > max_moduli(precision))
        throw ConfigError("modulus count " + std::to_string(n_moduli) + " out of range [2, " +
                          std::to_string(max_moduli(precision)) + "] for " + to_string(precision));
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<CrtConstants>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n_moduli, static_cast<int>(precision));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_constants(n_moduli, precision)).first;
    return *it->second;
}

std::string dump_tables_csv(const CrtConstants& c) {
    std::ostringstream os;
    os << "p,q,beta,s1,s2\n";
    char buf[128];
    for (int i = 0; i < c.n(); ++i) {
        std::snprintf(buf, sizeof buf, "%d,%ld,%d,%a,%a\n", c.modulus_set.moduli[i], c.q[i], c.beta[i],
                      c.s1[i], c.s2[i]);
        os << buf;
    }
    return os.str();
}

}  // namespace crtgemm
