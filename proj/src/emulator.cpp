#include "crtgemm/emulator.hpp"

#include <cmath>

#include "crtgemm/errors.hpp"
#include "crtgemm/residue.hpp"

namespace crtgemm {

namespace {

template <typename T>
void validate_inputs(const Matrix<T>& a, const Matrix<T>& b, const EmuConfig& cfg) {
    if (a.cols != b.rows) throw InputError("gemm_emulated: inner dimensions disagree");
    if (a.rows < 1 || a.cols < 1 || b.cols < 1) throw InputError("gemm_emulated: empty dimension");
    if (cfg.block_k < 1 || cfg.block_k > kEngineMaxK)
        throw ConfigError("gemm_emulated: block_k must be in [1, 2^17]");
    if (cfg.threads < 1) throw ConfigError("gemm_emulated: threads must be >= 1");
    for (const T& v : a.data)
        if (!std::isfinite(v)) throw InputError("gemm_emulated: non-finite entry in A");
    for (const T& v : b.data)
        if (!std::isfinite(v)) throw InputError("gemm_emulated: non-finite entry in B");
}

template <typename T>
EmulationResult emulate(const Matrix<T>& a, const Matrix<T>& b, const EmuConfig& cfg,
                        const CrtConstants& c) {
    validate_inputs(a, b, cfg);
    const std::int64_t m = a.rows, k = a.cols, n = b.cols;

    const ScalePair scales = cfg.mode == ScaleMode::Fast
                                 ? scale_fast(a, b, c)
                                 : scale_accurate(a, b, c, cfg.block_k, cfg.threads);
    const Matrix<T> ap = truncate_scale(a, scales.mu, Side::Row);
    const Matrix<T> bp = truncate_scale(b, scales.nu, Side::Col);
    const ResidueSlices sa = to_residue_slices(ap, c);
    const ResidueSlices sb = to_residue_slices(bp, c);

    Matrix<double> c1(m, n), c2(m, n);
    const bool single_block = k <= cfg.block_k;
    Matrix<std::int32_t> usum;
    for (int i = 0; i < c.n(); ++i) {
        const double s1 = c.s1[static_cast<std::size_t>(i)];
        const double s2 = c.s2[static_cast<std::size_t>(i)];
        if (single_block) {
            const Int32ProductMatrix prod =
                int8_gemm(sa.slices[static_cast<std::size_t>(i)], sb.slices[static_cast<std::size_t>(i)],
                          cfg.threads);
            for (std::int64_t e = 0; e < m * n; ++e) {
                const auto u =
                    static_cast<double>(mod_u8(prod.data.data[static_cast<std::size_t>(e)], i, c));
                c1.data[static_cast<std::size_t>(e)] += s1 * u;
                c2.data[static_cast<std::size_t>(e)] += s2 * u;
            }
            continue;
        }
        // k > block_k: per-block residues summed exactly, then reduced once so
        // the weighted accumulation sees the same U_i as the unblocked path
        usum = Matrix<std::int32_t>(m, n);
        for (std::int64_t h0 = 0; h0 < k; h0 += cfg.block_k) {
            const std::int64_t len = std::min(cfg.block_k, k - h0);
            const Int32ProductMatrix prod =
                int8_gemm(column_block(sa.slices[static_cast<std::size_t>(i)], h0, len),
                          row_block(sb.slices[static_cast<std::size_t>(i)], h0, len), cfg.threads);
            for (std::int64_t e = 0; e < m * n; ++e)
                usum.data[static_cast<std::size_t>(e)] +=
                    mod_u8(prod.data.data[static_cast<std::size_t>(e)], i, c);
        }
        for (std::int64_t e = 0; e < m * n; ++e) {
            const auto u = static_cast<double>(mod_u8(usum.data[static_cast<std::size_t>(e)], i, c));
            c1.data[static_cast<std::size_t>(e)] += s1 * u;
            c2.data[static_cast<std::size_t>(e)] += s2 * u;
        }
    }

    const Matrix<double> cpp = crt_reduce(c1, c2, c);
    return unscale(cpp, scales, c);
}

}  // namespace

EmulationResult gemm_emulated(const Matrix<double>& a, const Matrix<double>& b, const EmuConfig& cfg,
                              const CrtConstants& consts) {
    if (cfg.precision == Precision::Fp32) {
        Matrix<float> af(a.rows, a.cols), bf(b.rows, b.cols);
        for (std::int64_t e = 0; e < a.size(); ++e)
            af.data[static_cast<std::size_t>(e)] = static_cast<float>(a.data[static_cast<std::size_t>(e)]);
        for (std::int64_t e = 0; e < b.size(); ++e)
            bf.data[static_cast<std::size_t>(e)] = static_cast<float>(b.data[static_cast<std::size_t>(e)]);
        return emulate(af, bf, cfg, consts);
    }
    return emulate(a, b, cfg, consts);
}

EmulationResult gemm_emulated(const Matrix<float>& a, const Matrix<float>& b, const EmuConfig& cfg,
                              const CrtConstants& consts) {
    if (cfg.precision != Precision::Fp32)
        throw ConfigError("gemm_emulated: FP32 inputs require cfg.precision == Fp32");
    return emulate(a, b, cfg, consts);
}

EmulationResult gemm_emulated(const Matrix<double>& a, const Matrix<double>& b, const EmuConfig& cfg) {
    return gemm_emulated(a, b, cfg, build_constants(cfg.n_moduli, cfg.precision));
}

EmulationResult gemm_emulated(const Matrix<float>& a, const Matrix<float>& b, const EmuConfig& cfg) {
    return gemm_emulated(a, b, cfg, build_constants(cfg.n_moduli, cfg.precision));
}

Matrix<float> to_fp32(const Matrix<double>& m) {
    Matrix<float> out(m.rows, m.cols);
    for (std::int64_t e = 0; e < m.size(); ++e)
        out.data[static_cast<std::size_t>(e)] = static_cast<float>(m.data[static_cast<std::size_t>(e)]);
    return out;
}

}  // namespace crtgemm
