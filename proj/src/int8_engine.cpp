#include "crtgemm/int8_engine.hpp"

#include <algorithm>
#include <thread>

#include "crtgemm/errors.hpp"

namespace crtgemm {

namespace {

// Columns [j0, j1) of C. Accumulation is unsigned 32-bit so overflow wraps
// instead of being undefined; the pair-product a0*b0 + a1*b1 stays within
// [-32768, 32512] and needs no widening beyond int32.
void gemm_columns(const Matrix<std::int8_t>& a, const Matrix<std::int8_t>& b,
                  Matrix<std::int32_t>& c, std::int64_t j0, std::int64_t j1) {
    const std::int64_t m = a.rows, k = a.cols;
    std::vector<std::uint32_t> acc(static_cast<std::size_t>(m));
    for (std::int64_t j = j0; j < j1; ++j) {
        std::fill(acc.begin(), acc.end(), 0u);
        const std::int8_t* bcol = b.col(j);
        std::int64_t h = 0;
        for (; h + 1 < k; h += 2) {
            const std::int32_t b0 = bcol[h], b1 = bcol[h + 1];
            const std::int8_t* a0 = a.col(h);
            const std::int8_t* a1 = a.col(h + 1);
            for (std::int64_t i = 0; i < m; ++i)
                acc[i] += static_cast<std::uint32_t>(a0[i] * b0 + a1[i] * b1);
        }
        if (h < k) {
            const std::int32_t b0 = bcol[h];
            const std::int8_t* a0 = a.col(h);
            for (std::int64_t i = 0; i < m; ++i) acc[i] += static_cast<std::uint32_t>(a0[i] * b0);
        }
        std::int32_t* ccol = c.col(j);
        for (std::int64_t i = 0; i < m; ++i) ccol[i] = static_cast<std::int32_t>(acc[i]);
    }
}

}  // namespace

Int32ProductMatrix int8_gemm(const Matrix<std::int8_t>& a, const Matrix<std::int8_t>& b, int n_threads) {
    if (a.cols != b.rows) throw InputError("int8_gemm: inner dimensions disagree");
    if (a.cols > kEngineMaxK) throw InputError("int8_gemm: k exceeds 2^17, use blocked_int8_gemm");
    Int32ProductMatrix out;
    out.k_used = a.cols;
    out.data = Matrix<std::int32_t>(a.rows, b.cols);
    const std::int64_t n = b.cols;
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n)));
    if (n_threads == 1) {
        gemm_columns(a, b, out.data, 0, n);
        return out;
    }
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
        const std::int64_t j0 = t * chunk;
        const std::int64_t j1 = std::min<std::int64_t>(j0 + chunk, n);
        if (j0 >= j1) break;
        pool.emplace_back(gemm_columns, std::cref(a), std::cref(b), std::ref(out.data), j0, j1);
    }
    for (auto& th : pool) th.join();
    return out;
}

Int32ProductMatrix int8_gemm_reference(const Matrix<std::int8_t>& a, const Matrix<std::int8_t>& b) {
    if (a.cols != b.rows) throw InputError("int8_gemm_reference: inner dimensions disagree");
    if (a.cols > kEngineMaxK) throw InputError("int8_gemm_reference: k exceeds 2^17");
    Int32ProductMatrix out;
    out.k_used = a.cols;
    out.data = Matrix<std::int32_t>(a.rows, b.cols);
    for (std::int64_t j = 0; j < b.cols; ++j)
        for (std::int64_t i = 0; i < a.rows; ++i) {
            std::uint32_t s = 0;
            for (std::int64_t h = 0; h < a.cols; ++h)
                s += static_cast<std::uint32_t>(static_cast<std::int32_t>(a(i, h)) * b(h, j));
            out.data(i, j) = static_cast<std::int32_t>(s);
        }
    return out;
}

std::vector<Int32ProductMatrix> blocked_int8_gemm(const Matrix<std::int8_t>& a,
                                                  const Matrix<std::int8_t>& b, std::int64_t block_k,
                                                  int n_threads) {
    if (a.cols != b.rows) throw InputError("blocked_int8_gemm: inner dimensions disagree");
    if (block_k < 1 || block_k > kEngineMaxK) throw InputError("blocked_int8_gemm: invalid block_k");
    std::vector<Int32ProductMatrix> out;
    for (std::int64_t h0 = 0; h0 < a.cols; h0 += block_k) {
        const std::int64_t len = std::min(block_k, a.cols - h0);
        out.push_back(int8_gemm(column_block(a, h0, len), row_block(b, h0, len), n_threads));
    }
    if (out.empty()) {
        Int32ProductMatrix zero;
        zero.k_used = 0;
        zero.data = Matrix<std::int32_t>(a.rows, b.cols);
        out.push_back(std::move(zero));
    }
    return out;
}

}  // namespace crtgemm
