#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace crtgemm {

// Dense column-major matrix. Leading dimension == rows.
template <typename T>
struct Matrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::int64_t r, std::int64_t c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c)) {
        if (r < 0 || c < 0) throw std::invalid_argument("negative matrix dimension");
    }

    T& operator()(std::int64_t i, std::int64_t j) { return data[static_cast<std::size_t>(i + j * rows)]; }
    const T& operator()(std::int64_t i, std::int64_t j) const {
        return data[static_cast<std::size_t>(i + j * rows)];
    }

    std::int64_t size() const { return rows * cols; }

    T* col(std::int64_t j) { return data.data() + j * rows; }
    const T* col(std::int64_t j) const { return data.data() + j * rows; }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

// Copy of columns [c0, c0+nc) of M.
template <typename T>
Matrix<T> column_block(const Matrix<T>& m, std::int64_t c0, std::int64_t nc) {
    Matrix<T> out(m.rows, nc);
    for (std::int64_t j = 0; j < nc; ++j)
        for (std::int64_t i = 0; i < m.rows; ++i) out(i, j) = m(i, j + c0);
    return out;
}

// Copy of rows [r0, r0+nr) of M.
template <typename T>
Matrix<T> row_block(const Matrix<T>& m, std::int64_t r0, std::int64_t nr) {
    Matrix<T> out(nr, m.cols);
    for (std::int64_t j = 0; j < m.cols; ++j)
        for (std::int64_t i = 0; i < nr; ++i) out(i, j) = m(i + r0, j);
    return out;
}

}  // namespace crtgemm
