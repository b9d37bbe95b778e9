#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace verdict {

// Dense row-major matrix of doubles. Vectors (biases, layer-norm params) are
// stored as 1-row matrices so parameters, gradients and optimizer moments all
// share one shape-checked representation.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double at(int r, int c) const {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return data[static_cast<std::size_t>(r) * cols + c];
    }

    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }

    void fill(double v) { data.assign(data.size(), v); }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

// out = a [m x k] * b [k x n]
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    assert(a.cols == b.rows);
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* ar = a.row(i);
        double* or_ = out.row(i);
        for (int k = 0; k < a.cols; ++k) {
            double av = ar[k];
            if (av == 0.0) continue;
            const double* br = b.row(k);
            for (int j = 0; j < b.cols; ++j) or_[j] += av * br[j];
        }
    }
    return out;
}

// out = a [m x k] * b^T, b [n x k]
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    assert(a.cols == b.cols);
    Matrix out(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* ar = a.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* br = b.row(j);
            double s = 0.0;
            for (int k = 0; k < a.cols; ++k) s += ar[k] * br[k];
            out.at(i, j) = s;
        }
    }
    return out;
}

// out = a^T * b, a [k x m], b [k x n]
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    assert(a.rows == b.rows);
    Matrix out(a.cols, b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* ar = a.row(k);
        const double* br = b.row(k);
        for (int i = 0; i < a.cols; ++i) {
            double av = ar[i];
            if (av == 0.0) continue;
            double* or_ = out.row(i);
            for (int j = 0; j < b.cols; ++j) or_[j] += av * br[j];
        }
    }
    return out;
}

// acc += x, shape-checked
inline void add_into(Matrix& acc, const Matrix& x) {
    assert(acc.same_shape(x));
    for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += x.data[i];
}

}  // namespace verdict
