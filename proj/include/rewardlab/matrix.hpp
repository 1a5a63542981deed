#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rewardlab {

/// Dense row-major matrix of doubles. Small sizes only; no BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Solves A * X = B in place of B, for possibly many right-hand-side columns.
// Gaussian elimination with partial pivoting; A is destroyed.
// Throws std::runtime_error on a (numerically) singular system.
void solve_linear_system(Matrix& a, Matrix& b);

} // namespace rewardlab
