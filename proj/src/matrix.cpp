#include "rewardlab/matrix.hpp"

#include <cmath>
#include <utility>

namespace rewardlab {

void solve_linear_system(Matrix& a, Matrix& b) {
    const int n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("solve_linear_system: matrix not square");
    if (b.rows() != n) throw std::invalid_argument("solve_linear_system: rhs row mismatch");
    const int m = b.cols();

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-300) throw std::runtime_error("solve_linear_system: singular matrix");
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            for (int c = 0; c < m; ++c) std::swap(b(pivot, c), b(col, c));
        }
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = a(r, col) * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            for (int c = 0; c < m; ++c) b(r, c) -= f * b(col, c);
        }
    }
    // back substitution
    for (int col = n - 1; col >= 0; --col) {
        const double inv = 1.0 / a(col, col);
        for (int c = 0; c < m; ++c) {
            double acc = b(col, c);
            for (int k = col + 1; k < n; ++k) acc -= a(col, k) * b(k, c);
            b(col, c) = acc * inv;
        }
    }
}

} // namespace rewardlab
