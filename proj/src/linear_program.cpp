#include "rewardlab/linear_program.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rewardlab {

void LpProblem::validate() const {
    const int n = n_vars();
    if (n == 0) throw std::invalid_argument("LpProblem: no variables");
    if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n)
        throw std::invalid_argument("LpProblem: bound vectors must match variable count");
    if (!variable_names.empty() && static_cast<int>(variable_names.size()) != n)
        throw std::invalid_argument("LpProblem: variable_names length mismatch");
    for (int j = 0; j < n; ++j) {
        if (std::isnan(lower[j]) || std::isnan(upper[j]))
            throw std::invalid_argument("LpProblem: NaN bound");
        if (lower[j] > upper[j])
            throw std::invalid_argument("LpProblem: lower bound exceeds upper bound for variable " +
                                        std::to_string(j));
    }
    for (size_t row = 0; row < constraints.size(); ++row) {
        if (static_cast<int>(constraints[row].coeffs.size()) != n)
            throw std::invalid_argument("LpProblem: constraint " + std::to_string(row) +
                                        " has wrong coefficient count");
        if (std::isnan(constraints[row].bound))
            throw std::invalid_argument("LpProblem: NaN constraint bound");
    }
}

std::string LpProblem::dump() const {
    std::ostringstream os;
    os << std::setprecision(17);
    auto name = [&](int j) {
        return variable_names.empty() ? "x" + std::to_string(j) : variable_names[j];
    };
    os << "maximize";
    for (int j = 0; j < n_vars(); ++j) os << ' ' << objective[j] << '*' << name(j);
    os << '\n';
    for (const auto& row : constraints) {
        for (int j = 0; j < n_vars(); ++j) {
            if (j > 0) os << " + ";
            os << row.coeffs[j] << '*' << name(j);
        }
        os << " <= " << row.bound << '\n';
    }
    for (int j = 0; j < n_vars(); ++j)
        os << lower[j] << " <= " << name(j) << " <= " << upper[j] << '\n';
    return os.str();
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;

// How an original variable maps onto the nonnegative simplex variables:
// x = offset + sign * y[col] (- y[neg_col] when split).
struct VarMap {
    int col = -1;
    int neg_col = -1; // second column of a free variable, -1 otherwise
    double sign = 1.0;
    double offset = 0.0;
};

class SimplexTableau {
    int m_;
    int n_;
    std::vector<double> a_;

public:
    SimplexTableau(int n_rows, int n_cols)
        : m_(n_rows), n_(n_cols), a_(static_cast<size_t>(n_rows) * n_cols, 0.0), b_(n_rows, 0.0),
          basis_(n_rows, -1), allowed_(n_cols, true) {}

    double& a(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double a(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    std::vector<double> b_;
    std::vector<int> basis_;
    std::vector<char> allowed_;

    int rows() const { return m_; }
    int cols() const { return n_; }

    void pivot(int row, int col, std::vector<double>& obj1, double& val1,
               std::vector<double>& obj2, double& val2) {
        const double inv = 1.0 / a(row, col);
        for (int j = 0; j < n_; ++j) a(row, j) *= inv;
        b_[row] *= inv;
        a(row, col) = 1.0; // kill roundoff on the pivot itself
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            double f = a(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n_; ++j) a(i, j) -= f * a(row, j);
            a(i, col) = 0.0;
            b_[i] -= f * b_[row];
        }
        double f1 = obj1[col];
        if (f1 != 0.0) {
            for (int j = 0; j < n_; ++j) obj1[j] -= f1 * a(row, j);
            obj1[col] = 0.0;
            val1 += f1 * b_[row];
        }
        double f2 = obj2[col];
        if (f2 != 0.0) {
            for (int j = 0; j < n_; ++j) obj2[j] -= f2 * a(row, j);
            obj2[col] = 0.0;
            val2 += f2 * b_[row];
        }
        basis_[row] = col;
    }

    // Bland's rule: entering column is the lowest-index improving one,
    // leaving row breaks ratio ties by lowest basis-variable index.
    // Returns 0 on optimal, 1 after a pivot, -1 on unbounded.
    int bland_step(std::vector<double>& obj, double& val, std::vector<double>& other,
                   double& other_val) {
        int enter = -1;
        for (int j = 0; j < n_; ++j) {
            if (allowed_[j] && obj[j] > kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return 0;

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m_; ++i) {
            double coef = a(i, enter);
            if (coef <= kPivotTol) continue;
            double ratio = b_[i] / coef;
            if (leave < 0 || ratio < best_ratio - 1e-15 ||
                (std::fabs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return -1;
        pivot(leave, enter, obj, val, other, other_val);
        return 1;
    }
};

} // namespace

LpSolution solve_lp(const LpProblem& lp) {
    lp.validate();
    const int n = lp.n_vars();
    const int n_rows_in = static_cast<int>(lp.constraints.size());

    // Map every variable onto nonnegative simplex variables.
    std::vector<VarMap> vmap(n);
    int n_y = 0;
    int n_ub_rows = 0;
    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (std::isfinite(lo)) {
            vmap[j] = {n_y++, -1, 1.0, lo};
            if (std::isfinite(hi)) ++n_ub_rows; // y_j <= hi - lo (zero-width pins the var)
        } else if (std::isfinite(hi)) {
            vmap[j] = {n_y++, -1, -1.0, hi};
        } else {
            vmap[j] = {n_y, n_y + 1, 1.0, 0.0};
            n_y += 2;
        }
    }

    const int m = n_rows_in + n_ub_rows;
    // Columns: shifted variables, one slack per row, artificials appended later.
    std::vector<std::vector<double>> rows(m, std::vector<double>(n_y, 0.0));
    std::vector<double> rhs(m, 0.0);

    auto add_coeff = [&](int row, int var, double coef) {
        const VarMap& vm = vmap[var];
        rows[row][vm.col] += coef * vm.sign;
        if (vm.neg_col >= 0) rows[row][vm.neg_col] -= coef;
        rhs[row] -= coef * vm.offset;
    };

    for (int i = 0; i < n_rows_in; ++i) {
        rhs[i] = lp.constraints[i].bound;
        for (int j = 0; j < n; ++j) {
            double coef = lp.constraints[i].coeffs[j];
            if (coef != 0.0) add_coeff(i, j, coef);
        }
    }
    int row = n_rows_in;
    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (std::isfinite(lo) && std::isfinite(hi)) {
            rows[row][vmap[j].col] = 1.0;
            rhs[row] = hi - lo;
            ++row;
        }
    }

    // Count artificials (rows whose rhs is negative after the shift).
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (rhs[i] < 0.0) ++n_art;

    const int n_cols = n_y + m + n_art;
    SimplexTableau tab(m, n_cols);
    int art = n_y + m;
    for (int i = 0; i < m; ++i) {
        double flip = rhs[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n_y; ++j) tab.a(i, j) = flip * rows[i][j];
        tab.a(i, n_y + i) = flip; // slack
        tab.b_[i] = flip * rhs[i];
        if (flip < 0.0) {
            tab.a(i, art) = 1.0;
            tab.basis_[i] = art;
            ++art;
        } else {
            tab.basis_[i] = n_y + i;
        }
    }

    // Phase-2 profit row (reduced costs of the shifted objective).
    std::vector<double> profit(n_cols, 0.0);
    double profit_val = 0.0;
    for (int j = 0; j < n; ++j) {
        const VarMap& vm = vmap[j];
        profit[vm.col] += lp.objective[j] * vm.sign;
        if (vm.neg_col >= 0) profit[vm.neg_col] -= lp.objective[j];
    }

    // Phase-1 profit row: maximize minus the sum of artificials.
    std::vector<double> phase1(n_cols, 0.0);
    double phase1_val = 0.0;
    for (int j = n_y + m; j < n_cols; ++j) phase1[j] = -1.0;
    for (int i = 0; i < m; ++i) {
        int bcol = tab.basis_[i];
        double coef = phase1[bcol];
        if (coef == 0.0) continue;
        for (int j = 0; j < n_cols; ++j) phase1[j] -= coef * tab.a(i, j);
        phase1[bcol] = 0.0;
        phase1_val += coef * tab.b_[i];
    }

    LpSolution sol;
    if (n_art > 0) {
        while (true) {
            int step = tab.bland_step(phase1, phase1_val, profit, profit_val);
            if (step == 0) break;
            if (step < 0)
                throw std::runtime_error("solve_lp: phase 1 unbounded (internal error)");
        }
        if (phase1_val < -kFeasTol) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Pivot leftover artificials out of the basis where possible; rows
        // where that fails are redundant and their artificial stays at zero.
        for (int i = 0; i < tab.rows(); ++i) {
            if (tab.basis_[i] < n_y + m) continue;
            for (int j = 0; j < n_y + m; ++j) {
                if (std::fabs(tab.a(i, j)) > kPivotTol) {
                    tab.pivot(i, j, phase1, phase1_val, profit, profit_val);
                    break;
                }
            }
        }
        for (int j = n_y + m; j < n_cols; ++j) tab.allowed_[j] = false;
    }

    while (true) {
        int step = tab.bland_step(profit, profit_val, phase1, phase1_val);
        if (step == 0) break;
        if (step < 0) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
    }

    std::vector<double> y(n_y, 0.0);
    for (int i = 0; i < tab.rows(); ++i)
        if (tab.basis_[i] < n_y) y[tab.basis_[i]] = tab.b_[i];

    sol.status = LpStatus::Optimal;
    sol.x.resize(n);
    for (int j = 0; j < n; ++j) {
        const VarMap& vm = vmap[j];
        double x = vm.offset + vm.sign * y[vm.col];
        if (vm.neg_col >= 0) x -= y[vm.neg_col];
        // shave numerical dust off the box bounds
        if (x < lp.lower[j] && x > lp.lower[j] - 1e-9) x = lp.lower[j];
        if (x > lp.upper[j] && x < lp.upper[j] + 1e-9) x = lp.upper[j];
        sol.x[j] = x;
    }
    sol.objective_value = 0.0;
    for (int j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.x[j];
    return sol;
}

} // namespace rewardlab
