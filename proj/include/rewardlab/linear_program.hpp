#pragma once

#include <limits>
#include <string>
#include <vector>

namespace rewardlab {

constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

/// One row of a dense LP: coeffs . x <= bound.
struct LpConstraint {
    std::vector<double> coeffs;
    double bound = 0.0;
};

/// maximize objective . x  subject to  constraints and per-variable box bounds.
/// Bounds may be +-infinity.
struct LpProblem {
    std::vector<double> objective;
    std::vector<LpConstraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::string> variable_names;

    int n_vars() const { return static_cast<int>(objective.size()); }
    void validate() const;

    /// Plain-text dump, one constraint per line, round-trippable decimal
    /// coefficients. Meant for cross-checking against an external solver.
    std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
};

const char* to_string(LpStatus status);

/// Two-phase dense tableau simplex with Bland's rule (anti-cycling).
/// Suited to the small dense problems this library produces; objective
/// accurate to ~1e-7, primal feasibility to ~1e-8 on such problems.
LpSolution solve_lp(const LpProblem& lp);

} // namespace rewardlab
