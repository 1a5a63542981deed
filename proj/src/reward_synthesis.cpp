#include "rewardlab/reward_synthesis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rewardlab/feature_expectations.hpp"

namespace rewardlab {

const char* to_string(SynthStatus status) {
    switch (status) {
        case SynthStatus::Optimal: return "optimal";
        case SynthStatus::NoPositiveGap: return "no-positive-gap";
        case SynthStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {

void check_policy_covers(const Mdp& mdp, const Policy& pi_plus) {
    if (static_cast<int>(pi_plus.action.size()) != mdp.n_states)
        throw std::invalid_argument("target policy must cover every state");
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        if (pi_plus.action[s] < 0 || pi_plus.action[s] >= mdp.n_actions)
            throw std::invalid_argument("target policy undefined at non-terminal state " +
                                        std::to_string(s));
    }
}

// Advantage rows at one discount: sum_i (D_a - D)(s, i) R(i), one row per
// non-terminal (s, a != pi+(s)).
void append_gap_rows(LpProblem& lp, const Mdp& mdp, const FeatureExpectations& fe,
                     const Policy& pi_plus, bool with_delta_column) {
    const int k = mdp.n_features();
    const int n_vars = lp.n_vars();
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        const int target = pi_plus.action[s];
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (a == target) continue;
            LpConstraint row;
            row.coeffs.assign(n_vars, 0.0);
            for (int i = 0; i < k; ++i)
                row.coeffs[i] = fe.da(s, a, i) - fe.d(s, i);
            if (with_delta_column) row.coeffs[k] = 1.0;
            row.bound = 0.0;
            lp.constraints.push_back(std::move(row));
        }
    }
}

} // namespace

LpProblem build_lp(const Mdp& mdp, const Policy& pi_plus, double gamma, double gamma_tilde,
                   bool nonpositive_transient) {
    if (!(gamma >= 0.0 && gamma < 1.0) || !(gamma_tilde >= 0.0 && gamma_tilde < 1.0))
        throw std::invalid_argument("build_lp: both discounts must lie in [0, 1)");
    check_policy_covers(mdp, pi_plus);

    const int k = mdp.n_features();
    LpProblem lp;
    lp.objective.assign(k + 1, 0.0);
    lp.objective[k] = 1.0; // maximize delta
    lp.lower.assign(k + 1, -1.0);
    lp.upper.assign(k + 1, 1.0);
    lp.lower[k] = -10.0; // delta kept in a finite box so the simplex stays bounded
    lp.upper[k] = 10.0;
    if (nonpositive_transient) {
        for (int i = 0; i < k; ++i) {
            for (int s = 0; s < mdp.n_states; ++s) {
                if (!mdp.is_terminal(s) && mdp.features(s, i) != 0.0) {
                    lp.upper[i] = 0.0;
                    break;
                }
            }
        }
    }
    for (int i = 0; i < k; ++i) lp.variable_names.push_back("R" + std::to_string(i));
    lp.variable_names.push_back("delta");

    FeatureExpectations fe = compute_feature_expectations(mdp, pi_plus, gamma);
    append_gap_rows(lp, mdp, fe, pi_plus, true);
    FeatureExpectations fe_tilde = compute_feature_expectations(mdp, pi_plus, gamma_tilde);
    append_gap_rows(lp, mdp, fe_tilde, pi_plus, true);
    return lp;
}

SynthesisResult synthesize(const Mdp& mdp, const Policy& pi_plus, double gamma,
                           double gamma_tilde, bool nonpositive_transient) {
    LpProblem lp = build_lp(mdp, pi_plus, gamma, gamma_tilde, nonpositive_transient);
    LpSolution sol = solve_lp(lp);

    SynthesisResult out;
    out.gamma_tilde = gamma_tilde;
    if (sol.status != LpStatus::Optimal) {
        out.status = SynthStatus::Infeasible;
        return out;
    }

    const int k = mdp.n_features();
    const double delta_star = sol.x[k];
    if (delta_star > 1e-9) {
        // The max-delta optimum is usually a face, not a point. Re-solve on
        // that face minimizing the total reward mass; this picks one
        // deterministic vertex and keeps per-state profiles from carrying
        // gratuitous positive weights.
        LpProblem tie_break = lp;
        tie_break.objective.assign(k + 1, 0.0);
        for (int i = 0; i < k; ++i) tie_break.objective[i] = -1.0;
        tie_break.lower[k] = delta_star - 1e-9;
        LpSolution canonical = solve_lp(tie_break);
        if (canonical.status == LpStatus::Optimal) {
            sol = std::move(canonical);
            sol.x[k] = delta_star;
        }
    }

    std::vector<double> weights(sol.x.begin(), sol.x.begin() + k);
    for (double& w : weights) {
        if (w < -1.0 - 1e-7 || w > 1.0 + 1e-7)
            throw std::runtime_error("synthesize: LP solution violates the reward box");
        w = std::min(1.0, std::max(-1.0, w));
    }
    out.reward = RewardVector(std::move(weights));
    out.delta = sol.x[k];
    out.objective_gap = action_gap(mdp, out.reward, pi_plus, gamma);
    out.subjective_gap = action_gap(mdp, out.reward, pi_plus, gamma_tilde);
    // positivity judged above solver noise; a delta of 1e-15 is not a design
    out.status = out.delta > 1e-9 ? SynthStatus::Optimal : SynthStatus::NoPositiveGap;
    return out;
}

std::pair<SynthesisResult, double> min_subjective_discount_synthesis(
    const Mdp& mdp, const Policy& pi_plus, double gamma, double delta_floor,
    bool nonpositive_transient) {
    if (delta_floor <= 0.0)
        throw std::invalid_argument("min_subjective_discount_synthesis: floor must be positive");

    auto feasible = [&](double gt) {
        SynthesisResult res = synthesize(mdp, pi_plus, gamma, gt, nonpositive_transient);
        return res.status == SynthStatus::Optimal && res.delta >= delta_floor;
    };

    if (!feasible(gamma))
        throw std::runtime_error(
            "target policy cannot be induced with gap >= " + std::to_string(delta_floor));

    double lo = 0.0, hi = gamma;
    // gap at discount 0 is identically zero, so lo starts infeasible
    constexpr double kTol = 1e-4;
    while (hi - lo > kTol) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    SynthesisResult res = synthesize(mdp, pi_plus, gamma, hi, nonpositive_transient);
    return {std::move(res), hi};
}

std::vector<SynthesisResult> gamma_tilde_sweep(const Mdp& mdp, const Policy& pi_plus,
                                               double gamma,
                                               const std::vector<double>& grid) {
    std::vector<SynthesisResult> out;
    out.reserve(grid.size());
    for (double gt : grid) {
        if (gt < 0.0 || gt > gamma)
            throw std::invalid_argument("gamma_tilde_sweep: grid value outside [0, gamma]");
        out.push_back(synthesize(mdp, pi_plus, gamma, gt));
    }
    return out;
}

RewardVector low_gap_dense_reward(const Mdp& mdp, const Policy& pi_plus, double gamma,
                                  double epsilon) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("low_gap_dense_reward: epsilon must be strictly positive");
    check_policy_covers(mdp, pi_plus);

    // Variables R(1..k) and M; every advantage must reach epsilon and stay
    // below M, and M is minimized. That pins the realized gap near epsilon.
    const int k = mdp.n_features();
    LpProblem lp;
    lp.objective.assign(k + 1, 0.0);
    lp.objective[k] = -1.0;
    lp.lower.assign(k + 1, -1.0);
    lp.upper.assign(k + 1, 1.0);
    lp.lower[k] = 0.0;
    lp.upper[k] = 40.0;
    for (int i = 0; i < k; ++i) lp.variable_names.push_back("R" + std::to_string(i));
    lp.variable_names.push_back("max_advantage");

    FeatureExpectations fe = compute_feature_expectations(mdp, pi_plus, gamma);
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        const int target = pi_plus.action[s];
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (a == target) continue;
            LpConstraint floor_row, cap_row;
            floor_row.coeffs.assign(k + 1, 0.0);
            cap_row.coeffs.assign(k + 1, 0.0);
            for (int i = 0; i < k; ++i) {
                double adv = fe.d(s, i) - fe.da(s, a, i);
                floor_row.coeffs[i] = -adv; // advantage >= epsilon
                cap_row.coeffs[i] = adv;    // advantage <= M
            }
            floor_row.bound = -epsilon;
            cap_row.coeffs[k] = -1.0;
            cap_row.bound = 0.0;
            lp.constraints.push_back(std::move(floor_row));
            lp.constraints.push_back(std::move(cap_row));
        }
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("low_gap_dense_reward: no correct reward with gap >= " +
                                 std::to_string(epsilon) + " exists in this feature class");
    std::vector<double> weights(sol.x.begin(), sol.x.begin() + k);
    for (double& w : weights) w = std::min(1.0, std::max(-1.0, w));
    return RewardVector(std::move(weights));
}

} // namespace rewardlab
