#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rewardlab/matrix.hpp"

namespace rewardlab {

/// Finite MDP with state-based rewards expressed over a feature basis.
///
/// Conventions used throughout the library:
///  - reward accrues on the state occupied: V(s) = R(s) + gamma * E[V(s')],
///  - terminal states are absorbing, collect their own reward once, and
///    have no continuation value.
struct Mdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> transition; // T(s, a, s'), layout (s * n_actions + a) * n_states + s'
    std::vector<std::uint8_t> terminal;
    int start_state = 0;
    Matrix features; // F(s, i), n_states x n_features
    double objective_discount = 0.95;

    int n_features() const { return features.cols(); }

    double t(int s, int a, int s2) const {
        return transition[(static_cast<size_t>(s) * n_actions + a) * n_states + s2];
    }
    double& t(int s, int a, int s2) {
        return transition[(static_cast<size_t>(s) * n_actions + a) * n_states + s2];
    }

    bool is_terminal(int s) const { return terminal[s] != 0; }

    /// Throws std::invalid_argument when a structural invariant is violated
    /// (non-stochastic row, negative probability, discount outside [0, 1), ...).
    void validate() const;
};

/// Per-feature reward weights; state reward is the feature-weighted sum.
struct RewardVector {
    std::vector<double> weights;

    RewardVector() = default;
    explicit RewardVector(std::vector<double> w) : weights(std::move(w)) {}

    int size() const { return static_cast<int>(weights.size()); }
    bool in_unit_box(double slack = 0.0) const;
};

/// Deterministic state-to-action mapping.
struct Policy {
    std::vector<int> action;

    Policy() = default;
    explicit Policy(std::vector<int> a) : action(std::move(a)) {}
};

struct ValueTables {
    std::vector<double> v; // V(s)
    Matrix q;              // Q(s, a)
};

double reward_of_state(const Mdp& mdp, const RewardVector& r, int s);

/// All per-state rewards at once.
std::vector<double> state_rewards(const Mdp& mdp, const RewardVector& r);

/// Exact policy evaluation by direct linear solve.
/// V(s) = R(s) + gamma * sum_s' T(s, pi(s), s') V(s') for non-terminal s,
/// V(s) = R(s) at terminals; Q(s,a) built from the solved V.
ValueTables evaluate_policy(const Mdp& mdp, const RewardVector& r, const Policy& pi,
                            double gamma);

/// Value iteration to max-norm tolerance 1e-12 (at most 100000 sweeps),
/// greedy policy with lowest-index tie-breaking.
std::pair<Policy, ValueTables> optimal_policy(const Mdp& mdp, const RewardVector& r,
                                              double gamma);

/// min over non-terminal s of Q(s, pi+(s)) - max_{a != pi+(s)} Q(s, a),
/// with Q evaluated under pi+ itself. Negative when the reward is incorrect.
double action_gap(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus, double gamma);

/// True iff pi+ is strictly optimal in every non-terminal state (gap > 0).
bool is_correct(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus, double gamma);

namespace detail {
// Shared solver for the affine fixed point X = RHS + gamma * T_pi X
// (terminal rows pinned to RHS). Used by policy evaluation and by the
// feature-expectation tables; rhs has one column per quantity solved.
Matrix solve_policy_fixed_point(const Mdp& mdp, const Policy& pi, double gamma,
                                const Matrix& rhs);
int greedy_action(const Matrix& q, int s);
} // namespace detail

} // namespace rewardlab
