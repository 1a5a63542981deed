#include "rewardlab/mdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rewardlab {

void Mdp::validate() const {
    if (n_states <= 0) throw std::invalid_argument("Mdp: n_states must be positive");
    if (n_actions <= 0) throw std::invalid_argument("Mdp: n_actions must be positive");
    if (transition.size() != static_cast<size_t>(n_states) * n_actions * n_states)
        throw std::invalid_argument("Mdp: transition table has wrong size");
    if (terminal.size() != static_cast<size_t>(n_states))
        throw std::invalid_argument("Mdp: terminal mask has wrong size");
    if (start_state < 0 || start_state >= n_states)
        throw std::invalid_argument("Mdp: start_state out of range");
    if (features.rows() != n_states)
        throw std::invalid_argument("Mdp: feature matrix must have one row per state");
    if (!(objective_discount >= 0.0 && objective_discount < 1.0))
        throw std::invalid_argument("Mdp: objective_discount must lie in [0, 1)");

    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double row_sum = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                double p = t(s, a, s2);
                if (p < 0.0)
                    throw std::invalid_argument("Mdp: negative transition probability at state " +
                                                std::to_string(s) + ", action " + std::to_string(a));
                row_sum += p;
            }
            if (!is_terminal(s) && std::fabs(row_sum - 1.0) > 1e-12)
                throw std::invalid_argument("Mdp: transition row for state " + std::to_string(s) +
                                            ", action " + std::to_string(a) +
                                            " sums to " + std::to_string(row_sum));
        }
    }
}

bool RewardVector::in_unit_box(double slack) const {
    for (double w : weights)
        if (w < -1.0 - slack || w > 1.0 + slack) return false;
    return true;
}

double reward_of_state(const Mdp& mdp, const RewardVector& r, int s) {
    if (s < 0 || s >= mdp.n_states) throw std::out_of_range("reward_of_state: state out of range");
    if (r.size() != mdp.n_features())
        throw std::invalid_argument("reward_of_state: feature count mismatch");
    double acc = 0.0;
    for (int i = 0; i < r.size(); ++i) acc += mdp.features(s, i) * r.weights[i];
    return acc;
}

std::vector<double> state_rewards(const Mdp& mdp, const RewardVector& r) {
    std::vector<double> out(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) out[s] = reward_of_state(mdp, r, s);
    return out;
}

namespace detail {

Matrix solve_policy_fixed_point(const Mdp& mdp, const Policy& pi, double gamma,
                                const Matrix& rhs) {
    const int n = mdp.n_states;
    if (static_cast<int>(pi.action.size()) != n)
        throw std::invalid_argument("policy must cover every state");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount must lie in [0, 1)");

    Matrix a(n, n, 0.0);
    Matrix b = rhs;
    for (int s = 0; s < n; ++s) {
        a(s, s) = 1.0;
        if (mdp.is_terminal(s)) continue;
        int act = pi.action[s];
        if (act < 0 || act >= mdp.n_actions)
            throw std::invalid_argument("policy action out of range at state " + std::to_string(s));
        for (int s2 = 0; s2 < n; ++s2) a(s, s2) -= gamma * mdp.t(s, act, s2);
    }
    solve_linear_system(a, b);
    return b;
}

int greedy_action(const Matrix& q, int s) {
    int best = 0;
    for (int a = 1; a < q.cols(); ++a)
        if (q(s, a) > q(s, best)) best = a;
    return best;
}

} // namespace detail

static Matrix q_from_values(const Mdp& mdp, const std::vector<double>& rewards,
                            const std::vector<double>& v, double gamma) {
    Matrix q(mdp.n_states, mdp.n_actions, 0.0);
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) {
            for (int a = 0; a < mdp.n_actions; ++a) q(s, a) = rewards[s];
            continue;
        }
        for (int a = 0; a < mdp.n_actions; ++a) {
            double cont = 0.0;
            for (int s2 = 0; s2 < mdp.n_states; ++s2) cont += mdp.t(s, a, s2) * v[s2];
            q(s, a) = rewards[s] + gamma * cont;
        }
    }
    return q;
}

ValueTables evaluate_policy(const Mdp& mdp, const RewardVector& r, const Policy& pi,
                            double gamma) {
    std::vector<double> rewards = state_rewards(mdp, r);
    Matrix rhs(mdp.n_states, 1);
    for (int s = 0; s < mdp.n_states; ++s) rhs(s, 0) = rewards[s];
    Matrix sol = detail::solve_policy_fixed_point(mdp, pi, gamma, rhs);

    ValueTables out;
    out.v.resize(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) out.v[s] = sol(s, 0);
    out.q = q_from_values(mdp, rewards, out.v, gamma);
    return out;
}

std::pair<Policy, ValueTables> optimal_policy(const Mdp& mdp, const RewardVector& r,
                                              double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("optimal_policy: discount must lie in [0, 1)");
    const int n = mdp.n_states;
    std::vector<double> rewards = state_rewards(mdp, r);
    std::vector<double> v(rewards), next(n);

    constexpr double kTol = 1e-12;
    constexpr int kMaxSweeps = 100000;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double change = 0.0;
        for (int s = 0; s < n; ++s) {
            if (mdp.is_terminal(s)) {
                next[s] = rewards[s];
            } else {
                double best = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < mdp.n_actions; ++a) {
                    double cont = 0.0;
                    for (int s2 = 0; s2 < n; ++s2) cont += mdp.t(s, a, s2) * v[s2];
                    if (cont > best) best = cont;
                }
                next[s] = rewards[s] + gamma * best;
            }
            change = std::max(change, std::fabs(next[s] - v[s]));
        }
        v.swap(next);
        if (change < kTol) break;
    }

    ValueTables tables;
    tables.v = std::move(v);
    tables.q = q_from_values(mdp, rewards, tables.v, gamma);
    Policy pi;
    pi.action.resize(n);
    for (int s = 0; s < n; ++s) pi.action[s] = detail::greedy_action(tables.q, s);
    return {std::move(pi), std::move(tables)};
}

double action_gap(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus, double gamma) {
    if (mdp.n_actions < 2)
        throw std::invalid_argument("action_gap: undefined for a single-action MDP");
    ValueTables tables = evaluate_policy(mdp, r, pi_plus, gamma);
    double gap = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        any = true;
        int target = pi_plus.action[s];
        double best_other = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (a == target) continue;
            best_other = std::max(best_other, tables.q(s, a));
        }
        gap = std::min(gap, tables.q(s, target) - best_other);
    }
    if (!any) throw std::invalid_argument("action_gap: no non-terminal states");
    return gap;
}

bool is_correct(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus, double gamma) {
    return action_gap(mdp, r, pi_plus, gamma) > 0.0;
}

} // namespace rewardlab
