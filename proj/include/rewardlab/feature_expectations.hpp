#pragma once

#include <vector>

#include "rewardlab/mdp.hpp"

namespace rewardlab {

/// Discounted feature-occupancy tables for a target policy.
///
/// D(s, i)   = F(s, i) + gamma * sum_s' T(s, pi+(s), s') D(s', i)
/// D_a(s, i) = F(s, i) + gamma * sum_s' T(s, a, s') D(s', i)
/// with D = D_a = F at terminal states.
struct FeatureExpectations {
    double discount = 0.0;
    int n_states = 0;
    int n_actions = 0;
    int n_features = 0;
    Matrix d;                     // D(s, i)
    std::vector<double> d_action; // D_a(s, i), layout (s * n_actions + a) * n_features + i

    double da(int s, int a, int i) const {
        return d_action[(static_cast<size_t>(s) * n_actions + a) * n_features + i];
    }
    double& da(int s, int a, int i) {
        return d_action[(static_cast<size_t>(s) * n_actions + a) * n_features + i];
    }
};

/// Exact tables via one linear solve shared across feature columns.
FeatureExpectations compute_feature_expectations(const Mdp& mdp, const Policy& pi_plus,
                                                 double discount);

/// V(s) = sum_i D(s,i) R(i) and Q(s,a) = sum_i D_a(s,i) R(i).
ValueTables value_from_expectations(const FeatureExpectations& fe, const RewardVector& r);

} // namespace rewardlab
