#include "rewardlab/feature_expectations.hpp"

#include <stdexcept>

namespace rewardlab {

FeatureExpectations compute_feature_expectations(const Mdp& mdp, const Policy& pi_plus,
                                                 double discount) {
    if (!(discount >= 0.0 && discount < 1.0))
        throw std::invalid_argument("compute_feature_expectations: discount must lie in [0, 1)");

    FeatureExpectations fe;
    fe.discount = discount;
    fe.n_states = mdp.n_states;
    fe.n_actions = mdp.n_actions;
    fe.n_features = mdp.n_features();
    fe.d = detail::solve_policy_fixed_point(mdp, pi_plus, discount, mdp.features);
    fe.d_action.assign(
        static_cast<size_t>(fe.n_states) * fe.n_actions * fe.n_features, 0.0);

    for (int s = 0; s < fe.n_states; ++s) {
        for (int a = 0; a < fe.n_actions; ++a) {
            for (int i = 0; i < fe.n_features; ++i) {
                if (mdp.is_terminal(s)) {
                    fe.da(s, a, i) = mdp.features(s, i);
                } else {
                    double cont = 0.0;
                    for (int s2 = 0; s2 < fe.n_states; ++s2)
                        cont += mdp.t(s, a, s2) * fe.d(s2, i);
                    fe.da(s, a, i) = mdp.features(s, i) + discount * cont;
                }
            }
        }
    }
    return fe;
}

ValueTables value_from_expectations(const FeatureExpectations& fe, const RewardVector& r) {
    if (r.size() != fe.n_features)
        throw std::invalid_argument("value_from_expectations: feature count mismatch");

    ValueTables out;
    out.v.resize(fe.n_states);
    out.q = Matrix(fe.n_states, fe.n_actions, 0.0);
    for (int s = 0; s < fe.n_states; ++s) {
        double v = 0.0;
        for (int i = 0; i < fe.n_features; ++i) v += fe.d(s, i) * r.weights[i];
        out.v[s] = v;
        for (int a = 0; a < fe.n_actions; ++a) {
            double q = 0.0;
            for (int i = 0; i < fe.n_features; ++i) q += fe.da(s, a, i) * r.weights[i];
            out.q(s, a) = q;
        }
    }
    return out;
}

} // namespace rewardlab
