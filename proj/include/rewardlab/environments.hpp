#pragma once

#include <string>
#include <vector>

#include "rewardlab/mdp.hpp"

namespace rewardlab {

enum class ChainVariant { TwoFeature, SubgoalsConstant, SubgoalsProfile, Dense };

/// An MDP bundled with its target policy and human-readable labels.
struct Environment {
    std::string name;
    Mdp mdp;
    Policy target;
    std::vector<std::string> feature_names;
};

/// Parameters behind the named benchmark constructors.
struct EnvironmentSpec {
    enum class Kind { RnGrid, Chain } kind = Kind::Chain;
    int chain_length = 60;
    ChainVariant variant = ChainVariant::TwoFeature;
    int subgoal_spacing = 3;
};

/// 4x3 grid with one wall cell, a terminal goal with a terminal lava cell
/// below it, 0.8/0.1/0.1 slip dynamics, and features (step, goal, lava).
/// The target policy is the optimal policy under reward (-0.04, +1, -1)
/// at discount 0.95.
Environment russell_norvig_grid();

/// Deterministic left/right chain: start at the left end (where moving left
/// self-loops), terminal goal on the right, discount 0.95, target policy
/// "right" everywhere. Features depend on the variant:
///   TwoFeature       (goal, step)
///   SubgoalsConstant (step, goal, subgoal) with subgoals every `spacing`
///                    states, strictly before the goal
///   SubgoalsProfile  (step, goal, one feature per subgoal)
///   Dense            one indicator feature per state
Environment chain(int n = 60, ChainVariant variant = ChainVariant::TwoFeature,
                  int spacing = 3);

Environment build_environment(const EnvironmentSpec& spec);

/// Named presets: "rn_grid", "chain<N>", "chain<N>_subgoals_const",
/// "chain<N>_subgoals", "chain<N>_dense". Anything else is treated as a
/// path to an environment file.
Environment make_environment(const std::string& name);

/// Plain-text environment file, schema documented in the README.
/// Parse errors carry 1-based line numbers.
Environment load_environment(const std::string& path);
void save_environment(const Environment& env, const std::string& path);

/// Same dynamics with the feature matrix replaced by the per-state identity
/// basis (used where rewards are assigned state by state).
Mdp with_state_features(const Mdp& mdp);

/// True when features are already the per-state identity basis.
bool has_state_features(const Mdp& mdp);

} // namespace rewardlab
