#pragma once

#include <utility>
#include <vector>

#include "rewardlab/linear_program.hpp"
#include "rewardlab/mdp.hpp"

namespace rewardlab {

enum class SynthStatus {
    Optimal,       // delta* > 0: the reward strictly induces the target policy
    NoPositiveGap, // LP solved but delta* <= 0: no correct reward in the class
    Infeasible,    // LP infeasible (cannot happen for the standard construction)
};

const char* to_string(SynthStatus status);

struct SynthesisResult {
    SynthStatus status = SynthStatus::Infeasible;
    RewardVector reward;
    double delta = 0.0;          // LP optimum
    double objective_gap = 0.0;  // action gap recomputed at gamma
    double subjective_gap = 0.0; // action gap recomputed at gamma_tilde
    double gamma_tilde = 0.0;    // the subjective discount the LP was built for
};

/// The gap-maximization LP. Variables are R(1..k) followed by delta.
/// For every non-terminal s and every a != pi+(s), two rows:
///   sum_i (D_a(s,i) - D(s,i)) R(i) + delta <= 0   at discount gamma
///   and the same row built from the tables at gamma_tilde.
/// Bounds: R(i) in [-1, 1], delta in [-10, 10]. With nonpositive_transient
/// the weights of features carried by any non-terminal state are capped at
/// zero, so intermediate states can only be penalized, never rewarded.
LpProblem build_lp(const Mdp& mdp, const Policy& pi_plus, double gamma, double gamma_tilde,
                   bool nonpositive_transient = false);

/// build_lp + solve_lp, with both gaps recomputed through the MDP itself.
/// Among equally optimal rewards the one with the smallest total weight sum
/// is returned (deterministic tie-break across the optimal face).
SynthesisResult synthesize(const Mdp& mdp, const Policy& pi_plus, double gamma,
                           double gamma_tilde, bool nonpositive_transient = false);

/// Binary search (tolerance 1e-4) for the smallest gamma_tilde in [0, gamma]
/// whose LP optimum reaches delta_floor; candidates are re-solved, never
/// interpolated. Throws std::runtime_error when even gamma_tilde = gamma
/// misses the floor.
std::pair<SynthesisResult, double> min_subjective_discount_synthesis(
    const Mdp& mdp, const Policy& pi_plus, double gamma, double delta_floor = 0.01,
    bool nonpositive_transient = false);

/// One synthesis per grid point; per-point failures are recorded in the
/// result status and the sweep continues.
std::vector<SynthesisResult> gamma_tilde_sweep(const Mdp& mdp, const Policy& pi_plus,
                                               double gamma,
                                               const std::vector<double>& grid);

/// A correct reward whose action gap is deliberately small (about epsilon):
/// minimizes the maximum advantage subject to every advantage >= epsilon.
/// Throws std::runtime_error when no such reward exists.
RewardVector low_gap_dense_reward(const Mdp& mdp, const Policy& pi_plus, double gamma,
                                  double epsilon = 0.001);

} // namespace rewardlab
