#pragma once

#include <cstdint>
#include <vector>

#include "rewardlab/mdp.hpp"

namespace rewardlab {

struct QLearningConfig {
    std::int64_t steps = 10000;
    double learning_rate = 0.1;
    double epsilon = 0.1; // epsilon-greedy exploration probability
    double q_init = 0.0;
    std::uint64_t seed = 0;
};

/// Per-step record of one Q-Learning run.
struct RunTrace {
    std::vector<std::uint8_t> correct_flags;
    std::vector<std::int64_t> cumulative_correct;
    Matrix final_q;
    std::int64_t episodes_completed = 0;
};

/// Mean cumulative-correct curve with a 99% normal-approximation CI.
struct AggregateCurve {
    std::vector<double> mean;
    std::vector<double> ci_half_width;
    int n_runs = 0;
};

/// One tabular Q-Learning run. At each step the agent records whether its
/// greedy action (lowest-index tie-break) matches the target policy, acts
/// epsilon-greedily, collects the entered state's reward, and updates with
/// a zero bootstrap target at terminals; entering a terminal resets the
/// episode to the start state. Bit-reproducible for a fixed seed.
RunTrace q_learning_run(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                        double gamma, const QLearningConfig& cfg);

/// Final cumulative-correct count only; same step loop as q_learning_run.
std::int64_t q_learning_correct_count(const Mdp& mdp, const RewardVector& r,
                                      const Policy& pi_plus, double gamma,
                                      const QLearningConfig& cfg);

/// Mean and 99% CI per step across n_runs independent runs; run k uses seed
/// cfg.seed + k. Integer accumulation makes the result identical for any
/// worker count.
AggregateCurve aggregate_runs(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                              double gamma, const QLearningConfig& cfg, int n_runs,
                              int n_workers = 0);

/// Mean of the final cumulative-correct count across n_runs (cheaper than
/// keeping whole curves when only the endpoint matters).
double mean_final_correct(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                          double gamma, const QLearningConfig& cfg, int n_runs,
                          int n_workers = 0);

} // namespace rewardlab
