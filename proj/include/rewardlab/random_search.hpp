#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rewardlab/learning.hpp"
#include "rewardlab/mdp.hpp"

namespace rewardlab {

/// One randomly drawn per-state reward and everything measured about it.
struct SearchRecord {
    RewardVector reward; // per-state basis
    bool correct = false;
    bool has_subjective = false;
    double subjective_discount = 0.0;
    bool has_score = false;
    double cumulative_correct = 0.0; // mean learning score
};

/// Draws n_samples rewards with each state's value uniform in [-1, 1] and
/// marks correctness at the MDP's objective discount. A per-state identity
/// feature basis is substituted automatically when the MDP uses another
/// basis; sample k is generated from seed + k regardless of worker count.
std::vector<SearchRecord> sample_and_filter(const Mdp& mdp, const Policy& pi_plus,
                                            std::int64_t n_samples, std::uint64_t seed,
                                            int n_workers = 0);

struct StudyResult {
    std::int64_t n_samples = 0;
    std::int64_t n_correct = 0;
    std::int64_t n_defined = 0; // correct and above the gap threshold
    double fraction_correct = 0.0;
    double fraction_se = 0.0; // standard error of the fraction estimate
    bool regression_defined = false;
    double slope = 0.0;
    double intercept = 0.0;
    double p_value = 1.0; // two-sided, slope != 0, normal approximation
};

/// Fills subjective discounts (threshold 0.01) and mean learning scores for
/// the correct records, then regresses score on subjective discount.
/// Records whose gap at gamma is below the threshold keep an undefined
/// subjective discount and are excluded from the regression.
StudyResult study(std::vector<SearchRecord>& records, const Mdp& mdp, const Policy& pi_plus,
                  double gamma, const QLearningConfig& cfg, int n_runs, int n_workers = 0);

/// CSV rows (sample_index, correct, gamma_tilde, mean_cumulative_correct).
void write_records_csv(const std::vector<SearchRecord>& records, std::ostream& os);

} // namespace rewardlab
