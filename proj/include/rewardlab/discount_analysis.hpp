#pragma once

#include <iosfwd>
#include <vector>

#include "rewardlab/mdp.hpp"

namespace rewardlab {

struct DiscountCheckPoint {
    double discount = 0.0;
    bool correct = false; // gap >= the threshold used for the search
    double gap = 0.0;
};

struct SubjectiveDiscountReport {
    bool defined = false;
    double gamma_tilde = 0.0;        // valid only when defined
    double gap_at_gamma_tilde = 0.0; // valid only when defined
    double gap_at_gamma = 0.0;
    std::vector<DiscountCheckPoint> checked_points; // every discount evaluated, in order
};

/// Smallest discount at which the reward clears the action-gap threshold.
/// When the gap at gamma already meets the threshold: binary search down to
/// `tol` over [0, gamma], then an 11-point audit over [gamma_tilde, gamma];
/// an audit failure escalates the lower bound to the failing discount and
/// the search resumes. When the gap at gamma is below the threshold the
/// quantity can still exist above gamma (it is a property of the reward,
/// not of the environment's discount): the first upward crossing in
/// (gamma, 1) is located instead. Undefined (report.defined = false) when
/// no discount reaches the threshold.
SubjectiveDiscountReport subjective_discount(const Mdp& mdp, const RewardVector& r,
                                             const Policy& pi_plus, double gamma,
                                             double delta_threshold = 0.01,
                                             double tol = 1e-4);

/// CSV serialization: summary line plus one row per checked point.
void write_csv(const SubjectiveDiscountReport& report, std::ostream& os);

} // namespace rewardlab
