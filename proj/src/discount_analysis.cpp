#include "rewardlab/discount_analysis.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace rewardlab {

SubjectiveDiscountReport subjective_discount(const Mdp& mdp, const RewardVector& r,
                                             const Policy& pi_plus, double gamma,
                                             double delta_threshold, double tol) {
    if (delta_threshold <= 0.0)
        throw std::invalid_argument("subjective_discount: threshold must be positive");
    if (tol <= 0.0) throw std::invalid_argument("subjective_discount: tol must be positive");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("subjective_discount: gamma must lie in [0, 1)");

    SubjectiveDiscountReport report;
    auto probe = [&](double g) {
        double gap = action_gap(mdp, r, pi_plus, g);
        report.checked_points.push_back({g, gap >= delta_threshold, gap});
        return gap;
    };

    report.gap_at_gamma = probe(gamma);
    if (report.gap_at_gamma < delta_threshold) {
        // The reward misses the threshold at gamma itself. The quantity is
        // still a property of the reward alone: search upward for the first
        // discount where the gap reaches the threshold. Undefined when no
        // discount in [gamma, 1) gets there.
        constexpr double kHiLimit = 0.999999;
        constexpr int kScanPoints = 1024;
        double prev = gamma;
        double found = -1.0;
        for (int k = 1; k <= kScanPoints; ++k) {
            double g = gamma + (kHiLimit - gamma) * k / kScanPoints;
            if (probe(g) >= delta_threshold) {
                found = g;
                break;
            }
            prev = g;
        }
        if (found < 0.0) {
            report.defined = false;
            return report;
        }
        double lo = prev, hi = found;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (probe(mid) >= delta_threshold)
                hi = mid;
            else
                lo = mid;
        }
        report.defined = true;
        report.gamma_tilde = hi;
        report.gap_at_gamma_tilde = action_gap(mdp, r, pi_plus, hi);
        return report;
    }

    double lo = 0.0; // gap at discount 0 is identically zero: always below threshold
    double hi = gamma;
    constexpr int kMaxEscalations = 64;
    for (int round = 0; round < kMaxEscalations; ++round) {
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (probe(mid) >= delta_threshold)
                hi = mid;
            else
                lo = mid;
        }
        // Audit the whole interval [hi, gamma]; correctness need not be
        // monotone in the discount, so a failing interior point restarts
        // the search above it.
        bool clean = true;
        for (int i = 0; i <= 10 && clean; ++i) {
            double g = hi + (gamma - hi) * i / 10.0;
            if (probe(g) < delta_threshold) {
                lo = g;
                hi = gamma;
                clean = false;
            }
        }
        if (clean) break;
    }

    report.defined = true;
    report.gamma_tilde = hi;
    report.gap_at_gamma_tilde = action_gap(mdp, r, pi_plus, hi);
    return report;
}

void write_csv(const SubjectiveDiscountReport& report, std::ostream& os) {
    os << "# rewardlab-csv v1 subjective-discount\n";
    os << "gamma_tilde,gap_at_gamma_tilde\n";
    os << std::setprecision(17);
    if (report.defined)
        os << report.gamma_tilde << ',' << report.gap_at_gamma_tilde << '\n';
    else
        os << "undefined,\n";
    os << "discount,correct,gap\n";
    for (const auto& p : report.checked_points)
        os << p.discount << ',' << (p.correct ? 1 : 0) << ',' << p.gap << '\n';
}

} // namespace rewardlab
