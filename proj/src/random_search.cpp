#include "rewardlab/random_search.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rewardlab/discount_analysis.hpp"
#include "rewardlab/environments.hpp"
#include "rewardlab/feature_expectations.hpp"
#include "rewardlab/parallel.hpp"

namespace rewardlab {

namespace {

// Advantage rows (D - D_a) at the objective discount, flattened; the gap of
// a sampled reward is then one matrix-vector product instead of a fresh
// policy evaluation per sample.
struct AdvantageRows {
    int n_features = 0;
    std::vector<double> rows; // row-major, one row per non-terminal (s, a != pi+(s))

    double min_gap(const std::vector<double>& weights) const {
        double gap = std::numeric_limits<double>::infinity();
        const size_t n_rows = rows.size() / n_features;
        for (size_t r = 0; r < n_rows; ++r) {
            const double* row = rows.data() + r * n_features;
            double adv = 0.0;
            for (int i = 0; i < n_features; ++i) adv += row[i] * weights[i];
            gap = std::min(gap, adv);
        }
        return gap;
    }
};

AdvantageRows advantage_rows(const Mdp& mdp, const Policy& pi_plus, double gamma) {
    FeatureExpectations fe = compute_feature_expectations(mdp, pi_plus, gamma);
    AdvantageRows out;
    out.n_features = fe.n_features;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (a == pi_plus.action[s]) continue;
            for (int i = 0; i < fe.n_features; ++i)
                out.rows.push_back(fe.d(s, i) - fe.da(s, a, i));
        }
    }
    return out;
}

double uniform_pm1(std::mt19937_64& rng) {
    return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

} // namespace

std::vector<SearchRecord> sample_and_filter(const Mdp& mdp, const Policy& pi_plus,
                                            std::int64_t n_samples, std::uint64_t seed,
                                            int n_workers) {
    if (n_samples < 0) throw std::invalid_argument("sample_and_filter: negative sample count");
    const Mdp env = has_state_features(mdp) ? mdp : with_state_features(mdp);
    const AdvantageRows adv = advantage_rows(env, pi_plus, env.objective_discount);

    std::vector<SearchRecord> records(n_samples);
    parallel_for(n_samples, n_workers, [&](std::int64_t k) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
        std::vector<double> weights(env.n_states);
        for (double& w : weights) w = uniform_pm1(rng);
        SearchRecord& rec = records[k];
        rec.correct = adv.min_gap(weights) > 0.0;
        rec.reward = RewardVector(std::move(weights));
    });
    return records;
}

StudyResult study(std::vector<SearchRecord>& records, const Mdp& mdp, const Policy& pi_plus,
                  double gamma, const QLearningConfig& cfg, int n_runs, int n_workers) {
    const Mdp env = has_state_features(mdp) ? mdp : with_state_features(mdp);
    constexpr double kGapThreshold = 0.01;

    std::vector<std::int64_t> correct_idx;
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(records.size()); ++k)
        if (records[k].correct) correct_idx.push_back(k);

    parallel_for(static_cast<std::int64_t>(correct_idx.size()), n_workers, [&](std::int64_t j) {
        SearchRecord& rec = records[correct_idx[j]];
        SubjectiveDiscountReport report =
            subjective_discount(env, rec.reward, pi_plus, gamma, kGapThreshold);
        if (report.defined) {
            rec.has_subjective = true;
            rec.subjective_discount = report.gamma_tilde;
        }
        QLearningConfig run_cfg = cfg;
        // stride keeps per-record seed blocks disjoint for any n_runs <= 1000003
        run_cfg.seed = cfg.seed + 1000003ULL * static_cast<std::uint64_t>(correct_idx[j]);
        double score = 0.0;
        for (int run = 0; run < n_runs; ++run) {
            QLearningConfig one = run_cfg;
            one.seed = run_cfg.seed + static_cast<std::uint64_t>(run);
            score += static_cast<double>(
                q_learning_correct_count(env, rec.reward, pi_plus, gamma, one));
        }
        rec.has_score = true;
        rec.cumulative_correct = score / n_runs;
    });

    StudyResult out;
    out.n_samples = static_cast<std::int64_t>(records.size());
    out.n_correct = static_cast<std::int64_t>(correct_idx.size());
    if (out.n_samples > 0) {
        double p = static_cast<double>(out.n_correct) / out.n_samples;
        out.fraction_correct = p;
        out.fraction_se = std::sqrt(p * (1.0 - p) / out.n_samples);
    }

    // least squares of score on subjective discount over the defined records
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::int64_t n = 0;
    for (std::int64_t k : correct_idx) {
        const SearchRecord& rec = records[k];
        if (!rec.has_subjective || !rec.has_score) continue;
        ++n;
        sx += rec.subjective_discount;
        sy += rec.cumulative_correct;
        sxx += rec.subjective_discount * rec.subjective_discount;
        sxy += rec.subjective_discount * rec.cumulative_correct;
        syy += rec.cumulative_correct * rec.cumulative_correct;
    }
    out.n_defined = n;
    if (n >= 3) {
        double mean_x = sx / n, mean_y = sy / n;
        double var_x = sxx - n * mean_x * mean_x;
        if (var_x > 1e-12) {
            out.regression_defined = true;
            out.slope = (sxy - n * mean_x * mean_y) / var_x;
            out.intercept = mean_y - out.slope * mean_x;
            double sse = syy - n * mean_y * mean_y - out.slope * out.slope * var_x;
            if (sse < 0.0) sse = 0.0;
            double se = std::sqrt(sse / (n - 2) / var_x);
            if (se > 0.0) {
                double t = out.slope / se;
                // normal approximation to the t distribution; fine at study sizes
                out.p_value = std::erfc(std::fabs(t) / std::sqrt(2.0));
            } else {
                out.p_value = 0.0;
            }
        }
    }
    return out;
}

void write_records_csv(const std::vector<SearchRecord>& records, std::ostream& os) {
    os << "# rewardlab-csv v1 random-search-records\n";
    os << "sample_index,correct,gamma_tilde,mean_cumulative_correct\n";
    os << std::setprecision(17);
    for (size_t k = 0; k < records.size(); ++k) {
        const SearchRecord& rec = records[k];
        os << k << ',' << (rec.correct ? 1 : 0) << ',';
        if (rec.has_subjective) os << rec.subjective_discount;
        os << ',';
        if (rec.has_score) os << rec.cumulative_correct;
        os << '\n';
    }
}

} // namespace rewardlab
