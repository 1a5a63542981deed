#include "rewardlab/learning.hpp"

#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>

#include "rewardlab/parallel.hpp"

namespace rewardlab {

namespace {

// mt19937_64 output mapped to [0, 1) with 53 bits; fully specified by the
// standard, so traces reproduce across platforms.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    double next() { return (engine_() >> 11) * 0x1.0p-53; }

    int next_index(int n) {
        int i = static_cast<int>(next() * n);
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

void validate_config(const Mdp& mdp, const QLearningConfig& cfg) {
    if (cfg.steps < 0) throw std::invalid_argument("q_learning: steps must be >= 0");
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0))
        throw std::invalid_argument("q_learning: learning_rate must lie in (0, 1]");
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0))
        throw std::invalid_argument("q_learning: epsilon must lie in [0, 1]");
    if (mdp.is_terminal(mdp.start_state))
        throw std::invalid_argument("q_learning: start state must not be terminal");
}

// Single step loop shared by the trace-producing and count-only entry
// points, so both are bit-identical by construction.
std::int64_t run_core(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                      double gamma, const QLearningConfig& cfg, RunTrace* trace) {
    validate_config(mdp, cfg);
    if (static_cast<int>(pi_plus.action.size()) != mdp.n_states)
        throw std::invalid_argument("q_learning: target policy must cover every state");

    const int n_actions = mdp.n_actions;
    std::vector<double> rewards = state_rewards(mdp, r);
    Matrix q(mdp.n_states, n_actions, cfg.q_init);
    UniformSource rng(cfg.seed);

    if (trace) {
        trace->correct_flags.reserve(cfg.steps);
        trace->cumulative_correct.reserve(cfg.steps);
    }

    std::int64_t correct = 0;
    std::int64_t episodes = 0;
    int state = mdp.start_state;
    for (std::int64_t t = 0; t < cfg.steps; ++t) {
        int greedy = detail::greedy_action(q, state);
        bool flag = greedy == pi_plus.action[state];
        if (flag) ++correct;
        if (trace) {
            trace->correct_flags.push_back(flag ? 1 : 0);
            trace->cumulative_correct.push_back(correct);
        }

        // draw order fixed: explore coin, uniform action (explore only), transition
        int action = greedy;
        if (rng.next() < cfg.epsilon) action = rng.next_index(n_actions);

        double u = rng.next();
        int next_state = mdp.n_states - 1;
        double cum = 0.0;
        for (int s2 = 0; s2 < mdp.n_states; ++s2) {
            cum += mdp.t(state, action, s2);
            if (u < cum) {
                next_state = s2;
                break;
            }
        }

        double target = rewards[next_state];
        if (!mdp.is_terminal(next_state)) {
            double best = q(next_state, 0);
            for (int a = 1; a < n_actions; ++a) best = std::max(best, q(next_state, a));
            target += gamma * best;
        }
        q(state, action) += cfg.learning_rate * (target - q(state, action));

        if (mdp.is_terminal(next_state)) {
            ++episodes;
            state = mdp.start_state;
        } else {
            state = next_state;
        }
    }

    if (trace) {
        trace->final_q = std::move(q);
        trace->episodes_completed = episodes;
    }
    return correct;
}

} // namespace

RunTrace q_learning_run(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                        double gamma, const QLearningConfig& cfg) {
    RunTrace trace;
    run_core(mdp, r, pi_plus, gamma, cfg, &trace);
    return trace;
}

std::int64_t q_learning_correct_count(const Mdp& mdp, const RewardVector& r,
                                      const Policy& pi_plus, double gamma,
                                      const QLearningConfig& cfg) {
    return run_core(mdp, r, pi_plus, gamma, cfg, nullptr);
}

AggregateCurve aggregate_runs(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                              double gamma, const QLearningConfig& cfg, int n_runs,
                              int n_workers) {
    if (n_runs < 1) throw std::invalid_argument("aggregate_runs: n_runs must be >= 1");
    const std::int64_t steps = cfg.steps;

    // cumulative_correct is integral, so per-run sums commute exactly and
    // the aggregate does not depend on thread scheduling.
    std::vector<std::int64_t> sum(steps, 0);
    std::vector<std::int64_t> sum_sq(steps, 0);
    std::mutex merge_mutex;

    parallel_for(n_runs, n_workers, [&](std::int64_t k) {
        QLearningConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(k);
        RunTrace trace;
        run_core(mdp, r, pi_plus, gamma, run_cfg, &trace);
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::int64_t t = 0; t < steps; ++t) {
            std::int64_t c = trace.cumulative_correct[t];
            sum[t] += c;
            sum_sq[t] += c * c;
        }
    });

    AggregateCurve curve;
    curve.n_runs = n_runs;
    curve.mean.resize(steps);
    curve.ci_half_width.resize(steps);
    const double n = static_cast<double>(n_runs);
    for (std::int64_t t = 0; t < steps; ++t) {
        double mean = sum[t] / n;
        curve.mean[t] = mean;
        if (n_runs > 1) {
            double var = (sum_sq[t] - n * mean * mean) / (n - 1.0);
            if (var < 0.0) var = 0.0;
            curve.ci_half_width[t] = 2.576 * std::sqrt(var / n);
        } else {
            curve.ci_half_width[t] = 0.0;
        }
    }
    return curve;
}

double mean_final_correct(const Mdp& mdp, const RewardVector& r, const Policy& pi_plus,
                          double gamma, const QLearningConfig& cfg, int n_runs,
                          int n_workers) {
    if (n_runs < 1) throw std::invalid_argument("mean_final_correct: n_runs must be >= 1");
    std::vector<std::int64_t> finals(n_runs, 0);
    parallel_for(n_runs, n_workers, [&](std::int64_t k) {
        QLearningConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(k);
        finals[k] = run_core(mdp, r, pi_plus, gamma, run_cfg, nullptr);
    });
    std::int64_t total = 0;
    for (std::int64_t f : finals) total += f;
    return static_cast<double>(total) / n_runs;
}

} // namespace rewardlab
