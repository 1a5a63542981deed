#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rewardlab/environments.hpp"
#include "rewardlab/learning.hpp"

using namespace rewardlab;

TEST_CASE("zero steps produce an empty trace") {
    Environment ch = chain(5, ChainVariant::TwoFeature);
    QLearningConfig cfg;
    cfg.steps = 0;
    RunTrace trace = q_learning_run(ch.mdp, RewardVector({1.0, -1.0}), ch.target, 0.95, cfg);
    CHECK(trace.correct_flags.empty());
    CHECK(trace.cumulative_correct.empty());
    CHECK(trace.episodes_completed == 0);
}

TEST_CASE("two-state chain with greedy alpha-one updates follows the hand simulation") {
    // s0 start (step reward -1 under combo), s1 terminal goal (+1).
    // eps = 0: t0 ties to "left", self-loops, Q(s0,left) -> -1.
    // From t1 on the agent walks right into the goal every step.
    Environment ch = chain(2, ChainVariant::TwoFeature);
    RewardVector combo({1.0, -1.0});
    QLearningConfig cfg;
    cfg.steps = 10;
    cfg.learning_rate = 1.0;
    cfg.epsilon = 0.0;
    cfg.seed = 123;
    RunTrace trace = q_learning_run(ch.mdp, combo, ch.target, 0.95, cfg);

    std::vector<std::uint8_t> expected_flags = {0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    CHECK(trace.correct_flags == expected_flags);
    std::vector<std::int64_t> expected_cumulative = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(trace.cumulative_correct == expected_cumulative);
    CHECK(trace.episodes_completed == 9);
    CHECK(trace.final_q(0, 0) == doctest::Approx(-1.0));
    CHECK(trace.final_q(0, 1) == doctest::Approx(1.0));
    CHECK(trace.final_q(1, 0) == 0.0); // never updated from the terminal
    CHECK(trace.final_q(1, 1) == 0.0);
}

TEST_CASE("traces are bit-identical under a fixed seed") {
    Environment ch = chain(20, ChainVariant::TwoFeature);
    QLearningConfig cfg;
    cfg.steps = 5000;
    cfg.seed = 77;
    RunTrace a = q_learning_run(ch.mdp, RewardVector({1.0, -1.0}), ch.target, 0.95, cfg);
    RunTrace b = q_learning_run(ch.mdp, RewardVector({1.0, -1.0}), ch.target, 0.95, cfg);
    CHECK(a.correct_flags == b.correct_flags);
    CHECK(a.cumulative_correct == b.cumulative_correct);
    CHECK(a.episodes_completed == b.episodes_completed);
    CHECK(a.final_q.data() == b.final_q.data());

    cfg.seed = 78;
    RunTrace c = q_learning_run(ch.mdp, RewardVector({1.0, -1.0}), ch.target, 0.95, cfg);
    CHECK(a.correct_flags != c.correct_flags);
}

TEST_CASE("cumulative counts are monotone and bounded by the step index") {
    Environment rn = russell_norvig_grid();
    QLearningConfig cfg;
    cfg.steps = 3000;
    cfg.seed = 5;
    RunTrace trace =
        q_learning_run(rn.mdp, RewardVector({-0.04, 1.0, -1.0}), rn.target, 0.95, cfg);
    std::int64_t prev = 0;
    for (std::int64_t t = 0; t < cfg.steps; ++t) {
        CHECK(trace.cumulative_correct[t] >= prev);
        CHECK(trace.cumulative_correct[t] <= t + 1);
        prev = trace.cumulative_correct[t];
    }
}

TEST_CASE("q-values stay inside the discounted reward bound") {
    Environment ch = chain(30, ChainVariant::TwoFeature);
    QLearningConfig cfg;
    cfg.steps = 20000;
    cfg.seed = 3;
    cfg.q_init = 0.5;
    RunTrace trace = q_learning_run(ch.mdp, RewardVector({1.0, -1.0}), ch.target, 0.95, cfg);
    double bound = 1.0 / (1.0 - 0.95) + 0.5 + 1e-9;
    for (double q : trace.final_q.data()) {
        CHECK(q <= bound);
        CHECK(q >= -bound);
    }
}

TEST_CASE("goal-reward chain gives the agent no guidance before the first goal visit") {
    Environment ch = chain(60, ChainVariant::TwoFeature);
    QLearningConfig cfg;
    cfg.steps = 5000;
    cfg.epsilon = 0.0;
    cfg.seed = 9;
    RunTrace trace = q_learning_run(ch.mdp, RewardVector({1.0, 0.0}), ch.target, 0.95, cfg);
    // greedy ties keep pressing "left": the goal is never reached and no
    // update ever changes an argmax
    CHECK(trace.episodes_completed == 0);
    CHECK(trace.cumulative_correct.back() == 0);
    for (double q : trace.final_q.data()) CHECK(q == 0.0);
}

TEST_CASE("aggregate_runs") {
    Environment ch = chain(10, ChainVariant::TwoFeature);
    RewardVector combo({1.0, -1.0});
    QLearningConfig cfg;
    cfg.steps = 500;
    cfg.seed = 21;

    SUBCASE("single run equals its own mean with zero width") {
        AggregateCurve curve = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 1);
        RunTrace trace = q_learning_run(ch.mdp, combo, ch.target, 0.95, cfg);
        for (std::int64_t t = 0; t < cfg.steps; ++t) {
            CHECK(curve.mean[t] == doctest::Approx(double(trace.cumulative_correct[t])));
            CHECK(curve.ci_half_width[t] == 0.0);
        }
    }

    SUBCASE("same seed twice gives identical curves") {
        AggregateCurve a = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 24);
        AggregateCurve b = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 24);
        CHECK(a.mean == b.mean);
        CHECK(a.ci_half_width == b.ci_half_width);
    }

    SUBCASE("result does not depend on the worker count") {
        AggregateCurve one = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 16, 1);
        AggregateCurve four = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 16, 4);
        CHECK(one.mean == four.mean);
        CHECK(one.ci_half_width == four.ci_half_width);
    }

    SUBCASE("means stay within the feasible band") {
        AggregateCurve curve = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 8);
        for (std::int64_t t = 0; t < cfg.steps; ++t) {
            CHECK(curve.mean[t] >= 0.0);
            CHECK(curve.mean[t] <= double(t + 1));
            CHECK(curve.ci_half_width[t] >= 0.0);
        }
    }
}

TEST_CASE("mean_final_correct matches the aggregate endpoint") {
    Environment ch = chain(10, ChainVariant::TwoFeature);
    RewardVector combo({1.0, -1.0});
    QLearningConfig cfg;
    cfg.steps = 400;
    cfg.seed = 33;
    AggregateCurve curve = aggregate_runs(ch.mdp, combo, ch.target, 0.95, cfg, 12);
    double mean = mean_final_correct(ch.mdp, combo, ch.target, 0.95, cfg, 12);
    CHECK(mean == doctest::Approx(curve.mean.back()));
}

TEST_CASE("configuration validation") {
    Environment ch = chain(5, ChainVariant::TwoFeature);
    RewardVector combo({1.0, -1.0});
    QLearningConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(q_learning_run(ch.mdp, combo, ch.target, 0.95, cfg), std::invalid_argument);
    cfg.learning_rate = 0.1;
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(q_learning_run(ch.mdp, combo, ch.target, 0.95, cfg), std::invalid_argument);
    cfg.epsilon = 0.1;
    cfg.steps = -1;
    CHECK_THROWS_AS(q_learning_run(ch.mdp, combo, ch.target, 0.95, cfg), std::invalid_argument);
}
