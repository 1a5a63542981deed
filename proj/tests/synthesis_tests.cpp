#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rewardlab/environments.hpp"
#include "rewardlab/feature_expectations.hpp"
#include "rewardlab/reward_synthesis.hpp"

using namespace rewardlab;

TEST_CASE("build_lp row counts follow the constraint schema") {
    Environment ch = chain(60, ChainVariant::TwoFeature);
    LpProblem chain_lp = build_lp(ch.mdp, ch.target, 0.95, 0.5);
    // 2 discount sets x 59 non-terminal states x 1 non-target action
    CHECK(chain_lp.constraints.size() == 118);
    CHECK(chain_lp.n_vars() == 3);
    CHECK(chain_lp.variable_names.back() == "delta");

    Environment rn = russell_norvig_grid();
    LpProblem grid_lp = build_lp(rn.mdp, rn.target, 0.95, 0.2);
    // 2 x 9 non-terminal states x 3 non-target actions
    CHECK(grid_lp.constraints.size() == 54);
    CHECK(grid_lp.n_vars() == 4);
}

TEST_CASE("identical discounts duplicate the rows and change nothing") {
    Environment ch = chain(20, ChainVariant::TwoFeature);
    SynthesisResult twice = synthesize(ch.mdp, ch.target, 0.9, 0.9);
    REQUIRE(twice.status == SynthStatus::Optimal);
    // single-discount optimum: drop the duplicate set by hand and re-solve
    LpProblem lp = build_lp(ch.mdp, ch.target, 0.9, 0.9);
    lp.constraints.resize(lp.constraints.size() / 2);
    LpSolution single = solve_lp(lp);
    REQUIRE(single.status == LpStatus::Optimal);
    CHECK(std::fabs(single.objective_value - twice.delta) < 1e-9);
}

TEST_CASE("the chain LP picks the combo reward") {
    Environment ch = chain(60, ChainVariant::TwoFeature);
    SynthesisResult res = synthesize(ch.mdp, ch.target, 0.95, 0.95);
    REQUIRE(res.status == SynthStatus::Optimal);
    CHECK(res.delta == doctest::Approx(0.0509).epsilon(0.01));
    CHECK(res.reward.weights[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.reward.weights[1] == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(is_correct(ch.mdp, res.reward, ch.target, 0.95));
}

TEST_CASE("delta equals the recomputed minimum gap") {
    std::vector<std::pair<Environment, double>> cases;
    cases.emplace_back(chain(60, ChainVariant::TwoFeature), 0.95);
    cases.emplace_back(chain(60, ChainVariant::SubgoalsProfile), 0.9);
    cases.emplace_back(russell_norvig_grid(), 0.93);
    for (auto& [env, gt] : cases) {
        SynthesisResult res = synthesize(env.mdp, env.target, 0.95, gt);
        REQUIRE(res.status == SynthStatus::Optimal);
        double min_gap = std::min(res.objective_gap, res.subjective_gap);
        INFO(env.name, " delta ", res.delta, " min gap ", min_gap);
        CHECK(std::fabs(res.delta - min_gap) < 1e-6);
        CHECK(res.delta <= min_gap + 1e-7);
    }
}

TEST_CASE("action gap equals the minimum LP row slack") {
    Environment ch = chain(60, ChainVariant::TwoFeature);
    LpProblem lp = build_lp(ch.mdp, ch.target, 0.95, 0.95);
    RewardVector combo({1.0, -1.0});
    double min_slack = 1e18;
    for (const auto& row : lp.constraints) {
        // row: sum_i (D_a - D)_i R_i + delta <= 0; slack at delta = 0 is the advantage
        double adv = 0.0;
        for (int i = 0; i < 2; ++i) adv -= row.coeffs[i] * combo.weights[i];
        min_slack = std::min(min_slack, adv);
    }
    CHECK(std::fabs(min_slack - action_gap(ch.mdp, combo, ch.target, 0.95)) < 1e-8);
}

TEST_CASE("minimal subjective discount search") {
    SUBCASE("two-feature chain bottoms out at the combo limit") {
        Environment ch = chain(60, ChainVariant::TwoFeature);
        auto [res, gt] = min_subjective_discount_synthesis(ch.mdp, ch.target, 0.95, 0.01);
        CHECK(gt == doctest::Approx(0.9238).epsilon(0.003));
        CHECK(res.delta >= 0.01);
        CHECK(is_correct(ch.mdp, res.reward, ch.target, 0.95));
        CHECK(is_correct(ch.mdp, res.reward, ch.target, gt));
    }

    SUBCASE("russell-norvig grid reproduces the reference coefficients") {
        Environment rn = russell_norvig_grid();
        auto [res, gt] = min_subjective_discount_synthesis(rn.mdp, rn.target, 0.95, 0.01);
        CHECK(res.delta >= 0.01);
        CHECK(is_correct(rn.mdp, res.reward, rn.target, 0.95));
        // reference point, not an equality contract
        CHECK(std::fabs(res.reward.weights[0] - -0.0223) < 0.02);
        CHECK(std::fabs(res.reward.weights[1] - 0.6119) < 0.05);
        CHECK(std::fabs(res.reward.weights[2] - -1.0) < 0.02);
    }

    SUBCASE("a floor above the best achievable gap throws") {
        Environment ch = chain(60, ChainVariant::TwoFeature);
        CHECK_THROWS_AS(min_subjective_discount_synthesis(ch.mdp, ch.target, 0.95, 0.5),
                        std::runtime_error);
    }
}

TEST_CASE("gamma_tilde sweep") {
    Environment ch = chain(30, ChainVariant::TwoFeature);

    SUBCASE("one-point sweep equals a direct synthesis") {
        auto sweep = gamma_tilde_sweep(ch.mdp, ch.target, 0.95, {0.95});
        SynthesisResult direct = synthesize(ch.mdp, ch.target, 0.95, 0.95);
        REQUIRE(sweep.size() == 1);
        CHECK(sweep[0].status == direct.status);
        CHECK(std::fabs(sweep[0].delta - direct.delta) < 1e-9);
    }

    SUBCASE("per-point infeasibility is recorded and the sweep continues") {
        auto sweep = gamma_tilde_sweep(ch.mdp, ch.target, 0.95, {0.0, 0.5, 0.95});
        REQUIRE(sweep.size() == 3);
        CHECK(sweep[0].status == SynthStatus::NoPositiveGap); // gap at discount 0 is 0
        CHECK(sweep[2].status == SynthStatus::Optimal);
    }

    SUBCASE("grid values outside [0, gamma] are rejected") {
        CHECK_THROWS_AS(gamma_tilde_sweep(ch.mdp, ch.target, 0.95, {0.96}),
                        std::invalid_argument);
    }

    SUBCASE("delta* shrinks as gamma_tilde moves away from gamma") {
        // the monotonicity the minimal-discount binary search relies on
        Environment full = chain(60, ChainVariant::TwoFeature);
        auto sweep = gamma_tilde_sweep(full.mdp, full.target, 0.95, {0.5, 0.7, 0.9, 0.93, 0.95});
        double prev = -1e9;
        for (const auto& res : sweep) {
            CHECK(res.delta >= prev - 1e-9);
            prev = res.delta;
        }
    }
}

TEST_CASE("synthesized rewards stay correct at both discounts") {
    Environment sub = chain(60, ChainVariant::SubgoalsProfile);
    for (double gt : {0.85, 0.9, 0.95}) {
        SynthesisResult res = synthesize(sub.mdp, sub.target, 0.95, gt);
        REQUIRE(res.status == SynthStatus::Optimal);
        CHECK(is_correct(sub.mdp, res.reward, sub.target, 0.95));
        CHECK(is_correct(sub.mdp, res.reward, sub.target, gt));
        CHECK(res.reward.in_unit_box(1e-12));
    }
}

TEST_CASE("low-gap dense reward") {
    Environment dn = chain(60, ChainVariant::Dense);

    SUBCASE("epsilon pins the realized gap") {
        RewardVector r = low_gap_dense_reward(dn.mdp, dn.target, 0.95, 0.001);
        double gap = action_gap(dn.mdp, r, dn.target, 0.95);
        CHECK(gap >= 0.0005);
        CHECK(gap <= 0.002);
        CHECK(is_correct(dn.mdp, r, dn.target, 0.95));
    }

    SUBCASE("epsilon of zero is rejected") {
        CHECK_THROWS_AS(low_gap_dense_reward(dn.mdp, dn.target, 0.95, 0.0),
                        std::invalid_argument);
    }

    SUBCASE("epsilon above the class maximum is infeasible") {
        CHECK_THROWS_AS(low_gap_dense_reward(dn.mdp, dn.target, 0.95, 5.0), std::runtime_error);
    }
}

TEST_CASE("nonpositive_transient caps every non-terminal feature at zero") {
    Environment dn = chain(60, ChainVariant::Dense);
    auto [res, gt] = min_subjective_discount_synthesis(dn.mdp, dn.target, 0.95, 0.01,
                                                       /*nonpositive_transient=*/true);
    REQUIRE(res.status == SynthStatus::Optimal);
    CHECK(res.delta >= 0.01);
    for (int s = 0; s < 59; ++s) CHECK(res.reward.weights[s] <= 0.0);
    CHECK(gt <= 0.25);
    CHECK(is_correct(dn.mdp, res.reward, dn.target, 0.95));
}
