#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "rewardlab/environments.hpp"

using namespace rewardlab;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/rewardlab_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("russell-norvig grid structure") {
    Environment rn = russell_norvig_grid();
    CHECK(rn.mdp.n_states == 11);
    CHECK(rn.mdp.n_actions == 4);
    CHECK(rn.mdp.n_features() == 3);
    CHECK(rn.mdp.start_state == 0);
    CHECK(rn.mdp.objective_discount == 0.95);
    CHECK_NOTHROW(rn.mdp.validate());
    CHECK(rn.mdp.is_terminal(10)); // goal
    CHECK(rn.mdp.is_terminal(6));  // lava

    SUBCASE("blocked slip mass stays in place") {
        // cell (1,2) moving up: intended (1,3), slips left/right both blocked
        // by the boundary and the wall, so 0.1 + 0.1 stays put
        CHECK(rn.mdp.t(4, 0, 7) == doctest::Approx(0.8));
        CHECK(rn.mdp.t(4, 0, 4) == doctest::Approx(0.2));
        double sum = 0.0;
        for (int s2 = 0; s2 < 11; ++s2) sum += rn.mdp.t(4, 0, s2);
        CHECK(sum == doctest::Approx(1.0));
    }

    SUBCASE("original reward is correct and routes the start column upward") {
        RewardVector original({-0.04, 1.0, -1.0});
        CHECK(is_correct(rn.mdp, original, rn.target, 0.95));
        CHECK(rn.target.action[0] == 0); // (1,1) up
        CHECK(rn.target.action[4] == 0); // (1,2) up
        CHECK(rn.target.action[7] == 3); // (1,3) right
    }

    SUBCASE("feature partition is one-hot") {
        for (int s = 0; s < 11; ++s) {
            int nonzero = 0;
            for (int i = 0; i < 3; ++i)
                if (rn.mdp.features(s, i) != 0.0) ++nonzero;
            CHECK(nonzero == 1);
        }
        CHECK(rn.mdp.features(10, 1) == 1.0);
        CHECK(rn.mdp.features(6, 2) == 1.0);
    }
}

TEST_CASE("chain construction") {
    SUBCASE("dynamics: left wall self-loops, goal absorbs") {
        Environment ch = chain(8, ChainVariant::TwoFeature);
        CHECK(ch.mdp.t(0, 0, 0) == 1.0);
        CHECK(ch.mdp.t(3, 0, 2) == 1.0);
        CHECK(ch.mdp.t(3, 1, 4) == 1.0);
        CHECK(ch.mdp.is_terminal(7));
        for (int s = 0; s < 8; ++s) CHECK(ch.target.action[s] == 1);
        CHECK_NOTHROW(ch.mdp.validate());
    }

    SUBCASE("subgoals sit every three states strictly before the goal") {
        Environment sub = chain(60, ChainVariant::SubgoalsConstant, 3);
        int count = 0;
        for (int s = 0; s < 60; ++s)
            if (sub.mdp.features(s, 2) == 1.0) {
                ++count;
                CHECK((s + 1) % 3 == 0); // 1-based positions 3, 6, ..., 57
                CHECK(s < 59);
            }
        CHECK(count == 19);
    }

    SUBCASE("profile variant carries one feature per subgoal") {
        Environment sub = chain(60, ChainVariant::SubgoalsProfile, 3);
        CHECK(sub.mdp.n_features() == 21); // step, goal, 19 subgoals
        CHECK(sub.feature_names[2] == "subgoal3");
        CHECK(sub.feature_names[20] == "subgoal57");
    }

    SUBCASE("dense variant is the state-indicator basis") {
        Environment dn = chain(12, ChainVariant::Dense);
        CHECK(has_state_features(dn.mdp));
    }

    SUBCASE("every variant partitions states one-hot") {
        for (auto variant : {ChainVariant::TwoFeature, ChainVariant::SubgoalsConstant,
                             ChainVariant::SubgoalsProfile, ChainVariant::Dense}) {
            Environment env = chain(30, variant);
            for (int s = 0; s < 30; ++s) {
                int nonzero = 0;
                for (int i = 0; i < env.mdp.n_features(); ++i)
                    if (env.mdp.features(s, i) != 0.0) ++nonzero;
                CHECK(nonzero == 1);
            }
        }
    }

    SUBCASE("invalid parameters are rejected") {
        CHECK_THROWS_AS(chain(1), std::invalid_argument);
        CHECK_THROWS_AS(chain(60, ChainVariant::SubgoalsConstant, 0), std::invalid_argument);
        CHECK_THROWS_AS(chain(4, ChainVariant::SubgoalsConstant, 10), std::invalid_argument);
    }
}

TEST_CASE("build_environment dispatches on the spec struct") {
    EnvironmentSpec grid;
    grid.kind = EnvironmentSpec::Kind::RnGrid;
    CHECK(build_environment(grid).mdp.n_states == 11);

    EnvironmentSpec sub;
    sub.kind = EnvironmentSpec::Kind::Chain;
    sub.chain_length = 30;
    sub.variant = ChainVariant::SubgoalsConstant;
    sub.subgoal_spacing = 5;
    Environment env = build_environment(sub);
    CHECK(env.mdp.n_states == 30);
    int subgoals = 0;
    for (int s = 0; s < 30; ++s)
        if (env.mdp.features(s, 2) == 1.0) ++subgoals;
    CHECK(subgoals == 5); // 1-based 5, 10, 15, 20, 25
}

TEST_CASE("named presets resolve") {
    CHECK(make_environment("rn_grid").mdp.n_states == 11);
    CHECK(make_environment("chain60").mdp.n_states == 60);
    CHECK(make_environment("chain10_dense").mdp.n_features() == 10);
    CHECK(make_environment("chain60_subgoals").mdp.n_features() == 21);
    CHECK(make_environment("chain60_subgoals_const").mdp.n_features() == 3);
    CHECK_THROWS(make_environment("no_such_environment"));
}

TEST_CASE("environment files round-trip exactly") {
    for (const char* name : {"rn_grid", "chain7", "chain9_subgoals_const"}) {
        Environment env = make_environment(name);
        TempFile file(std::string("roundtrip_") + name + ".mdp");
        save_environment(env, file.path);
        Environment back = load_environment(file.path);
        CHECK(back.mdp.n_states == env.mdp.n_states);
        CHECK(back.mdp.n_actions == env.mdp.n_actions);
        CHECK(back.mdp.n_features() == env.mdp.n_features());
        CHECK(back.mdp.start_state == env.mdp.start_state);
        CHECK(back.mdp.objective_discount == env.mdp.objective_discount);
        CHECK(back.mdp.terminal == env.mdp.terminal);
        CHECK(back.mdp.transition == env.mdp.transition); // bit-exact
        CHECK(back.mdp.features.data() == env.mdp.features.data());
        CHECK(back.target.action == env.target.action);
    }
}

TEST_CASE("a hand-written file matches the constructor") {
    TempFile file("hand_chain3.mdp");
    {
        std::ofstream out(file.path);
        out << "# three-state chain, two features\n"
               "states 3\n"
               "actions 2\n"
               "features 2\n"
               "discount 0.95\n"
               "start 0\n"
               "terminals 2\n"
               "transition 0 0: 0 1\n"
               "transition 0 1: 1 1\n"
               "transition 1 0: 0 1\n"
               "transition 1 1: 2 1\n"
               "feature 0: 0 1\n"
               "feature 1: 0 1\n"
               "feature 2: 1 0\n"
               "policy 1 1 1\n";
    }
    Environment loaded = load_environment(file.path);
    Environment built = chain(3, ChainVariant::TwoFeature);
    CHECK(loaded.mdp.transition == built.mdp.transition);
    CHECK(loaded.mdp.features.data() == built.mdp.features.data());
    CHECK(loaded.mdp.terminal == built.mdp.terminal);
    CHECK(loaded.target.action == built.target.action);
}

TEST_CASE("parse errors name the offending line") {
    SUBCASE("malformed probability row") {
        TempFile file("bad_prob.mdp");
        {
            std::ofstream out(file.path);
            out << "states 2\nactions 1\nfeatures 1\ndiscount 0.9\nstart 0\nterminals 1\n"
                   "transition 0 0: 1 0.7\n"
                   "feature 0: 1\nfeature 1: 1\npolicy 0 0\n";
        }
        try {
            load_environment(file.path);
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line 7") != std::string::npos);
        }
    }

    SUBCASE("trailing garbage is rejected") {
        TempFile file("trailing.mdp");
        {
            std::ofstream out(file.path);
            out << "states 2\nactions 1\nfeatures 1\ndiscount 0.9\nstart 0\nterminals 1\n"
                   "transition 0 0: 1 1\n"
                   "feature 0: 1\nfeature 1: 1\npolicy 0 0\nextra stuff\n";
        }
        CHECK_THROWS_WITH_AS(load_environment(file.path),
                             doctest::Contains("trailing content"), std::runtime_error);
    }

    SUBCASE("dangling successor index") {
        TempFile file("dangling.mdp");
        {
            std::ofstream out(file.path);
            out << "states 2\nactions 1\nfeatures 1\ndiscount 0.9\nstart 0\nterminals 1\n"
                   "transition 0 0: 5 1\n"
                   "feature 0: 1\nfeature 1: 1\npolicy 0 0\n";
        }
        CHECK_THROWS_WITH_AS(load_environment(file.path),
                             doctest::Contains("successor state out of range"),
                             std::runtime_error);
    }

    SUBCASE("missing transition row") {
        TempFile file("missing.mdp");
        {
            std::ofstream out(file.path);
            out << "states 3\nactions 1\nfeatures 1\ndiscount 0.9\nstart 0\nterminals 2\n"
                   "transition 0 0: 1 1\n"
                   "feature 0: 1\nfeature 1: 1\nfeature 2: 1\npolicy 0 0 0\n";
        }
        CHECK_THROWS_WITH_AS(load_environment(file.path),
                             doctest::Contains("missing transition row"), std::runtime_error);
    }
}

TEST_CASE("with_state_features keeps dynamics and swaps the basis") {
    Environment rn = russell_norvig_grid();
    Mdp dense = with_state_features(rn.mdp);
    CHECK(has_state_features(dense));
    CHECK_FALSE(has_state_features(rn.mdp));
    CHECK(dense.transition == rn.mdp.transition);
    CHECK(dense.terminal == rn.mdp.terminal);
    CHECK_NOTHROW(dense.validate());
}
