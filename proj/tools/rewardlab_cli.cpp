// Command-line front end: action gaps, subjective discounts, LP reward
// synthesis, Q-Learning curves, and the bundled figure reproductions.
//
// Exit codes: 0 success, 2 usage error, 3 infeasible LP / undefined quantity.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "rewardlab/csv.hpp"
#include "rewardlab/discount_analysis.hpp"
#include "rewardlab/environments.hpp"
#include "rewardlab/experiments.hpp"
#include "rewardlab/learning.hpp"
#include "rewardlab/reward_synthesis.hpp"

namespace {

using namespace rewardlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RewardVector reward_from_file(const Environment& env, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open reward file: " + path);
    std::vector<double> weights;
    double v;
    while (in >> v) weights.push_back(v);
    if (static_cast<int>(weights.size()) != env.mdp.n_features())
        throw UsageError("reward file " + path + " has " + std::to_string(weights.size()) +
                         " values, environment needs " + std::to_string(env.mdp.n_features()));
    return RewardVector(std::move(weights));
}

bool names_are(const Environment& env, const std::vector<std::string>& expected) {
    return env.feature_names == expected;
}

RewardVector resolve_reward(const Environment& env, const std::string& spec) {
    RewardVector r;
    if (spec == "zero") {
        r.weights.assign(env.mdp.n_features(), 0.0);
    } else if (spec == "goal" || spec == "penalty" || spec == "combo") {
        if (!names_are(env, {"goal", "step"}))
            throw UsageError("preset '" + spec + "' needs the two-feature chain environment");
        if (spec == "goal") r = RewardVector({1.0, 0.0});
        if (spec == "penalty") r = RewardVector({0.0, -1.0});
        if (spec == "combo") r = RewardVector({1.0, -1.0});
    } else if (spec == "original") {
        if (!names_are(env, {"step", "goal", "lava"}))
            throw UsageError("preset 'original' needs the rn_grid environment");
        r = RewardVector({-0.04, 1.0, -1.0});
    } else if (spec == "subgoal_const") {
        if (!names_are(env, {"step", "goal", "subgoal"}))
            throw UsageError("preset 'subgoal_const' needs the constant-subgoal chain");
        r = RewardVector({-1.0, 1.0, -0.7});
    } else if (spec == "lp_min") {
        auto [result, gt] = min_subjective_discount_synthesis(
            env.mdp, env.target, env.mdp.objective_discount);
        r = result.reward;
    } else if (spec.rfind("lp:", 0) == 0) {
        double gt = std::stod(spec.substr(3));
        SynthesisResult result = synthesize(env.mdp, env.target,
                                            env.mdp.objective_discount, gt);
        if (result.status != SynthStatus::Optimal)
            throw std::runtime_error("synthesis at gamma_tilde " + std::to_string(gt) + " is " +
                                     to_string(result.status));
        r = result.reward;
    } else {
        r = reward_from_file(env, spec);
    }
    if (!r.in_unit_box())
        std::cerr << "warning: reward has components outside [-1, 1]\n";
    return r;
}

void print_reward(const Environment& env, const RewardVector& r) {
    std::cout << std::setprecision(10);
    for (int i = 0; i < r.size(); ++i) {
        std::string label = i < static_cast<int>(env.feature_names.size())
                                ? env.feature_names[i]
                                : "f" + std::to_string(i);
        std::cout << "  " << label << " = " << r.weights[i] << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rewardlab: reward design toolkit for tabular MDPs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read flags from an INI file ([subcommand] sections)");

    std::string env_name = "chain60";
    std::string reward_spec = "combo";
    std::string out_path;
    double gamma = -1.0; // default: the environment's objective discount
    double gamma_tilde = -1.0;
    double threshold = 0.01;
    double tol = 1e-4;
    double floor = 0.01;
    bool minimize = false;
    std::int64_t steps = 10000;
    int runs = 1;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string figure;
    std::string out_dir = ".";
    std::int64_t samples = 0;
    int fig_runs = 0;
    std::int64_t fig_steps = 0;
    double grid_step = 0.0;

    auto add_env = [&](CLI::App* cmd) {
        cmd->add_option("--env", env_name,
                        "environment preset (rn_grid, chain<N>, chain<N>_subgoals_const, "
                        "chain<N>_subgoals, chain<N>_dense) or environment file path");
    };
    auto add_reward = [&](CLI::App* cmd) {
        cmd->add_option("--reward", reward_spec,
                        "reward preset (goal, penalty, combo, subgoal_const, original, zero, "
                        "lp_min, lp:<gamma_tilde>) or reward file path");
    };

    CLI::App* cmd_gap = app.add_subcommand("gap", "print the action gap of a reward");
    add_env(cmd_gap);
    add_reward(cmd_gap);
    cmd_gap->add_option("--gamma", gamma, "discount (default: environment's)");

    CLI::App* cmd_subj =
        app.add_subcommand("subjective", "print the subjective discount of a reward");
    add_env(cmd_subj);
    add_reward(cmd_subj);
    cmd_subj->add_option("--gamma", gamma, "objective discount (default: environment's)");
    cmd_subj->add_option("--threshold", threshold, "action-gap threshold (default 0.01)");
    cmd_subj->add_option("--tol", tol, "binary-search tolerance (default 1e-4)");
    cmd_subj->add_option("--out", out_path, "write the audit trail as CSV");

    CLI::App* cmd_synth =
        app.add_subcommand("synthesize", "construct a reward by linear programming");
    add_env(cmd_synth);
    cmd_synth->add_option("--gamma", gamma, "objective discount (default: environment's)");
    cmd_synth->add_option("--gamma-tilde", gamma_tilde,
                          "subjective discount to design for (default: gamma)");
    cmd_synth->add_flag("--minimize", minimize,
                        "search for the smallest feasible subjective discount");
    cmd_synth->add_option("--floor", floor, "action-gap floor for --minimize (default 0.01)");
    cmd_synth->add_option("--out", out_path, "write the reward vector to a file");

    CLI::App* cmd_learn = app.add_subcommand("learn", "run Q-Learning and emit the curve CSV");
    add_env(cmd_learn);
    add_reward(cmd_learn);
    cmd_learn->add_option("--steps", steps, "environment steps per run (default 10000)");
    cmd_learn->add_option("--runs", runs, "independent runs to average (default 1)");
    cmd_learn->add_option("--seed", seed, "base RNG seed (default 1)");
    cmd_learn->add_option("--workers", workers, "worker threads (default: hardware)");
    cmd_learn->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* cmd_repro =
        app.add_subcommand("reproduce", "emit the CSV bundle behind one figure");
    cmd_repro->add_option("figure", figure, "fig2, fig3, fig4 or fig5")->required();
    cmd_repro->add_option("--out-dir", out_dir, "directory for the CSV bundle (default .)");
    cmd_repro->add_option("--seed", seed, "base RNG seed (default 1)");
    cmd_repro->add_option("--samples", samples, "random-search samples (fig2)");
    cmd_repro->add_option("--runs", fig_runs, "learning runs per curve");
    cmd_repro->add_option("--steps", fig_steps, "learning steps");
    cmd_repro->add_option("--grid-step", grid_step, "sweep resolution (fig3)");
    cmd_repro->add_option("--workers", workers, "worker threads (default: hardware)");

    CLI::App* cmd_dump =
        app.add_subcommand("dump-env", "write an environment in the text file format");
    add_env(cmd_dump);
    cmd_dump->add_option("--out", out_path, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_gap->parsed()) {
            Environment env = make_environment(env_name);
            if (gamma < 0.0) gamma = env.mdp.objective_discount;
            RewardVector r = resolve_reward(env, reward_spec);
            std::cout << std::setprecision(17)
                      << action_gap(env.mdp, r, env.target, gamma) << '\n';
            return kExitOk;
        }

        if (cmd_subj->parsed()) {
            Environment env = make_environment(env_name);
            if (gamma < 0.0) gamma = env.mdp.objective_discount;
            RewardVector r = resolve_reward(env, reward_spec);
            SubjectiveDiscountReport report =
                subjective_discount(env.mdp, r, env.target, gamma, threshold, tol);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw UsageError("cannot write: " + out_path);
                write_csv(report, out);
            }
            if (!report.defined) {
                std::cout << "undefined\n";
                return kExitInfeasible;
            }
            std::cout << std::setprecision(17) << report.gamma_tilde << '\n';
            return kExitOk;
        }

        if (cmd_synth->parsed()) {
            Environment env = make_environment(env_name);
            if (gamma < 0.0) gamma = env.mdp.objective_discount;
            SynthesisResult result;
            if (minimize) {
                try {
                    auto [res, gt] =
                        min_subjective_discount_synthesis(env.mdp, env.target, gamma, floor);
                    result = std::move(res);
                    std::cout << std::setprecision(10) << "gamma_tilde* = " << gt << '\n';
                } catch (const std::runtime_error& e) {
                    std::cerr << e.what() << '\n';
                    return kExitInfeasible;
                }
            } else {
                if (gamma_tilde < 0.0) gamma_tilde = gamma;
                result = synthesize(env.mdp, env.target, gamma, gamma_tilde);
                if (result.status != SynthStatus::Optimal) {
                    std::cerr << (result.status == SynthStatus::Infeasible
                                      ? "LP infeasible\n"
                                      : "no correct reward exists in the class (delta* <= 0)\n");
                    return kExitInfeasible;
                }
            }
            std::cout << std::setprecision(10) << "delta* = " << result.delta << '\n';
            std::cout << "objective gap  = " << result.objective_gap << '\n';
            std::cout << "subjective gap = " << result.subjective_gap << " (at gamma_tilde "
                      << result.gamma_tilde << ")\n";
            std::cout << "reward:\n";
            print_reward(env, result.reward);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw UsageError("cannot write: " + out_path);
                out << std::setprecision(17);
                for (double w : result.reward.weights) out << w << '\n';
            }
            return kExitOk;
        }

        if (cmd_learn->parsed()) {
            Environment env = make_environment(env_name);
            RewardVector r = resolve_reward(env, reward_spec);
            QLearningConfig cfg;
            cfg.steps = steps;
            cfg.seed = seed;
            AggregateCurve curve = aggregate_runs(env.mdp, r, env.target,
                                                  env.mdp.objective_discount, cfg, runs, workers);
            CsvWriter out(out_path, "learning-curve",
                          "step,mean_cumulative_correct,ci_half_width");
            for (std::int64_t t = 0; t < steps; ++t)
                out.row(t + 1, curve.mean[t], curve.ci_half_width[t]);
            return kExitOk;
        }

        if (cmd_repro->parsed()) {
            FigureOptions opt;
            opt.out_dir = out_dir;
            opt.seed = seed;
            opt.workers = workers;
            opt.samples = samples;
            opt.runs = fig_runs;
            opt.steps = fig_steps;
            opt.grid_step = grid_step;
            std::vector<CheckResult> checks = reproduce_figure(figure, opt);
            for (const auto& c : checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
            return kExitOk;
        }

        if (cmd_dump->parsed()) {
            Environment env = make_environment(env_name);
            save_environment(env, out_path);
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
