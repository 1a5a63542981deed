#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rewardlab {

/// Desk-scale knobs for the figure reproductions; zero fields fall back to
/// per-figure defaults (documented in the README).
struct FigureOptions {
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int workers = 0;
    std::int64_t samples = 0; // random-search sample count
    int runs = 0;             // learning runs per curve / per reward
    std::int64_t steps = 0;   // learning steps
    double grid_step = 0.0;   // sweep resolution
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> reproduce_fig2(const FigureOptions& opt);
std::vector<CheckResult> reproduce_fig3(const FigureOptions& opt);
std::vector<CheckResult> reproduce_fig4(const FigureOptions& opt);
std::vector<CheckResult> reproduce_fig5(const FigureOptions& opt);

/// Dispatch by figure name ("fig2".."fig5").
std::vector<CheckResult> reproduce_figure(const std::string& figure, const FigureOptions& opt);

} // namespace rewardlab
