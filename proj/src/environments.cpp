#include "rewardlab/environments.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rewardlab {

namespace {

constexpr double kDefaultDiscount = 0.95;

struct Cell {
    int col;
    int row;
};

} // namespace

Environment russell_norvig_grid() {
    // 4 columns x 3 rows, row 1 at the bottom; the cell at (2,2) is a wall.
    // Reachable cells are indexed bottom row first, left to right.
    const std::vector<Cell> cells = {
        {1, 1}, {2, 1}, {3, 1}, {4, 1}, // 0..3
        {1, 2}, {3, 2}, {4, 2},         // 4..6   (6 = lava)
        {1, 3}, {2, 3}, {3, 3}, {4, 3}, // 7..10  (10 = goal)
    };
    const int n = static_cast<int>(cells.size());
    const int kGoal = 10, kLava = 6;

    auto index_of = [&](int col, int row) -> int {
        if (col < 1 || col > 4 || row < 1 || row > 3) return -1;
        if (col == 2 && row == 2) return -1; // wall
        for (int i = 0; i < n; ++i)
            if (cells[i].col == col && cells[i].row == row) return i;
        return -1;
    };

    Mdp mdp;
    mdp.n_states = n;
    mdp.n_actions = 4; // up, down, left, right
    mdp.transition.assign(static_cast<size_t>(n) * 4 * n, 0.0);
    mdp.terminal.assign(n, 0);
    mdp.terminal[kGoal] = 1;
    mdp.terminal[kLava] = 1;
    mdp.start_state = 0;
    mdp.objective_discount = kDefaultDiscount;

    const int dcol[4] = {0, 0, -1, 1};
    const int drow[4] = {1, -1, 0, 0};
    for (int s = 0; s < n; ++s) {
        if (mdp.is_terminal(s)) {
            for (int a = 0; a < 4; ++a) mdp.t(s, a, s) = 1.0;
            continue;
        }
        for (int a = 0; a < 4; ++a) {
            // intended direction plus the two orthogonal slips
            const int slip1 = (a == 0 || a == 1) ? 2 : 0;
            const int slip2 = (a == 0 || a == 1) ? 3 : 1;
            const int dirs[3] = {a, slip1, slip2};
            const double probs[3] = {0.8, 0.1, 0.1};
            for (int k = 0; k < 3; ++k) {
                int tgt = index_of(cells[s].col + dcol[dirs[k]], cells[s].row + drow[dirs[k]]);
                if (tgt < 0) tgt = s; // bump into wall or boundary: stay
                mdp.t(s, a, tgt) += probs[k];
            }
        }
    }

    mdp.features = Matrix(n, 3, 0.0);
    for (int s = 0; s < n; ++s)
        if (!mdp.is_terminal(s)) mdp.features(s, 0) = 1.0; // step
    mdp.features(kGoal, 1) = 1.0;
    mdp.features(kLava, 2) = 1.0;
    mdp.validate();

    RewardVector original({-0.04, 1.0, -1.0});
    Policy target = optimal_policy(mdp, original, kDefaultDiscount).first;

    Environment env;
    env.name = "rn_grid";
    env.mdp = std::move(mdp);
    env.target = std::move(target);
    env.feature_names = {"step", "goal", "lava"};
    return env;
}

Environment chain(int n, ChainVariant variant, int spacing) {
    if (n < 2) throw std::invalid_argument("chain: need at least 2 states");

    Mdp mdp;
    mdp.n_states = n;
    mdp.n_actions = 2; // 0 = left, 1 = right
    mdp.transition.assign(static_cast<size_t>(n) * 2 * n, 0.0);
    mdp.terminal.assign(n, 0);
    mdp.terminal[n - 1] = 1;
    mdp.start_state = 0;
    mdp.objective_discount = kDefaultDiscount;

    for (int s = 0; s < n - 1; ++s) {
        mdp.t(s, 0, s > 0 ? s - 1 : 0) = 1.0; // moving left off the end self-loops
        mdp.t(s, 1, s + 1) = 1.0;
    }
    mdp.t(n - 1, 0, n - 1) = 1.0;
    mdp.t(n - 1, 1, n - 1) = 1.0;

    std::vector<int> subgoals;
    if (variant == ChainVariant::SubgoalsConstant || variant == ChainVariant::SubgoalsProfile) {
        if (spacing < 1) throw std::invalid_argument("chain: subgoal spacing must be >= 1");
        for (int pos = spacing; pos < n; pos += spacing) subgoals.push_back(pos - 1);
        if (subgoals.empty())
            throw std::invalid_argument("chain: spacing leaves no subgoal before the goal");
    }

    Environment env;
    switch (variant) {
        case ChainVariant::TwoFeature: {
            mdp.features = Matrix(n, 2, 0.0);
            for (int s = 0; s < n; ++s) mdp.features(s, s == n - 1 ? 0 : 1) = 1.0;
            env.feature_names = {"goal", "step"};
            env.name = "chain" + std::to_string(n);
            break;
        }
        case ChainVariant::SubgoalsConstant: {
            mdp.features = Matrix(n, 3, 0.0);
            std::vector<char> is_subgoal(n, 0);
            for (int sg : subgoals) is_subgoal[sg] = 1;
            for (int s = 0; s < n; ++s) {
                if (s == n - 1)
                    mdp.features(s, 1) = 1.0;
                else if (is_subgoal[s])
                    mdp.features(s, 2) = 1.0;
                else
                    mdp.features(s, 0) = 1.0;
            }
            env.feature_names = {"step", "goal", "subgoal"};
            env.name = "chain" + std::to_string(n) + "_subgoals_const";
            break;
        }
        case ChainVariant::SubgoalsProfile: {
            const int m = static_cast<int>(subgoals.size());
            mdp.features = Matrix(n, 2 + m, 0.0);
            std::vector<int> feature_of(n, -1);
            for (int j = 0; j < m; ++j) feature_of[subgoals[j]] = 2 + j;
            for (int s = 0; s < n; ++s) {
                if (s == n - 1)
                    mdp.features(s, 1) = 1.0;
                else if (feature_of[s] >= 0)
                    mdp.features(s, feature_of[s]) = 1.0;
                else
                    mdp.features(s, 0) = 1.0;
            }
            env.feature_names = {"step", "goal"};
            for (int j = 0; j < m; ++j)
                env.feature_names.push_back("subgoal" + std::to_string(subgoals[j] + 1));
            env.name = "chain" + std::to_string(n) + "_subgoals";
            break;
        }
        case ChainVariant::Dense: {
            mdp.features = Matrix(n, n, 0.0);
            for (int s = 0; s < n; ++s) mdp.features(s, s) = 1.0;
            for (int s = 0; s < n; ++s) env.feature_names.push_back("s" + std::to_string(s));
            env.name = "chain" + std::to_string(n) + "_dense";
            break;
        }
    }
    mdp.validate();

    Policy target;
    target.action.assign(n, 1); // right everywhere
    env.mdp = std::move(mdp);
    env.target = std::move(target);
    return env;
}

Environment build_environment(const EnvironmentSpec& spec) {
    if (spec.kind == EnvironmentSpec::Kind::RnGrid) return russell_norvig_grid();
    return chain(spec.chain_length, spec.variant, spec.subgoal_spacing);
}

Environment make_environment(const std::string& name) {
    if (name == "rn_grid") return russell_norvig_grid();
    if (name.rfind("chain", 0) == 0) {
        size_t pos = 5;
        size_t digits = 0;
        while (pos + digits < name.size() && std::isdigit(name[pos + digits])) ++digits;
        if (digits > 0) {
            int n = std::stoi(name.substr(pos, digits));
            std::string suffix = name.substr(pos + digits);
            if (suffix.empty()) return chain(n, ChainVariant::TwoFeature);
            if (suffix == "_subgoals_const") return chain(n, ChainVariant::SubgoalsConstant);
            if (suffix == "_subgoals") return chain(n, ChainVariant::SubgoalsProfile);
            if (suffix == "_dense") return chain(n, ChainVariant::Dense);
        }
    }
    return load_environment(name);
}

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw std::runtime_error("environment file, line " + std::to_string(line) + ": " + msg);
}

double to_double(const Line& line, const std::string& tok) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        parse_fail(line.number, "expected a number, got '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(line.number, "expected a number, got '" + tok + "'");
    return v;
}

int to_int(const Line& line, const std::string& tok) {
    size_t used = 0;
    int v;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        parse_fail(line.number, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(line.number, "expected an integer, got '" + tok + "'");
    return v;
}

} // namespace

Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open environment file: " + path);

    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    if (lines.empty()) throw std::runtime_error("environment file is empty: " + path);

    size_t at = 0;
    auto expect_key = [&](const std::string& key, size_t min_tokens) -> const Line& {
        if (at >= lines.size())
            throw std::runtime_error("environment file: unexpected end of file, expected '" +
                                     key + "'");
        const Line& line = lines[at];
        if (line.tokens[0] != key)
            parse_fail(line.number, "expected '" + key + "', got '" + line.tokens[0] + "'");
        if (line.tokens.size() < min_tokens)
            parse_fail(line.number, "'" + key + "' line is too short");
        ++at;
        return line;
    };

    Mdp mdp;
    {
        const Line& l = expect_key("states", 2);
        mdp.n_states = to_int(l, l.tokens[1]);
    }
    {
        const Line& l = expect_key("actions", 2);
        mdp.n_actions = to_int(l, l.tokens[1]);
    }
    int n_features = 0;
    {
        const Line& l = expect_key("features", 2);
        n_features = to_int(l, l.tokens[1]);
    }
    {
        const Line& l = expect_key("discount", 2);
        mdp.objective_discount = to_double(l, l.tokens[1]);
    }
    {
        const Line& l = expect_key("start", 2);
        mdp.start_state = to_int(l, l.tokens[1]);
    }
    if (mdp.n_states <= 0 || mdp.n_actions <= 0 || n_features <= 0)
        throw std::runtime_error("environment file: header sizes must be positive");

    mdp.terminal.assign(mdp.n_states, 0);
    {
        const Line& l = expect_key("terminals", 1);
        for (size_t i = 1; i < l.tokens.size(); ++i) {
            int s = to_int(l, l.tokens[i]);
            if (s < 0 || s >= mdp.n_states) parse_fail(l.number, "terminal state out of range");
            mdp.terminal[s] = 1;
        }
    }

    mdp.transition.assign(
        static_cast<size_t>(mdp.n_states) * mdp.n_actions * mdp.n_states, 0.0);
    std::vector<char> row_seen(static_cast<size_t>(mdp.n_states) * mdp.n_actions, 0);
    while (at < lines.size() && lines[at].tokens[0] == "transition") {
        const Line& l = lines[at++];
        if (l.tokens.size() < 3) parse_fail(l.number, "transition line is too short");
        int s = to_int(l, l.tokens[1]);
        std::string atok = l.tokens[2];
        if (atok.empty() || atok.back() != ':')
            parse_fail(l.number, "expected 'transition s a:' prefix");
        atok.pop_back();
        int a = to_int(l, atok);
        if (s < 0 || s >= mdp.n_states) parse_fail(l.number, "state index out of range");
        if (a < 0 || a >= mdp.n_actions) parse_fail(l.number, "action index out of range");
        if (row_seen[static_cast<size_t>(s) * mdp.n_actions + a])
            parse_fail(l.number, "duplicate transition row");
        row_seen[static_cast<size_t>(s) * mdp.n_actions + a] = 1;
        if ((l.tokens.size() - 3) % 2 != 0)
            parse_fail(l.number, "transition entries must come in (state, probability) pairs");
        double row_sum = 0.0;
        for (size_t i = 3; i + 1 < l.tokens.size(); i += 2) {
            int s2 = to_int(l, l.tokens[i]);
            double p = to_double(l, l.tokens[i + 1]);
            if (s2 < 0 || s2 >= mdp.n_states)
                parse_fail(l.number, "successor state out of range");
            if (p < 0.0) parse_fail(l.number, "negative probability");
            if (mdp.t(s, a, s2) != 0.0) parse_fail(l.number, "duplicate successor state");
            mdp.t(s, a, s2) = p;
            row_sum += p;
        }
        if (!mdp.is_terminal(s) && std::fabs(row_sum - 1.0) > 1e-12)
            parse_fail(l.number, "probabilities sum to " + std::to_string(row_sum));
    }
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (row_seen[static_cast<size_t>(s) * mdp.n_actions + a]) continue;
            if (!mdp.is_terminal(s))
                throw std::runtime_error("environment file: missing transition row for state " +
                                         std::to_string(s) + ", action " + std::to_string(a));
            mdp.t(s, a, s) = 1.0; // terminals default to a self-loop
        }
    }

    mdp.features = Matrix(mdp.n_states, n_features, 0.0);
    std::vector<char> feature_seen(mdp.n_states, 0);
    while (at < lines.size() && lines[at].tokens[0] == "feature") {
        const Line& l = lines[at++];
        if (l.tokens.size() < 2) parse_fail(l.number, "feature line is too short");
        std::string stok = l.tokens[1];
        if (stok.empty() || stok.back() != ':')
            parse_fail(l.number, "expected 'feature s:' prefix");
        stok.pop_back();
        int s = to_int(l, stok);
        if (s < 0 || s >= mdp.n_states) parse_fail(l.number, "state index out of range");
        if (feature_seen[s]) parse_fail(l.number, "duplicate feature row");
        feature_seen[s] = 1;
        if (static_cast<int>(l.tokens.size()) - 2 != n_features)
            parse_fail(l.number, "expected " + std::to_string(n_features) + " feature values");
        for (int i = 0; i < n_features; ++i)
            mdp.features(s, i) = to_double(l, l.tokens[2 + i]);
    }
    for (int s = 0; s < mdp.n_states; ++s)
        if (!feature_seen[s])
            throw std::runtime_error("environment file: missing feature row for state " +
                                     std::to_string(s));

    Policy target;
    {
        const Line& l = expect_key("policy", 2);
        if (static_cast<int>(l.tokens.size()) - 1 != mdp.n_states)
            parse_fail(l.number, "policy must list one action per state");
        for (int s = 0; s < mdp.n_states; ++s) {
            int a = to_int(l, l.tokens[1 + s]);
            if (a < 0 || a >= mdp.n_actions) parse_fail(l.number, "policy action out of range");
            target.action.push_back(a);
        }
    }
    if (at != lines.size()) parse_fail(lines[at].number, "trailing content after policy line");

    mdp.validate();

    Environment env;
    env.name = path;
    env.mdp = std::move(mdp);
    env.target = std::move(target);
    for (int i = 0; i < n_features; ++i) env.feature_names.push_back("f" + std::to_string(i));
    return env;
}

void save_environment(const Environment& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write environment file: " + path);
    const Mdp& mdp = env.mdp;
    out << std::setprecision(17);
    out << "# rewardlab environment: " << env.name << '\n';
    out << "states " << mdp.n_states << '\n';
    out << "actions " << mdp.n_actions << '\n';
    out << "features " << mdp.n_features() << '\n';
    out << "discount " << mdp.objective_discount << '\n';
    out << "start " << mdp.start_state << '\n';
    out << "terminals";
    for (int s = 0; s < mdp.n_states; ++s)
        if (mdp.is_terminal(s)) out << ' ' << s;
    out << '\n';
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            out << "transition " << s << ' ' << a << ':';
            for (int s2 = 0; s2 < mdp.n_states; ++s2)
                if (mdp.t(s, a, s2) != 0.0) out << ' ' << s2 << ' ' << mdp.t(s, a, s2);
            out << '\n';
        }
    }
    for (int s = 0; s < mdp.n_states; ++s) {
        out << "feature " << s << ':';
        for (int i = 0; i < mdp.n_features(); ++i) out << ' ' << mdp.features(s, i);
        out << '\n';
    }
    out << "policy";
    for (int s = 0; s < mdp.n_states; ++s) out << ' ' << env.target.action[s];
    out << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

bool has_state_features(const Mdp& mdp) {
    if (mdp.features.cols() != mdp.n_states) return false;
    for (int s = 0; s < mdp.n_states; ++s)
        for (int i = 0; i < mdp.n_states; ++i)
            if (mdp.features(s, i) != (s == i ? 1.0 : 0.0)) return false;
    return true;
}

Mdp with_state_features(const Mdp& mdp) {
    Mdp out = mdp;
    out.features = Matrix(mdp.n_states, mdp.n_states, 0.0);
    for (int s = 0; s < mdp.n_states; ++s) out.features(s, s) = 1.0;
    return out;
}

} // namespace rewardlab
