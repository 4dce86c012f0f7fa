#include "bnvar/learn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "bnvar/score.hpp"
#include "bnvar/types.hpp"

namespace bnvar {

namespace {

constexpr double kScoreEps = 1e-9;

enum class MoveType { Add = 0, Delete = 1, Reverse = 2 };

struct Move {
    MoveType type;
    int tail;
    int head;
    auto operator<=>(const Move&) const = default;
};

Move inverse(const Move& m) {
    switch (m.type) {
        case MoveType::Add: return {MoveType::Delete, m.tail, m.head};
        case MoveType::Delete: return {MoveType::Add, m.tail, m.head};
        case MoveType::Reverse: return {MoveType::Reverse, m.head, m.tail};
    }
    return m;
}

// Path existence over the current arc set, used for acyclicity checks.
bool has_path(const std::vector<std::vector<int>>& children, int from, int to, int v) {
    std::vector<char> seen(static_cast<size_t>(v), 0);
    std::vector<int> stack{from};
    seen[static_cast<size_t>(from)] = 1;
    while (!stack.empty()) {
        int node = stack.back();
        stack.pop_back();
        if (node == to) return true;
        for (int c : children[static_cast<size_t>(node)]) {
            if (!seen[static_cast<size_t>(c)]) {
                seen[static_cast<size_t>(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    return false;
}

struct SearchState {
    int v;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;
    std::set<std::pair<int, int>> arcs;

    explicit SearchState(int v_)
        : v(v_), parents(static_cast<size_t>(v_)), children(static_cast<size_t>(v_)) {}

    bool has_arc(int t, int h) const { return arcs.count({t, h}) > 0; }

    void add(int t, int h) {
        arcs.insert({t, h});
        parents[static_cast<size_t>(h)].push_back(t);
        children[static_cast<size_t>(t)].push_back(h);
    }
    void remove(int t, int h) {
        arcs.erase({t, h});
        auto& p = parents[static_cast<size_t>(h)];
        p.erase(std::find(p.begin(), p.end(), t));
        auto& c = children[static_cast<size_t>(t)];
        c.erase(std::find(c.begin(), c.end(), h));
    }

    void apply(const Move& m) {
        switch (m.type) {
            case MoveType::Add: add(m.tail, m.head); break;
            case MoveType::Delete: remove(m.tail, m.head); break;
            case MoveType::Reverse:
                remove(m.tail, m.head);
                add(m.head, m.tail);
                break;
        }
    }

    Dag to_dag(const CategoricalDataset& data) const {
        Dag dag;
        dag.node_labels = data.names;
        dag.arcs = arcs;
        return dag;
    }
};

} // namespace

Dag hill_climb(const CategoricalDataset& data, const HillClimbConfig& cfg, std::uint64_t) {
    data.validate();
    if (cfg.tabu_length < 0 || cfg.max_iter < 0)
        throw std::invalid_argument("hill_climb: negative tabu_length or max_iter");
    const int v = data.variable_count();
    BicScore score(data);

    SearchState state(v);
    std::vector<double> local(static_cast<size_t>(v));
    for (int i = 0; i < v; ++i) local[static_cast<size_t>(i)] = score.local(i, {});
    double current = 0;
    for (double s : local) current += s;

    double best_score = current;
    std::set<std::pair<int, int>> best_arcs = state.arcs;
    std::deque<Move> tabu;
    int stall = 0;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        Move best_move{MoveType::Add, -1, -1};
        double best_delta = 0;
        bool found = false;

        auto consider = [&](const Move& m, double delta) {
            if (std::find(tabu.begin(), tabu.end(), m) != tabu.end()) return;
            if (!found || delta > best_delta + kScoreEps) {
                found = true;
                best_move = m;
                best_delta = delta;
            }
        };

        // Moves are enumerated in lexicographic (type, tail, head) order, so
        // the first of any tied set wins.
        for (int t = 0; t < v; ++t)
            for (int h = 0; h < v; ++h) {
                if (t == h || state.has_arc(t, h)) continue;
                if (state.has_arc(h, t)) continue;
                if (has_path(state.children, h, t, v)) continue;  // would close a cycle
                std::vector<int> p = state.parents[static_cast<size_t>(h)];
                p.push_back(t);
                consider({MoveType::Add, t, h},
                         score.local(h, p) - local[static_cast<size_t>(h)]);
            }
        const std::vector<std::pair<int, int>> arcs(state.arcs.begin(), state.arcs.end());
        for (const auto& [t, h] : arcs) {
            std::vector<int> p = state.parents[static_cast<size_t>(h)];
            p.erase(std::find(p.begin(), p.end(), t));
            consider({MoveType::Delete, t, h}, score.local(h, p) - local[static_cast<size_t>(h)]);
        }
        for (const auto& [t, h] : arcs) {
            // Reversing t->h needs no other path t->...->h.
            std::vector<int> ph = state.parents[static_cast<size_t>(h)];
            ph.erase(std::find(ph.begin(), ph.end(), t));
            std::vector<int> pt = state.parents[static_cast<size_t>(t)];
            pt.push_back(h);
            state.remove(t, h);
            const bool cycle = has_path(state.children, t, h, v);
            state.add(t, h);
            if (cycle) continue;
            const double delta = score.local(h, ph) - local[static_cast<size_t>(h)] +
                                 score.local(t, pt) - local[static_cast<size_t>(t)];
            consider({MoveType::Reverse, t, h}, delta);
        }

        if (!found) break;
        if (cfg.tabu_length == 0 && best_delta <= kScoreEps) break;

        state.apply(best_move);
        current += best_delta;
        local[static_cast<size_t>(best_move.head)] =
            score.local(best_move.head, state.parents[static_cast<size_t>(best_move.head)]);
        if (best_move.type == MoveType::Reverse)
            local[static_cast<size_t>(best_move.tail)] =
                score.local(best_move.tail, state.parents[static_cast<size_t>(best_move.tail)]);

        if (cfg.tabu_length > 0) {
            tabu.push_back(inverse(best_move));
            while (static_cast<int>(tabu.size()) > cfg.tabu_length) tabu.pop_front();
        }

        if (current > best_score + kScoreEps) {
            best_score = current;
            best_arcs = state.arcs;
            stall = 0;
        } else if (cfg.tabu_length > 0 && ++stall >= cfg.tabu_length) {
            break;
        }
    }

    Dag dag;
    dag.node_labels = data.names;
    dag.arcs = best_arcs;
    dag.validate();
    return dag;
}

namespace {

struct GsContext {
    const CategoricalDataset& data;
    const GrowShrinkConfig& cfg;

    std::vector<int> capped(std::vector<int> cond) const {
        std::sort(cond.begin(), cond.end());
        if (static_cast<int>(cond.size()) > cfg.max_cond_size)
            cond.resize(static_cast<size_t>(cfg.max_cond_size));
        return cond;
    }

    bool dependent(int x, int y, const std::vector<int>& cond) const {
        return ci_test(data, x, y, capped(cond), cfg.test.kind).p_value < cfg.test.alpha;
    }
};

} // namespace

Dag grow_shrink(const CategoricalDataset& data, const GrowShrinkConfig& cfg, std::uint64_t) {
    data.validate();
    if (cfg.max_cond_size < 0) throw std::invalid_argument("grow_shrink: negative cap");
    const int v = data.variable_count();
    GsContext ctx{data, cfg};

    // Markov blanket recovery.
    std::vector<std::set<int>> blanket(static_cast<size_t>(v));
    for (int t = 0; t < v; ++t) {
        auto& mb = blanket[static_cast<size_t>(t)];
        bool changed = true;
        while (changed) {  // grow
            changed = false;
            for (int x = 0; x < v; ++x) {
                if (x == t || mb.count(x)) continue;
                if (ctx.dependent(t, x, {mb.begin(), mb.end()})) {
                    mb.insert(x);
                    changed = true;
                }
            }
        }
        changed = true;
        while (changed) {  // shrink
            changed = false;
            for (int x : std::vector<int>(mb.begin(), mb.end())) {
                std::vector<int> rest;
                for (int y : mb)
                    if (y != x) rest.push_back(y);
                if (!ctx.dependent(t, x, rest)) {
                    mb.erase(x);
                    changed = true;
                }
            }
        }
    }

    // Symmetry: keep x in mb(y) only if y is in mb(x).
    for (int t = 0; t < v; ++t)
        for (int x : std::vector<int>(blanket[static_cast<size_t>(t)].begin(),
                                      blanket[static_cast<size_t>(t)].end()))
            if (!blanket[static_cast<size_t>(x)].count(t)) blanket[static_cast<size_t>(t)].erase(x);

    // Neighbors within blankets: x-y stays unless some subset of the smaller
    // blanket side separates them.  Separating sets are kept for orientation.
    std::set<std::pair<int, int>> edges;
    std::map<std::pair<int, int>, std::vector<int>> sepset;
    for (int x = 0; x < v; ++x)
        for (int y : blanket[static_cast<size_t>(x)]) {
            if (y <= x) continue;
            std::vector<int> bx, by;
            for (int z : blanket[static_cast<size_t>(x)])
                if (z != y) bx.push_back(z);
            for (int z : blanket[static_cast<size_t>(y)])
                if (z != x) by.push_back(z);
            const std::vector<int>& side = bx.size() <= by.size() ? bx : by;

            bool separated = false;
            std::vector<int> separator;
            const int max_size = std::min<int>(cfg.max_cond_size, static_cast<int>(side.size()));
            for (int size = 0; size <= max_size && !separated; ++size) {
                // enumerate subsets of `side` of this size, lexicographically
                std::vector<int> pick(static_cast<size_t>(size));
                std::vector<int> idx(static_cast<size_t>(size));
                for (int i = 0; i < size; ++i) idx[static_cast<size_t>(i)] = i;
                bool more = true;
                while (more && !separated) {
                    for (int i = 0; i < size; ++i)
                        pick[static_cast<size_t>(i)] = side[static_cast<size_t>(idx[static_cast<size_t>(i)])];
                    if (!ctx.dependent(x, y, pick)) {
                        separated = true;
                        separator = pick;
                    }
                    int i = size - 1;
                    while (i >= 0 && idx[static_cast<size_t>(i)] ==
                                         static_cast<int>(side.size()) - size + i)
                        --i;
                    if (i < 0) {
                        more = false;
                    } else {
                        ++idx[static_cast<size_t>(i)];
                        for (int j = i + 1; j < size; ++j)
                            idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
                    }
                }
            }
            if (separated)
                sepset[{x, y}] = separator;
            else
                edges.insert({x, y});
        }

    // Orientation is best effort; downstream consumers use the skeleton.
    std::vector<std::vector<int>> children(static_cast<size_t>(v));
    std::set<std::pair<int, int>> arcs;
    std::set<std::pair<int, int>> oriented;  // undirected edges already oriented
    auto try_orient = [&](int from, int to) {
        const std::pair<int, int> key{std::min(from, to), std::max(from, to)};
        if (oriented.count(key)) return;
        if (has_path(children, to, from, v)) return;  // would close a cycle
        arcs.insert({from, to});
        children[static_cast<size_t>(from)].push_back(to);
        oriented.insert(key);
    };

    // v-structures x -> y <- z for non-adjacent x, z whose separating set
    // does not contain the common neighbor y.
    for (int y = 0; y < v; ++y)
        for (int x = 0; x < v; ++x)
            for (int z = x + 1; z < v; ++z) {
                if (x == y || z == y) continue;
                if (!edges.count({std::min(x, y), std::max(x, y)})) continue;
                if (!edges.count({std::min(z, y), std::max(z, y)})) continue;
                if (edges.count({x, z})) continue;
                auto it = sepset.find({x, z});
                if (it == sepset.end()) continue;
                if (std::find(it->second.begin(), it->second.end(), y) != it->second.end())
                    continue;
                try_orient(x, y);
                try_orient(z, y);
            }

    for (const auto& [a, b] : edges) {
        if (oriented.count({a, b})) continue;
        if (!has_path(children, b, a, v))
            try_orient(a, b);
        else
            try_orient(b, a);
    }

    Dag dag;
    dag.node_labels = data.names;
    dag.arcs = arcs;
    dag.validate();
    return dag;
}

std::string LearnerConfig::name() const {
    if (kind == Kind::HillClimb)
        return "hc-tabu" + std::to_string(hc.tabu_length);
    std::string test = gs.test.kind == CiKind::G2 ? "g2" : "x2";
    char alpha[32];
    std::snprintf(alpha, sizeof alpha, "%g", gs.test.alpha);
    return "gs-" + test + "-" + alpha;
}

LearnerConfig LearnerConfig::parse(const std::string& token) {
    LearnerConfig cfg;
    if (token == "hc" || token.rfind("hc-", 0) == 0) {
        cfg.kind = Kind::HillClimb;
        if (token.rfind("hc-tabu", 0) == 0) {
            try {
                cfg.hc.tabu_length = std::stoi(token.substr(7));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad learner token '" + token + "'");
            }
            if (cfg.hc.tabu_length < 0)
                throw std::invalid_argument("bad learner token '" + token + "'");
        } else if (token != "hc") {
            throw std::invalid_argument("bad learner token '" + token + "'");
        }
        return cfg;
    }
    if (token == "gs" || token.rfind("gs-", 0) == 0) {
        cfg.kind = Kind::GrowShrink;
        if (token != "gs") {
            // gs-<test>-<alpha>
            auto second = token.find('-', 3);
            const std::string test = token.substr(3, second == std::string::npos
                                                         ? std::string::npos
                                                         : second - 3);
            if (test == "g2")
                cfg.gs.test.kind = CiKind::G2;
            else if (test == "x2")
                cfg.gs.test.kind = CiKind::PearsonChi2;
            else
                throw std::invalid_argument("bad learner token '" + token + "'");
            if (second != std::string::npos) {
                try {
                    cfg.gs.test.alpha = std::stod(token.substr(second + 1));
                } catch (const std::exception&) {
                    throw std::invalid_argument("bad learner token '" + token + "'");
                }
                if (!(cfg.gs.test.alpha > 0 && cfg.gs.test.alpha < 1))
                    throw std::invalid_argument("bad learner token '" + token + "'");
            }
        }
        return cfg;
    }
    throw std::invalid_argument("unknown learner '" + token + "' (expected gs[-test-alpha] or hc[-tabuL])");
}

Dag learn_structure(const CategoricalDataset& data, const LearnerConfig& cfg, std::uint64_t seed) {
    return cfg.kind == LearnerConfig::Kind::HillClimb ? hill_climb(data, cfg.hc, seed)
                                                      : grow_shrink(data, cfg.gs, seed);
}

} // namespace bnvar
