#pragma once

#include <cstdint>
#include <string>

#include "bnvar/ci_test.hpp"
#include "bnvar/dataset.hpp"
#include "bnvar/graph.hpp"

namespace bnvar {

struct HillClimbConfig {
    int tabu_length = 10;  // 0 selects plain greedy ascent
    int max_iter = 200;
};

struct GrowShrinkConfig {
    CiTestSpec test;
    int max_cond_size = 4;  // conditioning-set cap, reported in metadata
};

/// Score-based search over add/delete/reverse arc moves with an optional
/// TABU list.  Ties break lexicographically on (move type, tail, head), so
/// the search is deterministic; the seed is accepted for interface symmetry.
Dag hill_climb(const CategoricalDataset& data, const HillClimbConfig& cfg,
               std::uint64_t seed = 0);

/// Constraint-based learner: per-node Markov blanket recovery (grow then
/// shrink), AND-rule symmetry correction, neighbor selection by exhaustive
/// conditioning within the smaller blanket (sets up to max_cond_size),
/// best-effort v-structure orientation, remaining edges oriented by variable
/// order.  Deterministic given the variable order; seed kept for symmetry.
Dag grow_shrink(const CategoricalDataset& data, const GrowShrinkConfig& cfg,
                std::uint64_t seed = 0);

/// A named learner choice for the bootstrap/experiment drivers.
struct LearnerConfig {
    enum class Kind { HillClimb, GrowShrink };
    Kind kind = Kind::GrowShrink;
    HillClimbConfig hc;
    GrowShrinkConfig gs;

    std::string name() const;
    /// Tokens: "gs" | "gs-g2-<alpha>" | "gs-x2-<alpha>" | "hc" | "hc-tabu<L>".
    static LearnerConfig parse(const std::string& token);
};

Dag learn_structure(const CategoricalDataset& data, const LearnerConfig& cfg,
                    std::uint64_t seed = 0);

} // namespace bnvar
