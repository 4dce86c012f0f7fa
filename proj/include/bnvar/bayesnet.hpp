#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnvar/dataset.hpp"
#include "bnvar/graph.hpp"

namespace bnvar {

/// Discrete Bayesian network: a DAG plus one conditional probability table
/// per node.  CPT rows are indexed by the parent-level combination in
/// mixed-radix order with the first parent slowest; each row is a
/// distribution over the node's levels.
struct BayesNet {
    struct Node {
        std::string name;
        std::vector<std::string> levels;
        std::vector<int> parents;              // indices into nodes
        std::vector<std::vector<double>> cpt;  // rows x levels
    };

    std::vector<Node> nodes;

    int node_count() const { return static_cast<int>(nodes.size()); }
    Dag dag() const;
    void validate() const;
};

/// JSON document with a `nodes` array of {name, levels, parents, cpt}.
/// Parents are node names; cpt rows follow the mixed-radix invariant above.
BayesNet load_bayesnet(const std::string& path);
BayesNet parse_bayesnet(const std::string& json_text);
void save_bayesnet(const BayesNet& bn, const std::string& path);

/// n i.i.d. rows sampled in topological order, each node drawn from the CPT
/// row selected by its already-sampled parents.  Deterministic given seed.
CategoricalDataset forward_sample(const BayesNet& bn, long n, std::uint64_t seed);

} // namespace bnvar
