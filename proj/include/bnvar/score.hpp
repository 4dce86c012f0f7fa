#pragma once

#include <unordered_map>
#include <vector>

#include "bnvar/dataset.hpp"
#include "bnvar/graph.hpp"

namespace bnvar {

/// Decomposable BIC for discrete networks: per node, the maximized
/// multinomial log-likelihood given its parents minus (d/2) ln n with
/// d = (levels - 1) * prod(parent levels).  Local terms are cached by
/// (node, parent set).
class BicScore {
public:
    explicit BicScore(const CategoricalDataset& data);

    double local(int node, const std::vector<int>& parents) const;
    double total(const Dag& dag) const;

private:
    const CategoricalDataset& data_;
    mutable std::unordered_map<std::string, double> cache_;
};

double bic_score(const Dag& dag, const CategoricalDataset& data);

} // namespace bnvar
