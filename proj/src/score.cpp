#include "bnvar/score.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnvar/types.hpp"

namespace bnvar {

BicScore::BicScore(const CategoricalDataset& data) : data_(data) { data.validate(); }

double BicScore::local(int node, const std::vector<int>& parents) const {
    std::vector<int> sorted = parents;
    std::sort(sorted.begin(), sorted.end());

    std::string key = std::to_string(node);
    for (int p : sorted) key += "," + std::to_string(p);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    const long n = data_.row_count();
    const int r = data_.level_count(node);
    long configs = 1;
    for (int p : sorted) configs *= data_.level_count(p);

    std::vector<long> counts(static_cast<size_t>(configs) * r, 0);
    std::vector<long> config_tot(static_cast<size_t>(configs), 0);
    const auto& col = data_.columns[static_cast<size_t>(node)];
    for (long row = 0; row < n; ++row) {
        long config = 0;
        for (int p : sorted)
            config = config * data_.level_count(p) +
                     data_.columns[static_cast<size_t>(p)][static_cast<size_t>(row)];
        ++counts[static_cast<size_t>(config) * r + col[static_cast<size_t>(row)]];
        ++config_tot[static_cast<size_t>(config)];
    }

    double loglik = 0;
    for (long c = 0; c < configs; ++c) {
        const long total = config_tot[static_cast<size_t>(c)];
        if (total == 0) continue;
        for (int l = 0; l < r; ++l) {
            const long v = counts[static_cast<size_t>(c) * r + l];
            if (v > 0)
                loglik += static_cast<double>(v) *
                          std::log(static_cast<double>(v) / static_cast<double>(total));
        }
    }

    const double d = static_cast<double>(r - 1) * static_cast<double>(configs);
    const double value = loglik - 0.5 * d * std::log(static_cast<double>(n));
    cache_[key] = value;
    return value;
}

double BicScore::total(const Dag& dag) const {
    if (dag.node_count() != data_.variable_count())
        throw std::invalid_argument("bic: dag and data variable counts differ");
    std::vector<std::vector<int>> parents(static_cast<size_t>(dag.node_count()));
    for (const auto& [tail, head] : dag.arcs) parents[static_cast<size_t>(head)].push_back(tail);
    double sum = 0;
    for (int node = 0; node < dag.node_count(); ++node)
        sum += local(node, parents[static_cast<size_t>(node)]);
    return sum;
}

double bic_score(const Dag& dag, const CategoricalDataset& data) {
    return BicScore(data).total(dag);
}

} // namespace bnvar
