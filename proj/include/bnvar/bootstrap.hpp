#pragma once

#include <cstdint>
#include <vector>

#include "bnvar/dataset.hpp"
#include "bnvar/graph.hpp"
#include "bnvar/learn.hpp"

namespace bnvar {

/// Nonparametric bootstrap of learned skeletons: m times, resample n rows
/// with replacement (replicate b uses substream (seed, b)), learn a
/// structure, keep its skeleton.  Output order follows b regardless of the
/// thread count; learner errors are rethrown with the replicate index.
std::vector<Skeleton> bootstrap_skeletons(const CategoricalDataset& data,
                                          const LearnerConfig& learner, int m,
                                          std::uint64_t seed, int threads = 1);

/// Fraction of sampled skeletons containing every edge of `feature`
/// (edges given as unordered node-index pairs).
double feature_confidence(const std::vector<Skeleton>& samples,
                          const std::vector<std::pair<int, int>>& feature);

} // namespace bnvar
