#include "bnvar/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "bnvar/rng.hpp"
#include "bnvar/types.hpp"

namespace bnvar {

namespace {

CategoricalDataset resample_rows(const CategoricalDataset& data, SplitMix64& gen) {
    const long n = data.row_count();
    std::vector<std::uint64_t> picks(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) picks[static_cast<size_t>(i)] = gen.below(static_cast<std::uint64_t>(n));

    CategoricalDataset out;
    out.names = data.names;
    out.levels = data.levels;
    out.columns.resize(data.columns.size());
    for (size_t v = 0; v < data.columns.size(); ++v) {
        out.columns[v].resize(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i)
            out.columns[v][static_cast<size_t>(i)] = data.columns[v][picks[static_cast<size_t>(i)]];
    }
    return out;
}

} // namespace

std::vector<Skeleton> bootstrap_skeletons(const CategoricalDataset& data,
                                          const LearnerConfig& learner, int m,
                                          std::uint64_t seed, int threads) {
    data.validate();
    if (m < 1) throw std::invalid_argument("bootstrap_skeletons: m must be >= 1");
    if (threads < 1) throw std::invalid_argument("bootstrap_skeletons: threads must be >= 1");

    std::vector<Skeleton> skeletons(static_cast<size_t>(m));
    std::vector<std::string> errors(static_cast<size_t>(m));

    auto run_one = [&](int b) {
        try {
            SplitMix64 gen = substream(seed, static_cast<std::uint64_t>(b));
            CategoricalDataset resampled = resample_rows(data, gen);
            Dag dag = learn_structure(resampled, learner, mix_seed(seed, 1000003ULL + b));
            skeletons[static_cast<size_t>(b)] = skeleton_of(dag);
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(b)] = e.what();
        }
    };

    if (threads == 1 || m == 1) {
        for (int b = 0; b < m; ++b) run_one(b);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int b = next.fetch_add(1); b < m; b = next.fetch_add(1)) run_one(b);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min(threads, m); ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (int b = 0; b < m; ++b)
        if (!errors[static_cast<size_t>(b)].empty())
            throw NumericError("bootstrap replicate " + std::to_string(b) + ": " +
                               errors[static_cast<size_t>(b)]);
    return skeletons;
}

double feature_confidence(const std::vector<Skeleton>& samples,
                          const std::vector<std::pair<int, int>>& feature) {
    if (samples.empty()) throw std::invalid_argument("feature_confidence: no samples");
    long hits = 0;
    for (const Skeleton& s : samples) {
        bool all = true;
        for (const auto& [a, b] : feature)
            if (!s.has_edge(a, b)) {
                all = false;
                break;
            }
        hits += all ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

} // namespace bnvar
