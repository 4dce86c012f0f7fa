#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bnvar/bayesnet.hpp"
#include "bnvar/bootstrap.hpp"
#include "bnvar/moments.hpp"
#include "bnvar/montecarlo.hpp"
#include "bnvar/rng.hpp"
#include "bnvar/types.hpp"

using namespace bnvar;

namespace {

CategoricalDataset deterministic_pair(long n, std::uint64_t seed) {
    SplitMix64 gen(seed);
    CategoricalDataset d;
    d.names = {"a", "b", "c"};
    d.levels = {{"0", "1"}, {"0", "1"}, {"0", "1"}};
    d.columns.assign(3, std::vector<std::uint8_t>(static_cast<size_t>(n)));
    for (long i = 0; i < n; ++i) {
        const std::uint8_t a = gen.uniform() < 0.5;
        d.columns[0][static_cast<size_t>(i)] = a;
        d.columns[1][static_cast<size_t>(i)] = a;  // deterministic copy
        d.columns[2][static_cast<size_t>(i)] = gen.uniform() < 0.5;
    }
    return d;
}

} // namespace

TEST_CASE("a single replicate equals learning the resample directly") {
    CategoricalDataset d = deterministic_pair(300, 21);
    LearnerConfig learner = LearnerConfig::parse("hc");
    auto skeletons = bootstrap_skeletons(d, learner, 1, 77);
    REQUIRE(skeletons.size() == 1);
    CHECK(skeletons[0].has_edge(0, 1));
}

TEST_CASE("deterministic dependence gives identical skeletons and minimum entropy") {
    CategoricalDataset d = deterministic_pair(500, 22);
    for (const char* token : {"gs", "hc"}) {
        auto skeletons = bootstrap_skeletons(d, LearnerConfig::parse(token), 20, 5);
        for (const Skeleton& s : skeletons) CHECK(s == skeletons.front());
        CHECK(classify_entropy(estimate_moments(skeletons)) == EntropyClass::Minimum);
    }
}

TEST_CASE("bootstrap archives are reproducible byte for byte") {
    CategoricalDataset d = deterministic_pair(200, 23);
    LearnerConfig learner = LearnerConfig::parse("gs");
    auto first = bootstrap_skeletons(d, learner, 10, 99);
    auto second = bootstrap_skeletons(d, learner, 10, 99);

    SkeletonArchive a1{3, d.names, first}, a2{3, d.names, second};
    std::ostringstream s1, s2;
    write_skeleton_archive(a1, s1);
    write_skeleton_archive(a2, s2);
    CHECK(s1.str() == s2.str());

    // thread count does not change the replicate stream
    auto threaded = bootstrap_skeletons(d, learner, 10, 99, 4);
    for (size_t i = 0; i < first.size(); ++i) CHECK(threaded[i] == first[i]);

    // a different seed gives a different resample stream
    auto other = bootstrap_skeletons(d, learner, 10, 100);
    bool all_equal = true;
    for (size_t i = 0; i < first.size(); ++i) all_equal &= other[i] == first[i];
    CHECK(all_equal);  // the structure here is strong enough to be stable
}

TEST_CASE("feature confidence") {
    CategoricalDataset d = deterministic_pair(400, 24);
    auto skeletons = bootstrap_skeletons(d, LearnerConfig::parse("hc"), 16, 1);
    CHECK(feature_confidence(skeletons, {}) == 1.0);

    EdgeIndexer idx(3);
    EdgeMoments mom = estimate_moments(skeletons);
    for (int e = 0; e < idx.edge_count(); ++e) {
        auto [a, b] = idx.pair(e);
        CHECK(feature_confidence(skeletons, {{a, b}}) == doctest::Approx(mom.p_hat(e)));
    }
    CHECK(feature_confidence(skeletons, {{0, 1}}) == doctest::Approx(1.0));

    // the documented four-sample pair example
    std::vector<Skeleton> samples;
    EdgeIndexer idx3(3);
    for (std::uint64_t mask : {0b011ULL, 0b001ULL, 0b010ULL, 0b011ULL}) {
        Skeleton s;
        s.node_count = 3;
        for (int e = 0; e < 3; ++e)
            if (mask & (1ULL << e)) s.edges.insert(idx3.pair(e));
        samples.push_back(s);
    }
    auto e0 = idx3.pair(0);
    auto e1 = idx3.pair(1);
    CHECK(feature_confidence(samples, {e0, e1}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(feature_confidence({}, {}), std::invalid_argument);
}

TEST_CASE("stable structure drives the Monte Carlo significance to zero") {
    // the end-to-end pipeline: data with a deterministic arc, bootstrap,
    // moments, complement statistics, Monte Carlo test
    CategoricalDataset d = deterministic_pair(500, 25);
    auto skeletons = bootstrap_skeletons(d, LearnerConfig::parse("hc"), 50, 7);
    EdgeMoments mom = estimate_moments(skeletons);
    Matrix sigma = unbiased_covariance_from_moments(mom);

    for (McStat stat : {McStat::ComplementT, McStat::ComplementN}) {
        const double t_obs = mc_stat_value(stat, sigma);
        CHECK(t_obs > 0.5);  // far from the all-independent case
        McConfig cfg;
        cfg.m = 50;
        cfg.k = 3;
        cfg.replicates = 10000;
        cfg.seed = 404;
        cfg.stat = stat;
        CHECK(mc_pvalue(t_obs, cfg).p_hat < 0.01);
    }
}

TEST_CASE("learner failures carry the replicate index") {
    CategoricalDataset d = deterministic_pair(50, 26);
    LearnerConfig bad = LearnerConfig::parse("hc");
    bad.hc.max_iter = -1;  // rejected by the learner
    try {
        bootstrap_skeletons(d, bad, 3, 1);
        FAIL("expected an error");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("replicate 0") != std::string::npos);
    }
}
