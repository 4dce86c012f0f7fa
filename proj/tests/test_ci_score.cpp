#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bnvar/ci_test.hpp"
#include "bnvar/rng.hpp"
#include "bnvar/score.hpp"
#include "bnvar/types.hpp"

using namespace bnvar;

namespace {

CategoricalDataset from_columns(std::vector<std::vector<std::uint8_t>> cols,
                                std::vector<int> level_counts) {
    CategoricalDataset d;
    for (size_t i = 0; i < cols.size(); ++i) {
        d.names.push_back("v" + std::to_string(i));
        std::vector<std::string> levels;
        for (int l = 0; l < level_counts[i]; ++l) levels.push_back(std::to_string(l));
        d.levels.push_back(levels);
        d.columns.push_back(std::move(cols[i]));
    }
    d.validate();
    return d;
}

// a 2x2 table given as counts: rows of (x, y) cells
CategoricalDataset table2x2(long c00, long c01, long c10, long c11) {
    std::vector<std::uint8_t> x, y;
    auto push = [&](long n, std::uint8_t xv, std::uint8_t yv) {
        for (long i = 0; i < n; ++i) {
            x.push_back(xv);
            y.push_back(yv);
        }
    };
    push(c00, 0, 0);
    push(c01, 0, 1);
    push(c10, 1, 0);
    push(c11, 1, 1);
    return from_columns({x, y}, {2, 2});
}

} // namespace

TEST_CASE("independence tests on hand-computed tables") {
    SUBCASE("a perfectly balanced table gives a zero statistic") {
        CategoricalDataset d = table2x2(25, 25, 25, 25);
        for (CiKind kind : {CiKind::G2, CiKind::PearsonChi2}) {
            CiResult r = ci_test(d, 0, 1, {}, kind);
            CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(r.df == 1.0);
            CHECK(r.p_value == doctest::Approx(1.0));
        }
    }
    SUBCASE("counts 30/10/10/30 give Pearson 20 and a tiny p") {
        CategoricalDataset d = table2x2(30, 10, 10, 30);
        CiResult x2 = ci_test(d, 0, 1, {}, CiKind::PearsonChi2);
        CHECK(x2.statistic == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(x2.p_value < 0.001);
        CHECK(std::fabs(x2.p_value - 7.744e-6) < 1e-8);
        CiResult g2 = ci_test(d, 0, 1, {}, CiKind::G2);
        CHECK(g2.statistic > 0.0);
        CHECK(g2.p_value < 0.001);
    }
    SUBCASE("zero cells contribute nothing to the likelihood ratio") {
        CategoricalDataset d = table2x2(40, 0, 0, 40);
        CiResult g2 = ci_test(d, 0, 1, {}, CiKind::G2);
        CHECK(std::isfinite(g2.statistic));
        CHECK(g2.p_value < 1e-10);
    }
}

TEST_CASE("chain and collider conditioning behave oppositely") {
    SplitMix64 gen(6);
    const long n = 4000;
    // chain x -> z -> y with strong links: marginal dependence, conditional
    // independence given z
    std::vector<std::uint8_t> x(n), z(n), y(n);
    for (long i = 0; i < n; ++i) {
        x[i] = gen.uniform() < 0.5;
        z[i] = gen.uniform() < (x[i] ? 0.9 : 0.1);
        y[i] = gen.uniform() < (z[i] ? 0.9 : 0.1);
    }
    CategoricalDataset chain = from_columns({x, z, y}, {2, 2, 2});
    CHECK(ci_test(chain, 0, 2, {}, CiKind::G2).p_value < 0.001);
    CHECK(ci_test(chain, 0, 2, {1}, CiKind::G2).p_value > 0.05);

    // collider z = x xor y: marginal independence, conditional dependence
    for (long i = 0; i < n; ++i) {
        x[i] = gen.uniform() < 0.5;
        y[i] = gen.uniform() < 0.5;
        z[i] = x[i] ^ y[i];
    }
    CategoricalDataset collider = from_columns({x, z, y}, {2, 2, 2});
    CHECK(ci_test(collider, 0, 2, {}, CiKind::G2).p_value > 0.05);
    CHECK(ci_test(collider, 0, 2, {1}, CiKind::G2).p_value < 0.001);
}

TEST_CASE("degrees of freedom use declared level counts") {
    // the third level of y never occurs; df still counts it
    std::vector<std::uint8_t> x = {0, 1, 0, 1, 0, 1, 0, 1};
    std::vector<std::uint8_t> y = {0, 1, 1, 0, 0, 1, 1, 0};
    CategoricalDataset d = from_columns({x, y}, {2, 3});
    CiResult r = ci_test(d, 0, 1, {}, CiKind::G2);
    CHECK(r.df == 2.0);

    CategoricalDataset z = from_columns({x, y, x}, {2, 3, 2});
    CHECK(ci_test(z, 0, 1, {2}, CiKind::G2).df == 4.0);
    CHECK_THROWS_AS(ci_test(d, 0, 0, {}, CiKind::G2), std::invalid_argument);
}

TEST_CASE("likelihood-ratio and Pearson statistics agree on large independent samples") {
    int close = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        SplitMix64 gen(1000 + s);
        const long n = 100000;
        std::vector<std::uint8_t> x(n), y(n);
        for (long i = 0; i < n; ++i) {
            x[i] = gen.uniform() < 0.5;
            y[i] = gen.uniform() < 0.5;
        }
        CategoricalDataset d = from_columns({x, y}, {2, 2});
        const double pg = ci_test(d, 0, 1, {}, CiKind::G2).p_value;
        const double px = ci_test(d, 0, 1, {}, CiKind::PearsonChi2).p_value;
        if (std::fabs(pg - px) < 0.05) ++close;
    }
    CHECK(close >= 95);
}

TEST_CASE("BIC of a fair coin matches the closed form") {
    const long n = 1000;
    std::vector<std::uint8_t> x(n);
    for (long i = 0; i < n; ++i) x[i] = i % 2;
    CategoricalDataset d = from_columns({x}, {2});
    Dag empty;
    empty.node_labels = {"v0"};
    const double expected = n * std::log(0.5) - 0.5 * std::log(static_cast<double>(n));
    CHECK(bic_score(empty, d) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("a parent with exactly zero empirical dependence lowers BIC") {
    const long n = 10000;  // multiple of four so the pattern factorizes exactly
    std::vector<std::uint8_t> x(n), y(n);
    for (long i = 0; i < n; ++i) {
        x[i] = (i / 2) % 2;
        y[i] = i % 2;
    }
    CategoricalDataset d = from_columns({x, y}, {2, 2});
    Dag empty;
    empty.node_labels = {"v0", "v1"};
    Dag arc = empty;
    arc.arcs.insert({0, 1});
    CHECK(bic_score(arc, d) < bic_score(empty, d));
    CHECK(bic_score(arc, d) == doctest::Approx(bic_score(empty, d) -
                                               0.5 * std::log(static_cast<double>(n)))
                                   .epsilon(1e-10));
}

TEST_CASE("BIC decomposes over nodes") {
    SplitMix64 gen(15);
    const long n = 500;
    std::vector<std::uint8_t> a(n), b(n), c(n);
    for (long i = 0; i < n; ++i) {
        a[i] = gen.uniform() < 0.4;
        b[i] = gen.uniform() < (a[i] ? 0.8 : 0.3);
        c[i] = gen.uniform() < 0.5;
    }
    CategoricalDataset d = from_columns({a, b, c}, {2, 2, 2});
    BicScore score(d);

    Dag g1;
    g1.node_labels = {"v0", "v1", "v2"};
    Dag g2 = g1;
    g1.arcs = {{0, 1}};
    g2.arcs = {{0, 1}, {0, 2}};

    const double diff = score.total(g2) - score.total(g1);
    const double local_diff = score.local(2, {0}) - score.local(2, {});
    CHECK(diff == doctest::Approx(local_diff).epsilon(1e-12));
}
