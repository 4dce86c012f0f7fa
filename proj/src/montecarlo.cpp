#include "bnvar/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <thread>

namespace bnvar {

const char* to_string(McStat s) {
    switch (s) {
        case McStat::ComplementT: return "t";
        case McStat::ComplementG: return "g";
        case McStat::ComplementN: return "n";
        case McStat::QuarterFrobenius: return "q";
    }
    return "?";
}

McStat mc_stat_from_token(const std::string& token) {
    if (token == "t") return McStat::ComplementT;
    if (token == "g") return McStat::ComplementG;
    if (token == "n") return McStat::ComplementN;
    if (token == "q") return McStat::QuarterFrobenius;
    throw std::invalid_argument("unknown statistic '" + token + "' (expected t, g, n or q)");
}

const char* to_string(CovDivisor d) {
    return d == CovDivisor::M ? "m" : "m-1";
}

void McConfig::validate() const {
    if (m < 2) throw std::invalid_argument("McConfig: m must be >= 2");
    if (k < 1) throw std::invalid_argument("McConfig: k must be >= 1");
    if (k > 64) throw std::invalid_argument("McConfig: k must be <= 64");
    if (replicates < 1) throw std::invalid_argument("McConfig: replicates must be >= 1");
    if (threads < 1) throw std::invalid_argument("McConfig: threads must be >= 1");
}

namespace {

// Per-replicate sufficient statistics: presence counts and joint presence
// counts of the k coin-flip components over m rows.
struct PairCounts {
    long m = 0;
    int k = 0;
    std::vector<std::int32_t> single;  // k
    std::vector<std::int32_t> joint;   // k*k, upper triangle used

    void reset(long m_, int k_) {
        m = m_;
        k = k_;
        single.assign(static_cast<size_t>(k), 0);
        joint.assign(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
    }
};

void draw_counts(PairCounts& c, SplitMix64& gen) {
    const int k = c.k;
    const std::uint64_t mask = k == 64 ? ~0ULL : ((1ULL << k) - 1);
    for (long row = 0; row < c.m; ++row) {
        std::uint64_t w = gen.next() & mask;
        for (std::uint64_t x = w; x; x &= x - 1) {
            int i = std::countr_zero(x);
            ++c.single[static_cast<size_t>(i)];
            for (std::uint64_t y = x & (x - 1); y; y &= y - 1) {
                int j = std::countr_zero(y);
                ++c.joint[static_cast<size_t>(i) * static_cast<size_t>(k) + static_cast<size_t>(j)];
            }
        }
    }
}

double cov_entry(const PairCounts& c, int i, int j, double denom) {
    const double m = static_cast<double>(c.m);
    const double ni = c.single[static_cast<size_t>(i)];
    const double nj = c.single[static_cast<size_t>(j)];
    const double nij = i == j ? ni
                              : c.joint[static_cast<size_t>(std::min(i, j)) * static_cast<size_t>(c.k) +
                                        static_cast<size_t>(std::max(i, j))];
    return (m * nij - ni * nj) / denom;
}

double divisor_denominator(long m, CovDivisor divisor) {
    const double md = static_cast<double>(m);
    return divisor == CovDivisor::MMinus1 ? md * (md - 1.0) : md * md;
}

// Shared arithmetic for the four statistics; entry(i, j) supplies the
// covariance matrix.  Keeping one expression shape for both the replicate
// path and matrix inputs makes the two routes agree to the last bit.
template <typename EntryFn>
double stat_value_impl(McStat stat, int k, EntryFn&& entry) {
    const double kd = static_cast<double>(k);
    switch (stat) {
        case McStat::ComplementT: {
            double tr = 0;
            for (int i = 0; i < k; ++i) tr += entry(i, i);
            return 1.0 - 4.0 * tr / kd;
        }
        case McStat::ComplementN: {
            double var_n = 0;
            for (int i = 0; i < k; ++i) {
                double d = entry(i, i) - kd / 4.0;
                var_n += d * d;
                for (int j = i + 1; j < k; ++j) {
                    double s = entry(i, j);
                    var_n += 2.0 * s * s;
                }
            }
            return 1.0 - (kd * kd * kd - 16.0 * var_n) / (kd * (2.0 * kd - 1.0));
        }
        case McStat::QuarterFrobenius: {
            double dist = 0;
            for (int i = 0; i < k; ++i) {
                double d = entry(i, i) - 0.25;
                dist += d * d;
                for (int j = i + 1; j < k; ++j) {
                    double s = entry(i, j);
                    dist += 2.0 * s * s;
                }
            }
            return dist;
        }
        case McStat::ComplementG: {
            double det;
            if (k == 1) {
                det = entry(0, 0);
            } else if (k == 2) {
                double a = entry(0, 0), b = entry(0, 1), d = entry(1, 1);
                det = a * d - b * b;
            } else {
                Matrix s(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) s(i, j) = entry(std::min(i, j), std::max(i, j));
                det = s.determinant();
            }
            return 1.0 - std::pow(4.0, kd) * det;
        }
    }
    return 0.0;
}

double stat_from_counts(McStat stat, const PairCounts& c, CovDivisor divisor) {
    const double denom = divisor_denominator(c.m, divisor);
    return stat_value_impl(stat, c.k, [&](int i, int j) { return cov_entry(c, i, j, denom); });
}

} // namespace

Matrix null_replicate(long m, int k, SplitMix64& gen, CovDivisor divisor) {
    if (m < 2) throw std::invalid_argument("null_replicate: m must be >= 2");
    if (k < 1 || k > 64) throw std::invalid_argument("null_replicate: k must be in [1, 64]");
    PairCounts c;
    c.reset(m, k);
    draw_counts(c, gen);
    const double denom = divisor_denominator(m, divisor);
    Matrix s(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s(i, j) = cov_entry(c, i, j, denom);
    return s;
}

double mc_stat_value(McStat stat, MatrixRef sigma) {
    const int k = static_cast<int>(sigma.rows());
    if (k < 1) throw std::invalid_argument("mc_stat_value: empty matrix");
    return stat_value_impl(stat, k, [&](int i, int j) { return sigma(i, j); });
}

std::vector<McResult> mc_sweep(const McConfig& cfg,
                               const std::vector<std::pair<McStat, double>>& observations) {
    cfg.validate();
    const size_t n_obs = observations.size();
    std::vector<long long> counts(n_obs, 0);

    auto run_range = [&](long long lo, long long hi, std::vector<long long>& local) {
        PairCounts c;
        bool need[4] = {false, false, false, false};
        for (const auto& [stat, t] : observations) need[static_cast<int>(stat)] = true;
        for (long long r = lo; r < hi; ++r) {
            SplitMix64 gen = substream(cfg.seed, static_cast<std::uint64_t>(r));
            c.reset(cfg.m, cfg.k);
            draw_counts(c, gen);
            double value[4];
            for (int s = 0; s < 4; ++s)
                if (need[s]) value[s] = stat_from_counts(static_cast<McStat>(s), c, cfg.divisor);
            for (size_t o = 0; o < n_obs; ++o)
                if (value[static_cast<int>(observations[o].first)] > observations[o].second)
                    ++local[o];
        }
    };

    const int threads = cfg.threads;
    if (threads == 1) {
        run_range(0, cfg.replicates, counts);
    } else {
        std::vector<std::vector<long long>> partial(static_cast<size_t>(threads),
                                                    std::vector<long long>(n_obs, 0));
        std::vector<std::thread> pool;
        const long long chunk = (cfg.replicates + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const long long lo = static_cast<long long>(t) * chunk;
            const long long hi = std::min<long long>(cfg.replicates, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi, std::ref(partial[static_cast<size_t>(t)]));
        }
        for (auto& th : pool) th.join();
        for (const auto& local : partial)
            for (size_t o = 0; o < n_obs; ++o) counts[o] += local[o];
    }

    std::vector<McResult> results(n_obs);
    for (size_t o = 0; o < n_obs; ++o) {
        McResult& r = results[o];
        r.replicates_used = cfg.replicates;
        r.exceed_count = counts[o];
        r.observed = observations[o].second;
        r.p_hat = static_cast<double>(counts[o]) / static_cast<double>(cfg.replicates);
        r.se = std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(cfg.replicates));
    }
    return results;
}

McResult mc_pvalue(double t_obs, const McConfig& cfg) {
    return mc_sweep(cfg, {{cfg.stat, t_obs}}).front();
}

} // namespace bnvar
