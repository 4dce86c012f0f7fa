#include "bnvar/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace bnvar {

const char* to_string(EntropyClass c) {
    switch (c) {
        case EntropyClass::Minimum: return "minimum";
        case EntropyClass::Intermediate: return "intermediate";
        case EntropyClass::Maximum: return "maximum";
    }
    return "?";
}

EdgeMoments estimate_moments(const std::vector<Skeleton>& samples,
                             const std::optional<std::vector<int>>& restrict_to) {
    if (samples.empty())
        throw std::invalid_argument("estimate_moments: no samples");
    const int v = samples.front().node_count;
    for (const Skeleton& s : samples)
        if (s.node_count != v)
            throw std::invalid_argument("estimate_moments: samples disagree on node count");

    EdgeIndexer indexer(v);
    std::vector<int> edge_ids;
    if (restrict_to) {
        edge_ids = *restrict_to;
        for (int id : edge_ids)
            if (id < 0 || id >= indexer.edge_count())
                throw std::invalid_argument("estimate_moments: edge index out of range");
    } else {
        edge_ids.resize(static_cast<size_t>(indexer.edge_count()));
        for (size_t i = 0; i < edge_ids.size(); ++i) edge_ids[i] = static_cast<int>(i);
    }

    const int k = static_cast<int>(edge_ids.size());
    const long m = static_cast<long>(samples.size());

    // Integer accumulation so that a partitioned/parallel version of this
    // loop would be bit-identical to the sequential one.
    std::vector<long> single(static_cast<size_t>(k), 0);
    std::vector<long> joint(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
    std::vector<char> present(static_cast<size_t>(k), 0);
    for (const Skeleton& s : samples) {
        for (int i = 0; i < k; ++i) {
            auto [a, b] = indexer.pair(edge_ids[static_cast<size_t>(i)]);
            present[static_cast<size_t>(i)] = s.has_edge(a, b) ? 1 : 0;
        }
        for (int i = 0; i < k; ++i) {
            if (!present[static_cast<size_t>(i)]) continue;
            ++single[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                if (present[static_cast<size_t>(j)])
                    ++joint[static_cast<size_t>(i) * static_cast<size_t>(k) + static_cast<size_t>(j)];
        }
    }

    EdgeMoments out;
    out.sample_count = m;
    out.p_hat = Vector(k);
    out.p_pair_hat = Matrix(k, k);
    for (int i = 0; i < k; ++i) {
        out.p_hat(i) = static_cast<double>(single[static_cast<size_t>(i)]) / static_cast<double>(m);
        out.p_pair_hat(i, i) = out.p_hat(i);
        for (int j = i + 1; j < k; ++j) {
            double p = static_cast<double>(joint[static_cast<size_t>(i) * static_cast<size_t>(k) +
                                                 static_cast<size_t>(j)]) /
                       static_cast<double>(m);
            out.p_pair_hat(i, j) = p;
            out.p_pair_hat(j, i) = p;
        }
    }
    return out;
}

Matrix covariance_from_moments(const EdgeMoments& moments) {
    return moments.p_pair_hat - moments.p_hat * moments.p_hat.transpose();
}

Matrix unbiased_covariance_from_moments(const EdgeMoments& moments) {
    if (moments.sample_count < 2)
        throw std::invalid_argument("unbiased covariance needs at least two samples");
    const double m = static_cast<double>(moments.sample_count);
    return covariance_from_moments(moments) * (m / (m - 1.0));
}

EntropyClass classify_entropy(const EdgeMoments& moments, double tol) {
    if (tol < 0.0) throw std::invalid_argument("classify_entropy: negative tolerance");
    const int k = moments.dimension();

    bool minimum = true;
    for (int i = 0; i < k && minimum; ++i) {
        double p = moments.p_hat(i);
        minimum = std::min(p, 1.0 - p) <= tol;
    }
    if (minimum) return EntropyClass::Minimum;

    bool maximum = true;
    for (int i = 0; i < k && maximum; ++i)
        maximum = std::fabs(moments.p_hat(i) - 0.5) <= tol;
    if (maximum) {
        Matrix sigma = covariance_from_moments(moments);
        for (int i = 0; i < k && maximum; ++i)
            for (int j = i + 1; j < k && maximum; ++j)
                maximum = std::fabs(sigma(i, j)) <= tol;
    }
    return maximum ? EntropyClass::Maximum : EntropyClass::Intermediate;
}

EdgeMoments enumerate_uniform_moments(int v) {
    if (v < 1 || v > 5)
        throw std::invalid_argument("enumerate_uniform_moments: v must be in [1, 5]");
    const int k = v * (v - 1) / 2;
    const std::uint64_t total = 1ULL << k;

    std::vector<std::uint64_t> single(static_cast<size_t>(k), 0);
    std::vector<std::uint64_t> joint(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
    for (std::uint64_t g = 0; g < total; ++g) {
        for (int i = 0; i < k; ++i) {
            if (!(g & (1ULL << i))) continue;
            ++single[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                if (g & (1ULL << j))
                    ++joint[static_cast<size_t>(i) * static_cast<size_t>(k) + static_cast<size_t>(j)];
        }
    }

    EdgeMoments out;
    out.sample_count = static_cast<long>(total);
    out.p_hat = Vector(k);
    out.p_pair_hat = Matrix(k, k);
    for (int i = 0; i < k; ++i) {
        out.p_hat(i) = static_cast<double>(single[static_cast<size_t>(i)]) / static_cast<double>(total);
        out.p_pair_hat(i, i) = out.p_hat(i);
        for (int j = i + 1; j < k; ++j) {
            double p = static_cast<double>(joint[static_cast<size_t>(i) * static_cast<size_t>(k) +
                                                 static_cast<size_t>(j)]) /
                       static_cast<double>(total);
            out.p_pair_hat(i, j) = p;
            out.p_pair_hat(j, i) = p;
        }
    }
    return out;
}

void write_moments_csv(const EdgeMoments& moments, std::ostream& out) {
    const int k = moments.dimension();
    out << "i,j,p_ij\n";
    char buf[64];
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", moments.p_pair_hat(i, j));
            out << i << ',' << j << ',' << buf << '\n';
        }
}

EdgeMoments read_moments_csv(std::istream& in) {
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line) || line != "i,j,p_ij")
        throw ParseError("moments csv: expected header 'i,j,p_ij'", 1);
    ++lineno;

    std::vector<std::tuple<int, int, double>> cells;
    int k = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ParseError("moments csv: malformed row", lineno);
        try {
            int i = std::stoi(a), j = std::stoi(b);
            double p = std::stod(c);
            cells.emplace_back(i, j, p);
            k = std::max(k, std::max(i, j) + 1);
        } catch (const std::exception&) {
            throw ParseError("moments csv: malformed row", lineno);
        }
    }

    EdgeMoments out;
    out.sample_count = 0;  // unknown; the file stores frequencies only
    out.p_hat = Vector::Zero(k);
    out.p_pair_hat = Matrix::Zero(k, k);
    Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> seen(k, k);
    seen.setZero();
    for (auto [i, j, p] : cells) {
        if (i < 0 || j < i || j >= k)
            throw ParseError("moments csv: cell indices must satisfy 0 <= i <= j < k");
        out.p_pair_hat(i, j) = p;
        out.p_pair_hat(j, i) = p;
        if (i == j) out.p_hat(i) = p;
        seen(i, j) = 1;
    }
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
            if (!seen(i, j))
                throw ParseError("moments csv: missing upper-triangle cell (" + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
    return out;
}

} // namespace bnvar
