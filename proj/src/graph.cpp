#include "bnvar/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "bnvar/types.hpp"

namespace bnvar {

void Dag::validate() const {
    const int v = node_count();
    std::vector<int> indegree(static_cast<size_t>(v), 0);
    for (const auto& [tail, head] : arcs) {
        if (tail < 0 || tail >= v || head < 0 || head >= v)
            throw std::invalid_argument("Dag: arc endpoint out of range");
        if (tail == head)
            throw std::invalid_argument("Dag: self loop");
        if (arcs.count({head, tail}))
            throw std::invalid_argument("Dag: arcs in both directions between two nodes");
        ++indegree[static_cast<size_t>(head)];
    }

    // Kahn's algorithm; all nodes must be consumed for a topological order
    // to exist.
    std::queue<int> ready;
    for (int i = 0; i < v; ++i)
        if (indegree[static_cast<size_t>(i)] == 0) ready.push(i);
    int seen = 0;
    while (!ready.empty()) {
        int node = ready.front();
        ready.pop();
        ++seen;
        for (const auto& [tail, head] : arcs) {
            if (tail != node) continue;
            if (--indegree[static_cast<size_t>(head)] == 0) ready.push(head);
        }
    }
    if (seen != v) throw std::invalid_argument("Dag: directed cycle");
}

EdgeIndexer::EdgeIndexer(int v) : v_(v), k_(v * (v - 1) / 2) {
    if (v < 0) throw std::invalid_argument("EdgeIndexer: negative node count");
}

int EdgeIndexer::index(int a, int b) const {
    if (a > b) std::swap(a, b);
    if (a == b) throw std::invalid_argument("EdgeIndexer: self pair");
    if (a < 0 || b >= v_) throw std::invalid_argument("EdgeIndexer: node out of range");
    return a * (v_ - 1) - a * (a - 1) / 2 + (b - a - 1);
}

std::pair<int, int> EdgeIndexer::pair(int index) const {
    if (index < 0 || index >= k_) throw std::invalid_argument("EdgeIndexer: index out of range");
    int a = 0;
    int remaining = index;
    while (remaining >= v_ - 1 - a) {
        remaining -= v_ - 1 - a;
        ++a;
    }
    return {a, a + 1 + remaining};
}

Skeleton skeleton_of(const Dag& dag) {
    dag.validate();
    Skeleton s;
    s.node_count = dag.node_count();
    for (const auto& [tail, head] : dag.arcs)
        s.edges.insert({std::min(tail, head), std::max(tail, head)});
    return s;
}

namespace {

int parse_int(const std::string& text, long line, const char* what) {
    size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(text, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("skeleton archive: bad ") + what + " '" + text + "'", line);
    }
    if (pos != text.size())
        throw ParseError(std::string("skeleton archive: bad ") + what + " '" + text + "'", line);
    return value;
}

} // namespace

SkeletonArchive read_skeleton_archive(std::istream& in) {
    SkeletonArchive archive;
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line))
        throw ParseError("skeleton archive: empty input", 1);
    ++lineno;
    if (line.rfind("nodes=", 0) != 0)
        throw ParseError("skeleton archive: expected 'nodes=<v>' header", lineno);
    archive.node_count = parse_int(line.substr(6), lineno, "node count");
    if (archive.node_count < 0)
        throw ParseError("skeleton archive: negative node count", lineno);

    bool first_sample_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (first_sample_line && line.rfind("labels=", 0) == 0) {
            std::stringstream ss(line.substr(7));
            std::string label;
            while (std::getline(ss, label, ',')) archive.labels.push_back(label);
            if (static_cast<int>(archive.labels.size()) != archive.node_count)
                throw ParseError("skeleton archive: label count differs from node count", lineno);
            first_sample_line = false;
            continue;
        }
        first_sample_line = false;

        Skeleton s;
        s.node_count = archive.node_count;
        if (line == "-") {
            archive.samples.push_back(std::move(s));
            continue;
        }
        if (line.empty())
            throw ParseError("skeleton archive: empty record (use '-' for an empty edge set)", lineno);

        std::stringstream ss(line);
        std::string token;
        while (std::getline(ss, token, ',')) {
            auto dash = token.find('-');
            if (dash == std::string::npos || dash == 0 || dash + 1 >= token.size())
                throw ParseError("skeleton archive: malformed edge token '" + token + "'", lineno);
            int a = parse_int(token.substr(0, dash), lineno, "edge endpoint");
            int b = parse_int(token.substr(dash + 1), lineno, "edge endpoint");
            if (a == b)
                throw ParseError("skeleton archive: self-loop", lineno);
            if (a > b)
                throw ParseError("skeleton archive: edge token not in a<b order", lineno);
            if (a < 0 || b >= archive.node_count)
                throw ParseError("skeleton archive: node index out of range", lineno);
            if (!s.edges.insert({a, b}).second)
                throw ParseError("skeleton archive: duplicate edge in record", lineno);
        }
        archive.samples.push_back(std::move(s));
    }
    return archive;
}

void write_skeleton_archive(const SkeletonArchive& archive, std::ostream& out) {
    out << "nodes=" << archive.node_count << '\n';
    if (!archive.labels.empty()) {
        out << "labels=";
        for (size_t i = 0; i < archive.labels.size(); ++i) {
            if (i) out << ',';
            out << archive.labels[i];
        }
        out << '\n';
    }
    for (const Skeleton& s : archive.samples) {
        if (s.node_count != archive.node_count)
            throw std::invalid_argument("skeleton archive: sample node count differs from header");
        if (s.edges.empty()) {
            out << "-\n";
            continue;
        }
        bool first = true;
        for (const auto& [a, b] : s.edges) {  // std::set iterates in lexicographic order
            if (!first) out << ',';
            out << a << '-' << b;
            first = false;
        }
        out << '\n';
    }
}

SkeletonArchive load_skeleton_archive(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open skeleton archive '" + path + "'");
    return read_skeleton_archive(in);
}

void save_skeleton_archive(const SkeletonArchive& archive, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write skeleton archive '" + path + "'");
    write_skeleton_archive(archive, out);
}

} // namespace bnvar
