#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bnvar {

/// Directed acyclic graph over positionally identified nodes.  Labels are
/// metadata; all relations are expressed through node indices.
struct Dag {
    std::vector<std::string> node_labels;
    std::set<std::pair<int, int>> arcs;  // (tail, head)

    int node_count() const { return static_cast<int>(node_labels.size()); }
    bool has_arc(int tail, int head) const { return arcs.count({tail, head}) > 0; }

    /// Throws std::invalid_argument on self loops, out-of-range indices,
    /// two-way arc pairs, or directed cycles.
    void validate() const;
};

/// Undirected edge set over v nodes; edges are stored as (a, b) with a < b.
struct Skeleton {
    int node_count = 0;
    std::set<std::pair<int, int>> edges;

    bool has_edge(int a, int b) const {
        if (a > b) std::swap(a, b);
        return edges.count({a, b}) > 0;
    }
    bool operator==(const Skeleton& other) const = default;
};

/// Bijection between unordered node pairs (a, b), a < b, and the indices
/// 0 .. v(v-1)/2 - 1 in lexicographic order.
class EdgeIndexer {
public:
    explicit EdgeIndexer(int v);

    int node_count() const { return v_; }
    int edge_count() const { return k_; }

    int index(int a, int b) const;
    std::pair<int, int> pair(int index) const;

private:
    int v_;
    int k_;
};

/// Undirected skeleton of a DAG (its unique biorientation).
Skeleton skeleton_of(const Dag& dag);

/// Skeleton archive: line 1 `nodes=<v>`, optional line 2
/// `labels=<comma-separated>`, then one line per sample, either `-` or a
/// comma-separated list of `a-b` tokens with a < b sorted lexicographically.
struct SkeletonArchive {
    int node_count = 0;
    std::vector<std::string> labels;  // empty when the header had none
    std::vector<Skeleton> samples;
};

SkeletonArchive read_skeleton_archive(std::istream& in);
void write_skeleton_archive(const SkeletonArchive& archive, std::ostream& out);

SkeletonArchive load_skeleton_archive(const std::string& path);
void save_skeleton_archive(const SkeletonArchive& archive, const std::string& path);

} // namespace bnvar
