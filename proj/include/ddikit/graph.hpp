#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ddikit {

using NodeId = std::uint32_t;

// Unordered node pair, stored with a < b.
struct NodePair {
    NodeId a;
    NodeId b;

    NodePair() = default;
    NodePair(NodeId u, NodeId v) : a(u < v ? u : v), b(u < v ? v : u) {}

    friend bool operator==(const NodePair& x, const NodePair& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator<(const NodePair& x, const NodePair& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
};

struct NodePairHash {
    std::size_t operator()(const NodePair& p) const {
        return (static_cast<std::size_t>(p.a) << 32) ^ p.b;
    }
};

// Candidate pairs with optional scores and labels; the unit consumed by
// every metric and every predictor.
struct ScoredPairs {
    std::vector<NodePair> pairs;
    std::vector<double> scores;         // empty until scored
    std::vector<std::uint8_t> labels;   // empty if unlabeled

    std::size_t size() const { return pairs.size(); }
    bool has_scores() const { return !scores.empty(); }
    bool has_labels() const { return !labels.empty(); }
};

// Immutable undirected graph over dense integer node ids with a name
// mapping. Neighbor lists are sorted, deduplicated and symmetric; no
// self-loops. Safe for concurrent reads after construction.
class InteractionGraph {
public:
    class Builder {
    public:
        // Registers a node without edges.
        NodeId add_node(const std::string& name);
        // Adds an undirected edge; duplicates collapse, self-loops throw.
        void add_edge(const std::string& u, const std::string& v);
        void add_edge_ids(NodeId u, NodeId v);
        InteractionGraph build();

    private:
        NodeId intern(const std::string& name);
        std::vector<std::string> names_;
        std::unordered_map<std::string, NodeId> index_;
        std::vector<std::vector<NodeId>> adj_;
    };

    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adj_[v].data(), adj_[v].size()};
    }
    std::size_t degree(NodeId v) const { return adj_[v].size(); }
    bool has_edge(NodeId u, NodeId v) const;

    const std::string& node_name(NodeId v) const { return names_[v]; }
    const std::vector<std::string>& node_names() const { return names_; }
    std::optional<NodeId> find_node(const std::string& name) const;

    // All edges as pairs with a < b, sorted.
    std::vector<NodePair> edges() const;

    bool is_complete() const {
        std::size_t m = node_count();
        return edge_count_ == m * (m - 1) / 2;
    }

private:
    friend class Builder;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::vector<NodeId>> adj_;
    std::size_t edge_count_ = 0;
};

// Two graph releases restricted to their common node set; node ids agree
// between the two graphs.
struct ReleasePair {
    InteractionGraph train_graph;
    InteractionGraph test_graph;
};

// One edge per line, two node names split by `delimiter`, '#' comments
// skipped. Throws on malformed lines (with line number), self-loops and
// files with no edges.
InteractionGraph load_edge_list(const std::string& path, char delimiter = ',');
void write_edge_list(const InteractionGraph& g, const std::string& path,
                     char delimiter = ',');

// Name pairs from an exclusion file; same format as an edge list.
std::vector<std::pair<std::string, std::string>> load_name_pairs(
    const std::string& path, char delimiter = ',');

// Restricts both releases to the intersection of their node-name sets.
// Throws if the intersection is empty.
ReleasePair align_releases(const InteractionGraph& train,
                           const InteractionGraph& test);

// All unordered non-train-edge pairs over the shared node set, minus
// exclusions, labeled by membership in the test edge set.
ScoredPairs candidate_pairs(const ReleasePair& rp,
                            const std::vector<NodePair>& exclusions = {});

// All non-edges of a single graph, unlabeled.
ScoredPairs enumerate_non_edges(const InteractionGraph& g);

}  // namespace ddikit
