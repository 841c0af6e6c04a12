#include "ddikit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ddikit {

NodeId InteractionGraph::Builder::intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    adj_.emplace_back();
    return id;
}

NodeId InteractionGraph::Builder::add_node(const std::string& name) {
    return intern(name);
}

void InteractionGraph::Builder::add_edge(const std::string& u,
                                         const std::string& v) {
    if (u == v)
        throw std::invalid_argument("self-loop edge not allowed: " + u);
    NodeId a = intern(u);
    NodeId b = intern(v);
    add_edge_ids(a, b);
}

void InteractionGraph::Builder::add_edge_ids(NodeId u, NodeId v) {
    if (u == v) throw std::invalid_argument("self-loop edge not allowed");
    if (u >= adj_.size() || v >= adj_.size())
        throw std::out_of_range("edge references unknown node id");
    adj_[u].push_back(v);
    adj_[v].push_back(u);
}

InteractionGraph InteractionGraph::Builder::build() {
    InteractionGraph g;
    g.names_ = std::move(names_);
    g.index_ = std::move(index_);
    g.adj_ = std::move(adj_);
    std::size_t half_degree_sum = 0;
    for (auto& nbrs : g.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        half_degree_sum += nbrs.size();
    }
    g.edge_count_ = half_degree_sum / 2;
    return g;
}

bool InteractionGraph::has_edge(NodeId u, NodeId v) const {
    const auto& small = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    NodeId target = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(small.begin(), small.end(), target);
}

std::optional<NodeId> InteractionGraph::find_node(
    const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodePair> InteractionGraph::edges() const {
    std::vector<NodePair> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adj_.size(); ++u)
        for (NodeId v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

namespace {

// Splits "a<delim>b"; empty optional for blank/comment lines.
std::optional<std::pair<std::string, std::string>> parse_pair_line(
    const std::string& line, char delimiter, const std::string& path,
    std::size_t lineno) {
    std::string s = line;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    std::size_t start = s.find_first_not_of(" \t");
    if (start == std::string::npos || s[start] == '#') return std::nullopt;
    std::size_t pos = s.find(delimiter, start);
    if (pos == std::string::npos || s.find(delimiter, pos + 1) != std::string::npos)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected exactly two tokens");
    auto trim = [](std::string t) {
        std::size_t b = t.find_first_not_of(" \t");
        std::size_t e = t.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : t.substr(b, e - b + 1);
    };
    std::string u = trim(s.substr(0, pos));
    std::string v = trim(s.substr(pos + 1));
    if (u.empty() || v.empty())
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": empty node name");
    return std::make_pair(u, v);
}

}  // namespace

InteractionGraph load_edge_list(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    InteractionGraph::Builder builder;
    std::string line;
    std::size_t lineno = 0;
    std::size_t edges = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto pair = parse_pair_line(line, delimiter, path, lineno);
        if (!pair) continue;
        if (pair->first == pair->second)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": self-loop edge " + pair->first);
        builder.add_edge(pair->first, pair->second);
        ++edges;
    }
    if (edges == 0) throw std::runtime_error("edge list has no edges: " + path);
    return builder.build();
}

void write_edge_list(const InteractionGraph& g, const std::string& path,
                     char delimiter) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path);
    for (const NodePair& e : g.edges())
        out << g.node_name(e.a) << delimiter << g.node_name(e.b) << '\n';
}

std::vector<std::pair<std::string, std::string>> load_name_pairs(
    const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pair file: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto pair = parse_pair_line(line, delimiter, path, lineno);
        if (pair) out.push_back(*pair);
    }
    return out;
}

ReleasePair align_releases(const InteractionGraph& train,
                           const InteractionGraph& test) {
    // Shared names in train first-appearance order; the id remapping is
    // identical for both graphs.
    std::vector<std::string> shared;
    for (const std::string& name : train.node_names())
        if (test.find_node(name)) shared.push_back(name);
    if (shared.empty())
        throw std::runtime_error("release alignment: no shared nodes");

    std::unordered_set<std::string> shared_set(shared.begin(), shared.end());
    auto restrict_graph = [&](const InteractionGraph& g) {
        InteractionGraph::Builder builder;
        for (const std::string& name : shared) builder.add_node(name);
        for (const NodePair& e : g.edges()) {
            const std::string& u = g.node_name(e.a);
            const std::string& v = g.node_name(e.b);
            if (shared_set.count(u) && shared_set.count(v))
                builder.add_edge(u, v);
        }
        return builder.build();
    };

    return ReleasePair{restrict_graph(train), restrict_graph(test)};
}

ScoredPairs candidate_pairs(const ReleasePair& rp,
                            const std::vector<NodePair>& exclusions) {
    const InteractionGraph& train = rp.train_graph;
    const InteractionGraph& test = rp.test_graph;
    std::size_t m = train.node_count();
    std::unordered_set<NodePair, NodePairHash> excluded;
    for (const NodePair& p : exclusions) {
        if (p.a >= m || p.b >= m)
            throw std::out_of_range("exclusion pair references unknown node");
        excluded.insert(p);
    }
    ScoredPairs out;
    for (NodeId u = 0; u < m; ++u) {
        for (NodeId v = u + 1; v < m; ++v) {
            if (train.has_edge(u, v)) continue;
            NodePair p(u, v);
            if (excluded.count(p)) continue;
            out.pairs.push_back(p);
            out.labels.push_back(test.has_edge(u, v) ? 1 : 0);
        }
    }
    return out;
}

ScoredPairs enumerate_non_edges(const InteractionGraph& g) {
    ScoredPairs out;
    std::size_t m = g.node_count();
    for (NodeId u = 0; u < m; ++u)
        for (NodeId v = u + 1; v < m; ++v)
            if (!g.has_edge(u, v)) out.pairs.emplace_back(u, v);
    return out;
}

}  // namespace ddikit
