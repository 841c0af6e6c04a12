// Test-only reference implementations, independent of the library's
// computation paths: naive set arithmetic for the similarity measures,
// brute-force walk enumeration for Katz, pairwise comparison for AUROC.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ddikit/graph.hpp"

namespace oracle {

using ddikit::InteractionGraph;
using ddikit::NodeId;

inline std::set<NodeId> neighbor_set(const InteractionGraph& g, NodeId v) {
    auto nbrs = g.neighbors(v);
    return {nbrs.begin(), nbrs.end()};
}

inline double common_neighbors(const InteractionGraph& g, NodeId u, NodeId v) {
    auto a = neighbor_set(g, u);
    auto b = neighbor_set(g, v);
    std::size_t count = 0;
    for (NodeId w : a) count += b.count(w);
    return static_cast<double>(count);
}

inline double jaccard(const InteractionGraph& g, NodeId u, NodeId v) {
    auto a = neighbor_set(g, u);
    auto b = neighbor_set(g, v);
    std::set<NodeId> uni = a;
    uni.insert(b.begin(), b.end());
    if (uni.empty()) return 0.0;
    std::size_t inter = 0;
    for (NodeId w : a) inter += b.count(w);
    return static_cast<double>(inter) / static_cast<double>(uni.size());
}

inline double adamic_adar(const InteractionGraph& g, NodeId u, NodeId v) {
    auto a = neighbor_set(g, u);
    auto b = neighbor_set(g, v);
    double sum = 0.0;
    for (NodeId w : a)
        if (b.count(w)) sum += 1.0 / std::log(static_cast<double>(g.degree(w)));
    return sum;
}

inline double avg_common_neighbors(const InteractionGraph& g, NodeId u,
                                   NodeId v) {
    auto one_sided = [&](NodeId x, NodeId y) {
        auto nbrs = neighbor_set(g, y);
        if (nbrs.empty()) return 0.0;
        double sum = 0.0;
        for (NodeId w : nbrs) sum += oracle::common_neighbors(g, w, x);
        return sum / static_cast<double>(nbrs.size());
    };
    return (one_sided(u, v) + one_sided(v, u)) / 2.0;
}

inline double avg_jaccard(const InteractionGraph& g, NodeId u, NodeId v) {
    auto one_sided = [&](NodeId x, NodeId y) {
        auto nbrs = neighbor_set(g, y);
        if (nbrs.empty()) return 0.0;
        double sum = 0.0;
        for (NodeId w : nbrs) sum += oracle::jaccard(g, w, x);
        return sum / static_cast<double>(nbrs.size());
    };
    return (one_sided(u, v) + one_sided(v, u)) / 2.0;
}

// Exact walk count by depth-first enumeration of every walk of length len.
inline long count_walks(const InteractionGraph& g, NodeId from, NodeId to,
                        int len) {
    if (len == 0) return from == to ? 1 : 0;
    long total = 0;
    for (NodeId w : g.neighbors(from)) total += count_walks(g, w, to, len - 1);
    return total;
}

inline double katz(const InteractionGraph& g, NodeId u, NodeId v, double beta,
                   int max_length) {
    double score = 0.0;
    double damp = beta;
    for (int len = 1; len <= max_length; ++len) {
        score += damp * static_cast<double>(count_walks(g, u, v, len));
        damp *= beta;
    }
    return score;
}

// P(score_pos > score_neg) + 0.5 P(tie) by direct O(P*N) comparison.
inline double auroc_pairwise(const std::vector<double>& scores,
                             const std::vector<std::uint8_t>& labels) {
    double wins = 0.0;
    std::size_t comparisons = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++comparisons;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(comparisons);
}

// Erdos-Renyi graph over `n` named nodes n0..n{n-1}; isolated nodes kept.
inline InteractionGraph random_graph(std::size_t n, double edge_prob,
                                     std::mt19937_64& rng) {
    InteractionGraph::Builder builder;
    for (std::size_t v = 0; v < n; ++v)
        builder.add_node("n" + std::to_string(v));
    std::bernoulli_distribution coin(edge_prob);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) builder.add_edge_ids(u, v);
    return builder.build();
}

}  // namespace oracle
