#include "ddikit/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ddikit/util.hpp"

namespace ddikit {

Measure measure_from_name(const std::string& name) {
    if (name == "CN") return Measure::CommonNeighbors;
    if (name == "ACN") return Measure::AvgCommonNeighbors;
    if (name == "Jaccard") return Measure::Jaccard;
    if (name == "AJ") return Measure::AvgJaccard;
    if (name == "AA") return Measure::AdamicAdar;
    if (name == "Katz") return Measure::Katz;
    if (name == "IPF") return Measure::Ipf;
    throw std::invalid_argument("unknown similarity measure: " + name);
}

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::CommonNeighbors: return "CN";
        case Measure::AvgCommonNeighbors: return "ACN";
        case Measure::Jaccard: return "Jaccard";
        case Measure::AvgJaccard: return "AJ";
        case Measure::AdamicAdar: return "AA";
        case Measure::Katz: return "Katz";
        case Measure::Ipf: return "IPF";
    }
    throw std::invalid_argument("unknown measure enum");
}

namespace {

std::size_t intersection_size(std::span<const NodeId> a,
                              std::span<const NodeId> b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++count; ++ia; ++ib; }
    }
    return count;
}

}  // namespace

double common_neighbors(const InteractionGraph& g, NodeId u, NodeId v) {
    return static_cast<double>(
        intersection_size(g.neighbors(u), g.neighbors(v)));
}

namespace {

// One-sided average of `inner(w, u)` over w in the neighborhood of v.
// Empty neighborhoods contribute 0.
template <typename Inner>
double one_sided_avg(const InteractionGraph& g, NodeId u, NodeId v,
                     Inner inner) {
    auto nbrs = g.neighbors(v);
    if (nbrs.empty()) return 0.0;
    double sum = 0.0;
    for (NodeId w : nbrs) sum += inner(g, w, u);
    return sum / static_cast<double>(nbrs.size());
}

}  // namespace

double avg_common_neighbors(const InteractionGraph& g, NodeId u, NodeId v) {
    return (one_sided_avg(g, u, v, common_neighbors) +
            one_sided_avg(g, v, u, common_neighbors)) / 2.0;
}

double jaccard(const InteractionGraph& g, NodeId u, NodeId v) {
    std::size_t inter = intersection_size(g.neighbors(u), g.neighbors(v));
    std::size_t uni = g.degree(u) + g.degree(v) - inter;
    if (uni == 0) return 0.0;  // 0/0 := 0
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double avg_jaccard(const InteractionGraph& g, NodeId u, NodeId v) {
    return (one_sided_avg(g, u, v, jaccard) +
            one_sided_avg(g, v, u, jaccard)) / 2.0;
}

double adamic_adar(const InteractionGraph& g, NodeId u, NodeId v) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    double sum = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            // a common neighbor touches both u and v, so its degree >= 2
            sum += 1.0 / std::log(static_cast<double>(g.degree(*ia)));
            ++ia; ++ib;
        }
    }
    return sum;
}

std::vector<double> katz_scores_from(const InteractionGraph& g, NodeId source,
                                     double beta, int max_length) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("katz: beta must be in (0,1)");
    if (max_length < 1)
        throw std::invalid_argument("katz: max length must be >= 1");
    std::size_t m = g.node_count();
    std::vector<double> walks(m, 0.0), next(m, 0.0), score(m, 0.0);
    for (NodeId w : g.neighbors(source)) walks[w] = 1.0;
    double damp = beta;
    for (int len = 1;; ++len) {
        for (std::size_t v = 0; v < m; ++v) score[v] += damp * walks[v];
        if (len == max_length) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (NodeId x = 0; x < m; ++x) {
            if (walks[x] == 0.0) continue;
            for (NodeId y : g.neighbors(x)) next[y] += walks[x];
        }
        walks.swap(next);
        damp *= beta;
    }
    return score;
}

double katz(const InteractionGraph& g, NodeId u, NodeId v, double beta,
            int max_length) {
    // symmetric; expand from the lower-degree endpoint
    NodeId source = g.degree(u) <= g.degree(v) ? u : v;
    NodeId target = source == u ? v : u;
    return katz_scores_from(g, source, beta, max_length)[target];
}

double ipf_baseline(const InteractionGraph& g, NodeId u, NodeId v) {
    auto side = [&](NodeId a, NodeId b) {
        // max over w in Gamma(a), w != b, of jaccard(w, b)
        double best = 0.0;
        for (NodeId w : g.neighbors(a)) {
            if (w == b) continue;
            best = std::max(best, jaccard(g, w, b));
        }
        return best;
    };
    return std::max(side(u, v), side(v, u));
}

std::vector<double> score_all(const InteractionGraph& g, Measure m,
                              std::span<const NodePair> pairs,
                              const KatzParams& katz_params, int workers) {
    std::vector<double> out(pairs.size(), 0.0);
    if (m == Measure::Katz) {
        // group by first endpoint so each source row is computed once
        std::vector<std::size_t> order(pairs.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) {
                             return pairs[x].a < pairs[y].a;
                         });
        // collect contiguous source groups
        std::vector<std::pair<std::size_t, std::size_t>> groups;
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j < order.size() && pairs[order[j]].a == pairs[order[i]].a)
                ++j;
            groups.emplace_back(i, j);
            i = j;
        }
        parallel_for(groups.size(), workers,
                     [&](std::size_t begin, std::size_t end) {
            for (std::size_t gi = begin; gi < end; ++gi) {
                auto [lo, hi] = groups[gi];
                NodeId source = pairs[order[lo]].a;
                std::vector<double> row = katz_scores_from(
                    g, source, katz_params.beta, katz_params.max_length);
                for (std::size_t k = lo; k < hi; ++k)
                    out[order[k]] = row[pairs[order[k]].b];
            }
        });
        return out;
    }
    auto scorer = [&](NodeId u, NodeId v) {
        switch (m) {
            case Measure::CommonNeighbors: return common_neighbors(g, u, v);
            case Measure::AvgCommonNeighbors:
                return avg_common_neighbors(g, u, v);
            case Measure::Jaccard: return jaccard(g, u, v);
            case Measure::AvgJaccard: return avg_jaccard(g, u, v);
            case Measure::AdamicAdar: return adamic_adar(g, u, v);
            case Measure::Ipf: return ipf_baseline(g, u, v);
            default: throw std::invalid_argument("unhandled measure");
        }
    };
    parallel_for(pairs.size(), workers,
                 [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            out[i] = scorer(pairs[i].a, pairs[i].b);
    });
    return out;
}

}  // namespace ddikit
