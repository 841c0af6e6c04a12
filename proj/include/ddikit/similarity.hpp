#pragma once

#include <span>
#include <string>
#include <vector>

#include "ddikit/graph.hpp"

namespace ddikit {

enum class Measure {
    CommonNeighbors,
    AvgCommonNeighbors,
    Jaccard,
    AvgJaccard,
    AdamicAdar,
    Katz,
    Ipf,
};

Measure measure_from_name(const std::string& name);
std::string measure_name(Measure m);

struct KatzParams {
    double beta = 0.05;  // damping, 0 < beta < 1
    int max_length = 3;  // truncation b
};

double common_neighbors(const InteractionGraph& g, NodeId u, NodeId v);
double avg_common_neighbors(const InteractionGraph& g, NodeId u, NodeId v);
double jaccard(const InteractionGraph& g, NodeId u, NodeId v);
double avg_jaccard(const InteractionGraph& g, NodeId u, NodeId v);
double adamic_adar(const InteractionGraph& g, NodeId u, NodeId v);
double katz(const InteractionGraph& g, NodeId u, NodeId v, double beta,
            int max_length);

// Neighbor-profile Tanimoto max: best Jaccard between one endpoint and any
// neighbor of the other, both directions.
double ipf_baseline(const InteractionGraph& g, NodeId u, NodeId v);

// Damped walk-count scores from `source` to every node, lengths 1..b.
std::vector<double> katz_scores_from(const InteractionGraph& g, NodeId source,
                                     double beta, int max_length);

// One score per pair, order preserving, deterministic. Katz batches pairs
// by source node to reuse walk-count rows.
std::vector<double> score_all(const InteractionGraph& g, Measure m,
                              std::span<const NodePair> pairs,
                              const KatzParams& katz_params = {},
                              int workers = 1);

}  // namespace ddikit
