#include "ddikit/propagation.hpp"

#include <stdexcept>

namespace ddikit {

AmfModel propagate_factors(const InteractionGraph& g, const AmfModel& model,
                           double alpha) {
    if (g.node_count() != model.node_count)
        throw std::invalid_argument("graph/model node count mismatch");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("propagation factor must be in [0,1]");

    AmfModel out = model;
    if (alpha == 0.0) return out;

    int k = model.k;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        auto dst = out.row(v);
        auto own = model.row(v);
        double inv = 1.0 / static_cast<double>(nbrs.size());
        for (int w = 0; w < k; ++w) {
            double mean = 0.0;
            for (NodeId u : nbrs) mean += model.row(u)[w];
            mean *= inv;
            dst[w] = alpha * mean + (1.0 - alpha) * own[w];
        }
    }
    return out;
}

double predict_amfp(const InteractionGraph& g, const AmfModel& model,
                    double alpha, NodeId i, NodeId j) {
    return propagate_factors(g, model, alpha).predict(i, j);
}

}  // namespace ddikit
