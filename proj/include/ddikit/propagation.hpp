#pragma once

#include "ddikit/amf.hpp"
#include "ddikit/graph.hpp"

namespace ddikit {

// One round of latent-factor propagation: each node's embedding becomes
// alpha * mean(neighbor embeddings) + (1 - alpha) * own embedding, read
// from the original table (snapshot semantics). Isolated nodes keep their
// embedding; biases and combination weights are untouched.
AmfModel propagate_factors(const InteractionGraph& g, const AmfModel& model,
                           double alpha);

// AMF prediction on the propagated model.
double predict_amfp(const InteractionGraph& g, const AmfModel& model,
                    double alpha, NodeId i, NodeId j);

}  // namespace ddikit
