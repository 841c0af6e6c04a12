#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "ddikit/graph.hpp"

namespace ddikit {

struct TrainConfig {
    int embedding_dim = 256;       // k
    double dropout = 0.3;          // [0,1)
    double learning_rate = 0.01;
    int epochs = 5;
    int batch_size = 1024;
    double negative_ratio = 1.0;   // negatives per positive, drawn per epoch
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

// Shared node embeddings and biases, combination weights over the
// element-wise product, and a learned global bias. Prediction is
// sigmoid(c . (p_i * p_j) + b_i + b_j + global_bias), symmetric in (i, j).
struct AmfModel {
    std::size_t node_count = 0;
    int k = 0;
    std::vector<double> embeddings;     // row-major, node_count x k
    std::vector<double> node_bias;      // node_count
    std::vector<double> combo_weights;  // k
    double global_bias = 0.0;

    AmfModel() = default;
    AmfModel(std::size_t nodes, int dim)
        : node_count(nodes), k(dim),
          embeddings(nodes * static_cast<std::size_t>(dim), 0.0),
          node_bias(nodes, 0.0),
          combo_weights(dim, 0.0) {}

    std::span<const double> row(NodeId i) const {
        return {embeddings.data() + static_cast<std::size_t>(i) * k,
                static_cast<std::size_t>(k)};
    }
    std::span<double> row(NodeId i) {
        return {embeddings.data() + static_cast<std::size_t>(i) * k,
                static_cast<std::size_t>(k)};
    }

    double logit(NodeId i, NodeId j) const;
    double predict(NodeId i, NodeId j) const;
};

struct LabeledPair {
    NodeId a;
    NodeId b;
    std::uint8_t label;  // 0 or 1
};

// Gradients shaped exactly like the model parameters.
struct AmfGradients {
    std::vector<double> embeddings;
    std::vector<double> node_bias;
    std::vector<double> combo_weights;
    double global_bias = 0.0;
};

// Glorot normal embeddings (fan_in = fan_out = k) and combination weights
// (fan_in = k, fan_out = 1); biases start at zero. Deterministic per seed.
AmfModel init_model(std::size_t node_count, const TrainConfig& cfg);

// Summed binary cross-entropy with predictions clamped to
// [1e-7, 1 - 1e-7] inside the logs.
double bce_loss(const AmfModel& model, std::span<const LabeledPair> batch);

// Analytic gradients of bce_loss, no dropout.
AmfGradients gradients(const AmfModel& model,
                       std::span<const LabeledPair> batch);

// `count` uniform non-edges (rejection sampling); throws if the graph is
// complete or the sampler keeps hitting forbidden pairs. `forbidden`
// removes known-positive pairs (e.g. a held-out test set) from the pool.
std::vector<NodePair> sample_negatives(
    const InteractionGraph& g, std::size_t count, std::mt19937_64& rng,
    const std::unordered_set<NodePair, NodePairHash>* forbidden = nullptr);

// Full training loop: per epoch, all positive edges plus freshly sampled
// negatives, jointly shuffled, mini-batch Adam with inverted dropout on
// each endpoint's embedding vector. Deterministic per (graph, cfg).
AmfModel train_amf(
    const InteractionGraph& g, const TrainConfig& cfg,
    const std::unordered_set<NodePair, NodePairHash>* forbidden = nullptr);

// Expected embedding entries untouched by dropout: k * (1 - p)^2.
double expected_untouched_entries(int k, double dropout_p);

// TSV export: name, k factor columns, bias; header names the columns and
// carries the propagation factor when one was applied.
void export_embeddings(const InteractionGraph& g, const AmfModel& model,
                       const std::string& path, double alpha = 0.0);

void save_model(const InteractionGraph& g, const AmfModel& model,
                const std::string& path);
// Returns the model plus the node names it was trained over.
std::pair<AmfModel, std::vector<std::string>> load_model(
    const std::string& path);

}  // namespace ddikit
