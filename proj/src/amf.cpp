#include "ddikit/amf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ddikit/util.hpp"

namespace ddikit {

namespace {

constexpr double kProbClamp = 1e-7;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double clamp_prob(double p) {
    return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}

void check_config(const TrainConfig& cfg) {
    if (cfg.embedding_dim < 1)
        throw std::invalid_argument("embedding_dim must be >= 1");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size < 1)
        throw std::invalid_argument("batch_size must be >= 1");
    if (cfg.dropout < 0.0 || cfg.dropout >= 1.0)
        throw std::invalid_argument("dropout must be in [0,1)");
    if (cfg.learning_rate <= 0.0)
        throw std::invalid_argument("learning_rate must be positive");
    if (cfg.negative_ratio <= 0.0)
        throw std::invalid_argument("negative_ratio must be positive");
}

}  // namespace

double AmfModel::logit(NodeId i, NodeId j) const {
    if (i > j) std::swap(i, j);  // keep i,j order-independent bit for bit
    const double* pi = embeddings.data() + static_cast<std::size_t>(i) * k;
    const double* pj = embeddings.data() + static_cast<std::size_t>(j) * k;
    double z = global_bias + node_bias[i] + node_bias[j];
    for (int w = 0; w < k; ++w) z += combo_weights[w] * pi[w] * pj[w];
    return z;
}

double AmfModel::predict(NodeId i, NodeId j) const {
    return sigmoid(logit(i, j));
}

AmfModel init_model(std::size_t node_count, const TrainConfig& cfg) {
    check_config(cfg);
    if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
    AmfModel model(node_count, cfg.embedding_dim);
    std::mt19937_64 rng(derive_seed(cfg.seed, "amf-init"));
    int k = cfg.embedding_dim;
    // Glorot normal: std = sqrt(2 / (fan_in + fan_out))
    std::normal_distribution<double> emb_dist(0.0, std::sqrt(1.0 / k));
    for (double& x : model.embeddings) x = emb_dist(rng);
    std::normal_distribution<double> combo_dist(0.0, std::sqrt(2.0 / (k + 1)));
    for (double& x : model.combo_weights) x = combo_dist(rng);
    return model;
}

double bce_loss(const AmfModel& model, std::span<const LabeledPair> batch) {
    double loss = 0.0;
    for (const LabeledPair& ex : batch) {
        double p = clamp_prob(model.predict(ex.a, ex.b));
        loss += ex.label ? -std::log(p) : -std::log(1.0 - p);
    }
    return loss;
}

AmfGradients gradients(const AmfModel& model,
                       std::span<const LabeledPair> batch) {
    AmfGradients grad;
    grad.embeddings.assign(model.embeddings.size(), 0.0);
    grad.node_bias.assign(model.node_bias.size(), 0.0);
    grad.combo_weights.assign(model.combo_weights.size(), 0.0);
    int k = model.k;
    for (const LabeledPair& ex : batch) {
        const double* pi = model.row(ex.a).data();
        const double* pj = model.row(ex.b).data();
        double err = model.predict(ex.a, ex.b) - static_cast<double>(ex.label);
        double* gi = grad.embeddings.data() + static_cast<std::size_t>(ex.a) * k;
        double* gj = grad.embeddings.data() + static_cast<std::size_t>(ex.b) * k;
        for (int w = 0; w < k; ++w) {
            double c = model.combo_weights[w];
            gi[w] += err * c * pj[w];
            gj[w] += err * c * pi[w];
            grad.combo_weights[w] += err * pi[w] * pj[w];
        }
        grad.node_bias[ex.a] += err;
        grad.node_bias[ex.b] += err;
        grad.global_bias += err;
    }
    return grad;
}

std::vector<NodePair> sample_negatives(
    const InteractionGraph& g, std::size_t count, std::mt19937_64& rng,
    const std::unordered_set<NodePair, NodePairHash>* forbidden) {
    if (g.is_complete())
        throw std::runtime_error("cannot sample negatives: graph is complete");
    std::size_t m = g.node_count();
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(m - 1));
    std::vector<NodePair> out;
    out.reserve(count);
    std::size_t rejected = 0;
    while (out.size() < count) {
        NodeId u = pick(rng);
        NodeId v = pick(rng);
        if (u == v || g.has_edge(u, v) ||
            (forbidden && forbidden->count(NodePair(u, v)))) {
            if (++rejected > 1000 * (count + 100))
                throw std::runtime_error(
                    "cannot sample negatives: pool too small");
            continue;
        }
        out.emplace_back(u, v);
    }
    return out;
}

namespace {

struct AdamState {
    std::vector<double> m_emb, v_emb, m_bias, v_bias, m_combo, v_combo;
    double m_global = 0.0, v_global = 0.0;
    long step = 0;

    explicit AdamState(const AmfModel& model)
        : m_emb(model.embeddings.size(), 0.0),
          v_emb(model.embeddings.size(), 0.0),
          m_bias(model.node_bias.size(), 0.0),
          v_bias(model.node_bias.size(), 0.0),
          m_combo(model.combo_weights.size(), 0.0),
          v_combo(model.combo_weights.size(), 0.0) {}
};

void adam_update(std::span<double> params, std::span<const double> grad,
                 std::span<double> m, std::span<double> v,
                 const TrainConfig& cfg, double bc1, double bc2) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
        double mhat = m[i] / bc1;
        double vhat = v[i] / bc2;
        params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
}

}  // namespace

AmfModel train_amf(
    const InteractionGraph& g, const TrainConfig& cfg,
    const std::unordered_set<NodePair, NodePairHash>* forbidden) {
    check_config(cfg);
    if (g.edge_count() == 0)
        throw std::invalid_argument("training graph has no edges");

    AmfModel model = init_model(g.node_count(), cfg);
    AdamState adam(model);
    std::mt19937_64 rng(derive_seed(cfg.seed, "amf-train"));
    std::vector<NodePair> positives = g.edges();
    std::size_t neg_per_epoch = static_cast<std::size_t>(
        std::llround(cfg.negative_ratio * static_cast<double>(positives.size())));

    int k = cfg.embedding_dim;
    double keep = 1.0 - cfg.dropout;
    std::bernoulli_distribution keep_dist(keep);
    AmfGradients grad;
    std::vector<double> mask_i(k), mask_j(k);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<LabeledPair> examples;
        examples.reserve(positives.size() + neg_per_epoch);
        for (const NodePair& e : positives) examples.push_back({e.a, e.b, 1});
        for (const NodePair& e :
             sample_negatives(g, neg_per_epoch, rng, forbidden))
            examples.push_back({e.a, e.b, 0});
        std::shuffle(examples.begin(), examples.end(), rng);

        for (std::size_t start = 0; start < examples.size();
             start += cfg.batch_size) {
            std::size_t end =
                std::min(examples.size(), start + cfg.batch_size);
            grad.embeddings.assign(model.embeddings.size(), 0.0);
            grad.node_bias.assign(model.node_bias.size(), 0.0);
            grad.combo_weights.assign(model.combo_weights.size(), 0.0);
            grad.global_bias = 0.0;

            for (std::size_t n = start; n < end; ++n) {
                const LabeledPair& ex = examples[n];
                const double* pi = model.row(ex.a).data();
                const double* pj = model.row(ex.b).data();
                // inverted dropout, independent mask per endpoint embedding
                for (int w = 0; w < k; ++w) {
                    mask_i[w] = cfg.dropout > 0.0
                                    ? (keep_dist(rng) ? 1.0 / keep : 0.0)
                                    : 1.0;
                    mask_j[w] = cfg.dropout > 0.0
                                    ? (keep_dist(rng) ? 1.0 / keep : 0.0)
                                    : 1.0;
                }
                double z = model.global_bias + model.node_bias[ex.a] +
                           model.node_bias[ex.b];
                for (int w = 0; w < k; ++w)
                    z += model.combo_weights[w] * mask_i[w] * pi[w] *
                         mask_j[w] * pj[w];
                double err = sigmoid(z) - static_cast<double>(ex.label);

                double* gi =
                    grad.embeddings.data() + static_cast<std::size_t>(ex.a) * k;
                double* gj =
                    grad.embeddings.data() + static_cast<std::size_t>(ex.b) * k;
                for (int w = 0; w < k; ++w) {
                    double mm = mask_i[w] * mask_j[w];
                    double c = model.combo_weights[w];
                    gi[w] += err * c * mm * pj[w];
                    gj[w] += err * c * mm * pi[w];
                    grad.combo_weights[w] += err * mm * pi[w] * pj[w];
                }
                grad.node_bias[ex.a] += err;
                grad.node_bias[ex.b] += err;
                grad.global_bias += err;
            }

            ++adam.step;
            double bc1 = 1.0 - std::pow(cfg.adam_beta1, adam.step);
            double bc2 = 1.0 - std::pow(cfg.adam_beta2, adam.step);
            adam_update(model.embeddings, grad.embeddings, adam.m_emb,
                        adam.v_emb, cfg, bc1, bc2);
            adam_update(model.node_bias, grad.node_bias, adam.m_bias,
                        adam.v_bias, cfg, bc1, bc2);
            adam_update(model.combo_weights, grad.combo_weights, adam.m_combo,
                        adam.v_combo, cfg, bc1, bc2);
            adam.m_global = cfg.adam_beta1 * adam.m_global +
                            (1.0 - cfg.adam_beta1) * grad.global_bias;
            adam.v_global = cfg.adam_beta2 * adam.v_global +
                            (1.0 - cfg.adam_beta2) * grad.global_bias *
                                grad.global_bias;
            model.global_bias -= cfg.learning_rate * (adam.m_global / bc1) /
                                 (std::sqrt(adam.v_global / bc2) + cfg.adam_eps);
        }
    }

    for (double x : model.embeddings)
        if (!std::isfinite(x))
            throw std::runtime_error("non-finite embedding after training");
    return model;
}

double expected_untouched_entries(int k, double dropout_p) {
    if (dropout_p < 0.0 || dropout_p >= 1.0)
        throw std::invalid_argument("dropout must be in [0,1)");
    return k * (1.0 - dropout_p) * (1.0 - dropout_p);
}

void export_embeddings(const InteractionGraph& g, const AmfModel& model,
                       const std::string& path, double alpha) {
    if (g.node_count() != model.node_count)
        throw std::invalid_argument("graph/model node count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embeddings: " + path);
    out << "# alpha=" << format_double(alpha) << '\n';
    out << "name";
    for (int w = 0; w < model.k; ++w) out << "\tf" << w;
    out << "\tbias\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out << g.node_name(v);
        for (double x : model.row(v)) out << '\t' << format_double(x);
        out << '\t' << format_double(model.node_bias[v]) << '\n';
    }
}

void save_model(const InteractionGraph& g, const AmfModel& model,
                const std::string& path) {
    if (g.node_count() != model.node_count)
        throw std::invalid_argument("graph/model node count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    out.precision(17);
    out << "amf-model\t" << model.node_count << '\t' << model.k << '\n';
    out << "global_bias\t" << model.global_bias << '\n';
    out << "combo";
    for (double x : model.combo_weights) out << '\t' << x;
    out << '\n';
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out << g.node_name(v) << '\t' << model.node_bias[v];
        for (double x : model.row(v)) out << '\t' << x;
        out << '\n';
    }
}

std::pair<AmfModel, std::vector<std::string>> load_model(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty model file: " + path);
    std::istringstream header(line);
    std::string magic;
    std::size_t nodes;
    int k;
    if (!(header >> magic >> nodes >> k) || magic != "amf-model")
        throw std::runtime_error("not an amf model file: " + path);
    AmfModel model(nodes, k);
    std::vector<std::string> names;
    names.reserve(nodes);

    std::string tag;
    if (!std::getline(in, line))
        throw std::runtime_error("truncated model file: " + path);
    {
        std::istringstream ls(line);
        if (!(ls >> tag >> model.global_bias) || tag != "global_bias")
            throw std::runtime_error("bad global_bias line: " + path);
    }
    if (!std::getline(in, line))
        throw std::runtime_error("truncated model file: " + path);
    {
        std::istringstream ls(line);
        if (!(ls >> tag) || tag != "combo")
            throw std::runtime_error("bad combo line: " + path);
        for (int w = 0; w < k; ++w)
            if (!(ls >> model.combo_weights[w]))
                throw std::runtime_error("short combo line: " + path);
    }
    for (std::size_t v = 0; v < nodes; ++v) {
        if (!std::getline(in, line))
            throw std::runtime_error("truncated model file: " + path);
        std::istringstream ls(line);
        std::string name;
        if (!std::getline(ls, name, '\t'))
            throw std::runtime_error("bad node row: " + path);
        names.push_back(name);
        if (!(ls >> model.node_bias[v]))
            throw std::runtime_error("bad node bias: " + path);
        auto row = model.row(static_cast<NodeId>(v));
        for (int w = 0; w < k; ++w)
            if (!(ls >> row[w]))
                throw std::runtime_error("short embedding row: " + path);
    }
    return {std::move(model), std::move(names)};
}

}  // namespace ddikit
