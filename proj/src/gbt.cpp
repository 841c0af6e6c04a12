#include "ddikit/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ddikit/metrics.hpp"
#include "ddikit/propagation.hpp"
#include "ddikit/util.hpp"

namespace ddikit {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

void FeatureMatrix::add_column(const std::string& name,
                               const std::vector<double>& col) {
    for (const std::string& existing : column_names)
        if (existing == name)
            throw std::invalid_argument("duplicate feature column: " + name);
    for (double x : col)
        if (!std::isfinite(x))
            throw std::invalid_argument("non-finite value in column " + name);
    if (column_names.empty()) {
        rows = col.size();
        values = col;
        column_names.push_back(name);
        return;
    }
    if (col.size() != rows)
        throw std::invalid_argument("column length mismatch: " + name);
    std::vector<double> merged;
    std::size_t old_cols = cols();
    merged.reserve(rows * (old_cols + 1));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < old_cols; ++c) merged.push_back(at(r, c));
        merged.push_back(col[r]);
    }
    values = std::move(merged);
    column_names.push_back(name);
}

double Tree::apply(const double* row) const {
    int node = 0;
    while (!nodes[node].is_leaf)
        node = row[nodes[node].feature] < nodes[node].threshold
                   ? nodes[node].left
                   : nodes[node].right;
    return nodes[node].weight;
}

std::vector<double> GbtModel::predict(const FeatureMatrix& features) const {
    if (features.column_names != feature_names)
        throw std::invalid_argument("feature columns do not match the model");
    std::size_t ncols = feature_names.size();
    std::vector<double> out(features.rows);
    for (std::size_t r = 0; r < features.rows; ++r) {
        const double* row = features.values.data() + r * ncols;
        double margin = base_score;
        for (const Tree& tree : trees) margin += shrinkage * tree.apply(row);
        out[r] = sigmoid(margin);
    }
    return out;
}

namespace {

struct SplitResult {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// Exact greedy split on gain =
// 0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)) - gamma.
SplitResult best_split(const FeatureMatrix& fm,
                       const std::vector<std::size_t>& rows,
                       const std::vector<double>& grad,
                       const std::vector<double>& hess,
                       const GbtParams& params) {
    SplitResult best;
    double g_total = 0.0, h_total = 0.0;
    for (std::size_t r : rows) {
        g_total += grad[r];
        h_total += hess[r];
    }
    double parent = g_total * g_total / (h_total + params.lambda);

    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < fm.cols(); ++f) {
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) {
                      return fm.at(x, f) < fm.at(y, f);
                  });
        double gl = 0.0, hl = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            gl += grad[order[i]];
            hl += hess[order[i]];
            double x = fm.at(order[i], f);
            double x_next = fm.at(order[i + 1], f);
            if (x == x_next) continue;
            double hr = h_total - hl;
            if (hl < params.min_child_weight || hr < params.min_child_weight)
                continue;
            double gr = g_total - gl;
            double gain = 0.5 * (gl * gl / (hl + params.lambda) +
                                 gr * gr / (hr + params.lambda) - parent) -
                          params.gamma;
            if (gain > best.gain) {
                best.found = true;
                best.feature = static_cast<int>(f);
                best.threshold = (x + x_next) / 2.0;
                best.gain = gain;
            }
        }
    }
    return best;
}

int grow_node(Tree& tree, const FeatureMatrix& fm,
              const std::vector<std::size_t>& rows,
              const std::vector<double>& grad, const std::vector<double>& hess,
              const GbtParams& params, int depth) {
    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    SplitResult split;
    if (depth < params.max_depth && rows.size() > 1)
        split = best_split(fm, rows, grad, hess, params);

    if (!split.found || split.gain <= 0.0) {
        double g = 0.0, h = 0.0;
        for (std::size_t r : rows) {
            g += grad[r];
            h += hess[r];
        }
        tree.nodes[id].weight = -g / (h + params.lambda);
        return id;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
        (fm.at(r, split.feature) < split.threshold ? left : right).push_back(r);

    tree.nodes[id].is_leaf = false;
    tree.nodes[id].feature = split.feature;
    tree.nodes[id].threshold = split.threshold;
    int l = grow_node(tree, fm, left, grad, hess, params, depth + 1);
    int r = grow_node(tree, fm, right, grad, hess, params, depth + 1);
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
}

}  // namespace

GbtModel gbt_train(const FeatureMatrix& features, const GbtParams& params) {
    if (features.labels.size() != features.rows)
        throw std::invalid_argument("gbt_train requires labels on every row");
    std::size_t pos = 0;
    for (std::uint8_t y : features.labels) pos += y ? 1 : 0;
    if (pos == 0 || pos == features.rows)
        throw std::invalid_argument("gbt_train requires both classes");
    if (params.rounds < 0 || params.max_depth < 1)
        throw std::invalid_argument("bad gbt params");

    GbtModel model;
    model.feature_names = features.column_names;
    model.shrinkage = params.shrinkage;
    double mean = static_cast<double>(pos) / features.rows;
    model.base_score = std::log(mean / (1.0 - mean));

    std::size_t n = features.rows;
    std::vector<double> margin(n, model.base_score);
    std::vector<double> grad(n), hess(n);
    std::mt19937_64 rng(derive_seed(params.seed, "gbt-train"));
    std::bernoulli_distribution keep(params.subsample);

    for (int round = 0; round < params.rounds; ++round) {
        for (std::size_t r = 0; r < n; ++r) {
            double p = sigmoid(margin[r]);
            grad[r] = p - static_cast<double>(features.labels[r]);
            hess[r] = p * (1.0 - p);
        }
        std::vector<std::size_t> rows;
        rows.reserve(n);
        for (std::size_t r = 0; r < n; ++r)
            if (params.subsample >= 1.0 || keep(rng)) rows.push_back(r);
        if (rows.empty()) rows.push_back(0);

        Tree tree;
        grow_node(tree, features, rows, grad, hess, params, 0);
        for (std::size_t r = 0; r < n; ++r)
            margin[r] += params.shrinkage *
                         tree.apply(features.values.data() + r * features.cols());
        model.trees.push_back(std::move(tree));

        double loss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double p = std::min(1.0 - 1e-15, std::max(1e-15, sigmoid(margin[r])));
            loss += features.labels[r] ? -std::log(p) : -std::log(1.0 - p);
        }
        model.train_loss.push_back(loss / n);
    }
    return model;
}

GbtParams random_search(const SearchSpec& spec, const FeatureMatrix& train,
                        const FeatureMatrix& valid) {
    if (spec.draws < 1)
        throw std::invalid_argument("random search needs draws >= 1");
    if (spec.rounds.empty() || spec.depth.empty() || spec.shrinkage.empty() ||
        spec.min_child_weight.empty() || spec.subsample.empty())
        throw std::invalid_argument("random search lists must be non-empty");

    std::mt19937_64 rng(derive_seed(spec.seed, "gbt-search"));
    auto pick = [&rng](const auto& list) {
        std::uniform_int_distribution<std::size_t> dist(0, list.size() - 1);
        return list[dist(rng)];
    };

    GbtParams best;
    double best_auc = -1.0;
    for (std::size_t d = 0; d < spec.draws; ++d) {
        GbtParams candidate;
        candidate.rounds = pick(spec.rounds);
        candidate.max_depth = pick(spec.depth);
        candidate.shrinkage = pick(spec.shrinkage);
        candidate.min_child_weight = pick(spec.min_child_weight);
        candidate.subsample = pick(spec.subsample);
        candidate.seed = derive_seed(spec.seed, "draw-" + std::to_string(d));
        GbtModel model = gbt_train(train, candidate);
        double auc = auroc(model.predict(valid), valid.labels);
        if (auc > best_auc) {
            best_auc = auc;
            best = candidate;
        }
    }
    return best;
}

FeatureMatrix build_features(const InteractionGraph& g, const ScoredPairs& pairs,
                             const std::vector<Measure>& measures,
                             const AmfModel* model, double alpha,
                             const KatzParams& katz_params, int workers) {
    FeatureMatrix fm;
    fm.rows = pairs.size();
    for (Measure m : measures)
        fm.add_column(measure_name(m),
                      score_all(g, m, pairs.pairs, katz_params, workers));
    if (model != nullptr) {
        if (model->node_count != g.node_count())
            throw std::invalid_argument("feature model/graph node mismatch");
        AmfModel scored = alpha > 0.0 ? propagate_factors(g, *model, alpha)
                                      : *model;
        std::vector<double> col(pairs.size());
        parallel_for(pairs.size(), workers,
                     [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
                col[i] = scored.predict(pairs.pairs[i].a, pairs.pairs[i].b);
        });
        fm.add_column(alpha > 0.0 ? "AMFP" : "AMF", col);
    }
    if (fm.column_names.empty()) fm.rows = pairs.size();
    fm.labels = pairs.labels;
    return fm;
}

void write_features_csv(const FeatureMatrix& fm, const InteractionGraph& g,
                        const ScoredPairs& pairs, const std::string& path) {
    if (fm.rows != pairs.size())
        throw std::invalid_argument("feature/pair row mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write features: " + path);
    out << "drug_a,drug_b";
    for (const std::string& name : fm.column_names) out << ',' << name;
    if (!fm.labels.empty()) out << ",label";
    out << '\n';
    for (std::size_t r = 0; r < fm.rows; ++r) {
        out << g.node_name(pairs.pairs[r].a) << ','
            << g.node_name(pairs.pairs[r].b);
        for (std::size_t c = 0; c < fm.cols(); ++c)
            out << ',' << format_double(fm.at(r, c));
        if (!fm.labels.empty()) out << ',' << static_cast<int>(fm.labels[r]);
        out << '\n';
    }
}

}  // namespace ddikit
