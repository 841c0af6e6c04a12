#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddikit/amf.hpp"
#include "ddikit/graph.hpp"
#include "ddikit/similarity.hpp"

namespace ddikit {

// Row-major feature table with named columns and optional binary labels.
struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::vector<double> values;  // rows x columns, row-major
    std::size_t rows = 0;
    std::vector<std::uint8_t> labels;  // empty if unlabeled

    std::size_t cols() const { return column_names.size(); }
    double at(std::size_t r, std::size_t c) const {
        return values[r * cols() + c];
    }
    void add_column(const std::string& name, const std::vector<double>& col);
};

struct GbtParams {
    int rounds = 200;
    int max_depth = 3;
    double shrinkage = 0.1;
    double lambda = 1.0;           // L2 on leaf weights
    double gamma = 0.0;            // split penalty
    double min_child_weight = 1.0; // minimum hessian mass per child
    double subsample = 1.0;        // row fraction per round
    std::uint64_t seed = 0;
};

struct TreeNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0.0;  // left if x < threshold
    int left = -1;
    int right = -1;
    double weight = 0.0;  // leaf value before shrinkage
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double apply(const double* row) const;
};

struct GbtModel {
    std::vector<std::string> feature_names;
    std::vector<Tree> trees;
    double shrinkage = 0.1;
    double base_score = 0.0;  // log-odds of the training label mean
    std::vector<double> train_loss;  // mean logistic loss after each round

    // sigmoid(base_score + shrinkage * sum of tree outputs) per row
    std::vector<double> predict(const FeatureMatrix& features) const;
};

// Newton boosting on logistic loss with exact greedy splits. Throws on
// missing or single-class labels.
GbtModel gbt_train(const FeatureMatrix& features, const GbtParams& params);

struct SearchSpec {
    std::vector<int> rounds{50, 100, 200};
    std::vector<int> depth{2, 3, 4};
    std::vector<double> shrinkage{0.05, 0.1, 0.3};
    std::vector<double> min_child_weight{1.0, 5.0};
    std::vector<double> subsample{0.8, 1.0};
    std::size_t draws = 20;
    std::uint64_t seed = 0;
};

// Randomized search: evaluates `draws` sampled combinations by validation
// AUROC; ties keep the first-seen combination.
GbtParams random_search(const SearchSpec& spec, const FeatureMatrix& train,
                        const FeatureMatrix& valid);

// Base-predictor columns for a candidate pair set: the selected similarity
// measures plus an optional factorization model column (named "AMF", or
// "AMFP" when alpha > 0, with propagation applied here).
FeatureMatrix build_features(const InteractionGraph& g, const ScoredPairs& pairs,
                             const std::vector<Measure>& measures,
                             const AmfModel* model = nullptr,
                             double alpha = 0.0,
                             const KatzParams& katz_params = {},
                             int workers = 1);

void write_features_csv(const FeatureMatrix& fm, const InteractionGraph& g,
                        const ScoredPairs& pairs, const std::string& path);

}  // namespace ddikit
