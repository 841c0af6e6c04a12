#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddikit/amf.hpp"
#include "ddikit/config.hpp"
#include "ddikit/gbt.hpp"
#include "ddikit/graph.hpp"
#include "ddikit/similarity.hpp"

namespace ddikit {

struct ExperimentConfig {
    std::string protocol;  // retrospective | holdout | crossval

    // retrospective releases (train < validation < test by date)
    std::string train_edges;
    std::string valid_edges;
    std::string test_edges;
    // single-release protocols
    std::string edges;

    char delimiter = ',';
    std::string exclusions_path;
    std::string out_dir = "out";
    std::uint64_t master_seed = 0;
    int workers = 1;
    std::size_t top_n = 100;
    std::size_t bootstrap_resamples = 1000;

    TrainConfig train;
    std::vector<double> alpha_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9, 1.0};
    double export_alpha = 0.0;  // export-embeddings only
    KatzParams katz;
    SearchSpec search;

    double test_fraction = 0.30;
    double validation_fraction = 0.10;
    int folds = 5;
    int repeats = 5;

    std::vector<std::size_t> precision_ns{1, 5, 10, 25, 50, 100};
    std::vector<std::size_t> per_drug_ns{1, 2, 3, 4, 5};
    std::vector<std::string> crossval_predictors{"AMF"};

    // Config file keys mirror the field names; CLI flags override.
    static ExperimentConfig from_config(const Config& cfg);
};

// Fig-2-style protocol over three releases: tune on the first pair of
// releases, retrain on the middle release, report on the newest.
void run_retrospective(const ExperimentConfig& cfg);

// 70/30 split of positives and 1:1 sampled non-edges within one release,
// with 10% of the data carved out for validation during tuning.
void run_holdout(const ExperimentConfig& cfg);

// Stratified k-fold over positives with matched sampled negatives,
// repeated with distinct seeds; reports mean and std per predictor.
void run_crossval(const ExperimentConfig& cfg);

// Scores every non-edge of the input graph with a saved model and writes
// a descending-sorted prediction CSV.
void run_predict(const ExperimentConfig& cfg, const std::string& model_path);

// AUROC as a function of the propagation factor on the protocol's
// validation and test sets.
void run_alpha_sweep(const ExperimentConfig& cfg);

// Trains on one release and exports the (optionally propagated) embedding
// table plus the model artifact.
void run_export_embeddings(const ExperimentConfig& cfg);

}  // namespace ddikit
