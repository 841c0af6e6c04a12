#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "ddikit/config.hpp"
#include "ddikit/experiment.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string seed, workers, out_dir, top_n, exclusions;
    std::string edges, train_edges, valid_edges, test_edges;
    std::string alpha, folds, repeats;
};

// CLI flags override config-file values.
ddikit::ExperimentConfig resolve(const CliOverrides& cli,
                                 const std::string& protocol) {
    ddikit::Config cfg;
    if (!cli.config_path.empty()) cfg = ddikit::Config::load(cli.config_path);
    cfg.set("protocol", protocol);
    auto override_key = [&](const std::string& key, const std::string& value) {
        if (!value.empty()) cfg.set(key, value);
    };
    override_key("seed", cli.seed);
    override_key("workers", cli.workers);
    override_key("out_dir", cli.out_dir);
    override_key("top_n", cli.top_n);
    override_key("exclusions", cli.exclusions);
    override_key("edges", cli.edges);
    override_key("train_edges", cli.train_edges);
    override_key("valid_edges", cli.valid_edges);
    override_key("test_edges", cli.test_edges);
    override_key("alpha", cli.alpha);
    override_key("folds", cli.folds);
    override_key("repeats", cli.repeats);
    return ddikit::ExperimentConfig::from_config(cfg);
}

void add_common_flags(CLI::App* sub, CliOverrides& cli) {
    sub->add_option("--config", cli.config_path, "config file (key = value)");
    sub->add_option("--seed", cli.seed, "master RNG seed");
    sub->add_option("--workers", cli.workers, "worker threads for scoring");
    sub->add_option("--out-dir", cli.out_dir, "output directory");
    sub->add_option("--top-n", cli.top_n, "rows in the prediction ranking");
    sub->add_option("--exclusions", cli.exclusions,
                    "pair file removed from the test candidates");
    sub->add_option("--edges", cli.edges, "single-release edge list");
    sub->add_option("--train-edges", cli.train_edges, "oldest release");
    sub->add_option("--valid-edges", cli.valid_edges, "middle release");
    sub->add_option("--test-edges", cli.test_edges, "newest release");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-prediction toolkit for drug-drug interaction networks"};
    app.require_subcommand(1);
    CliOverrides cli;
    std::string model_path;

    CLI::App* retro = app.add_subcommand(
        "retrospective", "train on an old release, test on a newer one");
    add_common_flags(retro, cli);

    CLI::App* holdout = app.add_subcommand(
        "holdout", "random 70/30 split within a single release");
    add_common_flags(holdout, cli);

    CLI::App* crossval =
        app.add_subcommand("crossval", "repeated k-fold cross-validation");
    add_common_flags(crossval, cli);
    crossval->add_option("--folds", cli.folds, "number of folds (3 or 5)");
    crossval->add_option("--repeats", cli.repeats, "experiment repetitions");

    CLI::App* predict = app.add_subcommand(
        "predict", "rank all non-edges with a saved model");
    add_common_flags(predict, cli);
    predict->add_option("--model", model_path, "saved model artifact")
        ->required();

    CLI::App* sweep = app.add_subcommand(
        "sweep-alpha", "AUROC as a function of the propagation factor");
    add_common_flags(sweep, cli);

    CLI::App* export_cmd = app.add_subcommand(
        "export-embeddings", "train and export the node embedding table");
    add_common_flags(export_cmd, cli);
    export_cmd->add_option("--alpha", cli.alpha, "propagation factor");

    CLI11_PARSE(app, argc, argv);

    try {
        if (retro->parsed())
            ddikit::run_retrospective(resolve(cli, "retrospective"));
        else if (holdout->parsed())
            ddikit::run_holdout(resolve(cli, "holdout"));
        else if (crossval->parsed())
            ddikit::run_crossval(resolve(cli, "crossval"));
        else if (predict->parsed())
            ddikit::run_predict(resolve(cli, "predict"), model_path);
        else if (sweep->parsed())
            ddikit::run_alpha_sweep(resolve(cli, "sweep-alpha"));
        else if (export_cmd->parsed())
            ddikit::run_export_embeddings(resolve(cli, "export-embeddings"));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
