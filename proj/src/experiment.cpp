#include "ddikit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "ddikit/metrics.hpp"
#include "ddikit/propagation.hpp"
#include "ddikit/util.hpp"

namespace fs = std::filesystem;

namespace ddikit {

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    ExperimentConfig ec;
    ec.protocol = cfg.get_string("protocol", ec.protocol);
    ec.train_edges = cfg.get_string("train_edges");
    ec.valid_edges = cfg.get_string("valid_edges");
    ec.test_edges = cfg.get_string("test_edges");
    ec.edges = cfg.get_string("edges");
    std::string delim = cfg.get_string("delimiter", ",");
    if (delim.size() != 1)
        throw std::invalid_argument("delimiter must be one character");
    ec.delimiter = delim[0];
    ec.exclusions_path = cfg.get_string("exclusions");
    ec.out_dir = cfg.get_string("out_dir", ec.out_dir);
    ec.master_seed = cfg.get_seed("seed", ec.master_seed);
    ec.workers = static_cast<int>(cfg.get_int("workers", ec.workers));
    ec.top_n = static_cast<std::size_t>(cfg.get_int("top_n", ec.top_n));
    ec.bootstrap_resamples = static_cast<std::size_t>(
        cfg.get_int("bootstrap_resamples", ec.bootstrap_resamples));

    ec.train.embedding_dim =
        static_cast<int>(cfg.get_int("embedding_dim", ec.train.embedding_dim));
    ec.train.dropout = cfg.get_double("dropout", ec.train.dropout);
    ec.train.learning_rate =
        cfg.get_double("learning_rate", ec.train.learning_rate);
    ec.train.epochs = static_cast<int>(cfg.get_int("epochs", ec.train.epochs));
    ec.train.batch_size =
        static_cast<int>(cfg.get_int("batch_size", ec.train.batch_size));
    ec.train.negative_ratio =
        cfg.get_double("negative_ratio", ec.train.negative_ratio);

    ec.alpha_grid = cfg.get_double_list("alpha_grid", ec.alpha_grid);
    ec.export_alpha = cfg.get_double("alpha", ec.export_alpha);
    ec.katz.beta = cfg.get_double("katz_beta", ec.katz.beta);
    ec.katz.max_length =
        static_cast<int>(cfg.get_int("katz_length", ec.katz.max_length));

    ec.search.rounds = cfg.get_int_list("gbt_rounds", ec.search.rounds);
    ec.search.depth = cfg.get_int_list("gbt_depth", ec.search.depth);
    ec.search.shrinkage = cfg.get_double_list("gbt_shrinkage", ec.search.shrinkage);
    ec.search.min_child_weight =
        cfg.get_double_list("gbt_min_child_weight", ec.search.min_child_weight);
    ec.search.subsample = cfg.get_double_list("gbt_subsample", ec.search.subsample);
    ec.search.draws = static_cast<std::size_t>(
        cfg.get_int("gbt_draws", static_cast<long>(ec.search.draws)));

    ec.test_fraction = cfg.get_double("test_fraction", ec.test_fraction);
    ec.validation_fraction =
        cfg.get_double("validation_fraction", ec.validation_fraction);
    ec.folds = static_cast<int>(cfg.get_int("folds", ec.folds));
    ec.repeats = static_cast<int>(cfg.get_int("repeats", ec.repeats));
    ec.crossval_predictors =
        cfg.get_string_list("predictors", ec.crossval_predictors);

    auto to_sizes = [](const std::vector<int>& in) {
        std::vector<std::size_t> out;
        for (int x : in) out.push_back(static_cast<std::size_t>(x));
        return out;
    };
    if (cfg.has("precision_ns"))
        ec.precision_ns = to_sizes(cfg.get_int_list("precision_ns", {}));
    if (cfg.has("per_drug_ns"))
        ec.per_drug_ns = to_sizes(cfg.get_int_list("per_drug_ns", {}));

    if (ec.test_fraction <= 0.0 || ec.test_fraction >= 1.0 ||
        ec.validation_fraction <= 0.0 || ec.validation_fraction >= 1.0 ||
        ec.test_fraction + ec.validation_fraction >= 1.0)
        throw std::invalid_argument("split fractions must be in (0,1)");
    return ec;
}

namespace {

struct NamedScores {
    std::string name;
    std::vector<double> scores;
};

const std::vector<Measure> kEnsembleMeasures{
    Measure::AvgCommonNeighbors, Measure::AvgJaccard, Measure::AdamicAdar,
    Measure::Katz, Measure::Ipf};

std::vector<double> amf_scores(const AmfModel& model, const ScoredPairs& sp,
                               int workers) {
    std::vector<double> out(sp.size());
    parallel_for(sp.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            out[i] = model.predict(sp.pairs[i].a, sp.pairs[i].b);
    });
    return out;
}

// Distinct uniform non-edges; falls back to enumerate-and-shuffle when the
// request covers most of the non-edge pool.
std::vector<NodePair> sample_distinct_negatives(const InteractionGraph& g,
                                                std::size_t count,
                                                std::mt19937_64& rng) {
    std::size_t m = g.node_count();
    std::size_t non_edges = m * (m - 1) / 2 - g.edge_count();
    count = std::min(count, non_edges);
    if (count == 0) return {};
    if (count * 2 > non_edges) {
        ScoredPairs all = enumerate_non_edges(g);
        std::shuffle(all.pairs.begin(), all.pairs.end(), rng);
        all.pairs.resize(count);
        return std::move(all.pairs);
    }
    std::unordered_set<NodePair, NodePairHash> seen;
    std::vector<NodePair> out;
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(m - 1));
    while (out.size() < count) {
        NodeId u = pick(rng);
        NodeId v = pick(rng);
        if (u == v || g.has_edge(u, v)) continue;
        NodePair p(u, v);
        if (!seen.insert(p).second) continue;
        out.push_back(p);
    }
    return out;
}

std::vector<NodePair> map_exclusions(const InteractionGraph& g,
                                     const std::string& path, char delimiter) {
    if (path.empty()) return {};
    std::vector<NodePair> out;
    for (const auto& [u, v] : load_name_pairs(path, delimiter)) {
        auto a = g.find_node(u);
        auto b = g.find_node(v);
        if (!a || !b || *a == *b) continue;  // names outside the shared set
        out.emplace_back(*a, *b);
    }
    return out;
}

InteractionGraph graph_from_pairs(const std::vector<std::string>& names,
                                  const std::vector<NodePair>& edges) {
    InteractionGraph::Builder builder;
    for (const std::string& name : names) builder.add_node(name);
    for (const NodePair& e : edges) builder.add_edge_ids(e.a, e.b);
    return builder.build();
}

ScoredPairs labeled_items(const std::vector<NodePair>& positives,
                          const std::vector<NodePair>& negatives) {
    ScoredPairs sp;
    sp.pairs.reserve(positives.size() + negatives.size());
    for (const NodePair& p : positives) {
        sp.pairs.push_back(p);
        sp.labels.push_back(1);
    }
    for (const NodePair& p : negatives) {
        sp.pairs.push_back(p);
        sp.labels.push_back(0);
    }
    return sp;
}

void assert_no_leakage(const InteractionGraph& train, const ScoredPairs& sp) {
    for (std::size_t i = 0; i < sp.size(); ++i)
        if (sp.labels[i] && train.has_edge(sp.pairs[i].a, sp.pairs[i].b))
            throw std::logic_error("train/test leakage: positive test pair "
                                   "is a training edge");
}

void write_curve_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& points,
                     const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write curve: " + path);
    out << header << '\n';
    for (const auto& [x, y] : points)
        out << format_double(x) << ',' << format_double(y) << '\n';
}

std::vector<std::pair<std::string, EvalReport>> write_reports(
    const ExperimentConfig& cfg, const ScoredPairs& labeled,
    const std::vector<NamedScores>& predictors, const std::string& out_dir) {
    std::vector<std::pair<std::string, EvalReport>> reports;
    for (const NamedScores& ns : predictors) {
        ScoredPairs sp = labeled;
        sp.scores = ns.scores;
        reports.emplace_back(
            ns.name, evaluate(sp, cfg.precision_ns, cfg.per_drug_ns));
    }

    std::ofstream csv(out_dir + "/metrics.csv");
    if (!csv) throw std::runtime_error("cannot write metrics.csv");
    csv << "metric,name,value\n";
    for (const auto& [name, report] : reports) {
        csv << "auroc," << name << ',' << format_double(report.auroc) << '\n';
        csv << "aupr," << name << ',' << format_double(report.aupr) << '\n';
        csv << "positives," << name << ',' << report.positives << '\n';
        csv << "negatives," << name << ',' << report.negatives << '\n';
        for (const auto& [n, p] : report.precision_at)
            csv << "precision_at_" << n << ',' << name << ','
                << format_double(p) << '\n';
        for (const auto& [n, p] : report.per_drug_precision_at)
            csv << "per_drug_precision_at_" << n << ',' << name << ','
                << format_double(p) << '\n';
    }
    csv.close();

    std::ofstream txt(out_dir + "/report.txt");
    txt << "model\tauroc\taupr\n";
    for (const auto& [name, report] : reports)
        txt << name << '\t' << format_double(report.auroc) << '\t'
            << format_double(report.aupr) << '\n';
    txt << "\nnote: per-drug precision averages only drugs with at least one "
           "positive candidate\n";

    for (const auto& [name, report] : reports) {
        write_curve_csv(out_dir + "/roc_" + name + ".csv", report.roc,
                        "fpr,tpr");
        write_curve_csv(out_dir + "/pr_" + name + ".csv", report.pr,
                        "recall,precision");
    }
    return reports;
}

void write_predictions_csv(const InteractionGraph& g, const ScoredPairs& sp,
                           const std::vector<double>& scores, std::size_t top_n,
                           const std::string& path) {
    std::vector<std::size_t> order(sp.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto name_pair = [&](std::size_t i) {
        std::string a = g.node_name(sp.pairs[i].a);
        std::string b = g.node_name(sp.pairs[i].b);
        if (b < a) std::swap(a, b);
        return std::make_pair(a, b);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (scores[x] != scores[y]) return scores[x] > scores[y];
        return name_pair(x) < name_pair(y);
    });
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write predictions: " + path);
    out << "drug_a,drug_b,score\n";
    std::size_t limit = std::min(top_n, order.size());
    for (std::size_t i = 0; i < limit; ++i) {
        auto [a, b] = name_pair(order[i]);
        out << a << ',' << b << ',' << format_double(scores[order[i]]) << '\n';
    }
}

void write_comparisons_csv(
    const std::string& path,
    const std::vector<std::tuple<std::string, std::string, BootstrapResult>>&
        rows) {
    std::ofstream out(path);
    out << "model_a,model_b,delta_auroc,p_value,ci_low,ci_high\n";
    for (const auto& [a, b, r] : rows)
        out << a << ',' << b << ',' << format_double(r.delta_auroc) << ','
            << format_double(r.p_value) << ',' << format_double(r.ci_low)
            << ',' << format_double(r.ci_high) << '\n';
}

void write_manifest(const ExperimentConfig& cfg,
                    const std::vector<std::string>& notes) {
    std::ofstream out(cfg.out_dir + "/manifest.txt");
    out << "protocol = " << cfg.protocol << '\n';
    out << "seed = " << cfg.master_seed << '\n';
    out << "workers = " << cfg.workers << '\n';
    out << "delimiter = " << cfg.delimiter << '\n';
    if (!cfg.train_edges.empty()) out << "train_edges = " << cfg.train_edges << '\n';
    if (!cfg.valid_edges.empty()) out << "valid_edges = " << cfg.valid_edges << '\n';
    if (!cfg.test_edges.empty()) out << "test_edges = " << cfg.test_edges << '\n';
    if (!cfg.edges.empty()) out << "edges = " << cfg.edges << '\n';
    if (!cfg.exclusions_path.empty())
        out << "exclusions = " << cfg.exclusions_path << '\n';
    out << "embedding_dim = " << cfg.train.embedding_dim << '\n';
    out << "dropout = " << format_double(cfg.train.dropout) << '\n';
    out << "learning_rate = " << format_double(cfg.train.learning_rate) << '\n';
    out << "epochs = " << cfg.train.epochs << '\n';
    out << "batch_size = " << cfg.train.batch_size << '\n';
    out << "negative_ratio = " << format_double(cfg.train.negative_ratio) << '\n';
    out << "katz_beta = " << format_double(cfg.katz.beta) << '\n';
    out << "katz_length = " << cfg.katz.max_length << '\n';
    out << "alpha_grid =";
    for (double a : cfg.alpha_grid) out << ' ' << format_double(a);
    out << '\n';
    for (const std::string& note : notes) out << note << '\n';
}

ScoredPairs with_scores(const ScoredPairs& sp, std::vector<double> scores) {
    ScoredPairs out = sp;
    out.scores = std::move(scores);
    return out;
}

// Picks the propagation factor maximizing validation AUROC; ties keep the
// smallest alpha so alpha = 0 (plain AMF) wins when propagation is idle.
std::pair<double, double> select_alpha(const InteractionGraph& g,
                                       const AmfModel& model,
                                       const ScoredPairs& validation,
                                       const std::vector<double>& grid,
                                       int workers) {
    double best_alpha = 0.0;
    double best_auc = -1.0;
    for (double alpha : grid) {
        AmfModel propagated = propagate_factors(g, model, alpha);
        double auc =
            auroc(with_scores(validation, amf_scores(propagated, validation,
                                                     workers)));
        if (auc > best_auc) {
            best_auc = auc;
            best_alpha = alpha;
        }
    }
    return {best_alpha, best_auc};
}

// Ensemble training rows: all graph edges plus 1:1 sampled negatives.
ScoredPairs ensemble_training_rows(const InteractionGraph& g,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<NodePair> positives = g.edges();
    std::vector<NodePair> negatives =
        sample_negatives(g, positives.size(), rng);
    return labeled_items(positives, negatives);
}

struct FinalStage {
    AmfModel amf;
    AmfModel amfp;
    double alpha = 0.0;
    GbtModel gbt;
    GbtParams gbt_params;
};

// Shared tail of the retrospective and holdout protocols: score every
// predictor on the test candidates and write the full artifact set.
void finalize_and_report(const ExperimentConfig& cfg,
                         const InteractionGraph& train_graph,
                         const ScoredPairs& test_items, const FinalStage& stage,
                         std::vector<std::string>& notes) {
    assert_no_leakage(train_graph, test_items);

    FeatureMatrix fm_test =
        build_features(train_graph, test_items, kEnsembleMeasures, &stage.amf,
                       stage.alpha, cfg.katz, cfg.workers);
    std::vector<double> gbt_scores = stage.gbt.predict(fm_test);

    std::vector<NamedScores> predictors;
    predictors.push_back(
        {"XGBoost", gbt_scores});
    predictors.push_back(
        {"AMFP", amf_scores(stage.amfp, test_items, cfg.workers)});
    predictors.push_back(
        {"AMF", amf_scores(stage.amf, test_items, cfg.workers)});
    for (Measure m : kEnsembleMeasures)
        predictors.push_back(
            {measure_name(m),
             score_all(train_graph, m, test_items.pairs, cfg.katz,
                       cfg.workers)});

    write_reports(cfg, test_items, predictors, cfg.out_dir);

    // paired significance checks between the headline models
    std::vector<std::tuple<std::string, std::string, BootstrapResult>> comps;
    auto scored = [&](const std::vector<double>& s) {
        return with_scores(test_items, s);
    };
    comps.emplace_back("XGBoost", "AMFP",
                       paired_bootstrap_compare(
                           scored(predictors[0].scores),
                           scored(predictors[1].scores), cfg.bootstrap_resamples,
                           derive_seed(cfg.master_seed, "bootstrap-xgb-amfp")));
    comps.emplace_back("AMFP", "AMF",
                       paired_bootstrap_compare(
                           scored(predictors[1].scores),
                           scored(predictors[2].scores), cfg.bootstrap_resamples,
                           derive_seed(cfg.master_seed, "bootstrap-amfp-amf")));
    write_comparisons_csv(cfg.out_dir + "/comparisons.csv", comps);

    write_predictions_csv(train_graph, test_items, gbt_scores, cfg.top_n,
                          cfg.out_dir + "/predictions.csv");
    export_embeddings(train_graph, stage.amfp,
                      cfg.out_dir + "/embeddings.tsv", stage.alpha);
    save_model(train_graph, stage.amfp, cfg.out_dir + "/model.tsv");

    notes.push_back("selected_alpha = " + format_double(stage.alpha));
    notes.push_back("gbt_rounds = " + std::to_string(stage.gbt_params.rounds));
    notes.push_back("gbt_depth = " +
                    std::to_string(stage.gbt_params.max_depth));
    notes.push_back("gbt_shrinkage = " +
                    format_double(stage.gbt_params.shrinkage));
    notes.push_back("gbt_min_child_weight = " +
                    format_double(stage.gbt_params.min_child_weight));
    notes.push_back("gbt_subsample = " +
                    format_double(stage.gbt_params.subsample));
}

}  // namespace

void run_retrospective(const ExperimentConfig& cfg) {
    if (cfg.train_edges.empty() || cfg.valid_edges.empty() ||
        cfg.test_edges.empty())
        throw std::invalid_argument(
            "retrospective needs train_edges, valid_edges and test_edges");
    fs::create_directories(cfg.out_dir);
    std::vector<std::string> notes;

    InteractionGraph g_train = load_edge_list(cfg.train_edges, cfg.delimiter);
    InteractionGraph g_valid = load_edge_list(cfg.valid_edges, cfg.delimiter);
    InteractionGraph g_test = load_edge_list(cfg.test_edges, cfg.delimiter);

    // tuning stage over the first pair of releases
    ReleasePair tuning = align_releases(g_train, g_valid);
    ScoredPairs validation = candidate_pairs(tuning);
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.master_seed, "amf-validation");
    AmfModel amf_v = train_amf(tuning.train_graph, tc);
    auto [alpha, alpha_auc] = select_alpha(tuning.train_graph, amf_v,
                                           validation, cfg.alpha_grid,
                                           cfg.workers);
    notes.push_back("validation_auroc_at_alpha = " + format_double(alpha_auc));

    ScoredPairs train_rows = ensemble_training_rows(
        tuning.train_graph,
        derive_seed(cfg.master_seed, "ensemble-negatives-validation"));
    FeatureMatrix fm_train =
        build_features(tuning.train_graph, train_rows, kEnsembleMeasures,
                       &amf_v, alpha, cfg.katz, cfg.workers);
    FeatureMatrix fm_valid =
        build_features(tuning.train_graph, validation, kEnsembleMeasures,
                       &amf_v, alpha, cfg.katz, cfg.workers);
    SearchSpec spec = cfg.search;
    spec.seed = derive_seed(cfg.master_seed, "gbt-search");
    GbtParams gbt_params = random_search(spec, fm_train, fm_valid);

    // final stage: retrain on the middle release, report on the newest
    ReleasePair final_pair = align_releases(g_valid, g_test);
    std::vector<NodePair> exclusions = map_exclusions(
        final_pair.train_graph, cfg.exclusions_path, cfg.delimiter);
    ScoredPairs test_items = candidate_pairs(final_pair, exclusions);
    notes.push_back("excluded_pairs = " + std::to_string(exclusions.size()));

    FinalStage stage;
    stage.alpha = alpha;
    stage.gbt_params = gbt_params;
    tc.seed = derive_seed(cfg.master_seed, "amf-final");
    stage.amf = train_amf(final_pair.train_graph, tc);
    stage.amfp = propagate_factors(final_pair.train_graph, stage.amf, alpha);
    ScoredPairs final_rows = ensemble_training_rows(
        final_pair.train_graph,
        derive_seed(cfg.master_seed, "ensemble-negatives-final"));
    FeatureMatrix fm_final =
        build_features(final_pair.train_graph, final_rows, kEnsembleMeasures,
                       &stage.amf, alpha, cfg.katz, cfg.workers);
    stage.gbt = gbt_train(fm_final, gbt_params);

    finalize_and_report(cfg, final_pair.train_graph, test_items, stage, notes);
    write_manifest(cfg, notes);
}

namespace {

struct HoldoutSplit {
    std::vector<NodePair> train_pos, valid_pos, test_pos;
    std::vector<NodePair> train_neg, valid_neg, test_neg;
};

HoldoutSplit make_holdout_split(const InteractionGraph& g,
                                const ExperimentConfig& cfg) {
    std::mt19937_64 neg_rng(derive_seed(cfg.master_seed, "holdout-negatives"));
    std::vector<NodePair> negatives =
        sample_distinct_negatives(g, g.edge_count(), neg_rng);
    std::vector<NodePair> positives = g.edges();

    std::mt19937_64 split_rng(derive_seed(cfg.master_seed, "holdout-split"));
    auto split_class = [&](std::vector<NodePair> items,
                           std::vector<NodePair>& train,
                           std::vector<NodePair>& valid,
                           std::vector<NodePair>& test) {
        std::shuffle(items.begin(), items.end(), split_rng);
        std::size_t n = items.size();
        std::size_t test_n = static_cast<std::size_t>(
            std::llround(cfg.test_fraction * static_cast<double>(n)));
        std::size_t valid_n = static_cast<std::size_t>(
            std::llround(cfg.validation_fraction * static_cast<double>(n)));
        test.assign(items.begin(), items.begin() + test_n);
        valid.assign(items.begin() + test_n,
                     items.begin() + test_n + valid_n);
        train.assign(items.begin() + test_n + valid_n, items.end());
    };
    HoldoutSplit split;
    split_class(std::move(positives), split.train_pos, split.valid_pos,
                split.test_pos);
    split_class(std::move(negatives), split.train_neg, split.valid_neg,
                split.test_neg);
    if (split.train_pos.empty() || split.test_pos.empty())
        throw std::runtime_error("holdout split left a stage without positives");
    return split;
}

}  // namespace

void run_holdout(const ExperimentConfig& cfg) {
    if (cfg.edges.empty())
        throw std::invalid_argument("holdout needs a single `edges` release");
    fs::create_directories(cfg.out_dir);
    std::vector<std::string> notes;

    InteractionGraph g = load_edge_list(cfg.edges, cfg.delimiter);
    HoldoutSplit split = make_holdout_split(g, cfg);
    notes.push_back("split_positives = " +
                    std::to_string(split.train_pos.size()) + "/" +
                    std::to_string(split.valid_pos.size()) + "/" +
                    std::to_string(split.test_pos.size()));

    // tuning on the 10% validation slice
    InteractionGraph g_tune = graph_from_pairs(g.node_names(), split.train_pos);
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.master_seed, "amf-validation");
    AmfModel amf_v = train_amf(g_tune, tc);
    ScoredPairs validation = labeled_items(split.valid_pos, split.valid_neg);
    auto [alpha, alpha_auc] =
        select_alpha(g_tune, amf_v, validation, cfg.alpha_grid, cfg.workers);
    notes.push_back("validation_auroc_at_alpha = " + format_double(alpha_auc));

    ScoredPairs tune_rows = labeled_items(split.train_pos, split.train_neg);
    FeatureMatrix fm_train = build_features(g_tune, tune_rows,
                                            kEnsembleMeasures, &amf_v, alpha,
                                            cfg.katz, cfg.workers);
    FeatureMatrix fm_valid = build_features(g_tune, validation,
                                            kEnsembleMeasures, &amf_v, alpha,
                                            cfg.katz, cfg.workers);
    SearchSpec spec = cfg.search;
    spec.seed = derive_seed(cfg.master_seed, "gbt-search");
    GbtParams gbt_params = random_search(spec, fm_train, fm_valid);

    // retrain on train + validation before touching the test slice
    std::vector<NodePair> final_pos = split.train_pos;
    final_pos.insert(final_pos.end(), split.valid_pos.begin(),
                     split.valid_pos.end());
    std::vector<NodePair> final_neg = split.train_neg;
    final_neg.insert(final_neg.end(), split.valid_neg.begin(),
                     split.valid_neg.end());
    InteractionGraph g_final = graph_from_pairs(g.node_names(), final_pos);

    FinalStage stage;
    stage.alpha = alpha;
    stage.gbt_params = gbt_params;
    tc.seed = derive_seed(cfg.master_seed, "amf-final");
    stage.amf = train_amf(g_final, tc);
    stage.amfp = propagate_factors(g_final, stage.amf, alpha);
    ScoredPairs final_rows = labeled_items(final_pos, final_neg);
    FeatureMatrix fm_final = build_features(g_final, final_rows,
                                            kEnsembleMeasures, &stage.amf,
                                            alpha, cfg.katz, cfg.workers);
    stage.gbt = gbt_train(fm_final, gbt_params);

    ScoredPairs test_items = labeled_items(split.test_pos, split.test_neg);
    finalize_and_report(cfg, g_final, test_items, stage, notes);
    write_manifest(cfg, notes);
}

void run_crossval(const ExperimentConfig& cfg) {
    if (cfg.edges.empty())
        throw std::invalid_argument("crossval needs a single `edges` release");
    if (cfg.folds < 2) throw std::invalid_argument("crossval needs folds >= 2");
    if (cfg.repeats < 1)
        throw std::invalid_argument("crossval needs repeats >= 1");
    fs::create_directories(cfg.out_dir);

    InteractionGraph g = load_edge_list(cfg.edges, cfg.delimiter);
    std::map<std::string, std::vector<double>> aurocs, auprs;

    for (int rep = 0; rep < cfg.repeats; ++rep) {
        std::mt19937_64 rng(derive_seed(
            cfg.master_seed, "cv-rep-" + std::to_string(rep)));
        std::vector<NodePair> positives = g.edges();
        std::shuffle(positives.begin(), positives.end(), rng);
        std::vector<NodePair> negatives =
            sample_distinct_negatives(g, positives.size(), rng);

        for (int fold = 0; fold < cfg.folds; ++fold) {
            std::vector<NodePair> train_pos, test_pos, train_neg, test_neg;
            for (std::size_t i = 0; i < positives.size(); ++i)
                (static_cast<int>(i % cfg.folds) == fold ? test_pos : train_pos)
                    .push_back(positives[i]);
            for (std::size_t i = 0; i < negatives.size(); ++i)
                (static_cast<int>(i % cfg.folds) == fold ? test_neg : train_neg)
                    .push_back(negatives[i]);
            if (test_pos.empty() || test_neg.empty()) continue;

            InteractionGraph g_fold = graph_from_pairs(g.node_names(), train_pos);
            ScoredPairs test_items = labeled_items(test_pos, test_neg);
            assert_no_leakage(g_fold, test_items);
            std::string tag =
                std::to_string(rep) + "-" + std::to_string(fold);

            AmfModel amf;
            bool have_amf = false;
            auto ensure_amf = [&]() {
                if (have_amf) return;
                TrainConfig tc = cfg.train;
                tc.seed = derive_seed(cfg.master_seed, "cv-amf-" + tag);
                amf = train_amf(g_fold, tc);
                have_amf = true;
            };

            for (const std::string& predictor : cfg.crossval_predictors) {
                std::vector<double> scores;
                if (predictor == "AMF") {
                    ensure_amf();
                    scores = amf_scores(amf, test_items, cfg.workers);
                } else if (predictor == "XGB") {
                    ensure_amf();
                    ScoredPairs rows = labeled_items(train_pos, train_neg);
                    FeatureMatrix fm_rows = build_features(
                        g_fold, rows, kEnsembleMeasures, &amf, 0.0, cfg.katz,
                        cfg.workers);
                    GbtParams params;
                    params.seed = derive_seed(cfg.master_seed, "cv-gbt-" + tag);
                    GbtModel model = gbt_train(fm_rows, params);
                    FeatureMatrix fm_test = build_features(
                        g_fold, test_items, kEnsembleMeasures, &amf, 0.0,
                        cfg.katz, cfg.workers);
                    scores = model.predict(fm_test);
                } else {
                    scores = score_all(g_fold, measure_from_name(predictor),
                                       test_items.pairs, cfg.katz, cfg.workers);
                }
                ScoredPairs sp = with_scores(test_items, std::move(scores));
                aurocs[predictor].push_back(auroc(sp));
                auprs[predictor].push_back(aupr(sp));
            }
        }
    }

    auto mean_std = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
        return std::make_pair(mean, std::sqrt(var));
    };

    std::ofstream csv(cfg.out_dir + "/metrics.csv");
    csv << "metric,name,value\n";
    for (const std::string& predictor : cfg.crossval_predictors) {
        if (aurocs[predictor].empty()) continue;
        auto [auc_mean, auc_std] = mean_std(aurocs[predictor]);
        auto [pr_mean, pr_std] = mean_std(auprs[predictor]);
        csv << "auroc_mean," << predictor << ',' << format_double(auc_mean) << '\n';
        csv << "auroc_std," << predictor << ',' << format_double(auc_std) << '\n';
        csv << "aupr_mean," << predictor << ',' << format_double(pr_mean) << '\n';
        csv << "aupr_std," << predictor << ',' << format_double(pr_std) << '\n';
        csv << "runs," << predictor << ','
            << aurocs[predictor].size() << '\n';
    }
    csv.close();
    write_manifest(cfg, {"folds = " + std::to_string(cfg.folds),
                         "repeats = " + std::to_string(cfg.repeats)});
}

void run_predict(const ExperimentConfig& cfg, const std::string& model_path) {
    if (cfg.edges.empty())
        throw std::invalid_argument("predict needs an `edges` release");
    fs::create_directories(cfg.out_dir);
    InteractionGraph g = load_edge_list(cfg.edges, cfg.delimiter);
    auto [model, names] = load_model(model_path);

    // graph ids -> model ids by name
    std::unordered_map<std::string, NodeId> model_index;
    for (std::size_t i = 0; i < names.size(); ++i)
        model_index[names[i]] = static_cast<NodeId>(i);
    std::vector<NodeId> remap(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto it = model_index.find(g.node_name(v));
        if (it == model_index.end())
            throw std::runtime_error("model has no embedding for node " +
                                     g.node_name(v));
        remap[v] = it->second;
    }

    ScoredPairs candidates = enumerate_non_edges(g);
    std::vector<double> scores(candidates.size());
    parallel_for(candidates.size(), cfg.workers,
                 [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            scores[i] = model.predict(remap[candidates.pairs[i].a],
                                      remap[candidates.pairs[i].b]);
    });
    write_predictions_csv(g, candidates, scores, cfg.top_n,
                          cfg.out_dir + "/predictions.csv");
}

void run_alpha_sweep(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const InteractionGraph* valid_graph;
    const InteractionGraph* test_graph;
    InteractionGraph g_valid_train, g_test_train;
    ScoredPairs validation, test_items;
    AmfModel amf_valid, amf_test;
    TrainConfig tc = cfg.train;

    if (!cfg.train_edges.empty()) {
        // retrospective-style: three releases
        if (cfg.valid_edges.empty() || cfg.test_edges.empty())
            throw std::invalid_argument(
                "sweep-alpha with train_edges needs valid_edges and test_edges");
        InteractionGraph g_t = load_edge_list(cfg.train_edges, cfg.delimiter);
        InteractionGraph g_t1 = load_edge_list(cfg.valid_edges, cfg.delimiter);
        InteractionGraph g_t2 = load_edge_list(cfg.test_edges, cfg.delimiter);
        ReleasePair tuning = align_releases(g_t, g_t1);
        ReleasePair final_pair = align_releases(g_t1, g_t2);
        g_valid_train = std::move(tuning.train_graph);
        g_test_train = std::move(final_pair.train_graph);
        validation = candidate_pairs({g_valid_train, tuning.test_graph});
        test_items = candidate_pairs({g_test_train, final_pair.test_graph});
    } else {
        if (cfg.edges.empty())
            throw std::invalid_argument(
                "sweep-alpha needs either three releases or `edges`");
        InteractionGraph g = load_edge_list(cfg.edges, cfg.delimiter);
        HoldoutSplit split = make_holdout_split(g, cfg);
        g_valid_train = graph_from_pairs(g.node_names(), split.train_pos);
        std::vector<NodePair> final_pos = split.train_pos;
        final_pos.insert(final_pos.end(), split.valid_pos.begin(),
                         split.valid_pos.end());
        g_test_train = graph_from_pairs(g.node_names(), final_pos);
        validation = labeled_items(split.valid_pos, split.valid_neg);
        test_items = labeled_items(split.test_pos, split.test_neg);
    }
    valid_graph = &g_valid_train;
    test_graph = &g_test_train;

    tc.seed = derive_seed(cfg.master_seed, "amf-validation");
    amf_valid = train_amf(*valid_graph, tc);
    tc.seed = derive_seed(cfg.master_seed, "amf-final");
    amf_test = train_amf(*test_graph, tc);

    std::ofstream csv(cfg.out_dir + "/alpha_sweep.csv");
    csv << "alpha,validation_auroc,test_auroc\n";
    for (double alpha : cfg.alpha_grid) {
        AmfModel mv = propagate_factors(*valid_graph, amf_valid, alpha);
        AmfModel mt = propagate_factors(*test_graph, amf_test, alpha);
        double val_auc =
            auroc(with_scores(validation, amf_scores(mv, validation,
                                                     cfg.workers)));
        double test_auc = auroc(
            with_scores(test_items, amf_scores(mt, test_items, cfg.workers)));
        csv << format_double(alpha) << ',' << format_double(val_auc) << ','
            << format_double(test_auc) << '\n';
    }
}

void run_export_embeddings(const ExperimentConfig& cfg) {
    if (cfg.edges.empty())
        throw std::invalid_argument("export-embeddings needs `edges`");
    fs::create_directories(cfg.out_dir);
    InteractionGraph g = load_edge_list(cfg.edges, cfg.delimiter);
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.master_seed, "amf-export");
    AmfModel model = train_amf(g, tc);
    if (cfg.export_alpha > 0.0)
        model = propagate_factors(g, model, cfg.export_alpha);
    export_embeddings(g, model, cfg.out_dir + "/embeddings.tsv",
                      cfg.export_alpha);
    save_model(g, model, cfg.out_dir + "/model.tsv");
}

}  // namespace ddikit
