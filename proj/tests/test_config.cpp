#include <doctest.h>

#include "ddikit/config.hpp"
#include "ddikit/experiment.hpp"

using namespace ddikit;

TEST_CASE("config parsing basics") {
    Config cfg = Config::parse(
        "# comment line\n"
        "protocol = holdout\n"
        "seed=17\n"
        "dropout = 0.25   # trailing comment\n"
        "\n"
        "alpha_grid = 0.0, 0.5, 1.0\n"
        "predictors = AMF, XGB\n"
        "epochs = 7\n");
    CHECK(cfg.get_string("protocol") == "holdout");
    CHECK(cfg.get_seed("seed", 0) == 17);
    CHECK(cfg.get_int("epochs", -1) == 7);
    CHECK(cfg.get_double("dropout", -1.0) == doctest::Approx(0.25));
    CHECK(cfg.get_double_list("alpha_grid", {}) ==
          std::vector<double>{0.0, 0.5, 1.0});
    CHECK(cfg.get_string_list("predictors", {}) ==
          std::vector<std::string>{"AMF", "XGB"});
    CHECK_FALSE(cfg.has("missing"));
    CHECK(cfg.get_int("missing", 42) == 42);
    CHECK(cfg.get_string("missing", "dflt") == "dflt");
}

TEST_CASE("later keys win and malformed values throw") {
    Config cfg = Config::parse("x = 1\nx = 2\n");
    CHECK(cfg.get_int("x", 0) == 2);
    Config bad = Config::parse("n = not_a_number\n");
    CHECK_THROWS(bad.get_int("n", 0));
    CHECK_THROWS(bad.get_double("n", 0.0));
    CHECK_THROWS(Config::parse("line without equals\n"));
}

TEST_CASE("experiment config picks up overrides") {
    Config raw = Config::parse(
        "protocol = crossval\n"
        "edges = /tmp/edges.csv\n"
        "seed = 99\n"
        "workers = 3\n"
        "embedding_dim = 16\n"
        "dropout = 0.1\n"
        "learning_rate = 0.02\n"
        "epochs = 3\n"
        "batch_size = 64\n"
        "alpha_grid = 0.0, 0.2\n"
        "folds = 4\n"
        "repeats = 2\n"
        "katz_beta = 0.07\n"
        "katz_length = 2\n"
        "predictors = AMF, AJ\n"
        "precision_ns = 1, 10\n");
    ExperimentConfig cfg = ExperimentConfig::from_config(raw);
    CHECK(cfg.protocol == "crossval");
    CHECK(cfg.edges == "/tmp/edges.csv");
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.workers == 3);
    CHECK(cfg.train.embedding_dim == 16);
    CHECK(cfg.train.dropout == doctest::Approx(0.1));
    CHECK(cfg.train.learning_rate == doctest::Approx(0.02));
    CHECK(cfg.train.epochs == 3);
    CHECK(cfg.train.batch_size == 64);
    CHECK(cfg.alpha_grid == std::vector<double>{0.0, 0.2});
    CHECK(cfg.folds == 4);
    CHECK(cfg.repeats == 2);
    CHECK(cfg.katz.beta == doctest::Approx(0.07));
    CHECK(cfg.katz.max_length == 2);
    CHECK(cfg.crossval_predictors ==
          std::vector<std::string>{"AMF", "AJ"});
    CHECK(cfg.precision_ns == std::vector<std::size_t>{1, 10});
}

TEST_CASE("experiment config defaults match the documented baseline") {
    ExperimentConfig cfg = ExperimentConfig::from_config(Config::parse(""));
    CHECK(cfg.train.embedding_dim == 256);
    CHECK(cfg.train.dropout == doctest::Approx(0.3));
    CHECK(cfg.train.learning_rate == doctest::Approx(0.01));
    CHECK(cfg.train.epochs == 5);
    CHECK(cfg.train.batch_size == 1024);
    CHECK(cfg.katz.beta == doctest::Approx(0.05));
    CHECK(cfg.katz.max_length == 3);
    CHECK(cfg.test_fraction == doctest::Approx(0.30));
    CHECK(cfg.validation_fraction == doctest::Approx(0.10));
    CHECK(cfg.folds == 5);
    CHECK(cfg.repeats == 5);
    CHECK(cfg.alpha_grid.size() == 11);
}
