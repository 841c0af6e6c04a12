#include <doctest.h>

#include <cmath>
#include <random>

#include "ddikit/metrics.hpp"
#include "oracles.hpp"

using namespace ddikit;

namespace {

ScoredPairs make_scored(const std::vector<double>& scores,
                        const std::vector<std::uint8_t>& labels) {
    ScoredPairs sp;
    for (std::size_t i = 0; i < scores.size(); ++i)
        sp.pairs.emplace_back(static_cast<NodeId>(2 * i),
                              static_cast<NodeId>(2 * i + 1));
    sp.scores = scores;
    sp.labels = labels;
    return sp;
}

}  // namespace

TEST_CASE("auroc on simple rankings") {
    CHECK(auroc(make_scored({0.9, 0.8, 0.1}, {1, 1, 0})) == 1.0);
    CHECK(auroc(make_scored({0.2, 0.9, 0.8, 0.1}, {1, 0, 1, 0})) == 0.5);
    CHECK(auroc(make_scored({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0})) == 0.5);
    CHECK_THROWS(auroc(make_scored({0.1, 0.2}, {1, 1})));
}

TEST_CASE("auroc equals the pairwise comparison oracle with ties") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0, 1);
    std::uniform_int_distribution<int> quantize(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + trial % 40;
        std::vector<double> scores(n);
        std::vector<std::uint8_t> labels(n);
        bool any_pos = false, any_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = quantize(rng) / 5.0;  // force ties
            labels[i] = unif(rng) < 0.4;
            (labels[i] ? any_pos : any_neg) = true;
        }
        if (!any_pos || !any_neg) continue;
        CHECK(std::abs(auroc(scores, labels) -
                       oracle::auroc_pairwise(scores, labels)) < 1e-12);
    }
}

TEST_CASE("auroc is invariant under strictly monotone score transforms") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(0, 1);
    std::vector<double> scores(50);
    std::vector<std::uint8_t> labels(50);
    for (std::size_t i = 0; i < 50; ++i) {
        scores[i] = unif(rng);
        labels[i] = i % 3 == 0;
    }
    double base = auroc(scores, labels);
    std::vector<double> transformed = scores;
    for (double& s : transformed) s = std::exp(3.0 * s) + 1.0;
    CHECK(auroc(transformed, labels) == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("auroc complements under score negation for tie-free inputs") {
    std::mt19937_64 rng(3);
    std::vector<double> scores(40);
    std::vector<std::uint8_t> labels(40);
    for (std::size_t i = 0; i < 40; ++i) {
        scores[i] = static_cast<double>(i) + 0.5;  // distinct
        labels[i] = std::uniform_real_distribution<double>(0, 1)(rng) < 0.5;
    }
    labels[0] = 1;
    labels[1] = 0;
    std::vector<double> negated = scores;
    for (double& s : negated) s = -s;
    std::shuffle(scores.begin(), scores.end(), rng);
    CHECK(auroc(scores, labels) + auroc([&] {
              std::vector<double> neg = scores;
              for (double& s : neg) s = -s;
              return neg;
          }(), labels) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("aupr on hand-enumerated fixtures") {
    CHECK(aupr(make_scored({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0})) == 1.0);
    // single positive ranked last of 4
    CHECK(aupr(make_scored({0.9, 0.8, 0.7, 0.1}, {0, 0, 0, 1})) ==
          doctest::Approx(0.25));
    CHECK_THROWS(aupr(make_scored({0.5, 0.4}, {0, 0})));
}

TEST_CASE("aupr of random scores approaches prevalence") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif(0, 1);
    const std::size_t n = 100000;
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = unif(rng);
        labels[i] = unif(rng) < 0.3;
    }
    CHECK(aupr(scores, labels) == doctest::Approx(0.3).epsilon(0.05 / 0.3));
}

TEST_CASE("precision at n") {
    ScoredPairs sp = make_scored({0.9, 0.8, 0.7, 0.1}, {1, 0, 1, 0});
    CHECK(precision_at(sp, 1) == 1.0);
    CHECK(precision_at(sp, 2) == 0.5);
    CHECK(precision_at(sp, 4) == 0.5);  // prevalence at n = all
    CHECK_THROWS(precision_at(sp, 0));
    CHECK_THROWS(precision_at(sp, 5));
    // tie break: equal scores resolved by input position
    ScoredPairs tie = make_scored({0.5, 0.5}, {1, 0});
    CHECK(precision_at(tie, 1) == 1.0);
}

TEST_CASE("precision@n numerator is non-decreasing in n") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0, 1);
    ScoredPairs sp;
    for (std::size_t i = 0; i < 60; ++i) {
        sp.pairs.emplace_back(static_cast<NodeId>(2 * i),
                              static_cast<NodeId>(2 * i + 1));
        sp.scores.push_back(unif(rng));
        sp.labels.push_back(unif(rng) < 0.4);
    }
    double prev_hits = 0.0;
    for (std::size_t n = 1; n <= sp.size(); ++n) {
        double hits = precision_at(sp, n) * static_cast<double>(n);
        CHECK(hits >= prev_hits - 1e-9);
        prev_hits = hits;
    }
}

TEST_CASE("metrics are invariant to input row order") {
    std::mt19937_64 rng(6);
    ScoredPairs sp = make_scored({0.9, 0.3, 0.7, 0.2, 0.8, 0.5},
                                 {1, 0, 1, 0, 0, 1});
    double base_auroc = auroc(sp);
    double base_aupr = aupr(sp);
    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    ScoredPairs shuffled;
    for (std::size_t i : perm) {
        shuffled.pairs.push_back(sp.pairs[i]);
        shuffled.scores.push_back(sp.scores[i]);
        shuffled.labels.push_back(sp.labels[i]);
    }
    CHECK(auroc(shuffled) == doctest::Approx(base_auroc).epsilon(1e-14));
    CHECK(aupr(shuffled) == doctest::Approx(base_aupr).epsilon(1e-14));
}

TEST_CASE("per-drug average precision at n") {
    // drug 0 pairs with 1 and 2; drug 3 pairs with 4
    ScoredPairs sp;
    sp.pairs = {{0, 1}, {0, 2}, {3, 4}};
    sp.scores = {0.9, 0.5, 0.8};
    sp.labels = {1, 0, 0};
    // drugs with a positive candidate: 0 and 1; both rank the 0-1 pair first
    CHECK(per_drug_avg_precision_at(sp, 1) == doctest::Approx(1.0));

    ScoredPairs two;
    two.pairs = {{0, 1}, {2, 3}};
    two.scores = {0.9, 0.8};
    two.labels = {1, 0};
    // drug with fewer than n candidates uses its list length
    CHECK(per_drug_avg_precision_at(two, 5) == doctest::Approx(1.0));

    ScoredPairs none;
    none.pairs = {{0, 1}};
    none.scores = {0.5};
    none.labels = {0};
    CHECK_THROWS(per_drug_avg_precision_at(none, 1));
}

TEST_CASE("per-drug mean over mixed drugs") {
    // drug 0: top-1 positive; drug 2: top-1 negative but has a positive below
    ScoredPairs sp;
    sp.pairs = {{0, 1}, {2, 3}, {2, 4}};
    sp.scores = {0.9, 0.8, 0.2};
    sp.labels = {1, 0, 1};
    // drugs with positives: 0 (1.0), 1 (1.0), 2 (0.0), 4 (top-1 is its only
    // candidate, positive -> 1.0)
    CHECK(per_drug_avg_precision_at(sp, 1) == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("paired bootstrap of a model against itself is degenerate") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0, 1);
    ScoredPairs a;
    for (std::size_t i = 0; i < 200; ++i) {
        a.pairs.emplace_back(static_cast<NodeId>(2 * i),
                             static_cast<NodeId>(2 * i + 1));
        a.scores.push_back(unif(rng));
        a.labels.push_back(unif(rng) < 0.5);
    }
    BootstrapResult r = paired_bootstrap_compare(a, a, 200, 11);
    CHECK(r.delta_auroc == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(r.ci_low == 0.0);
    CHECK(r.ci_high == 0.0);
}

TEST_CASE("paired bootstrap separates a perfect model from noise") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(0, 1);
    ScoredPairs good, noise;
    for (std::size_t i = 0; i < 2000; ++i) {
        NodePair p(static_cast<NodeId>(2 * i), static_cast<NodeId>(2 * i + 1));
        std::uint8_t y = unif(rng) < 0.5;
        good.pairs.push_back(p);
        noise.pairs.push_back(p);
        good.labels.push_back(y);
        noise.labels.push_back(y);
        good.scores.push_back(y ? 0.9 + 0.1 * unif(rng) : 0.1 * unif(rng));
        noise.scores.push_back(unif(rng));
    }
    BootstrapResult r = paired_bootstrap_compare(good, noise, 500, 13);
    CHECK(r.p_value < 0.01);
    CHECK(r.ci_low <= r.delta_auroc);
    CHECK(r.delta_auroc <= r.ci_high);
    CHECK(r.delta_auroc > 0.3);
}

TEST_CASE("paired bootstrap rejects mismatched inputs") {
    ScoredPairs a = make_scored({0.5, 0.4}, {1, 0});
    ScoredPairs b = make_scored({0.5, 0.4}, {1, 0});
    b.pairs[0] = NodePair(90, 91);
    CHECK_THROWS(paired_bootstrap_compare(a, b, 10, 1));
}

TEST_CASE("evaluate fills the report") {
    ScoredPairs sp = make_scored({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0});
    EvalReport report = evaluate(sp, {1, 2, 4}, {1});
    CHECK(report.auroc == 1.0);
    CHECK(report.aupr == 1.0);
    CHECK(report.positives == 2);
    CHECK(report.negatives == 2);
    CHECK(report.precision_at.at(1) == 1.0);
    CHECK(report.precision_at.at(4) == 0.5);
    CHECK(report.roc.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(report.roc.back() == std::pair<double, double>{1.0, 1.0});
}
