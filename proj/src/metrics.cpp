#include "ddikit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace ddikit {

namespace {

void check_scored(const ScoredPairs& sp) {
    if (!sp.has_scores() || !sp.has_labels() ||
        sp.scores.size() != sp.pairs.size() ||
        sp.labels.size() != sp.pairs.size())
        throw std::invalid_argument("scored pairs need scores and labels");
}

std::pair<std::size_t, std::size_t> class_counts(
    const std::vector<std::uint8_t>& labels) {
    std::size_t pos = 0;
    for (std::uint8_t y : labels) pos += y ? 1 : 0;
    return {pos, labels.size() - pos};
}

// Indices ordered by score descending, input position ascending on ties.
std::vector<std::size_t> ranking(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) {
                         return scores[x] > scores[y];
                     });
    return order;
}

}  // namespace

double auroc(const std::vector<double>& scores,
             const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores/labels length mismatch");
    auto [pos, neg] = class_counts(labels);
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("auroc needs both classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return scores[x] < scores[y];
    });
    // average ranks over tie groups
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) pos_rank_sum += avg_rank;
        i = j;
    }
    double p = static_cast<double>(pos);
    double u = pos_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(neg));
}

double auroc(const ScoredPairs& sp) {
    check_scored(sp);
    return auroc(sp.scores, sp.labels);
}

double aupr(const std::vector<double>& scores,
            const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores/labels length mismatch");
    auto [pos, neg] = class_counts(labels);
    (void)neg;
    if (pos == 0) throw std::invalid_argument("aupr needs a positive");

    std::vector<std::size_t> order = ranking(scores);
    double area = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        // thresholds fall between distinct scores; ties move together
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]]) ++tp; else ++fp;
            ++j;
        }
        double recall = static_cast<double>(tp) / static_cast<double>(pos);
        double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return area;
}

double aupr(const ScoredPairs& sp) {
    check_scored(sp);
    return aupr(sp.scores, sp.labels);
}

std::vector<std::pair<double, double>> roc_points(const ScoredPairs& sp) {
    check_scored(sp);
    auto [pos, neg] = class_counts(sp.labels);
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("roc needs both classes");
    std::vector<std::size_t> order = ranking(sp.scores);
    std::vector<std::pair<double, double>> points{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0, i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() &&
               sp.scores[order[j]] == sp.scores[order[i]]) {
            if (sp.labels[order[j]]) ++tp; else ++fp;
            ++j;
        }
        points.emplace_back(static_cast<double>(fp) / neg,
                            static_cast<double>(tp) / pos);
        i = j;
    }
    return points;
}

std::vector<std::pair<double, double>> pr_points(const ScoredPairs& sp) {
    check_scored(sp);
    auto [pos, neg] = class_counts(sp.labels);
    (void)neg;
    if (pos == 0) throw std::invalid_argument("pr needs a positive");
    std::vector<std::size_t> order = ranking(sp.scores);
    std::vector<std::pair<double, double>> points;
    std::size_t tp = 0, fp = 0, i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() &&
               sp.scores[order[j]] == sp.scores[order[i]]) {
            if (sp.labels[order[j]]) ++tp; else ++fp;
            ++j;
        }
        points.emplace_back(static_cast<double>(tp) / pos,
                            static_cast<double>(tp) / (tp + fp));
        i = j;
    }
    return points;
}

double precision_at(const ScoredPairs& sp, std::size_t n) {
    check_scored(sp);
    if (n < 1 || n > sp.size())
        throw std::out_of_range("precision@n: n out of range");
    std::vector<std::size_t> order = ranking(sp.scores);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (sp.labels[order[i]]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n);
}

double per_drug_avg_precision_at(const ScoredPairs& sp, std::size_t n) {
    check_scored(sp);
    if (n < 1) throw std::out_of_range("per-drug precision@n: n must be >= 1");
    std::unordered_map<NodeId, std::vector<std::size_t>> per_drug;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        per_drug[sp.pairs[i].a].push_back(i);
        per_drug[sp.pairs[i].b].push_back(i);
    }
    double sum = 0.0;
    std::size_t drugs = 0;
    for (auto& [drug, rows] : per_drug) {
        bool has_positive = false;
        for (std::size_t r : rows)
            if (sp.labels[r]) { has_positive = true; break; }
        if (!has_positive) continue;
        std::stable_sort(rows.begin(), rows.end(),
                         [&](std::size_t x, std::size_t y) {
                             return sp.scores[x] > sp.scores[y];
                         });
        std::size_t take = std::min(n, rows.size());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < take; ++i)
            if (sp.labels[rows[i]]) ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(take);
        ++drugs;
    }
    if (drugs == 0)
        throw std::invalid_argument(
            "per-drug precision@n: no drug has a positive candidate");
    return sum / static_cast<double>(drugs);
}

BootstrapResult paired_bootstrap_compare(const ScoredPairs& a,
                                         const ScoredPairs& b, std::size_t B,
                                         std::uint64_t seed) {
    check_scored(a);
    check_scored(b);
    if (a.pairs.size() != b.pairs.size() || !(a.pairs == b.pairs) ||
        a.labels != b.labels)
        throw std::invalid_argument(
            "paired bootstrap: pair lists and labels must match");
    if (B < 1) throw std::invalid_argument("paired bootstrap: B must be >= 1");

    BootstrapResult result;
    result.delta_auroc = auroc(a) - auroc(b);

    std::mt19937_64 rng(seed);
    std::size_t n = a.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> deltas;
    deltas.reserve(B);
    std::vector<double> sa(n), sb(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t rep = 0; rep < B; ++rep) {
        // redraw until the resample contains both classes
        for (int attempt = 0;; ++attempt) {
            std::size_t pos = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t idx = pick(rng);
                sa[i] = a.scores[idx];
                sb[i] = b.scores[idx];
                labels[i] = a.labels[idx];
                pos += labels[i] ? 1 : 0;
            }
            if (pos > 0 && pos < n) break;
            if (attempt > 1000)
                throw std::runtime_error(
                    "paired bootstrap: cannot draw a two-class resample");
        }
        deltas.push_back(auroc(sa, labels) - auroc(sb, labels));
    }

    std::size_t le = 0, ge = 0;
    for (double d : deltas) {
        if (d <= 0.0) ++le;
        if (d >= 0.0) ++ge;
    }
    double frac_le = static_cast<double>(le) / B;
    double frac_ge = static_cast<double>(ge) / B;
    result.p_value = std::min(1.0, 2.0 * std::min(frac_le, frac_ge));

    std::sort(deltas.begin(), deltas.end());
    auto percentile = [&](double q) {
        double idx = q * static_cast<double>(deltas.size() - 1);
        std::size_t lo = static_cast<std::size_t>(std::floor(idx));
        std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
        double frac = idx - lo;
        return deltas[lo] * (1.0 - frac) + deltas[hi] * frac;
    };
    result.ci_low = percentile(0.025);
    result.ci_high = percentile(0.975);
    return result;
}

EvalReport evaluate(const ScoredPairs& sp,
                    const std::vector<std::size_t>& precision_ns,
                    const std::vector<std::size_t>& per_drug_ns) {
    EvalReport report;
    report.auroc = auroc(sp);
    report.aupr = aupr(sp);
    auto [pos, neg] = class_counts(sp.labels);
    report.positives = pos;
    report.negatives = neg;
    report.roc = roc_points(sp);
    report.pr = pr_points(sp);
    for (std::size_t n : precision_ns)
        if (n >= 1 && n <= sp.size())
            report.precision_at[n] = precision_at(sp, n);
    for (std::size_t n : per_drug_ns)
        report.per_drug_precision_at[n] = per_drug_avg_precision_at(sp, n);
    return report;
}

}  // namespace ddikit
