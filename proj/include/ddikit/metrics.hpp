#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ddikit/graph.hpp"

namespace ddikit {

// Mann-Whitney AUROC via average ranks; ties count half. Throws if either
// class is empty.
double auroc(const ScoredPairs& sp);
double auroc(const std::vector<double>& scores,
             const std::vector<std::uint8_t>& labels);

// Area under the precision-recall curve with step interpolation
// (precision held constant between recall steps). Throws without positives.
double aupr(const ScoredPairs& sp);
double aupr(const std::vector<double>& scores,
            const std::vector<std::uint8_t>& labels);

// Curve samples: ROC as (fpr, tpr), PR as (recall, precision), one point
// per distinct score threshold.
std::vector<std::pair<double, double>> roc_points(const ScoredPairs& sp);
std::vector<std::pair<double, double>> pr_points(const ScoredPairs& sp);

// Fraction of positives among the top n, ties broken by score descending
// then input position ascending.
double precision_at(const ScoredPairs& sp, std::size_t n);

// Mean over drugs with at least one positive candidate of the precision
// over that drug's top-n candidates; lists shorter than n use their
// actual length as denominator.
double per_drug_avg_precision_at(const ScoredPairs& sp, std::size_t n);

struct BootstrapResult {
    double delta_auroc = 0.0;  // auroc(a) - auroc(b) on the full data
    double p_value = 1.0;      // two-sided
    double ci_low = 0.0;       // 95% percentile interval
    double ci_high = 0.0;
};

// Paired bootstrap over shared candidate pairs: resamples indices with
// replacement B times and studies the ΔAUROC distribution.
BootstrapResult paired_bootstrap_compare(const ScoredPairs& a,
                                         const ScoredPairs& b, std::size_t B,
                                         std::uint64_t seed);

struct EvalReport {
    double auroc = 0.0;
    double aupr = 0.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::vector<std::pair<double, double>> roc;
    std::vector<std::pair<double, double>> pr;
    std::map<std::size_t, double> precision_at;
    std::map<std::size_t, double> per_drug_precision_at;
};

EvalReport evaluate(const ScoredPairs& sp,
                    const std::vector<std::size_t>& precision_ns = {},
                    const std::vector<std::size_t>& per_drug_ns = {});

}  // namespace ddikit
