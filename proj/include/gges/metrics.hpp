#ifndef GGES_METRICS_HPP
#define GGES_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gges/dataset.hpp"
#include "gges/graph.hpp"
#include "gges/grouping.hpp"
#include "gges/scoring.hpp"

namespace gges {

/// Adjacency and arrowhead precision/recall. A ratio with a zero denominator
/// is left empty.
struct PatternMetrics {
    std::optional<double> ap;
    std::optional<double> ar;
    std::optional<double> ahp;
    std::optional<double> ahr;

    friend bool operator==(const PatternMetrics &, const PatternMetrics &) = default;
};

PatternMetrics pattern_metrics(const Pattern &estimated, const Pattern &reference);

enum class ReferenceKind { full_data_pattern, ground_truth };

struct FoldResult {
    bool failed = false;
    std::string error;  // set when failed
    Eigen::Index train_rows = 0;
    Eigen::Index test_rows = 0;
    PatternMetrics metrics;
    Pattern pattern;
    /// Mean per-row Gaussian log-likelihood of the held-out rows under the
    /// learned DAG fitted on the training rows. Not used by the metrics.
    std::optional<double> heldout_loglik;
};

struct CrossValReport {
    int k = 0;
    std::uint64_t seed = 0;
    ReferenceKind reference = ReferenceKind::full_data_pattern;
    Pattern reference_pattern;
    std::vector<FoldResult> per_fold;
    PatternMetrics mean;  // over defined values of non-failed folds
};

/// Seeded shuffle of [0, n_rows) cut into k folds whose sizes differ by at
/// most one (the first n_rows % k folds get the extra row).
std::vector<std::vector<Eigen::Index>> kfold_partition(Eigen::Index n_rows, int k, std::uint64_t seed);

/// Mean over the defined entries of each metric.
PatternMetrics mean_metrics(const std::vector<PatternMetrics> &metrics);

/// Mean per-row log-likelihood of `test` under the linear-Gaussian SEM with
/// structure `dag` fitted to `train_stats`.
double heldout_loglik(const Dag &dag, const SufficientStats &train_stats, const Dataset &test,
                      double variance_floor = 1e-12);

/// k-fold evaluation of the grouped search. Without a reference the pattern
/// learned from all rows is used. Throws InputError when k < 2 or the data
/// has fewer than 2k rows.
CrossValReport kfold_evaluate(const Dataset &data, const VariableGrouping &grouping, int k, std::uint64_t seed,
                              const ScoreConfig &config = {}, const std::optional<Pattern> &reference = std::nullopt);

}  // namespace gges

#endif  // GGES_METRICS_HPP
