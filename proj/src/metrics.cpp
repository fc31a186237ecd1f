#include "gges/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gges/errors.hpp"
#include "gges/random.hpp"
#include "gges/search.hpp"

namespace gges {

namespace {

std::optional<double> ratio(int num, int den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

PatternMetrics pattern_metrics(const Pattern &estimated, const Pattern &reference) {
    if (estimated.names() != reference.names()) throw InputError("metrics", "patterns are over different node sets");
    const int n = estimated.size();
    int adj_est = 0, adj_ref = 0, adj_tp = 0;
    int arrow_est = 0, arrow_ref = 0, arrow_tp = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (a < b) {
                const bool e = estimated.adjacent(a, b);
                const bool r = reference.adjacent(a, b);
                adj_est += e;
                adj_ref += r;
                adj_tp += e && r;
            }
            const bool e = estimated.has_directed(a, b);
            const bool r = reference.has_directed(a, b);
            arrow_est += e;
            arrow_ref += r;
            arrow_tp += e && r;
        }
    }
    return {ratio(adj_tp, adj_est), ratio(adj_tp, adj_ref), ratio(arrow_tp, arrow_est), ratio(arrow_tp, arrow_ref)};
}

std::vector<std::vector<Eigen::Index>> kfold_partition(Eigen::Index n_rows, int k, std::uint64_t seed) {
    if (k < 2) throw InputError("metrics", "fold count must be at least 2");
    if (n_rows < 2 * static_cast<Eigen::Index>(k)) throw InputError("metrics", "need at least 2k rows for k folds");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_rows));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
    const Eigen::Index base = n_rows / k;
    const Eigen::Index extra = n_rows % k;
    auto it = order.begin();
    for (int f = 0; f < k; ++f) {
        const Eigen::Index size = base + (f < extra ? 1 : 0);
        folds[static_cast<std::size_t>(f)].assign(it, it + size);
        it += size;
    }
    return folds;
}

PatternMetrics mean_metrics(const std::vector<PatternMetrics> &metrics) {
    auto mean_of = [&](std::optional<double> PatternMetrics::*field) -> std::optional<double> {
        double sum = 0.0;
        int count = 0;
        for (const auto &m : metrics) {
            if (const auto &v = m.*field) {
                sum += *v;
                ++count;
            }
        }
        if (count == 0) return std::nullopt;
        return sum / count;
    };
    return {mean_of(&PatternMetrics::ap), mean_of(&PatternMetrics::ar), mean_of(&PatternMetrics::ahp),
            mean_of(&PatternMetrics::ahr)};
}

double heldout_loglik(const Dag &dag, const SufficientStats &train_stats, const Dataset &test, double variance_floor) {
    if (dag.size() != train_stats.dim() || test.cols() != dag.size()) {
        throw InputError("metrics", "graph, statistics and test data disagree on variable count");
    }
    if (test.rows() == 0) throw InputError("metrics", "empty test set");
    Eigen::VectorXd total = Eigen::VectorXd::Zero(test.rows());
    for (int v = 0; v < dag.size(); ++v) {
        const auto parents = dag.parents(v);
        const Eigen::VectorXd beta = regression_coefficients(train_stats.cov, v, parents);
        double explained = 0.0;
        for (Eigen::Index r = 0; r < beta.size(); ++r) explained += beta(r) * train_stats.cov(parents[static_cast<std::size_t>(r)], v);
        const double var = std::max(variance_floor, train_stats.cov(v, v) - explained);

        Eigen::VectorXd pred = Eigen::VectorXd::Constant(test.rows(), train_stats.means(v));
        for (Eigen::Index r = 0; r < beta.size(); ++r) {
            const int pa = parents[static_cast<std::size_t>(r)];
            pred += beta(r) * (test.values.col(pa).array() - train_stats.means(pa)).matrix();
        }
        const Eigen::ArrayXd resid = test.values.col(v) - pred;
        total.array() += -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * resid.square() / var;
    }
    return total.mean();
}

CrossValReport kfold_evaluate(const Dataset &data, const VariableGrouping &grouping, int k, std::uint64_t seed,
                              const ScoreConfig &config, const std::optional<Pattern> &reference) {
    auto folds = kfold_partition(data.rows(), k, seed);

    CrossValReport report;
    report.k = k;
    report.seed = seed;
    if (reference) {
        if (reference->names() != data.names) throw InputError("metrics", "reference pattern nodes differ from data columns");
        report.reference = ReferenceKind::ground_truth;
        report.reference_pattern = *reference;
    } else {
        report.reference = ReferenceKind::full_data_pattern;
        report.reference_pattern = gges(sufficient_stats(data), grouping, config).pattern;
    }

    std::vector<char> in_test(static_cast<std::size_t>(data.rows()));
    std::vector<PatternMetrics> ok;
    for (const auto &fold : folds) {
        std::fill(in_test.begin(), in_test.end(), 0);
        for (auto r : fold) in_test[static_cast<std::size_t>(r)] = 1;
        std::vector<Eigen::Index> train;
        train.reserve(static_cast<std::size_t>(data.rows()) - fold.size());
        for (Eigen::Index r = 0; r < data.rows(); ++r)
            if (!in_test[static_cast<std::size_t>(r)]) train.push_back(r);

        FoldResult result;
        result.train_rows = static_cast<Eigen::Index>(train.size());
        result.test_rows = static_cast<Eigen::Index>(fold.size());
        try {
            const auto train_stats = sufficient_stats(data.select_rows(train));
            auto search = gges(train_stats, grouping, config);
            result.metrics = pattern_metrics(search.pattern, report.reference_pattern);
            try {
                result.heldout_loglik = heldout_loglik(search.dag, train_stats, data.select_rows(fold), config.variance_floor);
            } catch (const CollinearError &) {
                result.heldout_loglik.reset();
            }
            result.pattern = std::move(search.pattern);
            ok.push_back(result.metrics);
        } catch (const DegenerateColumnError &e) {
            result.failed = true;
            result.error = e.what();
        } catch (const CollinearError &e) {
            result.failed = true;
            result.error = e.what();
        }
        report.per_fold.push_back(std::move(result));
    }
    report.mean = mean_metrics(ok);
    return report;
}

}  // namespace gges
