#include "gges/scoring.hpp"

#include <algorithm>
#include <string>

namespace gges {

void SufficientStats::validate() const {
    const auto p = cov.rows();
    if (cov.cols() != p || means.size() != p) throw InputError("scoring", "statistics dimensions disagree");
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != p) {
        throw InputError("scoring", "statistics name list does not match dimension");
    }
    if (n < 1) throw InputError("scoring", "row count must be positive");
    for (Eigen::Index i = 0; i < p; ++i) {
        if (!(cov(i, i) >= 0.0)) throw InputError("scoring", "negative variance on the diagonal");
        for (Eigen::Index j = i + 1; j < p; ++j) {
            double scale = std::max({std::abs(cov(i, j)), std::abs(cov(j, i)), 1e-300});
            if (std::abs(cov(i, j) - cov(j, i)) > 1e-12 * scale) throw InputError("scoring", "covariance is not symmetric");
        }
    }
}

void ScoreConfig::validate() const {
    if (!(penalty_discount > 0.0)) throw InputError("scoring", "penalty discount must be positive");
    if (!(variance_floor > 0.0)) throw InputError("scoring", "variance floor must be positive");
}

SufficientStats sufficient_stats(const Dataset &data) {
    const auto n = data.rows();
    if (n < 2) throw InputError("scoring", "need at least two rows for a covariance");
    SufficientStats stats;
    stats.n = n;
    stats.means = data.values.colwise().mean().transpose();
    Eigen::MatrixXd centered = data.values.rowwise() - stats.means.transpose();
    stats.cov = (centered.adjoint() * centered) / static_cast<double>(n - 1);
    stats.cov = (0.5 * (stats.cov + stats.cov.transpose())).eval();
    stats.source = StatsSource::empirical;
    stats.names = data.names;
    for (Eigen::Index j = 0; j < stats.cov.rows(); ++j) {
        if (!(stats.cov(j, j) > 0.0)) {
            throw DegenerateColumnError("scoring", j < static_cast<Eigen::Index>(data.names.size())
                                                       ? data.names[static_cast<std::size_t>(j)]
                                                       : std::to_string(j));
        }
    }
    return stats;
}

double local_bic(int child, std::span<const int> parents, const SufficientStats &stats, const ScoreConfig &config) {
    const int p = stats.dim();
    if (child < 0 || child >= p) throw InputError("scoring", "child index out of range");
    std::vector<int> sorted(parents.begin(), parents.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] < 0 || sorted[i] >= p) throw InputError("scoring", "parent index out of range");
        if (sorted[i] == child) throw InputError("scoring", "child listed among its own parents");
        if (i > 0 && sorted[i] == sorted[i - 1]) throw InputError("scoring", "duplicate parent index");
    }

    const double resid = std::max(config.variance_floor, residual_variance(stats.cov, child, sorted));
    const double n = static_cast<double>(stats.n);
    const double k = static_cast<double>(sorted.size() + 1);
    return -0.5 * n * std::log(resid) - config.penalty_discount * 0.5 * k * std::log(n);
}

double graph_score(const Dag &dag, const SufficientStats &stats, const ScoreConfig &config) {
    if (dag.size() != stats.dim()) throw InputError("scoring", "graph and statistics have different variable counts");
    double total = 0.0;
    for (int v = 0; v < dag.size(); ++v) total += local_bic(v, dag.parents(v), stats, config);
    return total;
}

BicScore::BicScore(const SufficientStats &stats, ScoreConfig config) : stats_(stats), config_(config) {
    stats_.validate();
    config_.validate();
}

double BicScore::local(int child, std::span<const int> parents) const {
    std::vector<int> key;
    key.reserve(parents.size() + 1);
    key.push_back(child);
    key.insert(key.end(), parents.begin(), parents.end());
    std::sort(key.begin() + 1, key.end());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    double value = local_bic(child, std::span<const int>(key).subspan(1), stats_, config_);
    cache_.emplace(std::move(key), value);
    return value;
}

}  // namespace gges
