#ifndef GGES_SCORING_HPP
#define GGES_SCORING_HPP

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gges/dataset.hpp"
#include "gges/errors.hpp"
#include "gges/graph.hpp"

namespace gges {

enum class StatsSource { empirical, population };

/// (n, means, covariance) reduction of a dataset. Every score and effect in
/// the library is a function of these alone.
struct SufficientStats {
    Eigen::Index n = 0;
    Eigen::VectorXd means;
    Eigen::MatrixXd cov;  // unbiased, n - 1 denominator
    StatsSource source = StatsSource::empirical;
    std::vector<std::string> names;

    int dim() const { return static_cast<int>(cov.rows()); }

    /// Throws InputError when the shape, symmetry or diagonal invariants fail.
    void validate() const;
};

struct ScoreConfig {
    double penalty_discount = 1.0;
    double variance_floor = 1e-12;

    void validate() const;
};

/// Means and unbiased covariance of the columns. Throws DegenerateColumnError
/// for a constant column and InputError for fewer than two rows.
SufficientStats sufficient_stats(const Dataset &data);

/// Relative pivot threshold below which a covariance block counts as singular.
inline constexpr double kSingularPivot = 1e-10;

/// Least-squares coefficients of `target` on `regressors`, solved from the
/// covariance matrix by a pivoted LDLT factorisation.
/// Throws CollinearError when a pivot falls below kSingularPivot times the
/// largest diagonal entry of the regressor block.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> regression_coefficients(
    const Eigen::MatrixBase<Derived> &cov, int target, std::span<const int> regressors) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const auto k = static_cast<Eigen::Index>(regressors.size());
    if (k == 0) return Vector(0);

    Matrix block(k, k);
    Vector cross(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        cross(r) = cov(regressors[static_cast<std::size_t>(r)], target);
        for (Eigen::Index c = 0; c < k; ++c)
            block(r, c) = cov(regressors[static_cast<std::size_t>(r)], regressors[static_cast<std::size_t>(c)]);
    }

    const Scalar scale = block.diagonal().maxCoeff();
    Eigen::LDLT<Matrix> ldlt(block);
    if (ldlt.info() != Eigen::Success || !(scale > Scalar(0)) ||
        !(ldlt.vectorD().minCoeff() > Scalar(kSingularPivot) * scale)) {
        throw CollinearError("scoring", "regressor covariance block is singular");
    }
    return ldlt.solve(cross);
}

/// Variance of `child` left after regressing it on `parents`, unclamped.
template <typename Derived>
typename Derived::Scalar residual_variance(const Eigen::MatrixBase<Derived> &cov, int child,
                                           std::span<const int> parents) {
    auto beta = regression_coefficients(cov, child, parents);
    typename Derived::Scalar explained(0);
    for (Eigen::Index r = 0; r < beta.size(); ++r) explained += beta(r) * cov(parents[static_cast<std::size_t>(r)], child);
    return cov(child, child) - explained;
}

/// Linear-Gaussian BIC of one family, structure-independent constants dropped:
///   -(n/2) ln(s2) - c (|parents| + 1)/2 ln(n)
/// where s2 is the floored residual variance and c the penalty discount.
double local_bic(int child, std::span<const int> parents, const SufficientStats &stats,
                 const ScoreConfig &config = {});

/// Sum of local_bic over all nodes.
double graph_score(const Dag &dag, const SufficientStats &stats, const ScoreConfig &config = {});

/// Decomposable family score the search runs against.
class LocalScore {
public:
    virtual ~LocalScore() = default;
    virtual int dim() const = 0;
    /// Parents sorted ascending. Throws CollinearError for singular families.
    virtual double local(int child, std::span<const int> parents) const = 0;
};

/// local_bic behind the LocalScore interface, memoised per (child, parents).
/// The cache is not synchronised; use one instance per thread.
class BicScore final : public LocalScore {
public:
    BicScore(const SufficientStats &stats, ScoreConfig config);

    int dim() const override { return stats_.dim(); }
    double local(int child, std::span<const int> parents) const override;

    const SufficientStats &stats() const { return stats_; }
    const ScoreConfig &config() const { return config_; }

private:
    const SufficientStats &stats_;
    ScoreConfig config_;
    mutable std::map<std::vector<int>, double> cache_;  // key: child followed by parents
};

}  // namespace gges

#endif  // GGES_SCORING_HPP
