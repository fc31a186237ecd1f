#ifndef GGES_SIMULATE_HPP
#define GGES_SIMULATE_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "gges/dataset.hpp"
#include "gges/graph.hpp"
#include "gges/scoring.hpp"

namespace gges {

inline constexpr double kCoefficientFloor = 0.1;
inline constexpr Eigen::Index kPopulationPseudoCount = 10000;

/// Linear-Gaussian structural equation model X = B X + e, e ~ N(0, diag(noise)).
/// coefficients(child, parent) is nonzero exactly on the DAG's edges.
class SemModel {
public:
    /// Throws InputError when the coefficients disagree with the DAG, fall
    /// below the floor in magnitude, or a noise variance is not positive.
    SemModel(Dag dag, Eigen::MatrixXd coefficients, Eigen::VectorXd noise_variances,
             double coefficient_floor = kCoefficientFloor);

    const Dag &dag() const { return dag_; }
    const Eigen::MatrixXd &coefficients() const { return coefficients_; }
    const Eigen::VectorXd &noise_variances() const { return noise_; }
    double coefficient(int parent, int child) const { return coefficients_(child, parent); }
    int size() const { return dag_.size(); }

    friend bool operator==(const SemModel &a, const SemModel &b) {
        return a.dag_ == b.dag_ && a.coefficients_ == b.coefficients_ && a.noise_ == b.noise_;
    }

private:
    Dag dag_;
    Eigen::MatrixXd coefficients_;
    Eigen::VectorXd noise_;
};

/// Uniform random node order, then each forward pair kept with probability
/// edge_prob. Nodes are named X1..Xp.
Dag random_dag(int p, double edge_prob, std::uint64_t seed);

/// Coefficients uniform on +-[coef_low, coef_high] with random sign; noise
/// variances uniform on [0.5, 1.5].
SemModel random_sem(const Dag &dag, double coef_low, double coef_high, std::uint64_t seed);

/// Population covariance (I - B)^-1 Omega (I - B)^-T with zero means.
SufficientStats implied_covariance(const SemModel &sem, Eigen::Index pseudo_count = kPopulationPseudoCount);

/// Ancestral sampling in topological order.
Dataset sample(const SemModel &sem, Eigen::Index n, std::uint64_t seed);

/// Sum over all directed paths of the product of the edge coefficients.
double path_effect_oracle(const SemModel &sem, int exposure, int outcome);

}  // namespace gges

#endif  // GGES_SIMULATE_HPP
