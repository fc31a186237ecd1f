#include "gges/simulate.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gges/errors.hpp"
#include "gges/random.hpp"

namespace gges {

SemModel::SemModel(Dag dag, Eigen::MatrixXd coefficients, Eigen::VectorXd noise_variances, double coefficient_floor)
    : dag_(std::move(dag)), coefficients_(std::move(coefficients)), noise_(std::move(noise_variances)) {
    const int p = dag_.size();
    if (coefficients_.rows() != p || coefficients_.cols() != p || noise_.size() != p) {
        throw InputError("simulate", "SEM parameter dimensions do not match the graph");
    }
    for (int child = 0; child < p; ++child) {
        for (int parent = 0; parent < p; ++parent) {
            const double b = coefficients_(child, parent);
            if (dag_.has_edge(parent, child)) {
                if (!(std::abs(b) >= coefficient_floor)) {
                    throw InputError("simulate", "coefficient on " + dag_.names()[static_cast<std::size_t>(parent)] +
                                                     " -> " + dag_.names()[static_cast<std::size_t>(child)] +
                                                     " is below the floor");
                }
            } else if (b != 0.0) {
                throw InputError("simulate", "coefficient given for a non-edge");
            }
        }
        if (!(noise_(child) > 0.0)) throw InputError("simulate", "noise variances must be positive");
    }
}

Dag random_dag(int p, double edge_prob, std::uint64_t seed) {
    if (p < 1) throw InputError("simulate", "need at least one node");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InputError("simulate", "edge probability must lie in [0, 1]");
    Rng rng(seed);
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<std::string> names;
    for (int i = 0; i < p; ++i) names.push_back("X" + std::to_string(i + 1));
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b)
            if (rng.bernoulli(edge_prob)) edges.push_back({order[a], order[b]});
    return Dag(std::move(names), edges);
}

SemModel random_sem(const Dag &dag, double coef_low, double coef_high, std::uint64_t seed) {
    if (!(coef_low > 0.0 && coef_low <= coef_high)) throw InputError("simulate", "need 0 < coef_low <= coef_high");
    Rng rng(seed);
    const int p = dag.size();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
    for (const auto &e : dag.edges()) {
        const double magnitude = rng.uniform(coef_low, coef_high);
        b(e.to, e.from) = rng.bernoulli(0.5) ? magnitude : -magnitude;
    }
    Eigen::VectorXd noise(p);
    for (int i = 0; i < p; ++i) noise(i) = rng.uniform(0.5, 1.5);
    return SemModel(dag, std::move(b), std::move(noise), std::min(coef_low, kCoefficientFloor));
}

SufficientStats implied_covariance(const SemModel &sem, Eigen::Index pseudo_count) {
    const int p = sem.size();
    const Eigen::MatrixXd i_minus_b = Eigen::MatrixXd::Identity(p, p) - sem.coefficients();
    const Eigen::MatrixXd mix = i_minus_b.partialPivLu().solve(Eigen::MatrixXd::Identity(p, p));

    SufficientStats stats;
    stats.n = pseudo_count;
    stats.means = Eigen::VectorXd::Zero(p);
    stats.cov = mix * sem.noise_variances().asDiagonal() * mix.transpose();
    stats.cov = (0.5 * (stats.cov + stats.cov.transpose())).eval();
    stats.source = StatsSource::population;
    stats.names = sem.dag().names();
    return stats;
}

Dataset sample(const SemModel &sem, Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw InputError("simulate", "sample size must be positive");
    Rng rng(seed);
    const int p = sem.size();
    const auto order = sem.dag().topological_order();
    const Eigen::VectorXd sd = sem.noise_variances().cwiseSqrt();
    std::vector<std::vector<int>> parents(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) parents[static_cast<std::size_t>(v)] = sem.dag().parents(v);

    Dataset data;
    data.names = sem.dag().names();
    data.values.resize(n, p);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (int v : order) {
            double x = sd(v) * rng.normal();
            for (int pa : parents[static_cast<std::size_t>(v)]) x += sem.coefficient(pa, v) * data.values(r, pa);
            data.values(r, v) = x;
        }
    }
    return data;
}

namespace {

double sum_paths(const SemModel &sem, int node, int outcome) {
    if (node == outcome) return 1.0;
    double total = 0.0;
    for (int child : sem.dag().children(node)) total += sem.coefficient(node, child) * sum_paths(sem, child, outcome);
    return total;
}

}  // namespace

double path_effect_oracle(const SemModel &sem, int exposure, int outcome) {
    if (exposure == outcome) throw InputError("simulate", "exposure and outcome must differ");
    if (exposure < 0 || exposure >= sem.size() || outcome < 0 || outcome >= sem.size()) {
        throw InputError("simulate", "variable index out of range");
    }
    return sum_paths(sem, exposure, outcome);
}

}  // namespace gges
