#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gges/errors.hpp"
#include "gges/search.hpp"
#include "gges/simulate.hpp"

using doctest::Approx;

namespace {

gges::SufficientStats population(Eigen::MatrixXd cov, Eigen::Index n, std::vector<std::string> names) {
    gges::SufficientStats s;
    s.n = n;
    s.means = Eigen::VectorXd::Zero(cov.rows());
    s.cov = std::move(cov);
    s.source = gges::StatsSource::population;
    s.names = std::move(names);
    return s;
}

// Every single allowed addition or deletion, scored from scratch.
double best_single_move_gain(const gges::Dag &dag, const gges::SufficientStats &stats, const gges::VariableGrouping &g) {
    const double base = gges::graph_score(dag, stats);
    double best = -INFINITY;
    for (int i = 0; i < dag.size(); ++i) {
        for (int j = 0; j < dag.size(); ++j) {
            if (i == j) continue;
            gges::Dag next = dag;
            if (dag.has_edge(i, j)) {
                next.remove_edge(i, j);
            } else {
                if (!gges::allowed_edge(i, j, g) || dag.creates_cycle(i, j)) continue;
                next.add_edge(i, j);
            }
            try {
                best = std::max(best, gges::graph_score(next, stats) - base);
            } catch (const gges::CollinearError &) {
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("allowed_edge") {
    const int predict[] = {2};
    gges::VariableGrouping g(3, predict);
    CHECK(gges::allowed_edge(0, 1, g));
    CHECK(gges::allowed_edge(0, 2, g));
    CHECK_FALSE(gges::allowed_edge(2, 0, g));
    CHECK_FALSE(gges::allowed_edge(1, 1, g));

    const int two[] = {1, 2};
    gges::VariableGrouping h(3, two);
    CHECK_FALSE(gges::allowed_edge(1, 2, h));
    CHECK_FALSE(gges::allowed_edge(2, 1, h));
    CHECK(gges::allowed_edge(0, 1, h));
}

TEST_CASE("independent variables give the empty graph") {
    auto s = population(Eigen::MatrixXd::Identity(4, 4), 500, {"a", "b", "c", "d"});
    auto g = gges::VariableGrouping::unconstrained(4);
    auto fwd = gges::forward_phase(gges::Dag(s.names), s, g);
    CHECK(fwd.dag.edge_count() == 0);
    CHECK(fwd.trace.empty());

    auto res = gges::gges(s, g);
    CHECK(res.dag.edge_count() == 0);
    CHECK(res.pattern.directed_edges().empty());
    CHECK(res.pattern.undirected_edges().empty());
    CHECK(res.score == Approx(4 * -0.5 * std::log(500.0)).epsilon(1e-12));
}

TEST_CASE("two variables: one adjacency, scores by direct formula") {
    Eigen::MatrixXd cov(2, 2);
    cov << 1, 1, 1, 2;  // x -> y with coefficient 1, unit noise
    const double n = 1000;
    auto s = population(cov, 1000, {"x", "y"});
    auto g = gges::VariableGrouping::unconstrained(2);

    const double empty = -0.5 * n * (std::log(1.0) + std::log(2.0)) - std::log(n);
    const double xy = -0.5 * n * (std::log(1.0) + std::log(1.0)) - 1.5 * std::log(n);
    const double yx = -0.5 * n * (std::log(0.5) + std::log(2.0)) - 1.5 * std::log(n);
    CHECK(xy > empty);
    CHECK(xy == Approx(yx).epsilon(1e-12));

    auto fwd = gges::forward_phase(gges::Dag(s.names), s, g);
    REQUIRE(fwd.dag.edge_count() == 1);
    CHECK(fwd.dag.has_edge(0, 1));  // score-equivalent tie goes to the smaller pair
    REQUIRE(fwd.trace.size() == 1);
    CHECK(fwd.trace[0].phase == gges::Phase::forward);
    CHECK(fwd.trace[0].score_after == Approx(xy).epsilon(1e-12));

    const int predict_x[] = {0};
    auto only_yx = gges::forward_phase(gges::Dag(s.names), s, gges::VariableGrouping(2, predict_x));
    REQUIRE(only_yx.dag.edge_count() == 1);
    CHECK(only_yx.dag.has_edge(1, 0));
}

TEST_CASE("predict variables never get outgoing edges") {
    gges::Dag chain(std::vector<std::string>{"x", "m", "y"}, std::vector<gges::Edge>{{0, 1}, {1, 2}});
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);
    b(1, 0) = 1.2;
    b(2, 1) = 0.9;
    auto s = gges::implied_covariance(gges::SemModel(chain, b, Eigen::VectorXd::Ones(3)));
    const int predict[] = {2};
    gges::VariableGrouping g(3, predict);

    auto fwd = gges::forward_phase(gges::Dag(s.names), s, g);
    for (const auto &step : fwd.trace) CHECK(step.edge.from != 2);
    auto res = gges::gges(s, g);
    CHECK(res.dag.children(2).empty());
    CHECK(res.dag.adjacent(1, 2));
    CHECK(res.pattern.has_directed(1, 2));
    CHECK_FALSE(res.dag.adjacent(0, 2));
}

TEST_CASE("backward phase") {
    auto s = population(Eigen::MatrixXd::Identity(3, 3), 400, {"a", "b", "c"});
    auto g = gges::VariableGrouping::unconstrained(3);
    gges::Dag complete(s.names, std::vector<gges::Edge>{{0, 1}, {0, 2}, {1, 2}});
    auto bwd = gges::backward_phase(complete, s, g);
    CHECK(bwd.dag.edge_count() == 0);
    REQUIRE(bwd.trace.size() == 3);
    double prev = gges::graph_score(complete, s);
    for (const auto &step : bwd.trace) {
        CHECK(step.phase == gges::Phase::backward);
        CHECK(step.score_after - prev == Approx(0.5 * std::log(400.0)).epsilon(1e-9));
        prev = step.score_after;
    }

    // Already optimal: unchanged.
    auto again = gges::backward_phase(bwd.dag, s, g);
    CHECK(again.trace.empty());
    CHECK(again.dag == bwd.dag);

    auto sem = gges::random_sem(gges::random_dag(5, 0.5, 4), 0.8, 1.5, 5);
    auto pop = gges::implied_covariance(sem);
    auto g5 = gges::VariableGrouping::unconstrained(5);
    auto res = gges::gges(pop, g5);
    auto idle = gges::backward_phase(res.dag, pop, g5);
    CHECK(idle.trace.empty());
    CHECK(idle.dag == res.dag);
}

TEST_CASE("invalid start graphs are rejected") {
    auto s = population(Eigen::MatrixXd::Identity(3, 3), 100, {"a", "b", "c"});
    const int predict[] = {2};
    gges::VariableGrouping g(3, predict);
    gges::Dag bad(s.names, std::vector<gges::Edge>{{2, 0}});
    CHECK_THROWS_AS(gges::forward_phase(bad, s, g), gges::ConstraintError);
    CHECK_THROWS_AS(gges::backward_phase(bad, s, g), gges::ConstraintError);
    gges::SearchOptions opts;
    opts.warm_start = bad;
    CHECK_THROWS_AS(gges::gges(s, g, {}, opts), gges::ConstraintError);
}

TEST_CASE("gges: determinism, monotone trace, local optimality") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const int p = 5 + static_cast<int>(seed % 3);
        auto sem = gges::random_sem(gges::random_dag(p, 0.4, seed), 0.5, 1.5, seed + 50);
        auto data = gges::sample(sem, 800, seed + 90);
        auto stats = gges::sufficient_stats(data);
        const int predict[] = {p - 1};
        gges::VariableGrouping g(p, predict);

        auto a = gges::gges(stats, g);
        auto b = gges::gges(stats, g);
        CHECK(a.dag == b.dag);
        CHECK(a.trace == b.trace);
        CHECK(a.score == b.score);

        CHECK(a.score == Approx(gges::graph_score(a.dag, stats)).epsilon(1e-12));
        for (std::size_t k = 1; k < a.trace.size(); ++k) CHECK(a.trace[k].score_after > a.trace[k - 1].score_after);
        if (!a.trace.empty()) CHECK(a.trace.back().score_after == Approx(a.score).epsilon(1e-12));
        CHECK(best_single_move_gain(a.dag, stats, g) <= gges::kImprovementEpsilon);
        CHECK(a.dag.children(p - 1).empty());
        CHECK(a.pattern == gges::dag_to_pattern(a.dag, g));
    }
}

TEST_CASE("gges never ends below the empty graph") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto pop = gges::implied_covariance(gges::random_sem(gges::random_dag(4, 0.5, seed), 0.8, 1.5, seed + 7));
        auto res = gges::gges(pop, gges::VariableGrouping::unconstrained(4));
        CHECK(res.score >= gges::graph_score(gges::Dag(pop.names), pop));
    }
}
