// Independent reference computations for the test suites. Nothing here calls
// into the code it is used to check, except for plain data types.
#ifndef GGES_TESTS_ORACLES_HPP
#define GGES_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include "gges/graph.hpp"

namespace oracle {

using EdgeList = std::vector<gges::Edge>;

// True when some simple directed cycle exists, by DFS over every simple path.
inline bool has_cycle(int n, const EdgeList &edges) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (const auto &e : edges) out[static_cast<std::size_t>(e.from)].push_back(e.to);
    std::function<bool(int, int, std::vector<char> &)> walk = [&](int start, int v, std::vector<char> &on_path) {
        for (int w : out[static_cast<std::size_t>(v)]) {
            if (w == start) return true;
            if (on_path[static_cast<std::size_t>(w)]) continue;
            on_path[static_cast<std::size_t>(w)] = 1;
            if (walk(start, w, on_path)) return true;
            on_path[static_cast<std::size_t>(w)] = 0;
        }
        return false;
    };
    for (int s = 0; s < n; ++s) {
        std::vector<char> on_path(static_cast<std::size_t>(n), 0);
        on_path[static_cast<std::size_t>(s)] = 1;
        if (walk(s, s, on_path)) return true;
    }
    return false;
}

// Every DAG on n labelled nodes, as edge lists: each unordered pair is absent,
// forward or backward, and cyclic assignments are dropped.
inline std::vector<EdgeList> all_dags(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::vector<EdgeList> out;
    long total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
    for (long code = 0; code < total; ++code) {
        EdgeList edges;
        long c = code;
        for (const auto &[i, j] : pairs) {
            int state = static_cast<int>(c % 3);
            c /= 3;
            if (state == 1) edges.push_back({i, j});
            if (state == 2) edges.push_back({j, i});
        }
        if (!has_cycle(n, edges)) out.push_back(edges);
    }
    return out;
}

inline bool has(const EdgeList &edges, int a, int b) {
    return std::find(edges.begin(), edges.end(), gges::Edge{a, b}) != edges.end();
}

inline bool adjacent(const EdgeList &edges, int a, int b) { return has(edges, a, b) || has(edges, b, a); }

// Colliders by scanning all triples.
inline std::set<std::tuple<int, int, int>> colliders(int n, const EdgeList &edges) {
    std::set<std::tuple<int, int, int>> out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (c != a && c != b && has(edges, a, c) && has(edges, b, c) && !adjacent(edges, a, b))
                    out.insert({a, c, b});
    return out;
}

inline std::set<std::pair<int, int>> skeleton(const EdgeList &edges) {
    std::set<std::pair<int, int>> out;
    for (const auto &e : edges) out.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
    return out;
}

// Every DAG obtained by orienting the pattern's undirected edges that is
// acyclic and has exactly the pattern's colliders.
inline std::vector<EdgeList> consistent_extensions(const gges::Pattern &pattern) {
    const int n = pattern.size();
    const auto directed = pattern.directed_edges();
    const auto undirected = pattern.undirected_edges();
    std::set<std::tuple<int, int, int>> target;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (c != a && c != b && pattern.has_directed(a, c) && pattern.has_directed(b, c) && !pattern.adjacent(a, b))
                    target.insert({a, c, b});
    std::vector<EdgeList> out;
    for (unsigned mask = 0; mask < (1u << undirected.size()); ++mask) {
        EdgeList edges(directed.begin(), directed.end());
        for (std::size_t k = 0; k < undirected.size(); ++k) {
            const auto &u = undirected[k];
            edges.push_back((mask >> k) & 1u ? gges::Edge{u.to, u.from} : u);
        }
        if (!has_cycle(n, edges) && colliders(n, edges) == target) out.push_back(edges);
    }
    return out;
}

// Textbook two-pass covariance with explicit loops.
inline std::vector<std::vector<double>> two_pass_cov(const std::vector<std::vector<double>> &rows) {
    const std::size_t n = rows.size(), p = rows.front().size();
    std::vector<double> mean(p, 0.0);
    for (const auto &r : rows)
        for (std::size_t j = 0; j < p; ++j) mean[j] += r[j];
    for (auto &m : mean) m /= static_cast<double>(n);
    std::vector<std::vector<double>> cov(p, std::vector<double>(p, 0.0));
    for (const auto &r : rows)
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) cov[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]);
    for (auto &row : cov)
        for (auto &v : row) v /= static_cast<double>(n - 1);
    return cov;
}

// Gaussian elimination with partial pivoting; solves A x = b in place.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t k = b.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < k; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(k);
    for (std::size_t i = k; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < k; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// Directed reachability by plain DFS over an edge list.
inline bool reaches(int n, const EdgeList &edges, int from, int to) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto &e : edges) {
            if (e.from != v || seen[static_cast<std::size_t>(e.to)]) continue;
            if (e.to == to) return true;
            seen[static_cast<std::size_t>(e.to)] = 1;
            stack.push_back(e.to);
        }
    }
    return false;
}

// Coefficient of regressors[0] when regressing target on regressors, from a
// covariance matrix via the normal equations.
inline double regression_coefficient(const std::vector<std::vector<double>> &cov, int target, const std::vector<int> &regressors) {
    const std::size_t k = regressors.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k));
    std::vector<double> b(k);
    for (std::size_t i = 0; i < k; ++i) {
        b[i] = cov[static_cast<std::size_t>(regressors[i])][static_cast<std::size_t>(target)];
        for (std::size_t j = 0; j < k; ++j)
            a[i][j] = cov[static_cast<std::size_t>(regressors[i])][static_cast<std::size_t>(regressors[j])];
    }
    return solve(a, b)[0];
}

// Parent set of the exposure and its total effect in every consistent
// extension of the pattern, deduplicated by parent set.
inline std::set<std::pair<std::vector<int>, double>> extension_effects(const gges::Pattern &pattern,
                                                                        const std::vector<std::vector<double>> &cov,
                                                                        int exposure, int outcome) {
    std::set<std::pair<std::vector<int>, double>> out;
    std::set<std::vector<int>> seen;
    const int n = pattern.size();
    for (const auto &ext : consistent_extensions(pattern)) {
        std::vector<int> pa;
        for (const auto &e : ext)
            if (e.to == exposure) pa.push_back(e.from);
        std::sort(pa.begin(), pa.end());
        if (!seen.insert(pa).second) continue;
        double effect = 0.0;
        bool outcome_is_parent = std::find(pa.begin(), pa.end(), outcome) != pa.end();
        if (!outcome_is_parent && reaches(n, ext, exposure, outcome)) {
            std::vector<int> regs{exposure};
            regs.insert(regs.end(), pa.begin(), pa.end());
            effect = regression_coefficient(cov, outcome, regs);
        }
        out.insert({pa, effect});
    }
    return out;
}

// Residual sum of squares / (n - 1) of an OLS fit with intercept, from raw rows.
inline double ols_residual_variance(const std::vector<std::vector<double>> &rows, int child, const std::vector<int> &parents) {
    const std::size_t n = rows.size();
    const std::size_t k = parents.size() + 1;
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    auto design = [&](const std::vector<double> &r, std::size_t j) {
        return j == 0 ? 1.0 : r[static_cast<std::size_t>(parents[j - 1])];
    };
    for (const auto &r : rows) {
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += design(r, a) * r[static_cast<std::size_t>(child)];
            for (std::size_t b = 0; b < k; ++b) xtx[a][b] += design(r, a) * design(r, b);
        }
    }
    auto beta = solve(xtx, xty);
    double rss = 0.0;
    for (const auto &r : rows) {
        double fit = 0.0;
        for (std::size_t a = 0; a < k; ++a) fit += beta[a] * design(r, a);
        double e = r[static_cast<std::size_t>(child)] - fit;
        rss += e * e;
    }
    return rss / static_cast<double>(n - 1);
}

// Regularised incomplete beta I_x(a, b) by Lentz's continued fraction.
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double tiny = 1e-300;
    double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double f = d;
    for (int m = 1; m <= 10000; ++m) {
        for (int step = 0; step < 2; ++step) {
            double num = step == 0 ? m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m))
                                   : -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
            d = 1.0 + num * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + num / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            f *= c * d;
            if (step == 1 && std::abs(c * d - 1.0) < 1e-16) return std::exp(log_front) * f / a;
        }
    }
    return std::exp(log_front) * f / a;
}

// Two-sided p-value of a t statistic with df degrees of freedom.
inline double t_two_sided_p(double t, double df) { return incomplete_beta(df / 2.0, 0.5, df / (df + t * t)); }

}  // namespace oracle

#endif  // GGES_TESTS_ORACLES_HPP
