#include "gges/effects.hpp"

#include <algorithm>
#include <cmath>

#include "gges/errors.hpp"

namespace gges {

namespace {

void check_pair(int exposure, int outcome, int n) {
    if (exposure < 0 || exposure >= n || outcome < 0 || outcome >= n) {
        throw InputError("effects", "variable index out of range");
    }
    if (exposure == outcome) throw InputError("effects", "exposure and outcome must differ");
}

// Whether a path exposure -> ... -> outcome can be directed in some extension
// where the exposure's parents are exactly `parents`.
bool possibly_directed_path(const Pattern &pattern, int exposure, int outcome, const std::vector<int> &parents) {
    const int n = pattern.size();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[static_cast<std::size_t>(exposure)] = 1;
    std::vector<int> stack;
    for (int w = 0; w < n; ++w) {
        if (w == exposure || std::binary_search(parents.begin(), parents.end(), w)) continue;
        if (pattern.has_directed(exposure, w) || pattern.has_undirected(exposure, w)) {
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
        }
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == outcome) return true;
        for (int w = 0; w < n; ++w) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            if (pattern.has_directed(v, w) || pattern.has_undirected(v, w)) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

}  // namespace

double adjusted_effect(int exposure, int outcome, const std::vector<int> &parents, const SufficientStats &stats) {
    check_pair(exposure, outcome, stats.dim());
    if (std::find(parents.begin(), parents.end(), outcome) != parents.end()) return 0.0;
    std::vector<int> regressors{exposure};
    regressors.insert(regressors.end(), parents.begin(), parents.end());
    try {
        return regression_coefficients(stats.cov, outcome, regressors)(0);
    } catch (const CollinearError &) {
        throw EstimationError("effects", "regressors for the effect of '" +
                                             (stats.names.empty() ? std::to_string(exposure)
                                                                  : stats.names[static_cast<std::size_t>(exposure)]) +
                                             "' are collinear");
    }
}

double total_effect_dag(int exposure, int outcome, const Dag &dag, const SufficientStats &stats) {
    if (dag.size() != stats.dim()) throw InputError("effects", "graph and statistics have different variable counts");
    check_pair(exposure, outcome, dag.size());
    if (dag.has_edge(outcome, exposure) || !dag.has_directed_path(exposure, outcome)) return 0.0;
    return adjusted_effect(exposure, outcome, dag.parents(exposure), stats);
}

EffectReport ida_effects(int exposure, int outcome, const Pattern &pattern, const SufficientStats &stats) {
    if (pattern.size() != stats.dim()) throw InputError("effects", "pattern and statistics have different variable counts");
    check_pair(exposure, outcome, pattern.size());

    const auto directed = pattern.directed_parents(exposure);
    const auto neighbors = pattern.undirected_neighbors(exposure);
    if (neighbors.size() >= 31) throw InputError("effects", "too many undirected neighbours to enumerate");

    EffectReport report;
    report.exposure = pattern.names()[static_cast<std::size_t>(exposure)];
    report.outcome = pattern.names()[static_cast<std::size_t>(outcome)];

    const std::uint32_t subsets = 1u << neighbors.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        std::vector<int> chosen;
        for (std::size_t k = 0; k < neighbors.size(); ++k)
            if (mask & (1u << k)) chosen.push_back(neighbors[k]);

        bool admissible = true;
        for (std::size_t a = 0; a < chosen.size() && admissible; ++a) {
            for (std::size_t b = a + 1; b < chosen.size() && admissible; ++b)
                admissible = pattern.adjacent(chosen[a], chosen[b]);
            for (int d : directed) {
                if (!admissible) break;
                admissible = pattern.adjacent(chosen[a], d);
            }
        }
        if (!admissible) continue;

        std::vector<int> parents = directed;
        parents.insert(parents.end(), chosen.begin(), chosen.end());
        std::sort(parents.begin(), parents.end());

        double effect = 0.0;
        const bool outcome_is_parent = std::binary_search(parents.begin(), parents.end(), outcome);
        if (!outcome_is_parent && possibly_directed_path(pattern, exposure, outcome, parents)) {
            effect = adjusted_effect(exposure, outcome, parents, stats);
        }
        report.effects.push_back(effect);
        report.parent_sets.push_back(std::move(parents));
    }
    report.tce = tce_summary(report.effects);
    return report;
}

double tce_summary(const std::vector<double> &effects) {
    if (effects.empty()) throw InputError("effects", "cannot summarise an empty effect list");
    double best = effects.front();
    for (double e : effects)
        if (std::abs(e) < std::abs(best)) best = e;
    return best;
}

std::vector<InfluenceRow> rank_influence(const Pattern &pattern, const SufficientStats &stats, int outcome) {
    if (outcome < 0 || outcome >= pattern.size()) throw InputError("effects", "outcome index out of range");
    std::vector<InfluenceRow> rows;
    for (int v = 0; v < pattern.size(); ++v) {
        if (v == outcome) continue;
        rows.push_back({pattern.names()[static_cast<std::size_t>(v)], ida_effects(v, outcome, pattern, stats).tce});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const InfluenceRow &a, const InfluenceRow &b) {
        if (std::abs(a.tce) != std::abs(b.tce)) return std::abs(a.tce) > std::abs(b.tce);
        return a.variable < b.variable;
    });
    return rows;
}

}  // namespace gges
