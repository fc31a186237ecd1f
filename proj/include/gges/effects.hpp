#ifndef GGES_EFFECTS_HPP
#define GGES_EFFECTS_HPP

#include <string>
#include <vector>

#include "gges/graph.hpp"
#include "gges/scoring.hpp"

namespace gges {

/// Possible total effects of one exposure on one outcome, one per admissible
/// parent set of the exposure, plus their scalar summary.
struct EffectReport {
    std::string exposure;
    std::string outcome;
    std::vector<double> effects;
    std::vector<std::vector<int>> parent_sets;  // aligned with effects
    double tce = 0.0;
};

struct InfluenceRow {
    std::string variable;
    double tce = 0.0;
};

/// Total effect under the DAG by adjusting for the exposure's parents: the
/// coefficient of the exposure when regressing the outcome on the exposure
/// and its parents. Zero when the outcome is a parent of the exposure or no
/// directed path reaches it. Throws EstimationError for collinear regressors.
double total_effect_dag(int exposure, int outcome, const Dag &dag, const SufficientStats &stats);

/// Same adjustment with an explicit parent set for the exposure.
double adjusted_effect(int exposure, int outcome, const std::vector<int> &parents, const SufficientStats &stats);

/// Local enumeration over the pattern: every subset S of the exposure's
/// undirected neighbours that is a clique and is fully adjacent to the
/// exposure's directed parents yields parent set Pa u S. Subsets are
/// enumerated by bitmask over the sorted neighbour list, so the empty set
/// comes first.
EffectReport ida_effects(int exposure, int outcome, const Pattern &pattern, const SufficientStats &stats);

/// Element of smallest magnitude; the first one wins ties.
/// Throws InputError on an empty list.
double tce_summary(const std::vector<double> &effects);

/// TCE of every other variable on the outcome, largest |TCE| first, ties by name.
std::vector<InfluenceRow> rank_influence(const Pattern &pattern, const SufficientStats &stats, int outcome);

}  // namespace gges

#endif  // GGES_EFFECTS_HPP
