#ifndef GGES_SEARCH_HPP
#define GGES_SEARCH_HPP

#include <optional>
#include <vector>

#include "gges/graph.hpp"
#include "gges/grouping.hpp"
#include "gges/scoring.hpp"

namespace gges {

/// Minimum score gain for a move to be accepted.
inline constexpr double kImprovementEpsilon = 1e-9;

enum class Phase { forward, backward };

const char *to_string(Phase phase);

/// One accepted move: the edge added (forward) or removed (backward) and the
/// total score of the graph right after the move.
struct TraceStep {
    Phase phase = Phase::forward;
    Edge edge;
    double score_after = 0.0;

    friend bool operator==(const TraceStep &, const TraceStep &) = default;
};

struct PhaseResult {
    Dag dag;
    std::vector<TraceStep> trace;
    double score = 0.0;
};

struct SearchOptions {
    double improvement_epsilon = kImprovementEpsilon;
    /// Start from this graph instead of the empty one.
    std::optional<Dag> warm_start;
};

struct SearchResult {
    Dag dag;
    Pattern pattern;
    double score = 0.0;
    std::vector<TraceStep> trace;
};

/// Steepest-ascent edge insertion. Each round scores every absent allowed
/// pair whose addition keeps the graph acyclic and applies the best one if it
/// gains more than epsilon; ties go to the smallest (from, to).
/// Throws ConstraintError when `start` violates the grouping.
PhaseResult forward_phase(const Dag &start, const LocalScore &score, const VariableGrouping &grouping,
                          double improvement_epsilon = kImprovementEpsilon);
PhaseResult forward_phase(const Dag &start, const SufficientStats &stats, const VariableGrouping &grouping,
                          const ScoreConfig &config = {}, double improvement_epsilon = kImprovementEpsilon);

/// Steepest-ascent edge deletion with the same acceptance and tie rules.
PhaseResult backward_phase(const Dag &start, const LocalScore &score, const VariableGrouping &grouping,
                           double improvement_epsilon = kImprovementEpsilon);
PhaseResult backward_phase(const Dag &start, const SufficientStats &stats, const VariableGrouping &grouping,
                           const ScoreConfig &config = {}, double improvement_epsilon = kImprovementEpsilon);

/// Grouped greedy search: forward phase from the empty graph, then backward
/// phase, repeated until a full round accepts no move. The result is a local
/// optimum over single allowed additions and deletions.
SearchResult gges(const SufficientStats &stats, const VariableGrouping &grouping, const ScoreConfig &config = {},
                  const SearchOptions &options = {});

}  // namespace gges

#endif  // GGES_SEARCH_HPP
