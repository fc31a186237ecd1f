#include "gges/search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "gges/errors.hpp"

namespace gges {

const char *to_string(Phase phase) { return phase == Phase::forward ? "forward" : "backward"; }

namespace {

// Graph plus cached per-node local scores; the total is always summed in node
// order so it reproduces graph_score exactly.
class SearchState {
public:
    SearchState(const Dag &start, const LocalScore &score, const VariableGrouping &grouping)
        : dag_(start), score_(score), grouping_(grouping) {
        if (start.size() != score.dim()) {
            throw ConstraintError("search", "start graph has " + std::to_string(start.size()) +
                                                " nodes, statistics have " + std::to_string(score.dim()));
        }
        check_grouping(start, grouping);
        local_.resize(static_cast<std::size_t>(dag_.size()));
        for (int v = 0; v < dag_.size(); ++v) local_[static_cast<std::size_t>(v)] = score_.local(v, dag_.parents(v));
    }

    double total() const { return std::accumulate(local_.begin(), local_.end(), 0.0); }
    const Dag &dag() const { return dag_; }

    // Score change of child `to` if its parent set becomes `parents`; -inf
    // when the family is collinear.
    double gain(int to, const std::vector<int> &parents) const {
        try {
            return score_.local(to, parents) - local_[static_cast<std::size_t>(to)];
        } catch (const CollinearError &) {
            return -std::numeric_limits<double>::infinity();
        }
    }

    // Candidates are visited in lexicographic (from, to) order and only a
    // strictly larger gain replaces the incumbent, so ties keep the smallest.
    std::optional<Edge> best_addition(double epsilon) const {
        const int n = dag_.size();
        std::optional<Edge> best;
        double best_gain = epsilon;
        for (int from = 0; from < n; ++from) {
            for (int to = 0; to < n; ++to) {
                if (from == to || dag_.has_edge(from, to) || !allowed_edge(from, to, grouping_)) continue;
                if (dag_.creates_cycle(from, to)) continue;
                auto grown = dag_.parents(to);
                grown.insert(std::upper_bound(grown.begin(), grown.end(), from), from);
                double g = gain(to, grown);
                if (g > best_gain) {
                    best_gain = g;
                    best = Edge{from, to};
                }
            }
        }
        return best;
    }

    std::optional<Edge> best_deletion(double epsilon) const {
        std::optional<Edge> best;
        double best_gain = epsilon;
        for (const auto &e : dag_.edges()) {
            auto shrunk = dag_.parents(e.to);
            shrunk.erase(std::find(shrunk.begin(), shrunk.end(), e.from));
            double g = gain(e.to, shrunk);
            if (g > best_gain) {
                best_gain = g;
                best = e;
            }
        }
        return best;
    }

    void add(const Edge &e) {
        dag_.add_edge(e.from, e.to);
        rescore(e.to);
    }

    void remove(const Edge &e) {
        dag_.remove_edge(e.from, e.to);
        rescore(e.to);
    }

private:
    void rescore(int v) { local_[static_cast<std::size_t>(v)] = score_.local(v, dag_.parents(v)); }

    Dag dag_;
    const LocalScore &score_;
    const VariableGrouping &grouping_;
    std::vector<double> local_;
};

template <typename Pick, typename Apply>
PhaseResult run_phase(const Dag &start, const LocalScore &score, const VariableGrouping &grouping, double epsilon,
                      Phase phase, Pick pick, Apply apply) {
    SearchState state(start, score, grouping);
    PhaseResult result;
    while (auto move = pick(state, epsilon)) {
        apply(state, *move);
        result.trace.push_back({phase, *move, state.total()});
    }
    result.dag = state.dag();
    result.score = state.total();
    return result;
}

}  // namespace

PhaseResult forward_phase(const Dag &start, const LocalScore &score, const VariableGrouping &grouping,
                          double improvement_epsilon) {
    return run_phase(
        start, score, grouping, improvement_epsilon, Phase::forward,
        [](const SearchState &s, double eps) { return s.best_addition(eps); },
        [](SearchState &s, const Edge &e) { s.add(e); });
}

PhaseResult forward_phase(const Dag &start, const SufficientStats &stats, const VariableGrouping &grouping,
                          const ScoreConfig &config, double improvement_epsilon) {
    BicScore score(stats, config);
    return forward_phase(start, score, grouping, improvement_epsilon);
}

PhaseResult backward_phase(const Dag &start, const LocalScore &score, const VariableGrouping &grouping,
                           double improvement_epsilon) {
    return run_phase(
        start, score, grouping, improvement_epsilon, Phase::backward,
        [](const SearchState &s, double eps) { return s.best_deletion(eps); },
        [](SearchState &s, const Edge &e) { s.remove(e); });
}

PhaseResult backward_phase(const Dag &start, const SufficientStats &stats, const VariableGrouping &grouping,
                           const ScoreConfig &config, double improvement_epsilon) {
    BicScore score(stats, config);
    return backward_phase(start, score, grouping, improvement_epsilon);
}

SearchResult gges(const SufficientStats &stats, const VariableGrouping &grouping, const ScoreConfig &config,
                  const SearchOptions &options) {
    if (grouping.size() != stats.dim()) {
        throw InputError("search", "grouping covers " + std::to_string(grouping.size()) + " variables, statistics have " +
                                       std::to_string(stats.dim()));
    }
    std::vector<std::string> names = stats.names;
    if (names.empty()) {
        for (int i = 0; i < stats.dim(); ++i) names.push_back("X" + std::to_string(i + 1));
    }

    BicScore score(stats, config);
    Dag dag = options.warm_start ? *options.warm_start : Dag(names);
    std::vector<TraceStep> trace;
    for (;;) {
        auto fwd = forward_phase(dag, score, grouping, options.improvement_epsilon);
        auto bwd = backward_phase(fwd.dag, score, grouping, options.improvement_epsilon);
        trace.insert(trace.end(), fwd.trace.begin(), fwd.trace.end());
        trace.insert(trace.end(), bwd.trace.begin(), bwd.trace.end());
        dag = std::move(bwd.dag);
        // A deletion can make a previously rejected insertion profitable.
        if (bwd.trace.empty()) break;
    }

    SearchResult result;
    result.score = graph_score(dag, stats, config);
    result.pattern = dag_to_pattern(dag, grouping);
    result.dag = std::move(dag);
    result.trace = std::move(trace);
    return result;
}

}  // namespace gges
