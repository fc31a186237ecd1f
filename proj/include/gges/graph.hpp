#ifndef GGES_GRAPH_HPP
#define GGES_GRAPH_HPP

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gges/grouping.hpp"

namespace gges {

/// Ordered pair of node indices. For undirected edges `from < to`.
struct Edge {
    int from = 0;
    int to = 0;

    friend auto operator<=>(const Edge &, const Edge &) = default;
};

/// Collider a -> c <- b with a, b non-adjacent and a < b.
struct VStructure {
    int a = 0;
    int c = 0;
    int b = 0;

    friend auto operator<=>(const VStructure &, const VStructure &) = default;
};

/// Directed acyclic graph over named nodes. Node identity is the name;
/// indices are positions in the name list.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> node_names);

    /// Throws InputError for bad indices, self-loops or duplicate edges and
    /// ConstraintError when the edges contain a directed cycle.
    Dag(std::vector<std::string> node_names, std::span<const Edge> edges);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string> &names() const { return names_; }
    std::optional<int> index_of(const std::string &name) const;

    bool has_edge(int from, int to) const { return adj_[at(from, to)] != 0; }
    bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }

    /// Sorted ascending.
    std::vector<int> parents(int node) const;
    std::vector<int> children(int node) const;

    /// All edges in lexicographic (from, to) order.
    std::vector<Edge> edges() const;
    int edge_count() const { return edge_count_; }

    /// True when some directed path leads from `from` to `to` (length >= 1).
    bool has_directed_path(int from, int to) const;

    /// True when adding from -> to would close a directed cycle.
    bool creates_cycle(int from, int to) const { return from == to || has_directed_path(to, from); }

    /// Mutators used by the search; they keep the acyclicity invariant and
    /// throw ConstraintError otherwise.
    void add_edge(int from, int to);
    void remove_edge(int from, int to);

    std::vector<int> topological_order() const;

    friend bool operator==(const Dag &, const Dag &) = default;

private:
    std::size_t at(int from, int to) const;

    std::vector<std::string> names_;
    std::vector<char> adj_;
    int edge_count_ = 0;
};

/// Partially directed graph: the output representation of an equivalence
/// class. Directed and undirected edges never share an unordered pair.
class Pattern {
public:
    Pattern() = default;
    explicit Pattern(std::vector<std::string> node_names);
    Pattern(std::vector<std::string> node_names, std::span<const Edge> directed,
            std::span<const Edge> undirected);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string> &names() const { return names_; }
    std::optional<int> index_of(const std::string &name) const;

    bool has_directed(int from, int to) const { return marks_[at(from, to)] == kArrow; }
    bool has_undirected(int a, int b) const { return marks_[at(a, b)] == kLine; }
    bool adjacent(int a, int b) const { return marks_[at(a, b)] != kNone || marks_[at(b, a)] != kNone; }

    std::vector<Edge> directed_edges() const;
    /// Each pair once, with from < to.
    std::vector<Edge> undirected_edges() const;

    std::vector<int> directed_parents(int node) const;
    std::vector<int> undirected_neighbors(int node) const;

    void add_directed(int from, int to);
    void add_undirected(int a, int b);
    /// Replace an undirected a - b by a -> b.
    void orient(int from, int to);

    friend bool operator==(const Pattern &, const Pattern &) = default;

private:
    static constexpr char kNone = 0;
    static constexpr char kArrow = 1;  // tail at row, head at column
    static constexpr char kLine = 2;   // stored symmetrically

    std::size_t at(int from, int to) const;

    std::vector<std::string> names_;
    std::vector<char> marks_;
};

/// Acyclicity test for an arbitrary edge list over n nodes.
/// Throws InputError when an endpoint is outside [0, n).
bool is_acyclic(int n_nodes, std::span<const Edge> edges);

std::vector<VStructure> v_structures(const Dag &dag);

/// Completed pattern of the DAG: skeleton, v-structures directed, Meek rules
/// closed. With a grouping, edges touching predict variables are kept
/// directed as well before closure. Throws ConstraintError if the DAG breaks
/// the grouping.
Pattern dag_to_pattern(const Dag &dag, const VariableGrouping *grouping = nullptr);
Pattern dag_to_pattern(const Dag &dag, const VariableGrouping &grouping);

/// Applies Meek rules R1-R4 to a fixed point, in place.
void apply_meek_rules(Pattern &pattern);

/// Same skeleton and same v-structures. Throws InputError on differing node sets.
bool markov_equivalent(const Dag &g1, const Dag &g2);

/// Throws ConstraintError naming the first offending edge.
void check_grouping(const Dag &dag, const VariableGrouping &grouping);

}  // namespace gges

#endif  // GGES_GRAPH_HPP
