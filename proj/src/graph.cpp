#include "gges/graph.hpp"

#include <algorithm>
#include <string>

#include "gges/errors.hpp"

namespace gges {

namespace {

void check_index(int n, int i) {
    if (i < 0 || i >= n) {
        throw InputError("graph", "node index " + std::to_string(i) + " out of range for " +
                                      std::to_string(n) + " nodes");
    }
}

std::optional<int> find_name(const std::vector<std::string> &names, const std::string &name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<int>(it - names.begin());
}

// Kahn's algorithm over an adjacency matrix; returns a partial order if cyclic.
std::vector<int> kahn(int n, const std::vector<char> &adj) {
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (adj[static_cast<std::size_t>(i * n + j)]) ++indegree[static_cast<std::size_t>(j)];
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<int> ready;
    for (int i = n - 1; i >= 0; --i)
        if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (int j = n - 1; j >= 0; --j) {
            if (adj[static_cast<std::size_t>(v * n + j)] && --indegree[static_cast<std::size_t>(j)] == 0) {
                ready.push_back(j);
            }
        }
    }
    return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(std::vector<std::string> node_names)
    : names_(std::move(node_names)), adj_(names_.size() * names_.size(), 0) {}

Dag::Dag(std::vector<std::string> node_names, std::span<const Edge> edges)
    : Dag(std::move(node_names)) {
    const int n = size();
    for (const auto &e : edges) {
        check_index(n, e.from);
        check_index(n, e.to);
        if (e.from == e.to) throw InputError("graph", "self-loop on node " + names_[static_cast<std::size_t>(e.from)]);
        auto &slot = adj_[at(e.from, e.to)];
        if (slot) {
            throw InputError("graph", "duplicate edge " + names_[static_cast<std::size_t>(e.from)] + " -> " +
                                          names_[static_cast<std::size_t>(e.to)]);
        }
        slot = 1;
        ++edge_count_;
    }
    if (static_cast<int>(kahn(n, adj_).size()) != n) throw ConstraintError("graph", "edge set contains a directed cycle");
}

std::size_t Dag::at(int from, int to) const {
    check_index(size(), from);
    check_index(size(), to);
    return static_cast<std::size_t>(from) * names_.size() + static_cast<std::size_t>(to);
}

std::optional<int> Dag::index_of(const std::string &name) const { return find_name(names_, name); }

std::vector<int> Dag::parents(int node) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (has_edge(i, node)) out.push_back(i);
    return out;
}

std::vector<int> Dag::children(int node) const {
    std::vector<int> out;
    for (int j = 0; j < size(); ++j)
        if (has_edge(node, j)) out.push_back(j);
    return out;
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (has_edge(i, j)) out.push_back({i, j});
    return out;
}

bool Dag::has_directed_path(int from, int to) const {
    const int n = size();
    check_index(n, from);
    check_index(n, to);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n; ++w) {
            if (!adj_[static_cast<std::size_t>(v * n + w)]) continue;
            if (w == to) return true;
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

void Dag::add_edge(int from, int to) {
    auto idx = at(from, to);
    if (adj_[idx]) throw InputError("graph", "edge already present");
    if (creates_cycle(from, to)) {
        throw ConstraintError("graph", "adding " + names_[static_cast<std::size_t>(from)] + " -> " +
                                           names_[static_cast<std::size_t>(to)] + " creates a cycle");
    }
    adj_[idx] = 1;
    ++edge_count_;
}

void Dag::remove_edge(int from, int to) {
    auto idx = at(from, to);
    if (!adj_[idx]) throw InputError("graph", "edge not present");
    adj_[idx] = 0;
    --edge_count_;
}

std::vector<int> Dag::topological_order() const { return kahn(size(), adj_); }

// ---------------------------------------------------------------------------
// Pattern

Pattern::Pattern(std::vector<std::string> node_names)
    : names_(std::move(node_names)), marks_(names_.size() * names_.size(), kNone) {}

Pattern::Pattern(std::vector<std::string> node_names, std::span<const Edge> directed,
                 std::span<const Edge> undirected)
    : Pattern(std::move(node_names)) {
    for (const auto &e : directed) add_directed(e.from, e.to);
    for (const auto &e : undirected) add_undirected(e.from, e.to);
}

std::size_t Pattern::at(int from, int to) const {
    check_index(size(), from);
    check_index(size(), to);
    return static_cast<std::size_t>(from) * names_.size() + static_cast<std::size_t>(to);
}

std::optional<int> Pattern::index_of(const std::string &name) const { return find_name(names_, name); }

void Pattern::add_directed(int from, int to) {
    if (from == to) throw InputError("graph", "self-loop in pattern");
    if (adjacent(from, to)) throw InputError("graph", "pattern pair already has an edge");
    marks_[at(from, to)] = kArrow;
}

void Pattern::add_undirected(int a, int b) {
    if (a == b) throw InputError("graph", "self-loop in pattern");
    if (adjacent(a, b)) throw InputError("graph", "pattern pair already has an edge");
    marks_[at(a, b)] = kLine;
    marks_[at(b, a)] = kLine;
}

void Pattern::orient(int from, int to) {
    if (!has_undirected(from, to)) throw InputError("graph", "orienting a pair that is not undirected");
    marks_[at(from, to)] = kArrow;
    marks_[at(to, from)] = kNone;
}

std::vector<Edge> Pattern::directed_edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (has_directed(i, j)) out.push_back({i, j});
    return out;
}

std::vector<Edge> Pattern::undirected_edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (has_undirected(i, j)) out.push_back({i, j});
    return out;
}

std::vector<int> Pattern::directed_parents(int node) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (has_directed(i, node)) out.push_back(i);
    return out;
}

std::vector<int> Pattern::undirected_neighbors(int node) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (i != node && has_undirected(i, node)) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Free functions

bool is_acyclic(int n_nodes, std::span<const Edge> edges) {
    std::vector<char> adj(static_cast<std::size_t>(n_nodes) * static_cast<std::size_t>(n_nodes), 0);
    for (const auto &e : edges) {
        check_index(n_nodes, e.from);
        check_index(n_nodes, e.to);
        if (e.from == e.to) return false;
        adj[static_cast<std::size_t>(e.from * n_nodes + e.to)] = 1;
    }
    return static_cast<int>(kahn(n_nodes, adj).size()) == n_nodes;
}

std::vector<VStructure> v_structures(const Dag &dag) {
    std::vector<VStructure> out;
    for (int c = 0; c < dag.size(); ++c) {
        auto pa = dag.parents(c);
        for (std::size_t x = 0; x < pa.size(); ++x)
            for (std::size_t y = x + 1; y < pa.size(); ++y)
                if (!dag.adjacent(pa[x], pa[y])) out.push_back({pa[x], c, pa[y]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Each rule answers: does the current state force the undirected a - b to
// become a -> b?

bool meek_r1(const Pattern &p, int a, int b) {
    for (int c = 0; c < p.size(); ++c)
        if (c != b && p.has_directed(c, a) && !p.adjacent(c, b)) return true;
    return false;
}

bool meek_r2(const Pattern &p, int a, int b) {
    for (int c = 0; c < p.size(); ++c)
        if (p.has_directed(a, c) && p.has_directed(c, b)) return true;
    return false;
}

bool meek_r3(const Pattern &p, int a, int b) {
    const int n = p.size();
    for (int c = 0; c < n; ++c) {
        if (c == a || c == b || !p.has_undirected(a, c) || !p.has_directed(c, b)) continue;
        for (int d = c + 1; d < n; ++d) {
            if (d == a || d == b) continue;
            if (p.has_undirected(a, d) && p.has_directed(d, b) && !p.adjacent(c, d)) return true;
        }
    }
    return false;
}

bool meek_r4(const Pattern &p, int a, int b) {
    const int n = p.size();
    for (int c = 0; c < n; ++c) {
        if (c == a || c == b || !p.has_undirected(a, c) || p.adjacent(c, b)) continue;
        for (int d = 0; d < n; ++d) {
            if (d == a || d == b || d == c) continue;
            if (p.has_directed(c, d) && p.has_directed(d, b) && p.adjacent(a, d)) return true;
        }
    }
    return false;
}

}  // namespace

void apply_meek_rules(Pattern &pattern) {
    using Rule = bool (*)(const Pattern &, int, int);
    constexpr Rule rules[] = {meek_r1, meek_r2, meek_r3, meek_r4};
    const int n = pattern.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (Rule rule : rules) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a == b || !pattern.has_undirected(a, b)) continue;
                    if (rule(pattern, a, b)) {
                        pattern.orient(a, b);
                        changed = true;
                    }
                }
            }
        }
    }
}

void check_grouping(const Dag &dag, const VariableGrouping &grouping) {
    if (grouping.size() != dag.size()) {
        throw ConstraintError("graph", "grouping covers " + std::to_string(grouping.size()) +
                                           " variables, graph has " + std::to_string(dag.size()));
    }
    for (const auto &e : dag.edges()) {
        if (!allowed_edge(e.from, e.to, grouping)) {
            throw ConstraintError("graph", "edge " + dag.names()[static_cast<std::size_t>(e.from)] + " -> " +
                                               dag.names()[static_cast<std::size_t>(e.to)] +
                                               " leaves a predict variable");
        }
    }
}

Pattern dag_to_pattern(const Dag &dag, const VariableGrouping *grouping) {
    if (grouping) check_grouping(dag, *grouping);

    Pattern pattern(dag.names());
    const int n = dag.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dag.adjacent(i, j)) pattern.add_undirected(i, j);

    for (const auto &v : v_structures(dag)) {
        if (pattern.has_undirected(v.a, v.c)) pattern.orient(v.a, v.c);
        if (pattern.has_undirected(v.b, v.c)) pattern.orient(v.b, v.c);
    }
    if (grouping) {
        for (const auto &e : dag.edges()) {
            if ((grouping->is_predict(e.from) || grouping->is_predict(e.to)) && pattern.has_undirected(e.from, e.to)) {
                pattern.orient(e.from, e.to);
            }
        }
    }
    apply_meek_rules(pattern);
    return pattern;
}

Pattern dag_to_pattern(const Dag &dag, const VariableGrouping &grouping) { return dag_to_pattern(dag, &grouping); }

bool markov_equivalent(const Dag &g1, const Dag &g2) {
    if (g1.names() != g2.names()) throw InputError("graph", "graphs are over different node sets");
    for (int i = 0; i < g1.size(); ++i)
        for (int j = i + 1; j < g1.size(); ++j)
            if (g1.adjacent(i, j) != g2.adjacent(i, j)) return false;
    return v_structures(g1) == v_structures(g2);
}

}  // namespace gges
