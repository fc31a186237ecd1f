#ifndef GGES_GROUPING_HPP
#define GGES_GROUPING_HPP

#include <span>
#include <vector>

namespace gges {

/// Partition of the variables into a causal group and a predict group.
///
/// Predict variables may only receive edges from causal variables and never
/// have edges among themselves. Causal variables may point anywhere. An empty
/// predict group is the unconstrained case.
class VariableGrouping {
public:
    VariableGrouping() = default;

    /// Predict group given explicitly; every other index is causal.
    /// Throws InputError on out-of-range or duplicate indices and when the
    /// causal group would end up empty.
    VariableGrouping(int n_variables, std::span<const int> predict);

    /// Both groups given explicitly; they must partition [0, n_variables).
    VariableGrouping(int n_variables, std::span<const int> causal, std::span<const int> predict);

    static VariableGrouping unconstrained(int n_variables);

    int size() const { return static_cast<int>(is_predict_.size()); }
    bool is_predict(int i) const { return is_predict_.at(static_cast<std::size_t>(i)) != 0; }
    bool is_causal(int i) const { return !is_predict(i); }

    std::vector<int> causal() const;
    std::vector<int> predict() const;

    friend bool operator==(const VariableGrouping &, const VariableGrouping &) = default;

private:
    std::vector<char> is_predict_;
};

/// Whether i -> j is admissible under the grouping: the source must be causal.
bool allowed_edge(int i, int j, const VariableGrouping &grouping);

}  // namespace gges

#endif  // GGES_GROUPING_HPP
