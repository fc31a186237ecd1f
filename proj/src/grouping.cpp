#include "gges/grouping.hpp"

#include <string>

#include "gges/errors.hpp"

namespace gges {

namespace {

void mark(std::vector<char> &seen, int n, int index) {
    if (index < 0 || index >= n) {
        throw InputError("search", "grouping index " + std::to_string(index) + " out of range");
    }
    auto &slot = seen[static_cast<std::size_t>(index)];
    if (slot) throw InputError("search", "grouping lists variable " + std::to_string(index) + " twice");
    slot = 1;
}

}  // namespace

VariableGrouping::VariableGrouping(int n_variables, std::span<const int> predict)
    : is_predict_(static_cast<std::size_t>(n_variables), 0) {
    if (n_variables < 1) throw InputError("search", "grouping needs at least one variable");
    std::vector<char> seen(is_predict_.size(), 0);
    for (int p : predict) {
        mark(seen, n_variables, p);
        is_predict_[static_cast<std::size_t>(p)] = 1;
    }
    if (static_cast<int>(predict.size()) == n_variables) {
        throw InputError("search", "causal group is empty");
    }
}

VariableGrouping::VariableGrouping(int n_variables, std::span<const int> causal,
                                   std::span<const int> predict)
    : VariableGrouping(n_variables, predict) {
    std::vector<char> seen(is_predict_.size(), 0);
    for (int p : predict) seen[static_cast<std::size_t>(p)] = 1;
    for (int c : causal) mark(seen, n_variables, c);
    for (char s : seen) {
        if (!s) throw InputError("search", "causal and predict groups do not cover all variables");
    }
}

VariableGrouping VariableGrouping::unconstrained(int n_variables) {
    return VariableGrouping(n_variables, std::span<const int>{});
}

std::vector<int> VariableGrouping::causal() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (!is_predict_[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

std::vector<int> VariableGrouping::predict() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (is_predict_[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

bool allowed_edge(int i, int j, const VariableGrouping &grouping) {
    return i != j && grouping.is_causal(i);
}

}  // namespace gges
