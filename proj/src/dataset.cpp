#include "gges/dataset.hpp"

#include <algorithm>

#include "gges/errors.hpp"

namespace gges {

std::optional<int> Dataset::column_index(const std::string &name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<int>(it - names.begin());
}

Dataset Dataset::select_rows(const std::vector<Eigen::Index> &rows) const {
    Dataset out;
    out.names = names;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.values.row(static_cast<Eigen::Index>(r)) = values.row(rows[r]);
    return out;
}

Dataset Dataset::select_columns(const std::vector<std::string> &columns) const {
    Dataset out;
    out.names = columns;
    out.values.resize(values.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        auto idx = column_index(columns[c]);
        if (!idx) throw InputError("data", "column '" + columns[c] + "' not found");
        out.values.col(static_cast<Eigen::Index>(c)) = values.col(*idx);
    }
    return out;
}

}  // namespace gges
