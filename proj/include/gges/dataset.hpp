#ifndef GGES_DATASET_HPP
#define GGES_DATASET_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gges {

/// Column-named numeric matrix: one row per observation.
struct Dataset {
    std::vector<std::string> names;
    Eigen::MatrixXd values;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    std::optional<int> column_index(const std::string &name) const;

    /// Rows selected by index, in the given order.
    Dataset select_rows(const std::vector<Eigen::Index> &rows) const;
    /// Columns selected by name, in the given order. Throws InputError when a
    /// name is missing.
    Dataset select_columns(const std::vector<std::string> &columns) const;
};

}  // namespace gges

#endif  // GGES_DATASET_HPP
