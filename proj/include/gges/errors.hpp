#ifndef GGES_ERRORS_HPP
#define GGES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gges {

/// Base of every error raised by the library. Carries the name of the module
/// that raised it so the command-line tool can print a one-line diagnostic.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string &what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string &module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Malformed or out-of-range input (bad indices, mismatched node sets, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// A graph violates the causal/predict grouping constraint or acyclicity.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// A data column has zero variance.
class DegenerateColumnError : public Error {
public:
    DegenerateColumnError(std::string module, std::string column)
        : Error(std::move(module), "column '" + column + "' has zero variance"),
          column_(std::move(column)) {}

    const std::string &column() const noexcept { return column_; }

private:
    std::string column_;
};

/// The parent covariance block is singular within tolerance.
class CollinearError : public Error {
public:
    using Error::Error;
};

/// A regression needed for an effect estimate is not identifiable.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Text input (CSV, DOT, grouping file) could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace gges

#endif  // GGES_ERRORS_HPP
