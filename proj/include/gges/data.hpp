#ifndef GGES_DATA_HPP
#define GGES_DATA_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gges/dataset.hpp"
#include "gges/grouping.hpp"

namespace gges {

enum class UnknownTokenPolicy { error, code_minus_one };

/// Token -> integer code translation for one non-numeric column.
struct EncodingMap {
    std::string column;
    std::map<std::string, int> mapping;
    UnknownTokenPolicy policy_on_unknown = UnknownTokenPolicy::error;

    /// Throws InputError when the map is empty or two tokens share a code.
    void validate() const;
};

enum class MissingPolicy { drop_row, strict };

struct LoadOptions {
    MissingPolicy missing = MissingPolicy::drop_row;
    std::vector<std::string> missing_sentinels{"", "NA"};
    std::vector<EncodingMap> encodings;
};

struct LoadResult {
    Dataset data;
    std::size_t raw_rows = 0;
    std::size_t dropped_rows = 0;
};

/// Comma-separated file with a header row. Quoted fields are accepted, with
/// "" as an escaped quote. Throws ParseError for malformed cells and
/// InputError for duplicate headers or missing cells under the strict policy.
LoadResult load_csv(const std::string &path, const LoadOptions &options = {});
LoadResult parse_csv(std::istream &in, const LoadOptions &options = {});

/// Values are written in shortest round-trip form, so reloading is exact.
void write_csv(std::ostream &out, const Dataset &data);
void write_csv(const std::string &path, const Dataset &data);

/// Encoding maps from a CSV with header `column,token,code`.
std::vector<EncodingMap> load_encodings(const std::string &path,
                                        UnknownTokenPolicy policy = UnknownTokenPolicy::error);

/// Keeps rows whose `column` value lies in [low, high] and drops the column.
Dataset filter_range(const Dataset &data, const std::string &column, double low, double high);

struct SummaryRow {
    std::string variable;
    double mean = 0.0;
    double variance = 0.0;  // n - 1 denominator
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
};

std::vector<SummaryRow> summary_stats(const Dataset &data);

struct PearsonResult {
    double r = 0.0;
    double p = 1.0;  // two-sided, t distribution with n - 2 degrees of freedom
};

inline constexpr double kSignificanceLevel = 0.05;

/// Throws InputError for length mismatch, n < 3 or a constant input.
PearsonResult pearson(const Eigen::Ref<const Eigen::VectorXd> &x, const Eigen::Ref<const Eigen::VectorXd> &y);

/// Grouping file: a `[predict]` line followed by one name per line, and an
/// optional `[causal]` section. Unlisted names are causal. Blank lines and
/// lines starting with '#' are ignored.
VariableGrouping parse_grouping(const std::string &path, const std::vector<std::string> &columns);
VariableGrouping parse_grouping_text(std::istream &in, const std::vector<std::string> &columns);

/// Grouping from a list of predict names.
VariableGrouping grouping_from_predict(const std::vector<std::string> &predict, const std::vector<std::string> &columns);

}  // namespace gges

#endif  // GGES_DATA_HPP
