#include "gges/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "gges/errors.hpp"

namespace gges {

namespace {

struct Cell {
    std::string text;
    bool quoted = false;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<Cell> split_record(const std::string &line, std::size_t line_no) {
    std::vector<Cell> cells;
    std::size_t i = 0;
    for (;;) {
        Cell cell;
        std::size_t start = i;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i < line.size() && line[i] == '"') {
            cell.quoted = true;
            ++i;
            for (;;) {
                if (i >= line.size()) throw ParseError("data", "line " + std::to_string(line_no) + ": unterminated quote");
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cell.text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                cell.text += line[i++];
            }
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i < line.size() && line[i] != ',') {
                throw ParseError("data", "line " + std::to_string(line_no) + ": text after closing quote");
            }
        } else {
            i = start;
            auto comma = line.find(',', i);
            auto end = comma == std::string::npos ? line.size() : comma;
            cell.text = std::string(trim(std::string_view(line).substr(i, end - i)));
            i = end;
        }
        cells.push_back(std::move(cell));
        if (i >= line.size()) break;
        ++i;  // comma
        if (i == line.size()) {
            cells.push_back({});
            break;
        }
    }
    return cells;
}

std::optional<double> parse_real(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

void EncodingMap::validate() const {
    if (mapping.empty()) throw InputError("data", "encoding map for '" + column + "' is empty");
    std::set<int> codes;
    for (const auto &[token, code] : mapping) {
        if (!codes.insert(code).second) {
            throw InputError("data", "encoding map for '" + column + "' reuses code " + std::to_string(code));
        }
    }
}

LoadResult parse_csv(std::istream &in, const LoadOptions &options) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("data", "missing header row");
    ++line_no;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    LoadResult result;
    for (auto &cell : split_record(line, line_no)) {
        if (cell.text.empty()) throw ParseError("data", "empty column name in header");
        if (std::find(result.data.names.begin(), result.data.names.end(), cell.text) != result.data.names.end()) {
            throw InputError("data", "duplicate column name '" + cell.text + "'");
        }
        result.data.names.push_back(cell.text);
    }
    const std::size_t cols = result.data.names.size();

    std::vector<const EncodingMap *> encoders(cols, nullptr);
    for (const auto &map : options.encodings) {
        map.validate();
        auto idx = result.data.column_index(map.column);
        if (!idx) throw InputError("data", "encoding map names unknown column '" + map.column + "'");
        encoders[static_cast<std::size_t>(*idx)] = &map;
    }
    auto is_missing = [&](const Cell &cell) {
        return std::find(options.missing_sentinels.begin(), options.missing_sentinels.end(), cell.text) !=
               options.missing_sentinels.end();
    };

    std::vector<double> values;
    std::size_t kept = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_record(line, line_no);
        if (cells.size() != cols) {
            throw ParseError("data", "line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                                         " fields, found " + std::to_string(cells.size()));
        }
        ++result.raw_rows;
        if (std::any_of(cells.begin(), cells.end(), is_missing)) {
            if (options.missing == MissingPolicy::strict) {
                throw InputError("data", "line " + std::to_string(line_no) + ": missing value");
            }
            ++result.dropped_rows;
            continue;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (const EncodingMap *map = encoders[c]) {
                auto it = map->mapping.find(cells[c].text);
                if (it != map->mapping.end()) {
                    values.push_back(it->second);
                } else if (map->policy_on_unknown == UnknownTokenPolicy::code_minus_one) {
                    values.push_back(-1.0);
                } else {
                    throw InputError("data", "line " + std::to_string(line_no) + ": unknown token '" + cells[c].text +
                                                 "' in column '" + map->column + "'");
                }
            } else if (auto v = parse_real(cells[c].text)) {
                values.push_back(*v);
            } else {
                throw ParseError("data", "line " + std::to_string(line_no) + ": cannot parse '" + cells[c].text +
                                             "' in column '" + result.data.names[c] + "'");
            }
        }
        ++kept;
    }
    result.data.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(cols));
    return result;
}

LoadResult load_csv(const std::string &path, const LoadOptions &options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("data", "cannot open '" + path + "'");
    return parse_csv(in, options);
}

void write_csv(std::ostream &out, const Dataset &data) {
    for (std::size_t c = 0; c < data.names.size(); ++c) out << (c ? "," : "") << csv_field(data.names[c]);
    out << '\n';
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << format_real(data.values(r, c));
        out << '\n';
    }
}

void write_csv(const std::string &path, const Dataset &data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("data", "cannot write '" + path + "'");
    write_csv(out, data);
}

std::vector<EncodingMap> load_encodings(const std::string &path, UnknownTokenPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("data", "cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("data", "encoding file has no header");
    auto header = split_record(line, line_no);
    if (header.size() != 3 || header[0].text != "column" || header[1].text != "token" || header[2].text != "code") {
        throw ParseError("data", "encoding file header must be column,token,code");
    }
    std::vector<EncodingMap> maps;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_record(line, line_no);
        if (cells.size() != 3) throw ParseError("data", "encoding line " + std::to_string(line_no) + ": expected 3 fields");
        auto code = parse_real(cells[2].text);
        if (!code || *code != std::floor(*code)) {
            throw ParseError("data", "encoding line " + std::to_string(line_no) + ": code must be an integer");
        }
        auto it = std::find_if(maps.begin(), maps.end(), [&](const EncodingMap &m) { return m.column == cells[0].text; });
        if (it == maps.end()) {
            maps.push_back({cells[0].text, {}, policy});
            it = maps.end() - 1;
        }
        if (!it->mapping.emplace(cells[1].text, static_cast<int>(*code)).second) {
            throw InputError("data", "token '" + cells[1].text + "' listed twice for column '" + cells[0].text + "'");
        }
    }
    for (const auto &m : maps) m.validate();
    return maps;
}

Dataset filter_range(const Dataset &data, const std::string &column, double low, double high) {
    auto idx = data.column_index(column);
    if (!idx) throw InputError("data", "column '" + column + "' not found");
    if (low > high) throw InputError("data", "empty range");
    std::vector<Eigen::Index> rows;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const double v = data.values(r, *idx);
        if (v >= low && v <= high) rows.push_back(r);
    }
    std::vector<std::string> keep;
    for (const auto &name : data.names)
        if (name != column) keep.push_back(name);
    return data.select_rows(rows).select_columns(keep);
}

std::vector<SummaryRow> summary_stats(const Dataset &data) {
    if (data.rows() < 2) throw InputError("data", "need at least two rows for summary statistics");
    std::vector<SummaryRow> rows;
    const double n = static_cast<double>(data.rows());
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        const auto col = data.values.col(c);
        SummaryRow row;
        row.variable = data.names[static_cast<std::size_t>(c)];
        row.mean = col.mean();
        row.variance = (col.array() - row.mean).square().sum() / (n - 1.0);
        row.sd = std::sqrt(row.variance);
        row.min = col.minCoeff();
        row.max = col.maxCoeff();
        rows.push_back(std::move(row));
    }
    return rows;
}

PearsonResult pearson(const Eigen::Ref<const Eigen::VectorXd> &x, const Eigen::Ref<const Eigen::VectorXd> &y) {
    if (x.size() != y.size()) throw InputError("data", "correlation inputs differ in length");
    const auto n = x.size();
    if (n < 3) throw InputError("data", "correlation needs at least three observations");
    const Eigen::ArrayXd dx = x.array() - x.mean();
    const Eigen::ArrayXd dy = y.array() - y.mean();
    const double sxx = dx.square().sum();
    const double syy = dy.square().sum();
    if (!(sxx > 0.0) || !(syy > 0.0)) throw InputError("data", "correlation undefined for a constant input");

    PearsonResult result;
    result.r = std::clamp((dx * dy).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(n - 2);
    if (std::abs(result.r) >= 1.0) {
        result.p = 0.0;
        return result;
    }
    const double t = result.r * std::sqrt(df / (1.0 - result.r * result.r));
    boost::math::students_t dist(df);
    result.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return result;
}

namespace {

int lookup_column(const std::vector<std::string> &columns, const std::string &name) {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InputError("data", "grouping names unknown variable '" + name + "'");
    return static_cast<int>(it - columns.begin());
}

}  // namespace

VariableGrouping grouping_from_predict(const std::vector<std::string> &predict, const std::vector<std::string> &columns) {
    std::vector<int> indices;
    for (const auto &name : predict) {
        int idx = lookup_column(columns, name);
        if (std::find(indices.begin(), indices.end(), idx) != indices.end()) {
            throw InputError("data", "variable '" + name + "' listed twice in grouping");
        }
        indices.push_back(idx);
    }
    if (indices.size() == columns.size()) throw InputError("data", "causal group is empty");
    return VariableGrouping(static_cast<int>(columns.size()), indices);
}

VariableGrouping parse_grouping_text(std::istream &in, const std::vector<std::string> &columns) {
    enum class Section { none, predict, causal } section = Section::none;
    std::vector<std::string> predict;
    std::set<std::string> listed;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = std::string(trim(line));
        if (text.empty() || text.front() == '#') continue;
        if (text == "[predict]") {
            section = Section::predict;
            continue;
        }
        if (text == "[causal]") {
            section = Section::causal;
            continue;
        }
        if (section == Section::none) {
            throw ParseError("data", "grouping line " + std::to_string(line_no) + ": name outside a section");
        }
        lookup_column(columns, text);
        if (!listed.insert(text).second) throw InputError("data", "variable '" + text + "' listed twice in grouping");
        if (section == Section::predict) predict.push_back(text);
    }
    return grouping_from_predict(predict, columns);
}

VariableGrouping parse_grouping(const std::string &path, const std::vector<std::string> &columns) {
    std::ifstream in(path);
    if (!in) throw InputError("data", "cannot open '" + path + "'");
    return parse_grouping_text(in, columns);
}

}  // namespace gges
