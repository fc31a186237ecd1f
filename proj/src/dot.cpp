#include "gges/dot.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "gges/errors.hpp"

namespace gges {

namespace {

void check_name(const std::string &name) {
    if (name.find_first_of("\"\r\n") != std::string::npos) {
        throw InputError("graph", "node name '" + name + "' cannot be written as DOT");
    }
}

std::string quoted(const std::string &name) { return '"' + name + '"'; }

std::string emit(const std::vector<std::string> &names, const std::vector<Edge> &directed,
                 const std::vector<Edge> &undirected) {
    for (const auto &name : names) check_name(name);

    struct Line {
        Edge edge;
        bool directed;
    };
    std::vector<Line> lines;
    for (const auto &e : directed) lines.push_back({e, true});
    for (const auto &e : undirected) lines.push_back({e, false});
    std::sort(lines.begin(), lines.end(), [](const Line &a, const Line &b) { return a.edge < b.edge; });

    std::ostringstream out;
    out << "digraph g {\n";
    for (const auto &name : names) out << "  " << quoted(name) << ";\n";
    for (const auto &line : lines) {
        out << "  " << quoted(names[static_cast<std::size_t>(line.edge.from)]) << " -> "
            << quoted(names[static_cast<std::size_t>(line.edge.to)]);
        if (!line.directed) out << " [dir=none]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

// Tokens of the dialect: quoted identifiers and the punctuation below.
class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    void expect(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
        pos_ += token.size();
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    std::string quoted_name() {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected quoted node name");
        auto close = text_.find('"', pos_ + 1);
        if (close == std::string_view::npos) fail("unterminated node name");
        std::string name(text_.substr(pos_ + 1, close - pos_ - 1));
        if (name.find_first_of("\r\n") != std::string::npos) fail("line break inside node name");
        pos_ = close + 1;
        return name;
    }

    [[noreturn]] void fail(const std::string &why) const {
        auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos_), '\n');
        throw ParseError("graph", "DOT line " + std::to_string(line) + ": " + why);
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_dot(const Pattern &pattern) {
    return emit(pattern.names(), pattern.directed_edges(), pattern.undirected_edges());
}

std::string to_dot(const Dag &dag) { return emit(dag.names(), dag.edges(), {}); }

Pattern parse_dot(std::string_view text) {
    Lexer lex(text);
    lex.expect("digraph");
    lex.expect("g");
    lex.expect("{");

    std::vector<std::string> names;
    auto intern = [&](const std::string &name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<int>(it - names.begin());
        names.push_back(name);
        return static_cast<int>(names.size() - 1);
    };

    struct Parsed {
        Edge edge;
        bool directed;
    };
    std::vector<Parsed> parsed;
    while (!lex.peek('}')) {
        int from = intern(lex.quoted_name());
        if (lex.accept("->")) {
            int to = intern(lex.quoted_name());
            bool directed = true;
            if (lex.accept("[")) {
                lex.expect("dir=none");
                lex.expect("]");
                directed = false;
            }
            if (from == to) lex.fail("self-loop");
            parsed.push_back({{from, to}, directed});
        }
        lex.expect(";");
    }
    lex.expect("}");
    if (!lex.at_end()) lex.fail("trailing content after closing brace");

    Pattern pattern(names);
    for (const auto &p : parsed) {
        if (pattern.adjacent(p.edge.from, p.edge.to)) {
            throw ParseError("graph", "pair " + names[static_cast<std::size_t>(p.edge.from)] + ", " +
                                          names[static_cast<std::size_t>(p.edge.to)] + " listed twice");
        }
        if (p.directed) {
            pattern.add_directed(p.edge.from, p.edge.to);
        } else {
            pattern.add_undirected(p.edge.from, p.edge.to);
        }
    }
    return pattern;
}

Dag parse_dot_dag(std::string_view text) {
    Pattern pattern = parse_dot(text);
    if (!pattern.undirected_edges().empty()) throw ParseError("graph", "DAG file contains undirected edges");
    auto edges = pattern.directed_edges();
    return Dag(pattern.names(), edges);
}

Pattern read_dot_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("graph", "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dot(buffer.str());
}

}  // namespace gges
