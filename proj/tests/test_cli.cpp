#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

#include "gges/data.hpp"
#include "gges/dot.hpp"
#include "gges/simulate.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string output;  // stdout and stderr together
};

Run run(const std::string &args) {
    std::string cmd = std::string("\"") + GGES_CLI_PATH + "\" " + args + " 2>&1";
    Run r;
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gges_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return "\"" + (path / name).string() + "\""; }
    fs::path file(const std::string &name) const { return path / name; }
};

gges::Dataset chain_data(Eigen::Index n, std::uint64_t seed) {
    gges::Dag chain(std::vector<std::string>{"x", "m", "y"}, std::vector<gges::Edge>{{0, 1}, {1, 2}});
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);
    b(1, 0) = 1.0;
    b(2, 1) = 1.0;
    return gges::sample(gges::SemModel(chain, b, Eigen::VectorXd::Ones(3)), n, seed);
}

}  // namespace

TEST_CASE("simulate writes data and truth deterministically") {
    TempDir dir;
    auto r = run("simulate --nodes 5 --edge-prob 0 --samples 37 --seed 3 --out-data " + dir / "d.csv" + " --out-truth " +
                 dir / "t.dot");
    REQUIRE(r.status == 0);
    CHECK(lines(slurp(dir.file("d.csv"))).size() == 38);
    CHECK(gges::read_dot_file(dir.file("t.dot").string()).directed_edges().empty());

    REQUIRE(run("simulate --nodes 6 --edge-prob 0.5 --samples 50 --seed 9 --out-data " + dir / "a.csv" +
                " --out-truth " + dir / "a.dot").status == 0);
    REQUIRE(run("simulate --nodes 6 --edge-prob 0.5 --samples 50 --seed 9 --out-data " + dir / "b.csv" +
                " --out-truth " + dir / "b.dot").status == 0);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    CHECK(slurp(dir.file("a.dot")) == slurp(dir.file("b.dot")));
    CHECK_FALSE(fs::exists(dir.file("a.csv.tmp")));
}

TEST_CASE("discover respects the predict group and is reproducible") {
    TempDir dir;
    gges::write_csv(dir.file("chain.csv").string(), chain_data(3000, 1));
    auto args = "discover --data " + dir / "chain.csv" + " --predict y --out-dot " + dir / "g.dot";
    REQUIRE(run(args + " --out-json " + dir / "r.json").status == 0);
    fs::copy_file(dir.file("r.json"), dir.file("a.json"));
    REQUIRE(run(args + " --out-json " + dir / "r.json").status == 0);
    fs::copy_file(dir.file("r.json"), dir.file("b.json"));
    auto pattern = gges::read_dot_file(dir.file("g.dot").string());
    for (const auto &e : pattern.directed_edges()) CHECK(pattern.names()[static_cast<std::size_t>(e.from)] != "y");
    for (const auto &e : pattern.undirected_edges()) {
        CHECK(pattern.names()[static_cast<std::size_t>(e.from)] != "y");
        CHECK(pattern.names()[static_cast<std::size_t>(e.to)] != "y");
    }

    std::regex timing("\"timing_seconds\": [^,\\n]*");
    auto a = std::regex_replace(slurp(dir.file("a.json")), timing, "\"timing_seconds\": 0");
    auto b = std::regex_replace(slurp(dir.file("b.json")), timing, "\"timing_seconds\": 0");
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": 1") != std::string::npos);
    CHECK(a.find("\"trace_length\"") != std::string::npos);
}

TEST_CASE("discover filters by year range") {
    TempDir dir;
    {
        std::ofstream out(dir.file("y.csv"));
        out << "year,a,b\n";
        for (int i = 0; i < 40; ++i) out << 2000 + i % 25 << "," << (i * 7) % 11 << "," << (i * i) % 13 << "\n";
    }
    int in_range = 0;
    for (int i = 0; i < 40; ++i) in_range += (2000 + i % 25 >= 2006 && 2000 + i % 25 <= 2020);
    auto r = run("discover --data " + dir / "y.csv" + " --year-column year --year-range 2006..2020 --out-dot " +
                 dir / "g.dot" + " --out-json " + dir / "r.json");
    REQUIRE(r.status == 0);
    CHECK(slurp(dir.file("r.json")).find("\"rows\": " + std::to_string(in_range)) != std::string::npos);
}

TEST_CASE("effects on a sampled chain") {
    TempDir dir;
    gges::write_csv(dir.file("chain.csv").string(), chain_data(100000, 2));
    {
        std::ofstream out(dir.file("truth.dot"));
        out << "digraph g {\n  \"x\";\n  \"m\";\n  \"y\";\n  \"x\" -> \"m\";\n  \"m\" -> \"y\";\n}\n";
    }
    auto one = run("effects --data " + dir / "chain.csv" + " --graph " + dir / "truth.dot" + " --outcome y --exposure x");
    REQUIRE(one.status == 0);
    std::smatch m;
    REQUIRE(std::regex_search(one.output, m, std::regex("TCE\\s+(-?[0-9.]+)")));
    CHECK(std::abs(std::stod(m[1]) - 1.0) < 0.05);

    auto back = run("effects --data " + dir / "chain.csv" + " --graph " + dir / "truth.dot" + " --outcome x --exposure y");
    REQUIRE(std::regex_search(back.output, m, std::regex("TCE\\s+(-?[0-9.]+)")));
    CHECK(std::stod(m[1]) == 0.0);

    auto table = run("effects --data " + dir / "chain.csv" + " --graph " + dir / "truth.dot" + " --outcome y");
    REQUIRE(table.status == 0);
    auto rows = lines(table.output);
    REQUIRE(rows.size() == 3);  // header + one row per other variable
    double prev = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream in(rows[i]);
        std::string name;
        double tce = 0;
        in >> name >> tce;
        CHECK(std::abs(tce) <= prev);
        prev = std::abs(tce);
    }

    auto bad = run("effects --data " + dir / "chain.csv" + " --graph " + dir / "truth.dot" + " --outcome nope");
    CHECK(bad.status != 0);
    CHECK(lines(bad.output).size() == 1);
}

TEST_CASE("metrics command") {
    TempDir dir;
    auto write = [&](const std::string &name, const std::string &body) {
        std::ofstream(dir.file(name)) << "digraph g {\n  \"a\";\n  \"b\";\n  \"c\";\n  \"d\";\n" << body << "}\n";
    };
    write("e.dot", "  \"a\" -> \"b\";\n  \"b\" -> \"c\";\n");
    write("r.dot", "  \"a\" -> \"b\";\n  \"c\" -> \"b\";\n");
    write("o.dot", "  \"c\" -> \"d\";\n");

    auto same = run("metrics --estimated " + dir / "e.dot" + " --reference " + dir / "e.dot");
    REQUIRE(same.status == 0);
    CHECK(same.output == "AP  1.000\nAR  1.000\nAHP 1.000\nAHR 1.000\n");
    auto hand = run("metrics --estimated " + dir / "e.dot" + " --reference " + dir / "r.dot");
    CHECK(hand.output == "AP  1.000\nAR  1.000\nAHP 0.500\nAHR 0.500\n");
    auto disjoint = run("metrics --estimated " + dir / "e.dot" + " --reference " + dir / "o.dot");
    CHECK(disjoint.output == "AP  0.000\nAR  0.000\nAHP 0.000\nAHR 0.000\n");
    write("n.dot", "");
    CHECK(run("metrics --estimated " + dir / "n.dot" + " --reference " + dir / "e.dot").output ==
          "AP  NA\nAR  0.000\nAHP NA\nAHR 0.000\n");
}

TEST_CASE("crossval command") {
    TempDir dir;
    REQUIRE(run("simulate --nodes 5 --edge-prob 0.4 --samples 500 --seed 5 --out-data " + dir / "d.csv" +
                " --out-truth " + dir / "t.dot").status == 0);
    auto a = run("crossval --data " + dir / "d.csv" + " --seed 4 --out-json " + dir / "a.json");
    auto b = run("crossval --data " + dir / "d.csv" + " --seed 4 --out-json " + dir / "b.json");
    REQUIRE(a.status == 0);
    CHECK(a.output == b.output);
    auto rows = lines(a.output);
    REQUIRE(rows.size() == 12);  // header, 10 folds, mean
    CHECK(rows[10].rfind("10 ", 0) == 0);
    CHECK(rows[11].rfind("mean", 0) == 0);

    auto k1 = run("crossval --data " + dir / "d.csv" + " --k 1 --seed 4");
    CHECK(k1.status != 0);
}

TEST_CASE("stats command") {
    TempDir dir;
    std::ofstream(dir.file("k.csv")) << "a,b,c\n1,5,2\n2,5,4\n3,5,7\n";
    auto r = run("stats --data " + dir / "k.csv" + " --against a");
    REQUIRE(r.status == 0);
    auto rows = lines(r.output);
    REQUIRE(rows.size() >= 4);
    CHECK(rows[0].find("Mean") < rows[0].find("Variance"));
    CHECK(rows[0].find("Variance") < rows[0].find("SD"));
    CHECK(rows[0].find("SD") < rows[0].find("Range"));
    CHECK(rows[1].find("1.0000") != std::string::npos);
    CHECK(rows[2].find("NA") != std::string::npos);
}

TEST_CASE("errors are one line and nonzero") {
    TempDir dir;
    std::ofstream(dir.file("bad.csv")) << "a,b\n1,x\n";
    auto r = run("discover --data " + dir / "bad.csv" + " --out-dot " + dir / "g.dot");
    CHECK(r.status != 0);
    REQUIRE(lines(r.output).size() == 1);
    CHECK(r.output.rfind("gges: data: ", 0) == 0);
    CHECK_FALSE(fs::exists(dir.file("g.dot")));
}
