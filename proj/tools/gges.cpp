// Command-line front end: discover, effects, metrics, crossval, simulate, stats.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gges/data.hpp"
#include "gges/dot.hpp"
#include "gges/effects.hpp"
#include "gges/errors.hpp"
#include "gges/metrics.hpp"
#include "gges/random.hpp"
#include "gges/search.hpp"
#include "gges/simulate.hpp"

namespace {

using nlohmann::json;

constexpr const char *kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Write-temp-then-rename so readers never observe a half-written file.
void write_atomically(const std::string &path, const std::string &content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw gges::InputError("cli", "cannot write '" + path + "'");
        out << content;
        if (!out.flush()) throw gges::InputError("cli", "write to '" + path + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw gges::InputError("cli", "cannot move output into place at '" + path + "': " + ec.message());
}

std::string metric_text(const std::optional<double> &v, int precision) {
    return v ? fmt::format("{:.{}f}", *v, precision) : std::string("NA");
}

json metric_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

json metrics_json(const gges::PatternMetrics &m) {
    return {{"ap", metric_json(m.ap)}, {"ar", metric_json(m.ar)}, {"ahp", metric_json(m.ahp)}, {"ahr", metric_json(m.ahr)}};
}

json pattern_edges_json(const gges::Pattern &p) {
    json edges = json::array();
    std::vector<std::pair<gges::Edge, bool>> all;
    for (const auto &e : p.directed_edges()) all.push_back({e, true});
    for (const auto &e : p.undirected_edges()) all.push_back({e, false});
    std::sort(all.begin(), all.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (const auto &[e, directed] : all) {
        edges.push_back({{"from", p.names()[static_cast<std::size_t>(e.from)]},
                         {"to", p.names()[static_cast<std::size_t>(e.to)]},
                         {"directed", directed}});
    }
    return edges;
}

json run_info(const std::string &command, json inputs, const std::vector<std::string> &outputs, const Stopwatch &clock) {
    return {{"schema_version", kSchemaVersion},
            {"command", command},
            {"version", kVersion},
            {"config", std::move(inputs)},
            {"outputs", outputs},
            {"timing_seconds", clock.seconds()}};
}

// ---------------------------------------------------------------------------
// Shared option groups

struct DataOptions {
    std::string path;
    std::string encodings;
    std::string unknown = "error";
    std::string missing = "drop-row";
    std::vector<std::string> sentinels{"", "NA"};
    std::string year_column;
    std::string year_range;

    void add(CLI::App *app, bool with_year_filter) {
        app->add_option("--data", path, "Input CSV")->required()->check(CLI::ExistingFile);
        app->add_option("--encodings", encodings, "Encoding map CSV (column,token,code)")->check(CLI::ExistingFile);
        app->add_option("--unknown-token", unknown, "Unknown token policy")->check(CLI::IsMember({"error", "code"}));
        app->add_option("--missing", missing, "Missing value policy")->check(CLI::IsMember({"drop-row", "strict"}));
        app->add_option("--na", sentinels, "Missing-value sentinels")->delimiter(',');
        if (with_year_filter) {
            app->add_option("--year-column", year_column, "Column used by --year-range");
            app->add_option("--year-range", year_range, "Inclusive range lo..hi");
        }
    }

    gges::LoadResult load() const {
        gges::LoadOptions opts;
        opts.missing = missing == "strict" ? gges::MissingPolicy::strict : gges::MissingPolicy::drop_row;
        opts.missing_sentinels = sentinels;
        if (!encodings.empty()) {
            opts.encodings = gges::load_encodings(encodings, unknown == "code" ? gges::UnknownTokenPolicy::code_minus_one
                                                                              : gges::UnknownTokenPolicy::error);
        }
        auto result = gges::load_csv(path, opts);
        if (!year_range.empty()) {
            if (year_column.empty()) throw gges::InputError("cli", "--year-range needs --year-column");
            auto sep = year_range.find("..");
            if (sep == std::string::npos) throw gges::InputError("cli", "--year-range must look like lo..hi");
            double lo = 0, hi = 0;
            try {
                lo = std::stod(year_range.substr(0, sep));
                hi = std::stod(year_range.substr(sep + 2));
            } catch (const std::exception &) {
                throw gges::InputError("cli", "--year-range must look like lo..hi");
            }
            result.data = gges::filter_range(result.data, year_column, lo, hi);
        } else if (!year_column.empty()) {
            throw gges::InputError("cli", "--year-column needs --year-range");
        }
        return result;
    }

    json to_json() const {
        json j = {{"data", path}, {"missing", missing}, {"na", sentinels}};
        if (!encodings.empty()) j["encodings"] = encodings, j["unknown_token"] = unknown;
        if (!year_range.empty()) j["year_column"] = year_column, j["year_range"] = year_range;
        return j;
    }
};

struct GroupingOptions {
    std::string file;
    std::vector<std::string> predict;

    void add(CLI::App *app) {
        auto *g = app->add_option("--grouping", file, "Grouping file")->check(CLI::ExistingFile);
        auto *p = app->add_option("--predict", predict, "Comma-separated predict variables")->delimiter(',');
        g->excludes(p);
    }

    gges::VariableGrouping resolve(const std::vector<std::string> &columns) const {
        if (!file.empty()) return gges::parse_grouping(file, columns);
        return gges::grouping_from_predict(predict, columns);
    }
};

std::vector<std::string> predict_names(const gges::VariableGrouping &g, const std::vector<std::string> &names) {
    std::vector<std::string> out;
    for (int i : g.predict()) out.push_back(names[static_cast<std::size_t>(i)]);
    return out;
}

int index_or_throw(const std::vector<std::string> &names, const std::string &name, const char *what) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw gges::InputError("cli", std::string(what) + " '" + name + "' is not in the graph");
    return static_cast<int>(it - names.begin());
}

// ---------------------------------------------------------------------------
// discover

struct DiscoverArgs {
    DataOptions data;
    GroupingOptions grouping;
    double penalty = 1.0;
    std::string out_dot;
    std::string out_json;
};

int cmd_discover(const DiscoverArgs &args) {
    Stopwatch clock;
    auto loaded = args.data.load();
    const auto &data = loaded.data;
    auto grouping = args.grouping.resolve(data.names);
    gges::ScoreConfig config;
    config.penalty_discount = args.penalty;
    config.validate();

    auto stats = gges::sufficient_stats(data);
    auto result = gges::gges(stats, grouping, config);

    json trace = json::array();
    for (const auto &step : result.trace) {
        trace.push_back({{"phase", gges::to_string(step.phase)},
                         {"from", data.names[static_cast<std::size_t>(step.edge.from)]},
                         {"to", data.names[static_cast<std::size_t>(step.edge.to)]},
                         {"score", step.score_after}});
    }

    json inputs = args.data.to_json();
    inputs["penalty_discount"] = config.penalty_discount;
    inputs["variance_floor"] = config.variance_floor;
    inputs["improvement_epsilon"] = gges::kImprovementEpsilon;
    inputs["predict"] = predict_names(grouping, data.names);

    std::vector<std::string> outputs;
    if (!args.out_dot.empty()) outputs.push_back(args.out_dot);
    if (!args.out_json.empty()) outputs.push_back(args.out_json);

    if (!args.out_dot.empty()) write_atomically(args.out_dot, gges::to_dot(result.pattern));
    json report = run_info("discover", std::move(inputs), outputs, clock);
    report["nodes"] = data.names;
    report["edges"] = pattern_edges_json(result.pattern);
    report["score"] = result.score;
    report["trace_length"] = result.trace.size();
    report["trace"] = std::move(trace);
    report["rows"] = data.rows();
    report["raw_rows"] = loaded.raw_rows;
    report["dropped_rows"] = loaded.dropped_rows;
    if (!args.out_json.empty()) write_atomically(args.out_json, report.dump(2) + "\n");

    std::cout << fmt::format("nodes {}  edges {}  score {:.6f}  moves {}\n", data.names.size(),
                             report["edges"].size(), result.score, result.trace.size());
    if (args.out_dot.empty() && args.out_json.empty()) std::cout << gges::to_dot(result.pattern);
    return 0;
}

// ---------------------------------------------------------------------------
// effects

struct EffectsArgs {
    DataOptions data;
    std::string graph;
    std::string outcome;
    std::string exposure;
    std::string out_json;
    int precision = 4;
};

int cmd_effects(const EffectsArgs &args) {
    Stopwatch clock;
    auto pattern = gges::read_dot_file(args.graph);
    const int outcome = index_or_throw(pattern.names(), args.outcome, "outcome");
    auto data = args.data.load().data.select_columns(pattern.names());
    auto stats = gges::sufficient_stats(data);

    json inputs = args.data.to_json();
    inputs["graph"] = args.graph;
    inputs["outcome"] = args.outcome;
    json effects_json;

    if (!args.exposure.empty()) {
        const int exposure = index_or_throw(pattern.names(), args.exposure, "exposure");
        auto report = gges::ida_effects(exposure, outcome, pattern, stats);
        std::cout << fmt::format("exposure  {}\noutcome   {}\n", report.exposure, report.outcome);
        std::cout << fmt::format("{:<40} {:>14}\n", "Parent set", "Effect");
        effects_json = {{"exposure", report.exposure}, {"outcome", report.outcome}, {"tce", report.tce}};
        json sets = json::array();
        for (std::size_t i = 0; i < report.effects.size(); ++i) {
            std::vector<std::string> members;
            for (int p : report.parent_sets[i]) members.push_back(pattern.names()[static_cast<std::size_t>(p)]);
            std::string label = "{";
            for (std::size_t m = 0; m < members.size(); ++m) label += (m ? ", " : "") + members[m];
            label += "}";
            std::cout << fmt::format("{:<40} {:>14.{}f}\n", label, report.effects[i], args.precision);
            sets.push_back({{"parents", members}, {"effect", report.effects[i]}});
        }
        effects_json["candidates"] = std::move(sets);
        std::cout << fmt::format("TCE       {:.{}f}\n", report.tce, args.precision);
        inputs["exposure"] = args.exposure;
    } else {
        auto rows = gges::rank_influence(pattern, stats, outcome);
        std::cout << fmt::format("{:<40} {:>14}\n", "Variables", "TCE Value");
        effects_json = json::array();
        for (const auto &row : rows) {
            std::cout << fmt::format("{:<40} {:>14.{}f}\n", row.variable, row.tce, args.precision);
            effects_json.push_back({{"variable", row.variable}, {"tce", row.tce}});
        }
    }

    if (!args.out_json.empty()) {
        json report = run_info("effects", std::move(inputs), {args.out_json}, clock);
        report["nodes"] = pattern.names();
        report["edges"] = pattern_edges_json(pattern);
        report["effects"] = std::move(effects_json);
        write_atomically(args.out_json, report.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
    std::string estimated;
    std::string reference;
    std::string out_json;
    int precision = 3;
};

int cmd_metrics(const MetricsArgs &args) {
    Stopwatch clock;
    auto estimated = gges::read_dot_file(args.estimated);
    auto reference = gges::read_dot_file(args.reference);
    if (estimated.names() != reference.names()) {
        // Same node set in a different declaration order is still comparable.
        std::vector<gges::Edge> directed, undirected;
        auto remap = [&](int i) { return index_or_throw(reference.names(), estimated.names()[static_cast<std::size_t>(i)], "node"); };
        if (estimated.size() != reference.size()) throw gges::InputError("metrics", "patterns are over different node sets");
        for (const auto &e : estimated.directed_edges()) directed.push_back({remap(e.from), remap(e.to)});
        for (const auto &e : estimated.undirected_edges()) undirected.push_back({remap(e.from), remap(e.to)});
        estimated = gges::Pattern(reference.names(), directed, undirected);
    }
    auto m = gges::pattern_metrics(estimated, reference);
    std::cout << fmt::format("AP  {}\nAR  {}\nAHP {}\nAHR {}\n", metric_text(m.ap, args.precision),
                             metric_text(m.ar, args.precision), metric_text(m.ahp, args.precision),
                             metric_text(m.ahr, args.precision));
    if (!args.out_json.empty()) {
        json report = run_info("metrics", {{"estimated", args.estimated}, {"reference", args.reference}},
                               {args.out_json}, clock);
        report["nodes"] = reference.names();
        report["edges"] = pattern_edges_json(estimated);
        report["metrics"] = metrics_json(m);
        write_atomically(args.out_json, report.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// crossval

struct CrossvalArgs {
    DataOptions data;
    GroupingOptions grouping;
    int k = 10;
    std::uint64_t seed = 0;
    double penalty = 1.0;
    std::string reference;
    std::string out_json;
    int precision = 3;
};

int cmd_crossval(const CrossvalArgs &args) {
    Stopwatch clock;
    auto data = args.data.load().data;
    std::optional<gges::Pattern> reference;
    if (!args.reference.empty()) {
        reference = gges::read_dot_file(args.reference);
        data = data.select_columns(reference->names());
    }
    auto grouping = args.grouping.resolve(data.names);
    gges::ScoreConfig config;
    config.penalty_discount = args.penalty;
    config.validate();
    auto report = gges::kfold_evaluate(data, grouping, args.k, args.seed, config, reference);

    const int w = args.precision + 3;
    std::cout << fmt::format("{:<6} {:>7} {:>6} {:>{}} {:>{}} {:>{}} {:>{}}\n", "fold", "train", "test", "AP", w, "AR",
                             w, "AHP", w, "AHR", w);
    json folds = json::array();
    for (std::size_t f = 0; f < report.per_fold.size(); ++f) {
        const auto &fold = report.per_fold[f];
        if (fold.failed) {
            std::cout << fmt::format("{:<6} {:>7} {:>6} failed: {}\n", f + 1, fold.train_rows, fold.test_rows, fold.error);
        } else {
            const auto &m = fold.metrics;
            std::cout << fmt::format("{:<6} {:>7} {:>6} {:>{}} {:>{}} {:>{}} {:>{}}\n", f + 1, fold.train_rows,
                                     fold.test_rows, metric_text(m.ap, args.precision), w,
                                     metric_text(m.ar, args.precision), w, metric_text(m.ahp, args.precision), w,
                                     metric_text(m.ahr, args.precision), w);
        }
        json entry = {{"fold", f + 1}, {"train_rows", fold.train_rows}, {"test_rows", fold.test_rows},
                      {"failed", fold.failed}};
        if (fold.failed) {
            entry["error"] = fold.error;
        } else {
            entry["metrics"] = metrics_json(fold.metrics);
            entry["heldout_loglik"] = fold.heldout_loglik ? json(*fold.heldout_loglik) : json(nullptr);
            entry["edges"] = pattern_edges_json(fold.pattern);
        }
        folds.push_back(std::move(entry));
    }
    const auto &m = report.mean;
    std::cout << fmt::format("{:<6} {:>7} {:>6} {:>{}} {:>{}} {:>{}} {:>{}}\n", "mean", "", "",
                             metric_text(m.ap, args.precision), w, metric_text(m.ar, args.precision), w,
                             metric_text(m.ahp, args.precision), w, metric_text(m.ahr, args.precision), w);

    if (!args.out_json.empty()) {
        json inputs = args.data.to_json();
        inputs["k"] = args.k;
        inputs["seed"] = args.seed;
        inputs["penalty_discount"] = config.penalty_discount;
        inputs["predict"] = predict_names(grouping, data.names);
        inputs["reference"] = args.reference.empty() ? json("full-data pattern") : json(args.reference);
        json out = run_info("crossval", std::move(inputs), {args.out_json}, clock);
        out["nodes"] = data.names;
        out["edges"] = pattern_edges_json(report.reference_pattern);
        out["reference_kind"] = report.reference == gges::ReferenceKind::ground_truth ? "ground truth" : "full-data pattern";
        out["folds"] = std::move(folds);
        out["metrics"] = metrics_json(report.mean);
        write_atomically(args.out_json, out.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    int nodes = 5;
    double edge_prob = 0.3;
    long samples = 1000;
    std::uint64_t seed = 0;
    double coef_low = 0.5;
    double coef_high = 1.5;
    std::string out_data;
    std::string out_truth;
};

int cmd_simulate(const SimulateArgs &args) {
    if (args.samples < 1) throw gges::InputError("cli", "--samples must be positive");
    gges::Rng master(args.seed);
    const auto dag_seed = master.next();
    const auto sem_seed = master.next();
    const auto sample_seed = master.next();

    auto dag = gges::random_dag(args.nodes, args.edge_prob, dag_seed);
    auto sem = gges::random_sem(dag, args.coef_low, args.coef_high, sem_seed);
    auto data = gges::sample(sem, args.samples, sample_seed);

    std::ostringstream csv;
    gges::write_csv(csv, data);
    write_atomically(args.out_data, csv.str());
    write_atomically(args.out_truth, gges::to_dot(dag));
    std::cout << fmt::format("wrote {} rows x {} columns, {} true edges\n", data.rows(), data.cols(), dag.edge_count());
    return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
    DataOptions data;
    std::string against;
};

int cmd_stats(const StatsArgs &args) {
    auto data = args.data.load().data;
    auto rows = gges::summary_stats(data);
    std::optional<int> target;
    if (!args.against.empty()) {
        target = data.column_index(args.against);
        if (!target) throw gges::InputError("data", "column '" + args.against + "' not found");
    }

    std::cout << fmt::format("{:<32} {:>14} {:>14} {:>14} {:>27}", "Variables", "Mean", "Variance", "SD", "Range");
    if (target) std::cout << fmt::format(" {:>9} {:>11}", "r", "p-value");
    std::cout << '\n';
    for (std::size_t c = 0; c < rows.size(); ++c) {
        const auto &row = rows[c];
        std::cout << fmt::format("{:<32} {:>14.6g} {:>14.6g} {:>14.6g} {:>27}", row.variable, row.mean, row.variance,
                                 row.sd, fmt::format("{:.6g}, {:.6g}", row.min, row.max));
        if (target) {
            try {
                auto pr = gges::pearson(data.values.col(static_cast<Eigen::Index>(c)), data.values.col(*target));
                std::cout << fmt::format(" {:>9.4f} {:>11.4g}{}", pr.r, pr.p, pr.p < gges::kSignificanceLevel ? " *" : "");
            } catch (const gges::InputError &) {
                std::cout << fmt::format(" {:>9} {:>11}", "NA", "NA");
            }
        }
        std::cout << '\n';
    }
    if (target) std::cout << "* p < 0.05\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Grouped greedy causal structure search"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    DiscoverArgs discover;
    auto *d = app.add_subcommand("discover", "Learn a causal pattern from data");
    discover.data.add(d, true);
    discover.grouping.add(d);
    d->add_option("--penalty", discover.penalty, "BIC penalty discount")->check(CLI::PositiveNumber);
    d->add_option("--out-dot", discover.out_dot, "Pattern in DOT format");
    d->add_option("--out-json", discover.out_json, "JSON report");

    EffectsArgs effects;
    auto *e = app.add_subcommand("effects", "Estimate total causal effects on an outcome");
    effects.data.add(e, false);
    e->add_option("--graph", effects.graph, "Pattern or DAG in DOT format")->required()->check(CLI::ExistingFile);
    e->add_option("--outcome", effects.outcome, "Outcome variable")->required();
    e->add_option("--exposure", effects.exposure, "Single exposure variable");
    e->add_option("--out-json", effects.out_json, "JSON report");
    e->add_option("--precision", effects.precision, "Printed decimals")->check(CLI::Range(0, 17));

    MetricsArgs metrics;
    auto *m = app.add_subcommand("metrics", "Compare an estimated pattern with a reference");
    m->add_option("--estimated", metrics.estimated, "Estimated DOT")->required()->check(CLI::ExistingFile);
    m->add_option("--reference", metrics.reference, "Reference DOT")->required()->check(CLI::ExistingFile);
    m->add_option("--out-json", metrics.out_json, "JSON report");
    m->add_option("--precision", metrics.precision, "Printed decimals")->check(CLI::Range(0, 17));

    CrossvalArgs crossval;
    auto *c = app.add_subcommand("crossval", "k-fold evaluation of the search");
    crossval.data.add(c, false);
    crossval.grouping.add(c);
    c->add_option("--k", crossval.k, "Number of folds");
    c->add_option("--seed", crossval.seed, "Shuffle seed");
    c->add_option("--penalty", crossval.penalty, "BIC penalty discount")->check(CLI::PositiveNumber);
    c->add_option("--reference", crossval.reference, "Ground-truth DOT")->check(CLI::ExistingFile);
    c->add_option("--out-json", crossval.out_json, "JSON report");
    c->add_option("--precision", crossval.precision, "Printed decimals")->check(CLI::Range(0, 17));

    SimulateArgs simulate;
    auto *s = app.add_subcommand("simulate", "Sample data from a random linear-Gaussian SEM");
    s->add_option("--nodes", simulate.nodes, "Variable count")->check(CLI::PositiveNumber);
    s->add_option("--edge-prob", simulate.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
    s->add_option("--samples", simulate.samples, "Row count");
    s->add_option("--seed", simulate.seed, "Seed");
    s->add_option("--coef-low", simulate.coef_low, "Smallest |coefficient|");
    s->add_option("--coef-high", simulate.coef_high, "Largest |coefficient|");
    s->add_option("--out-data", simulate.out_data, "Sampled CSV")->required();
    s->add_option("--out-truth", simulate.out_truth, "True DAG in DOT format")->required();

    StatsArgs stats;
    auto *t = app.add_subcommand("stats", "Descriptive statistics and Pearson correlations");
    stats.data.add(t, true);
    t->add_option("--against", stats.against, "Correlate every column with this one");

    CLI11_PARSE(app, argc, argv);

    try {
        if (d->parsed()) return cmd_discover(discover);
        if (e->parsed()) return cmd_effects(effects);
        if (m->parsed()) return cmd_metrics(metrics);
        if (c->parsed()) return cmd_crossval(crossval);
        if (s->parsed()) return cmd_simulate(simulate);
        if (t->parsed()) return cmd_stats(stats);
    } catch (const gges::Error &err) {
        std::cerr << "gges: " << err.module() << ": " << err.what() << '\n';
        return 2;
    } catch (const std::exception &err) {
        std::cerr << "gges: cli: " << err.what() << '\n';
        return 2;
    }
    return 1;
}
