// Command-line front end: fit (train and save a pattern), run (one
// session), matrix (rate x strategy x budget grid), inspect (dump a
// saved pattern as plot-ready CSV).
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "govpat/errors.hpp"
#include "govpat/harness.hpp"

namespace {

govpat::RateMode parse_rate(const std::string& text) {
    const auto fail = [&]() -> govpat::RateMode {
        throw govpat::Error("rate '" + text + "' not understood; use fixed:C or uniform:MIN:MAX");
    };
    const auto num = [&](const std::string& s) {
        try {
            const long v = std::stol(s);
            if (v < 1) return fail(), std::size_t{0};
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            return fail(), std::size_t{0};
        }
    };
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() == 2 && parts[0] == "fixed") return govpat::RateMode::fixed(num(parts[1]));
    if (parts.size() == 3 && parts[0] == "uniform") {
        const govpat::RateMode r = govpat::RateMode::uniform(num(parts[1]), num(parts[2]));
        if (r.c_min > r.c_max) return fail();
        return r;
    }
    return fail();
}

// "B:W" = B queries per window of W samples
std::pair<std::size_t, std::size_t> parse_budget(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw govpat::Error("budget '" + text + "' not understood; use QUERIES:WINDOW");
    try {
        const long b = std::stol(text.substr(0, colon));
        const long w = std::stol(text.substr(colon + 1));
        if (b < 0 || w < 1) throw govpat::Error("budget needs QUERIES >= 0 and WINDOW >= 1");
        return {static_cast<std::size_t>(b), static_cast<std::size_t>(w)};
    } catch (const govpat::Error&) {
        throw;
    } catch (const std::exception&) {
        throw govpat::Error("budget '" + text + "' not understood; use QUERIES:WINDOW");
    }
}

govpat::QueryStrategy parse_strategy(const std::string& text) {
    if (text == "linear") return govpat::QueryStrategy::Linear;
    if (text == "exponential") return govpat::QueryStrategy::Exponential;
    throw govpat::Error("strategy '" + text + "' not understood; use linear or exponential");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw govpat::Error("cannot write '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw govpat::Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string pattern_csv(const govpat::FittedPattern& fitted,
                        const std::vector<std::string>& labels) {
    std::string out = "class_id,dataset_class,label,point_index,t";
    const std::size_t d = fitted.pattern.dim();
    for (std::size_t j = 0; j < d; ++j) out += ",y" + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < fitted.pattern.curves.size(); ++i) {
        const govpat::PrincipalCurve& c = fitted.pattern.curves[i];
        const int ds = fitted.pattern_to_dataset[i];
        const std::string label = i < labels.size() ? labels[i] : "";
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            out += std::to_string(c.class_id) + "," + std::to_string(ds) + "," + label + "," +
                   std::to_string(k);
            out += "," + nlohmann::json(c.points[k].t).dump();
            for (const double v : c.points[k].y) out += "," + nlohmann::json(v).dump();
            out += "\n";
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming time-series classification with per-class principal curves"};
    app.fallthrough();
    app.set_config("--config")->description("flat key=value file; flags override it");

    // data source
    std::string input;
    std::string time_column = "t";
    std::string label_column = "label";
    std::vector<std::string> feature_columns;
    double split_fraction = 0.6;
    std::string rate_text = "fixed:1";
    app.add_option("--input", input, "input CSV stream");
    app.add_option("--time-column", time_column, "time column name")->capture_default_str();
    app.add_option("--label-column", label_column, "label column name")->capture_default_str();
    app.add_option("--features", feature_columns,
                   "feature columns (comma separated; default: all other columns)")
        ->delimiter(',');
    app.add_option("--split", split_fraction, "training share of the stream")
        ->capture_default_str();
    app.add_option("--rate", rate_text, "sampling rate: fixed:C or uniform:MIN:MAX")
        ->capture_default_str();

    // model and replay knobs
    govpat::RunConfig cfg;
    bool no_prune = false;
    bool no_match_prune = false;
    bool no_learning = false;
    std::string strategy_text = "linear";
    app.add_option("--error-threshold", cfg.fit.error_threshold,
                   "max mean projection error during curve growth")
        ->capture_default_str();
    app.add_option("--bar-width", cfg.fit.bar_width, "annulus half-width fraction")
        ->capture_default_str();
    app.add_option("--initial-radius", cfg.fit.initial_radius,
                   "first growth radius (default: 5th-neighbour distance)");
    app.add_option("--angle-threshold", cfg.fit.angle_threshold_deg,
                   "prune vertices bending less than this many degrees")
        ->capture_default_str();
    app.add_flag("--no-prune", no_prune, "skip low-angle vertex pruning");
    app.add_option("--potential-threshold", cfg.match.potential_rel_threshold,
                   "relative feature distance admitting candidate curve points")
        ->capture_default_str();
    app.add_option("--grid-step", cfg.match.grid_step,
                   "offset grid step in seconds (default: span/500)");
    app.add_option("--refine-halfwidth", cfg.match.refine_halfwidth,
                   "candidate interval half-width (default: window duration)");
    app.add_flag("--no-match-prune", no_match_prune, "score the full offset grid");
    app.add_option("--alpha", cfg.learning.alpha, "online update step size")
        ->capture_default_str();
    app.add_flag("--no-learning", no_learning, "disable online curve updates");
    app.add_option("--strategy", strategy_text, "query strategy: linear or exponential")
        ->capture_default_str();
    app.add_option("--query-threshold", cfg.query.threshold, "query strategy threshold")
        ->capture_default_str();
    app.add_option("--history-capacity", cfg.query.history_capacity,
                   "similarity history length L")
        ->capture_default_str();
    app.add_option("--budget", cfg.budget, "granted queries per budget window")
        ->capture_default_str();
    app.add_option("--budget-window", cfg.budget_window, "budget window size in samples")
        ->capture_default_str();
    app.add_option("--history-length", cfg.history_length, "classifier window length H")
        ->capture_default_str();
    app.add_option("--repetitions", cfg.repetitions, "repetitions per matrix cell")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for random sampling rates")
        ->capture_default_str();
    app.add_flag("--standardize", cfg.standardize,
                 "standardize features with train-set statistics");

    // artifacts
    std::string report_path;
    std::string summary_path;
    std::string out_path;
    std::string pattern_path;
    app.add_option("--report", report_path, "write the JSON report here");
    app.add_option("--summary", summary_path, "write the CSV summary here");
    app.add_option("--out", out_path, "main output path (pattern for fit, CSV for inspect)");
    app.add_option("--pattern", pattern_path, "pattern JSON to inspect");

    // matrix grid
    std::vector<std::string> rate_list;
    std::vector<std::string> strategy_list;
    std::vector<std::string> budget_list;
    app.add_option("--rates", rate_list, "matrix rates, e.g. fixed:1,fixed:10,uniform:1:10")
        ->delimiter(',');
    app.add_option("--strategies", strategy_list, "matrix strategies, e.g. linear,exponential")
        ->delimiter(',');
    app.add_option("--budgets", budget_list, "matrix budgets, e.g. 30:100,90:1000")
        ->delimiter(',');

    CLI::App* cmd_fit = app.add_subcommand("fit", "train a pattern and save it");
    CLI::App* cmd_run = app.add_subcommand("run", "run one streaming session");
    CLI::App* cmd_matrix = app.add_subcommand("matrix", "run a rate/strategy/budget grid");
    CLI::App* cmd_inspect = app.add_subcommand("inspect", "dump a saved pattern as CSV");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        cfg.prune = !no_prune;
        cfg.match.prune_enabled = !no_match_prune;
        cfg.learning.enabled = !no_learning;
        cfg.query.strategy = parse_strategy(strategy_text);
        const govpat::RateMode rate = parse_rate(rate_text);

        const auto need_input = [&]() -> govpat::Dataset {
            if (input.empty()) throw govpat::Error("--input is required for this command");
            govpat::StreamSpec spec;
            spec.path = input;
            spec.time_column = time_column;
            spec.label_column = label_column;
            spec.feature_columns = feature_columns;
            return govpat::ingest_csv(spec);
        };

        if (cmd_fit->parsed()) {
            if (out_path.empty()) throw govpat::Error("fit needs --out for the pattern file");
            const govpat::Dataset data = need_input();
            const auto thinned = govpat::resample(data.samples, rate, cfg.seed);
            const govpat::Split split = govpat::split_chronological(thinned, split_fraction);
            const govpat::FittedPattern fitted =
                govpat::fit_pattern(split.train, cfg.fit, cfg.prune);
            write_file(out_path, govpat::pattern_to_json(fitted, data.class_names));
            std::cout << "pattern: " << fitted.pattern.class_count() << " curves, dim "
                      << fitted.pattern.dim() << ", span [0, " << fitted.pattern.t_end << "]\n";
            for (const govpat::PrincipalCurve& c : fitted.pattern.curves)
                std::cout << "  class " << c.class_id << ": " << c.size() << " points\n";
            return 0;
        }

        if (cmd_run->parsed()) {
            const govpat::Dataset data = need_input();
            const govpat::SessionResult result =
                govpat::run_stream(data, split_fraction, rate, cfg, cfg.seed);
            if (!report_path.empty())
                write_file(report_path, govpat::session_report_json(result, cfg, data, rate,
                                                                    split_fraction));
            if (!summary_path.empty())
                write_file(summary_path, govpat::session_report_csv(result, rate));
            const govpat::MetricsReport& r = result.report;
            std::cout << "samples " << r.total_samples << "  accuracy " << r.accuracy
                      << "  f1 " << r.f1.macro << "  g1 " << r.g1.macro << "\n";
            std::cout << "queries " << r.apt_queries + r.inapt_queries << " (apt "
                      << r.apt_queries << ", inapt " << r.inapt_queries << ")\n";
            std::cout << "runtime_seconds " << r.runtime_seconds << "\n";
            return 0;
        }

        if (cmd_matrix->parsed()) {
            const govpat::Dataset data = need_input();
            if (rate_list.empty()) rate_list = {rate_text};
            if (strategy_list.empty()) strategy_list = {strategy_text};
            if (budget_list.empty())
                budget_list = {std::to_string(cfg.budget) + ":" + std::to_string(cfg.budget_window)};
            std::vector<govpat::MatrixCell> cells;
            for (const std::string& r : rate_list)
                for (const std::string& s : strategy_list)
                    for (const std::string& b : budget_list) {
                        govpat::MatrixCell cell;
                        cell.rate = parse_rate(r);
                        cell.strategy = parse_strategy(s);
                        const auto [bq, bw] = parse_budget(b);
                        cell.budget = bq;
                        cell.budget_window = bw;
                        cells.push_back(cell);
                    }
            const std::vector<govpat::MatrixRow> rows =
                govpat::run_matrix(data, split_fraction, cfg, cells);
            if (!report_path.empty())
                write_file(report_path, govpat::matrix_report_json(rows, cfg));
            if (!summary_path.empty()) write_file(summary_path, govpat::matrix_report_csv(rows));
            std::cout << govpat::matrix_report_csv(rows);
            return 0;
        }

        if (cmd_inspect->parsed()) {
            if (pattern_path.empty()) throw govpat::Error("inspect needs --pattern");
            std::vector<std::string> labels;
            const govpat::FittedPattern fitted =
                govpat::pattern_from_json(read_file(pattern_path), &labels);
            const std::string csv = pattern_csv(fitted, labels);
            if (out_path.empty())
                std::cout << csv;
            else
                write_file(out_path, csv);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
