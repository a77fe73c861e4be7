#include "govpat/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "govpat/errors.hpp"

namespace govpat {

namespace {

using json = nlohmann::ordered_json;

// Shortest round-trip formatting, shared by the JSON and CSV emitters
// so the two artifacts always agree on a number's spelling.
std::string fmt(double v) { return json(v).dump(); }

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& field, std::size_t row, const std::string& column) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(row, "cannot parse '" + field + "' in column '" + column + "'");
    return v;
}

}  // namespace

std::string rate_label(const RateMode& rate) {
    if (rate.kind == RateMode::Kind::Fixed) return "fixed(" + std::to_string(rate.c) + ")";
    return "uniform(" + std::to_string(rate.c_min) + "," + std::to_string(rate.c_max) + ")";
}

Dataset ingest_csv(const StreamSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw Error("cannot open '" + spec.path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error("'" + spec.path + "' is empty");
    const std::vector<std::string> header = split_fields(line);

    const auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw MissingColumn(name);
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t time_col = column_index(spec.time_column);
    const std::size_t label_col = column_index(spec.label_column);

    std::vector<std::size_t> feature_cols;
    std::vector<std::string> feature_names;
    if (spec.feature_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (i != time_col && i != label_col) {
                feature_cols.push_back(i);
                feature_names.push_back(header[i]);
            }
    } else {
        for (const std::string& name : spec.feature_columns) {
            feature_cols.push_back(column_index(name));
            feature_names.push_back(name);
        }
    }
    if (feature_cols.empty()) throw Error("no feature columns in '" + spec.path + "'");

    Dataset data;
    std::map<std::string, int> label_ids;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw ParseError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
        TimedSample s;
        s.t = parse_double(fields[time_col], row, spec.time_column);
        s.x.reserve(feature_cols.size());
        for (std::size_t j = 0; j < feature_cols.size(); ++j)
            s.x.push_back(parse_double(fields[feature_cols[j]], row, feature_names[j]));

        const std::string& raw_label = fields[label_col];
        const auto [it, fresh] =
            label_ids.emplace(raw_label, static_cast<int>(data.class_names.size()));
        if (fresh) data.class_names.push_back(raw_label);
        s.label = it->second;

        if (!data.samples.empty() && !(s.t > data.samples.back().t)) throw NonMonotoneTime(row);
        data.samples.push_back(std::move(s));
        ++row;
    }
    return data;
}

Dataset make_dataset(std::vector<TimedSample> samples, std::size_t class_count) {
    Dataset data;
    data.samples = std::move(samples);
    data.class_names.reserve(class_count);
    for (std::size_t c = 0; c < class_count; ++c) data.class_names.push_back(std::to_string(c));
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const auto& s = data.samples[i];
        if (!s.label) throw Error("sample " + std::to_string(i) + " has no label");
        if (*s.label < 0 || *s.label >= static_cast<int>(class_count))
            throw InvalidClass(*s.label, class_count);
        if (i > 0 && !(s.t > data.samples[i - 1].t)) throw NonMonotoneTime(i);
    }
    return data;
}

std::vector<TimedSample> resample(std::span<const TimedSample> samples,
                                  const RateMode& rate, std::uint64_t seed) {
    if (rate.kind == RateMode::Kind::Fixed) {
        if (rate.c < 1) throw Error("fixed rate c must be at least 1");
        std::vector<TimedSample> out;
        out.reserve(samples.size() / rate.c + 1);
        for (std::size_t i = 0; i < samples.size(); i += rate.c) out.push_back(samples[i]);
        return out;
    }
    if (rate.c_min < 1 || rate.c_min > rate.c_max)
        throw Error("uniform rate needs 1 <= c_min <= c_max");
    std::mt19937_64 rng(seed);
    const std::uint64_t span_width = rate.c_max - rate.c_min + 1;
    std::vector<TimedSample> out;
    std::size_t i = 0;
    while (i < samples.size()) {
        out.push_back(samples[i]);
        // modular draw instead of uniform_int_distribution: identical
        // streams on every standard library
        i += rate.c_min + static_cast<std::size_t>(rng() % span_width);
    }
    return out;
}

Split split_chronological(std::span<const TimedSample> samples, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw Error("split fraction must lie strictly between 0 and 1");
    const std::size_t m =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(samples.size())));
    Split out;
    out.train.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(m));
    out.test.assign(samples.begin() + static_cast<std::ptrdiff_t>(m), samples.end());
    return out;
}

FittedPattern fit_pattern(std::span<const TimedSample> train, const FitConfig& cfg,
                          bool prune) {
    std::map<int, std::vector<TimedSample>> by_class;
    for (const TimedSample& s : train) {
        if (!s.label) throw Error("training sample without label");
        by_class[*s.label].push_back(s);
    }
    if (by_class.empty()) throw TooFewSamples(0);

    FittedPattern out;
    std::vector<PrincipalCurve> curves;
    int dense = 0;
    for (auto& [dataset_id, samples] : by_class) {
        PrincipalCurve curve = fit_clpc(samples, cfg, dense);
        if (prune) curve = prune_low_angle(curve, cfg.angle_threshold_deg);
        curves.push_back(std::move(curve));
        out.pattern_to_dataset.push_back(dataset_id);
        ++dense;
    }
    out.pattern = build_governing_pattern(std::move(curves));
    return out;
}

namespace {

// Train-set mean/std per feature, applied to both halves. A constant
// feature keeps its centered value (divisor 1).
void standardize_in_place(std::vector<TimedSample>& train, std::vector<TimedSample>& test) {
    if (train.empty()) return;
    const std::size_t d = train.front().x.size();
    std::vector<double> mean(d, 0.0);
    std::vector<double> sq(d, 0.0);
    for (const TimedSample& s : train)
        for (std::size_t j = 0; j < d; ++j) {
            mean[j] += s.x[j];
            sq[j] += s.x[j] * s.x[j];
        }
    const double n = static_cast<double>(train.size());
    std::vector<double> stddev(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        mean[j] /= n;
        const double var = sq[j] / n - mean[j] * mean[j];
        stddev[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    const auto apply = [&](std::vector<TimedSample>& v) {
        for (TimedSample& s : v)
            for (std::size_t j = 0; j < d; ++j) s.x[j] = (s.x[j] - mean[j]) / stddev[j];
    };
    apply(train);
    apply(test);
}

}  // namespace

SessionResult run_session(std::span<const TimedSample> train,
                          std::span<const TimedSample> test, const RunConfig& cfg,
                          std::size_t class_count) {
    if (cfg.history_length < 1) throw Error("history length must be at least 1");
    if (class_count == 0) throw Error("need at least one class");
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<TimedSample> train_v(train.begin(), train.end());
    std::vector<TimedSample> test_v(test.begin(), test.end());
    if (cfg.standardize) standardize_in_place(train_v, test_v);

    SessionResult out;
    out.fitted = fit_pattern(train_v, cfg.fit, cfg.prune);
    GoverningPattern pattern = out.fitted.pattern;

    std::vector<int> to_pattern(class_count, -1);
    for (std::size_t i = 0; i < out.fitted.pattern_to_dataset.size(); ++i) {
        const int ds = out.fitted.pattern_to_dataset[i];
        if (ds < 0 || ds >= static_cast<int>(class_count)) throw InvalidClass(ds, class_count);
        to_pattern[static_cast<std::size_t>(ds)] = static_cast<int>(i);
    }

    ConfusionCounts confusion(class_count);
    QueryTally tally;
    SimilarityHistory history(cfg.query.history_capacity);
    BudgetState budget{cfg.budget_window, cfg.budget, 0, 0};
    std::deque<TimedSample> window;
    std::vector<bool> missing_seen(class_count, false);

    for (std::size_t i = 0; i < test_v.size(); ++i) {
        const TimedSample& s = test_v[i];
        if (!s.label) throw Error("test sample " + std::to_string(i) + " has no label");
        const int truth = *s.label;
        if (truth < 0 || truth >= static_cast<int>(class_count))
            throw InvalidClass(truth, class_count);

        window.push_back(s);
        if (window.size() > cfg.history_length) window.pop_front();
        const Window w{std::vector<TimedSample>(window.begin(), window.end()), false};

        const PredictionOutcome outcome = predict_label(w, pattern, cfg.match);
        const int predicted =
            out.fitted.pattern_to_dataset[static_cast<std::size_t>(outcome.predicted_class)];
        confusion.add(predicted, truth);
        if (to_pattern[static_cast<std::size_t>(truth)] < 0) missing_seen[truth] = true;

        history.push(-outcome.match.score);
        const QueryDecision qd = decide_query(history, cfg.query, budget);
        budget = qd.budget;
        if (qd.demanded == 1) {
            QueryLogEntry entry{i, qd.decision, false};
            if (qd.decision == 1) {
                entry.apt = predicted != truth;
                record_query(tally, predicted, truth);
                if (cfg.learning.enabled)
                    pattern = apply_update(std::move(pattern), outcome, predicted == truth,
                                           cfg.learning);
            }
            out.query_log.push_back(entry);
        }
    }

    for (std::size_t c = 0; c < class_count; ++c)
        if (missing_seen[c]) out.missing_from_train.push_back(static_cast<int>(c));

    out.report = build_report(confusion, tally);
    out.report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.final_pattern = std::move(pattern);
    return out;
}

SessionResult run_stream(const Dataset& data, double split_fraction,
                         const RateMode& rate, const RunConfig& cfg,
                         std::uint64_t seed) {
    const std::vector<TimedSample> thinned = resample(data.samples, rate, seed);
    const Split split = split_chronological(thinned, split_fraction);
    return run_session(split.train, split.test, cfg, data.class_count());
}

Aggregate aggregate(std::vector<double> values) {
    Aggregate a;
    a.values = std::move(values);
    if (a.values.empty()) return a;
    bool all_equal = true;
    for (const double v : a.values)
        if (v != a.values.front()) {
            all_equal = false;
            break;
        }
    if (all_equal) {  // deterministic cells report exactly 0 variance
        a.mean = a.values.front();
        a.variance = 0.0;
        return a;
    }
    const double n = static_cast<double>(a.values.size());
    double sum = 0.0;
    for (const double v : a.values) sum += v;
    a.mean = sum / n;
    double ss = 0.0;
    for (const double v : a.values) ss += (v - a.mean) * (v - a.mean);
    a.variance = ss / n;
    return a;
}

std::vector<MatrixRow> run_matrix(const Dataset& data, double split_fraction,
                                  const RunConfig& base,
                                  std::span<const MatrixCell> cells) {
    if (base.repetitions < 1) throw Error("repetitions must be at least 1");
    std::vector<MatrixRow> rows;
    rows.reserve(cells.size());
    for (const MatrixCell& cell : cells) {
        MatrixRow row;
        row.cell = cell;
        row.repetitions = base.repetitions;
        std::vector<double> acc, f1, g1, ratio;
        try {
            for (std::size_t rep = 0; rep < base.repetitions; ++rep) {
                RunConfig cfg = base;
                cfg.query.strategy = cell.strategy;
                cfg.budget_window = cell.budget_window;
                cfg.budget = cell.budget;
                const SessionResult r =
                    run_stream(data, split_fraction, cell.rate, cfg, base.seed + rep);
                acc.push_back(r.report.accuracy);
                f1.push_back(r.report.f1.macro);
                g1.push_back(r.report.g1.macro);
                ratio.push_back(r.report.apt_ratio);
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        row.accuracy = aggregate(std::move(acc));
        row.f1 = aggregate(std::move(f1));
        row.g1 = aggregate(std::move(g1));
        row.apt_ratio = aggregate(std::move(ratio));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

const char* strategy_label(QueryStrategy s) {
    return s == QueryStrategy::Linear ? "linear" : "exponential";
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json config_json(const RunConfig& cfg) {
    json c;
    c["fit"] = {{"error_threshold", cfg.fit.error_threshold},
                {"bar_width", cfg.fit.bar_width},
                {"initial_radius", optional_json(cfg.fit.initial_radius)},
                {"angle_threshold_deg", cfg.fit.angle_threshold_deg}};
    c["prune"] = cfg.prune;
    c["match"] = {{"potential_rel_threshold", cfg.match.potential_rel_threshold},
                  {"grid_step", optional_json(cfg.match.grid_step)},
                  {"refine_halfwidth", optional_json(cfg.match.refine_halfwidth)},
                  {"prune_enabled", cfg.match.prune_enabled}};
    c["learning"] = {{"alpha", cfg.learning.alpha}, {"enabled", cfg.learning.enabled}};
    c["query"] = {{"strategy", strategy_label(cfg.query.strategy)},
                  {"threshold", cfg.query.threshold},
                  {"history_capacity", cfg.query.history_capacity}};
    c["budget"] = {{"window_size", cfg.budget_window}, {"budget", cfg.budget}};
    c["history_length"] = cfg.history_length;
    c["repetitions"] = cfg.repetitions;
    c["seed"] = cfg.seed;
    c["standardize"] = cfg.standardize;
    return c;
}

json breakdown_json(const ScoreBreakdown& b) {
    json per = json::array();
    for (const double v : b.per_class) per.push_back(v);
    json flags = json::array();
    for (const bool z : b.zero_support) flags.push_back(z);
    return {{"macro", b.macro}, {"per_class", per}, {"zero_support", flags}};
}

json aggregate_json(const Aggregate& a) {
    json values = json::array();
    for (const double v : a.values) values.push_back(v);
    return {{"mean", a.mean}, {"variance", a.variance}, {"values", values}};
}

}  // namespace

std::string session_report_json(const SessionResult& result, const RunConfig& cfg,
                                const Dataset& data, const RateMode& rate,
                                double split_fraction) {
    const MetricsReport& r = result.report;
    json j;
    j["rate"] = rate_label(rate);
    j["split_fraction"] = split_fraction;
    j["samples"] = r.total_samples;
    j["accuracy"] = r.accuracy;
    j["f1"] = breakdown_json(r.f1);
    j["g1"] = breakdown_json(r.g1);

    json confusion = json::array();
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const ClassCounts& cc = r.per_class[c];
        confusion.push_back({{"class", c},
                             {"label", c < data.class_names.size() ? data.class_names[c] : ""},
                             {"tp", cc.tp},
                             {"fp", cc.fp},
                             {"fn", cc.fn},
                             {"tn", cc.tn}});
    }
    j["confusion"] = confusion;

    j["queries"] = {{"apt", r.apt_queries},
                    {"inapt", r.inapt_queries},
                    {"issued", r.apt_queries + r.inapt_queries},
                    {"apt_ratio", r.apt_ratio_defined ? json(r.apt_ratio) : json(nullptr)}};

    json log = json::array();
    for (const QueryLogEntry& e : result.query_log)
        log.push_back({{"sample", e.sample_index},
                       {"granted", e.granted},
                       {"apt", e.granted == 1 ? json(e.apt) : json(nullptr)}});
    j["query_log"] = log;

    json missing = json::array();
    for (const int c : result.missing_from_train) missing.push_back(c);
    j["missing_from_train"] = missing;

    json class_map = json::array();
    for (std::size_t c = 0; c < data.class_names.size(); ++c)
        class_map.push_back({{"id", c}, {"label", data.class_names[c]}});
    j["class_map"] = class_map;

    j["config"] = config_json(cfg);
    return j.dump(2) + "\n";
}

std::string session_report_csv(const SessionResult& result, const RateMode& rate) {
    const MetricsReport& r = result.report;
    std::string out =
        "rate,samples,accuracy,f1_macro,g1_macro,apt_queries,inapt_queries,apt_ratio\n";
    out += rate_label(rate) + "," + std::to_string(r.total_samples) + "," + fmt(r.accuracy) +
           "," + fmt(r.f1.macro) + "," + fmt(r.g1.macro) + "," +
           std::to_string(r.apt_queries) + "," + std::to_string(r.inapt_queries) + ",";
    if (r.apt_ratio_defined) out += fmt(r.apt_ratio);
    out += "\n";
    return out;
}

std::string matrix_report_json(std::span<const MatrixRow> rows, const RunConfig& base) {
    json j;
    j["seed"] = base.seed;
    j["repetitions"] = base.repetitions;
    json cells = json::array();
    for (const MatrixRow& row : rows) {
        json cell;
        cell["rate"] = rate_label(row.cell.rate);
        cell["strategy"] = strategy_label(row.cell.strategy);
        cell["window_size"] = row.cell.budget_window;
        cell["budget"] = row.cell.budget;
        cell["repetitions"] = row.repetitions;
        cell["failed"] = row.failed;
        cell["error"] = row.error;
        cell["accuracy"] = aggregate_json(row.accuracy);
        cell["f1"] = aggregate_json(row.f1);
        cell["g1"] = aggregate_json(row.g1);
        cell["apt_ratio"] = aggregate_json(row.apt_ratio);
        cells.push_back(std::move(cell));
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

std::string matrix_report_csv(std::span<const MatrixRow> rows) {
    std::string out =
        "rate,strategy,window_size,budget,repetitions,failed,"
        "accuracy_mean,accuracy_variance,f1_mean,f1_variance,"
        "g1_mean,g1_variance,apt_ratio_mean,apt_ratio_variance\n";
    for (const MatrixRow& row : rows) {
        out += rate_label(row.cell.rate);
        out += ",";
        out += strategy_label(row.cell.strategy);
        out += "," + std::to_string(row.cell.budget_window) + "," +
               std::to_string(row.cell.budget) + "," + std::to_string(row.repetitions) + "," +
               (row.failed ? "1" : "0") + "," + fmt(row.accuracy.mean) + "," +
               fmt(row.accuracy.variance) + "," + fmt(row.f1.mean) + "," +
               fmt(row.f1.variance) + "," + fmt(row.g1.mean) + "," + fmt(row.g1.variance) +
               "," + fmt(row.apt_ratio.mean) + "," + fmt(row.apt_ratio.variance) + "\n";
    }
    return out;
}

std::string pattern_to_json(const FittedPattern& fitted,
                            std::span<const std::string> class_names) {
    json j;
    j["format"] = "govpat.pattern";
    j["version"] = 1;
    j["dim"] = fitted.pattern.dim();
    j["t_start"] = fitted.pattern.t_start;
    j["t_end"] = fitted.pattern.t_end;
    json curves = json::array();
    for (std::size_t i = 0; i < fitted.pattern.curves.size(); ++i) {
        const PrincipalCurve& c = fitted.pattern.curves[i];
        const int ds = i < fitted.pattern_to_dataset.size()
                           ? fitted.pattern_to_dataset[i]
                           : static_cast<int>(i);
        json points = json::array();
        for (const CurvePoint& p : c.points) {
            json point = json::array();
            point.push_back(p.t);
            for (const double v : p.y) point.push_back(v);
            points.push_back(std::move(point));
        }
        curves.push_back(
            {{"class_id", c.class_id},
             {"dataset_class", ds},
             {"label",
              ds >= 0 && static_cast<std::size_t>(ds) < class_names.size()
                  ? json(class_names[static_cast<std::size_t>(ds)])
                  : json(nullptr)},
             {"points", std::move(points)}});
    }
    j["curves"] = curves;
    return j.dump(2) + "\n";
}

FittedPattern pattern_from_json(const std::string& text,
                                std::vector<std::string>* class_names) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("pattern file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "govpat.pattern")
        throw Error("not a pattern file (missing format marker)");
    if (j.value("version", 0) != 1)
        throw Error("unsupported pattern version " + std::to_string(j.value("version", 0)));

    FittedPattern out;
    std::vector<PrincipalCurve> curves;
    if (class_names) class_names->clear();
    for (const json& cj : j.at("curves")) {
        PrincipalCurve c;
        c.class_id = cj.at("class_id").get<int>();
        for (const json& pj : cj.at("points")) {
            if (!pj.is_array() || pj.size() < 2)
                throw Error("pattern point needs at least a time and one feature");
            CurvePoint p;
            p.t = pj[0].get<double>();
            for (std::size_t k = 1; k < pj.size(); ++k) p.y.push_back(pj[k].get<double>());
            c.points.push_back(std::move(p));
        }
        if (c.points.size() < 2) throw Error("pattern curve needs at least two points");
        out.pattern_to_dataset.push_back(cj.value("dataset_class", c.class_id));
        if (class_names) {
            const json label = cj.value("label", json(nullptr));
            class_names->push_back(label.is_string() ? label.get<std::string>()
                                                     : std::to_string(c.class_id));
        }
        curves.push_back(std::move(c));
    }
    // preserve stored geometry: assemble by hand instead of re-anchoring
    if (curves.empty()) throw EmptyPattern();
    out.pattern.curves = std::move(curves);
    out.pattern.t_start = j.at("t_start").get<double>();
    out.pattern.t_end = j.at("t_end").get<double>();
    return out;
}

}  // namespace govpat
