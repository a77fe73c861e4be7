#ifndef GOVPAT_HARNESS_HPP
#define GOVPAT_HARNESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "govpat/classifier.hpp"
#include "govpat/clpc.hpp"
#include "govpat/matching.hpp"
#include "govpat/metrics.hpp"
#include "govpat/model.hpp"
#include "govpat/sampling.hpp"

namespace govpat {

/// How the stream's sampling rate is simulated: keep the first of every
/// c consecutive samples, c either fixed or drawn per step.
struct RateMode {
    enum class Kind { Fixed, RandomUniform };
    Kind kind = Kind::Fixed;
    std::size_t c = 1;        // Fixed
    std::size_t c_min = 1;    // RandomUniform bounds, inclusive
    std::size_t c_max = 1;

    static RateMode fixed(std::size_t c) { return {Kind::Fixed, c, 1, 1}; }
    static RateMode uniform(std::size_t c_min, std::size_t c_max) {
        return {Kind::RandomUniform, 1, c_min, c_max};
    }
};

std::string rate_label(const RateMode& rate);

/// Where a stream comes from and how to slice it.
struct StreamSpec {
    std::string path;
    std::string time_column = "t";
    std::string label_column = "label";
    /// Empty: every other column, in header order.
    std::vector<std::string> feature_columns;
    double split_fraction = 0.6;
    RateMode rate;
};

/// A fully ingested stream. Labels are mapped to dense ids in order of
/// first appearance; class_names[id] is the original spelling.
struct Dataset {
    std::vector<TimedSample> samples;
    std::vector<std::string> class_names;

    std::size_t dim() const { return samples.empty() ? 0 : samples.front().x.size(); }
    std::size_t class_count() const { return class_names.size(); }
};

/// Parse the CSV behind spec.path. Throws MissingColumn, ParseError,
/// NonMonotoneTime.
Dataset ingest_csv(const StreamSpec& spec);

/// Build a Dataset from already-labeled samples (synthetic sources).
/// Class ids must be dense; names default to their decimal spelling.
Dataset make_dataset(std::vector<TimedSample> samples, std::size_t class_count);

/// Keep the first of every c consecutive samples. Timestamps are
/// untouched, so gaps widen. The seed feeds the per-step draw of c in
/// RandomUniform mode and nothing else.
std::vector<TimedSample> resample(std::span<const TimedSample> samples,
                                  const RateMode& rate, std::uint64_t seed);

/// First fraction of the stream (by count) for training, rest for test.
struct Split {
    std::vector<TimedSample> train;
    std::vector<TimedSample> test;
};
Split split_chronological(std::span<const TimedSample> samples, double fraction);

/// Everything one session needs. The seed is consumed by resampling
/// only; replay decisions are deterministic by construction.
struct RunConfig {
    FitConfig fit;
    bool prune = true;
    MatchConfig match;
    LearningConfig learning;
    QueryConfig query;
    std::size_t budget_window = 100;
    std::size_t budget = 30;
    /// Window length H of the replay classifier.
    std::size_t history_length = 10;
    std::size_t repetitions = 1;
    std::uint64_t seed = 0;
    /// Standardize features with train-set mean/std before fitting and
    /// replay. Off by default.
    bool standardize = false;
};

/// Pattern fitted from a training stream. Curves carry dense pattern
/// ids; pattern_to_dataset maps them back to dataset class ids (the two
/// differ when some dataset class never occurs in train).
struct FittedPattern {
    GoverningPattern pattern;
    std::vector<int> pattern_to_dataset;
};
FittedPattern fit_pattern(std::span<const TimedSample> train, const FitConfig& cfg,
                          bool prune);

/// One row per sample whose query strategy demanded a label. granted
/// reflects the budget gate; apt is meaningful only when granted.
struct QueryLogEntry {
    std::size_t sample_index = 0;
    int granted = 0;
    bool apt = false;
};

struct SessionResult {
    MetricsReport report;
    std::vector<QueryLogEntry> query_log;
    /// Dataset class ids that occur in test but never in train.
    std::vector<int> missing_from_train;
    GoverningPattern final_pattern;
    FittedPattern fitted;
};

/// Fit on train, then replay test in stream order: maintain the last-H
/// window, predict each sample, feed the negated match score to the
/// query strategy, and on granted queries reveal the true label (and
/// update the curves when learning is on). Scoring uses all test
/// labels; queries affect learning only.
SessionResult run_session(std::span<const TimedSample> train,
                          std::span<const TimedSample> test, const RunConfig& cfg,
                          std::size_t class_count);

/// resample -> chronological split -> run_session.
SessionResult run_stream(const Dataset& data, double split_fraction,
                         const RateMode& rate, const RunConfig& cfg,
                         std::uint64_t seed);

/// One cell of the evaluation grid.
struct MatrixCell {
    RateMode rate;
    QueryStrategy strategy = QueryStrategy::Linear;
    std::size_t budget_window = 100;
    std::size_t budget = 30;
};

/// Mean and population variance of one metric across repetitions.
/// Bitwise-identical values short-circuit to variance exactly 0.
struct Aggregate {
    std::vector<double> values;
    double mean = 0.0;
    double variance = 0.0;
};
Aggregate aggregate(std::vector<double> values);

struct MatrixRow {
    MatrixCell cell;
    std::size_t repetitions = 0;
    bool failed = false;
    std::string error;
    Aggregate accuracy;
    Aggregate f1;
    Aggregate g1;
    Aggregate apt_ratio;
};

/// Run every cell repetitions times (seed + rep feeds resampling) and
/// aggregate. Cell failures are captured in the row, not thrown.
std::vector<MatrixRow> run_matrix(const Dataset& data, double split_fraction,
                                  const RunConfig& base,
                                  std::span<const MatrixCell> cells);

// Serialized artifacts. All of them are byte-stable for identical
// inputs; wall-clock timing never reaches them.
std::string session_report_json(const SessionResult& result, const RunConfig& cfg,
                                const Dataset& data, const RateMode& rate,
                                double split_fraction);
std::string session_report_csv(const SessionResult& result, const RateMode& rate);
std::string matrix_report_json(std::span<const MatrixRow> rows, const RunConfig& base);
std::string matrix_report_csv(std::span<const MatrixRow> rows);
std::string pattern_to_json(const FittedPattern& fitted,
                            std::span<const std::string> class_names);
FittedPattern pattern_from_json(const std::string& text,
                                std::vector<std::string>* class_names = nullptr);

}  // namespace govpat

#endif
