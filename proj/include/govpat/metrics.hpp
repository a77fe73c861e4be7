#ifndef GOVPAT_METRICS_HPP
#define GOVPAT_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace govpat {

/// One-vs-rest counts for a single class. tn is derived so that
/// tp + fp + fn + tn always equals the sample total.
struct ClassCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
};

/// Per-class one-vs-rest confusion accumulator over a fixed set of
/// classes 0..C-1.
class ConfusionCounts {
public:
    explicit ConfusionCounts(std::size_t class_count);

    /// Record one labeled prediction. Throws InvalidClass.
    void add(int predicted, int truth);

    /// Pairwise count addition; shards must cover the same classes.
    void merge(const ConfusionCounts& other);

    std::size_t class_count() const { return tp_.size(); }
    long total() const { return total_; }
    /// Number of correct predictions (sum of per-class tp).
    long correct() const;
    ClassCounts for_class(std::size_t label) const;

private:
    std::vector<long> tp_;
    std::vector<long> fp_;
    std::vector<long> fn_;
    long total_ = 0;
};

/// Per-class scores plus their weighted mean. Classes whose score
/// denominator was zero score 0 and are flagged, not excluded.
struct ScoreBreakdown {
    std::vector<double> per_class;
    std::vector<bool> zero_support;
    double macro = 0.0;
};

/// F_beta per class: (1+beta^2)*tp / ((1+beta^2)*tp + fp + beta^2*fn).
/// weights are the per-class cost factors of the mean; empty means all 1.
ScoreBreakdown f_score(const ConfusionCounts& counts, double beta = 1.0,
                       std::span<const double> weights = {});

/// G_beta per class: tp / (tp + fp + beta*fn).
ScoreBreakdown g_score(const ConfusionCounts& counts, double beta = 1.0,
                       std::span<const double> weights = {});

/// Quality accounting for issued label queries. A query is apt when the
/// prediction it interrupted was wrong.
struct QueryTally {
    long apt = 0;
    long inapt = 0;

    long total() const { return apt + inapt; }
    bool ratio_defined() const { return total() > 0; }
    double ratio() const { return ratio_defined() ? static_cast<double>(apt) / static_cast<double>(total()) : 0.0; }
};

void record_query(QueryTally& tally, int predicted, int truth);

/// Snapshot of a finished evaluation. Everything here lands in the
/// serialized reports except runtime_seconds, which stays in memory so
/// artifacts are byte-stable across runs.
struct MetricsReport {
    long total_samples = 0;
    double accuracy = 0.0;
    ScoreBreakdown f1;
    ScoreBreakdown g1;
    std::vector<ClassCounts> per_class;
    long apt_queries = 0;
    long inapt_queries = 0;
    bool apt_ratio_defined = false;
    double apt_ratio = 0.0;
    double runtime_seconds = 0.0;
};

MetricsReport build_report(const ConfusionCounts& counts, const QueryTally& queries,
                           double beta = 1.0, std::span<const double> weights = {});

}  // namespace govpat

#endif
