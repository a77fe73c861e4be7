#include "govpat/metrics.hpp"

#include <numeric>

#include "govpat/errors.hpp"

namespace govpat {

ConfusionCounts::ConfusionCounts(std::size_t class_count)
    : tp_(class_count, 0), fp_(class_count, 0), fn_(class_count, 0) {
    if (class_count == 0) throw Error("confusion accumulator needs at least one class");
}

void ConfusionCounts::add(int predicted, int truth) {
    const int c = static_cast<int>(tp_.size());
    if (predicted < 0 || predicted >= c) throw InvalidClass(predicted, tp_.size());
    if (truth < 0 || truth >= c) throw InvalidClass(truth, tp_.size());
    if (predicted == truth) {
        ++tp_[static_cast<std::size_t>(truth)];
    } else {
        ++fp_[static_cast<std::size_t>(predicted)];
        ++fn_[static_cast<std::size_t>(truth)];
    }
    ++total_;
}

void ConfusionCounts::merge(const ConfusionCounts& other) {
    if (other.tp_.size() != tp_.size())
        throw Error("cannot merge confusion counts over different class sets");
    for (std::size_t i = 0; i < tp_.size(); ++i) {
        tp_[i] += other.tp_[i];
        fp_[i] += other.fp_[i];
        fn_[i] += other.fn_[i];
    }
    total_ += other.total_;
}

long ConfusionCounts::correct() const {
    return std::accumulate(tp_.begin(), tp_.end(), 0L);
}

ClassCounts ConfusionCounts::for_class(std::size_t label) const {
    if (label >= tp_.size()) throw InvalidClass(static_cast<int>(label), tp_.size());
    ClassCounts out;
    out.tp = tp_[label];
    out.fp = fp_[label];
    out.fn = fn_[label];
    out.tn = total_ - out.tp - out.fp - out.fn;
    return out;
}

namespace {

ScoreBreakdown weighted_scores(const ConfusionCounts& counts,
                               std::span<const double> weights,
                               double (*score_one)(const ClassCounts&, double),
                               double beta) {
    const std::size_t c = counts.class_count();
    if (!weights.empty() && weights.size() != c)
        throw Error("per-class weight count does not match class count");

    ScoreBreakdown out;
    out.per_class.resize(c, 0.0);
    out.zero_support.resize(c, false);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t l = 0; l < c; ++l) {
        const ClassCounts cc = counts.for_class(l);
        const double w = weights.empty() ? 1.0 : weights[l];
        const double s = score_one(cc, beta);
        if (s < 0.0) {  // sentinel: zero denominator
            out.per_class[l] = 0.0;
            out.zero_support[l] = true;
        } else {
            out.per_class[l] = s;
        }
        num += w * out.per_class[l];
        den += w;
    }
    out.macro = den > 0.0 ? num / den : 0.0;
    return out;
}

double f_one(const ClassCounts& cc, double beta) {
    const double b2 = beta * beta;
    const double den = (1.0 + b2) * static_cast<double>(cc.tp) + static_cast<double>(cc.fp) +
                       b2 * static_cast<double>(cc.fn);
    if (den == 0.0) return -1.0;
    return (1.0 + b2) * static_cast<double>(cc.tp) / den;
}

double g_one(const ClassCounts& cc, double beta) {
    const double den = static_cast<double>(cc.tp) + static_cast<double>(cc.fp) +
                       beta * static_cast<double>(cc.fn);
    if (den == 0.0) return -1.0;
    return static_cast<double>(cc.tp) / den;
}

}  // namespace

ScoreBreakdown f_score(const ConfusionCounts& counts, double beta,
                       std::span<const double> weights) {
    if (!(beta > 0.0)) throw Error("beta must be strictly positive");
    return weighted_scores(counts, weights, f_one, beta);
}

ScoreBreakdown g_score(const ConfusionCounts& counts, double beta,
                       std::span<const double> weights) {
    if (!(beta > 0.0)) throw Error("beta must be strictly positive");
    return weighted_scores(counts, weights, g_one, beta);
}

void record_query(QueryTally& tally, int predicted, int truth) {
    if (predicted != truth)
        ++tally.apt;
    else
        ++tally.inapt;
}

MetricsReport build_report(const ConfusionCounts& counts, const QueryTally& queries,
                           double beta, std::span<const double> weights) {
    MetricsReport report;
    report.total_samples = counts.total();
    report.accuracy = counts.total() > 0
                          ? static_cast<double>(counts.correct()) / static_cast<double>(counts.total())
                          : 0.0;
    report.f1 = f_score(counts, beta, weights);
    report.g1 = g_score(counts, beta, weights);
    report.per_class.reserve(counts.class_count());
    for (std::size_t l = 0; l < counts.class_count(); ++l)
        report.per_class.push_back(counts.for_class(l));
    report.apt_queries = queries.apt;
    report.inapt_queries = queries.inapt;
    report.apt_ratio_defined = queries.ratio_defined();
    report.apt_ratio = queries.ratio();
    return report;
}

}  // namespace govpat
