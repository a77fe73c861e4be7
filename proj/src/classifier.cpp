#include "govpat/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "govpat/errors.hpp"

namespace govpat {

PredictionOutcome predict_label(const Window& w, const GoverningPattern& pattern,
                                const MatchConfig& cfg) {
    const Window nw = normalize_window(w);
    const MatchResult match = match_offset(nw, pattern, cfg);

    PredictionOutcome out;
    out.match = match;
    out.shifted_newest = as_point(nw.samples.back(), match.t_offset);
    out.projection = project_nearest(out.shifted_newest, pattern);
    out.predicted_class = out.projection.class_id;
    return out;
}

GoverningPattern apply_update(GoverningPattern pattern, const PredictionOutcome& outcome,
                              bool correct, const LearningConfig& cfg) {
    if (!cfg.enabled) return pattern;
    const int c = static_cast<int>(pattern.class_count());
    if (outcome.predicted_class < 0 || outcome.predicted_class >= c)
        throw InvalidClass(outcome.predicted_class, pattern.class_count());

    PrincipalCurve& curve = pattern.curves[static_cast<std::size_t>(outcome.predicted_class)];
    const std::size_t i = outcome.projection.segment_index;
    CurvePoint& a = curve.points[i];
    CurvePoint& b = curve.points[i + 1];

    const double sign = correct ? 1.0 : -1.0;
    const CurvePoint& x = outcome.shifted_newest;
    const CurvePoint& f = outcome.projection.point;

    const double dt = sign * cfg.alpha * (x.t - f.t);
    a.t += dt;
    b.t += dt;
    for (std::size_t j = 0; j < a.y.size(); ++j) {
        const double dy = sign * cfg.alpha * (x.y[j] - f.y[j]);
        a.y[j] += dy;
        b.y[j] += dy;
    }

    // Both endpoints moved by the same dt, so their own gap g is intact;
    // only the outer boundaries can break. Push the pair back inside,
    // leaving a 1e-9 * g margin against each untouched neighbor.
    const double g = b.t - a.t;
    const double margin = 1e-9 * g;
    const bool has_left = i > 0;
    const bool has_right = i + 2 < curve.points.size();
    const double lo = has_left ? curve.points[i - 1].t : -std::numeric_limits<double>::infinity();
    const double hi = has_right ? curve.points[i + 2].t : std::numeric_limits<double>::infinity();
    if (a.t <= lo) {
        a.t = lo + margin;
        b.t = a.t + g;
        if (b.t >= hi) b.t = hi - margin;
    } else if (b.t >= hi) {
        b.t = hi - margin;
        a.t = b.t - g;
        if (a.t <= lo) a.t = lo + margin;
    }
    // At large magnitudes the margin can be absorbed outright (lo +
    // margin == lo). Fall back to adjacent representable values; they
    // always exist because the pair sat strictly inside (lo, hi) before
    // the shift.
    if (!(a.t > lo)) a.t = std::nextafter(lo, hi);
    if (!(b.t > a.t)) b.t = std::nextafter(a.t, std::numeric_limits<double>::infinity());
    if (!(b.t < hi)) {
        b.t = std::nextafter(hi, lo);
        if (!(a.t < b.t)) a.t = std::nextafter(b.t, lo);
    }

    double t_start = std::numeric_limits<double>::infinity();
    double t_end = -std::numeric_limits<double>::infinity();
    for (const PrincipalCurve& cur : pattern.curves) {
        t_start = std::min(t_start, cur.points.front().t);
        t_end = std::max(t_end, cur.points.back().t);
    }
    pattern.t_start = t_start;
    pattern.t_end = t_end;
    return pattern;
}

GoverningPattern online_update(GoverningPattern pattern, const PredictionOutcome& outcome,
                               int true_class, const LearningConfig& cfg) {
    if (!cfg.enabled) return pattern;
    if (true_class < 0 || true_class >= static_cast<int>(pattern.class_count()))
        throw InvalidClass(true_class, pattern.class_count());
    const bool correct = true_class == outcome.predicted_class;
    return apply_update(std::move(pattern), outcome, correct, cfg);
}

}  // namespace govpat
