#include "govpat/model.hpp"

#include <cmath>
#include <limits>

#include "govpat/errors.hpp"

namespace govpat {

SegmentParam segment_param(const CurvePoint& p, const CurvePoint& a, const CurvePoint& b) {
    const std::size_t d = a.y.size();
    double c1 = (p.t - a.t) * (b.t - a.t);
    double c2 = (b.t - a.t) * (b.t - a.t);
    for (std::size_t j = 0; j < d; ++j) {
        const double v = b.y[j] - a.y[j];
        c1 += (p.y[j] - a.y[j]) * v;
        c2 += v * v;
    }
    SegmentParam r{0.0, 0.0};
    if (c2 > 0.0) {
        r.s = c1 / c2;
        if (r.s < 0.0) r.s = 0.0;
        if (r.s > 1.0) r.s = 1.0;
    }
    double dt = p.t - (a.t + r.s * (b.t - a.t));
    r.dist2 = dt * dt;
    for (std::size_t j = 0; j < d; ++j) {
        const double dy = p.y[j] - (a.y[j] + r.s * (b.y[j] - a.y[j]));
        r.dist2 += dy * dy;
    }
    return r;
}

SegmentProjection project_onto_segment(const CurvePoint& p, const CurvePoint& a,
                                       const CurvePoint& b) {
    const SegmentParam pd = segment_param(p, a, b);
    // degenerate check: zero direction vector
    bool degenerate = (a.t == b.t);
    if (degenerate) {
        for (std::size_t j = 0; j < a.y.size(); ++j) {
            if (a.y[j] != b.y[j]) {
                degenerate = false;
                break;
            }
        }
    }
    if (degenerate) throw DegenerateSegment();

    SegmentProjection out;
    out.arc_position = pd.s;
    out.foot.t = a.t + pd.s * (b.t - a.t);
    out.foot.y.resize(a.y.size());
    for (std::size_t j = 0; j < a.y.size(); ++j)
        out.foot.y[j] = a.y[j] + pd.s * (b.y[j] - a.y[j]);
    out.distance = std::sqrt(pd.dist2);
    return out;
}

Projection project_onto_curve(const CurvePoint& p, const PrincipalCurve& curve) {
    double best2 = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const SegmentParam pd = segment_param(p, curve.points[i], curve.points[i + 1]);
        if (pd.dist2 < best2) {  // strict: lowest index wins ties
            best2 = pd.dist2;
            best_s = pd.s;
            best_i = i;
        }
    }
    Projection out;
    out.class_id = curve.class_id;
    out.segment_index = best_i;
    out.arc_position = best_s;
    const CurvePoint& a = curve.points[best_i];
    const CurvePoint& b = curve.points[best_i + 1];
    out.point.t = a.t + best_s * (b.t - a.t);
    out.point.y.resize(a.y.size());
    for (std::size_t j = 0; j < a.y.size(); ++j)
        out.point.y[j] = a.y[j] + best_s * (b.y[j] - a.y[j]);
    out.distance = std::sqrt(best2);
    return out;
}

Projection project_nearest(const CurvePoint& p, const GoverningPattern& pattern) {
    if (pattern.curves.empty()) throw EmptyPattern();
    Projection best;
    bool have = false;
    for (const PrincipalCurve& curve : pattern.curves) {
        Projection pr = project_onto_curve(p, curve);
        if (!have || pr.distance < best.distance) {  // strict: lowest class id wins ties
            best = std::move(pr);
            have = true;
        }
    }
    return best;
}

double point_norm(const CurvePoint& p) {
    double s = p.t * p.t;
    for (double v : p.y) s += v * v;
    return std::sqrt(s);
}

double point_distance(const CurvePoint& a, const CurvePoint& b) {
    double s = (a.t - b.t) * (a.t - b.t);
    for (std::size_t j = 0; j < a.y.size(); ++j) s += (a.y[j] - b.y[j]) * (a.y[j] - b.y[j]);
    return std::sqrt(s);
}

}  // namespace govpat
