#include "govpat/clpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "govpat/errors.hpp"

namespace govpat {

namespace {

// A sample together with its distance to the prefix polyline built so
// far. Distances are maintained incrementally: appending a segment can
// only shrink them, and only through that segment.
struct Tracked {
    CurvePoint p;
    double dist = 0.0;
};

double kth_neighbour_distance(std::span<const TimedSample> data, std::size_t k) {
    const CurvePoint origin = as_point(data.front());
    std::vector<double> dists;
    dists.reserve(data.size() - 1);
    for (std::size_t i = 1; i < data.size(); ++i)
        dists.push_back(point_distance(origin, as_point(data[i])));
    k = std::min(k, dists.size());
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    return dists[k - 1];
}

}  // namespace

PrincipalCurve fit_clpc(std::span<const TimedSample> data, const FitConfig& cfg,
                        int class_id) {
    if (!(cfg.error_threshold > 0.0) || !(cfg.bar_width > 0.0) ||
        !(cfg.angle_threshold_deg > 0.0) || !(cfg.angle_threshold_deg < 180.0) ||
        (cfg.initial_radius && !(*cfg.initial_radius > 0.0)))
        throw Error("fit configuration fields must be strictly positive");
    if (data.size() < 2) throw TooFewSamples(data.size());
    for (std::size_t i = 1; i < data.size(); ++i)
        if (!(data[i].t > data[i - 1].t)) throw NonMonotoneTime(i);

    const CurvePoint first = as_point(data.front());
    const CurvePoint last = as_point(data.back());

    std::vector<CurvePoint> prefix{first};
    std::vector<Tracked> consumed{{first, 0.0}};
    std::vector<Tracked> remaining;
    remaining.reserve(data.size());
    for (std::size_t i = 1; i + 1 < data.size(); ++i) {
        CurvePoint q = as_point(data[i]);
        const double d = point_distance(q, first);
        remaining.push_back({std::move(q), d});
    }

    double radius = cfg.initial_radius ? *cfg.initial_radius
                                       : kth_neighbour_distance(data, 5);

    // Growth loop. Candidates are means of finite sample subsets and each
    // accepted one strictly advances in time, so the loop terminates; the
    // cap guards against float pathologies.
    const std::size_t max_interior = data.size();
    while (prefix.size() - 1 < max_interior && !remaining.empty() && radius > 0.0) {
        const CurvePoint cur = prefix.back();

        // annulus band around the search circle
        CurvePoint cand{0.0, std::vector<double>(first.y.size(), 0.0)};
        std::size_t band_count = 0;
        for (const Tracked& q : remaining) {
            const double dist = point_distance(q.p, cur);
            if (std::abs(dist - radius) <= cfg.bar_width * radius) {
                cand.t += q.p.t;
                for (std::size_t j = 0; j < cand.y.size(); ++j) cand.y[j] += q.p.y[j];
                ++band_count;
            }
        }
        if (band_count == 0) break;
        cand.t /= static_cast<double>(band_count);
        for (double& v : cand.y) v /= static_cast<double>(band_count);

        if (!(cand.t > cur.t)) break;       // must advance in time
        if (!(cand.t < last.t)) break;      // keep room for the final vertex

        // Tentative distances against the extended prefix. A sample is
        // consumed once its nearest polyline point lies strictly before
        // the terminal vertex; ties between the new segment and the
        // older part resolve to the older part.
        double err_sum = 0.0;
        std::vector<double> consumed_dist(consumed.size());
        for (std::size_t i = 0; i < consumed.size(); ++i) {
            const double d_seg = std::sqrt(segment_param(consumed[i].p, cur, cand).dist2);
            consumed_dist[i] = std::min(consumed[i].dist, d_seg);
            err_sum += consumed_dist[i];
        }
        std::vector<double> remaining_dist(remaining.size());
        std::vector<char> takes(remaining.size());
        std::size_t take_count = 0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const SegmentParam pd = segment_param(remaining[i].p, cur, cand);
            const double d_seg = std::sqrt(pd.dist2);
            const bool take = d_seg < remaining[i].dist ? pd.s < 1.0 : true;
            remaining_dist[i] = std::min(remaining[i].dist, d_seg);
            takes[i] = take;
            if (take) {
                err_sum += remaining_dist[i];
                ++take_count;
            }
        }
        const double err =
            err_sum / static_cast<double>(consumed.size() + take_count);
        if (err > cfg.error_threshold) break;  // candidate rejected, growth over

        radius = point_distance(cand, cur);
        prefix.push_back(cand);
        for (std::size_t i = 0; i < consumed.size(); ++i)
            consumed[i].dist = consumed_dist[i];
        std::vector<Tracked> still;
        still.reserve(remaining.size() - take_count);
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            remaining[i].dist = remaining_dist[i];
            if (takes[i])
                consumed.push_back(std::move(remaining[i]));
            else
                still.push_back(std::move(remaining[i]));
        }
        remaining = std::move(still);
    }

    prefix.push_back(last);
    PrincipalCurve curve;
    curve.points = std::move(prefix);
    curve.class_id = class_id;
    return curve;
}

double vertex_deviation_deg(const PrincipalCurve& curve, std::size_t i) {
    const CurvePoint& a = curve.points[i - 1];
    const CurvePoint& b = curve.points[i];
    const CurvePoint& c = curve.points[i + 1];
    // angle between incoming and outgoing segment directions
    double dot = (b.t - a.t) * (c.t - b.t);
    double n1 = (b.t - a.t) * (b.t - a.t);
    double n2 = (c.t - b.t) * (c.t - b.t);
    for (std::size_t j = 0; j < b.y.size(); ++j) {
        const double u = b.y[j] - a.y[j];
        const double v = c.y[j] - b.y[j];
        dot += u * v;
        n1 += u * u;
        n2 += v * v;
    }
    const double denom = std::sqrt(n1 * n2);
    if (denom == 0.0) return 0.0;
    const double cosv = std::clamp(dot / denom, -1.0, 1.0);
    return std::acos(cosv) * 180.0 / std::numbers::pi;
}

PrincipalCurve prune_low_angle(const PrincipalCurve& curve, double angle_threshold_deg) {
    PrincipalCurve out = curve;
    while (out.points.size() > 2) {
        double min_dev = std::numeric_limits<double>::infinity();
        std::size_t min_i = 0;
        for (std::size_t i = 1; i + 1 < out.points.size(); ++i) {
            const double dev = vertex_deviation_deg(out, i);
            if (dev < min_dev) {
                min_dev = dev;
                min_i = i;
            }
        }
        if (min_dev >= angle_threshold_deg) break;
        out.points.erase(out.points.begin() + static_cast<std::ptrdiff_t>(min_i));
    }
    return out;
}

GoverningPattern build_governing_pattern(std::vector<PrincipalCurve> curves) {
    if (curves.empty()) throw EmptyPattern();
    std::sort(curves.begin(), curves.end(),
              [](const PrincipalCurve& a, const PrincipalCurve& b) {
                  return a.class_id < b.class_id;
              });
    const std::size_t d = curves.front().dim();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (i > 0 && curves[i].class_id == curves[i - 1].class_id)
            throw DuplicateClass(curves[i].class_id);
        if (curves[i].class_id != static_cast<int>(i))
            throw InvalidClass(curves[i].class_id, curves.size());
        if (curves[i].dim() != d) throw DimensionMismatch(d, curves[i].dim());
    }

    double shift = std::numeric_limits<double>::infinity();
    for (const PrincipalCurve& c : curves) shift = std::min(shift, c.points.front().t);

    GoverningPattern pattern;
    pattern.curves = std::move(curves);
    double t_end = -std::numeric_limits<double>::infinity();
    for (PrincipalCurve& c : pattern.curves) {
        for (CurvePoint& p : c.points) p.t -= shift;
        t_end = std::max(t_end, c.points.back().t);
    }
    pattern.t_start = 0.0;
    pattern.t_end = t_end;
    return pattern;
}

}  // namespace govpat
