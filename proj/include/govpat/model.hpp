#ifndef GOVPAT_MODEL_HPP
#define GOVPAT_MODEL_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace govpat {

/// One observation of a stream: a time stamp plus a d-dimensional
/// feature vector. Within a stream the time stamps are strictly
/// increasing and d never changes.
struct TimedSample {
    double t = 0.0;
    std::vector<double> x;
    std::optional<int> label;
};

/// A vertex of a principal curve. Treated as a single point in
/// (d+1)-dimensional (time x feature) space by all geometry below.
struct CurvePoint {
    double t = 0.0;
    std::vector<double> y;
};

/// Ordered polyline through (time x feature) space representing one
/// class. Vertex times are strictly increasing and there are at least
/// two vertices.
struct PrincipalCurve {
    std::vector<CurvePoint> points;
    int class_id = 0;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().y.size(); }
};

/// The whole classifier model: one principal curve per class,
/// anchored so the earliest vertex sits at time 0.
struct GoverningPattern {
    std::vector<PrincipalCurve> curves;  // sorted by class_id, ids 0..C-1
    double t_start = 0.0;
    double t_end = 0.0;

    std::size_t class_count() const { return curves.size(); }
    std::size_t dim() const { return curves.empty() ? 0 : curves.front().dim(); }
};

/// Result of projecting a point onto a curve (or the nearest curve of
/// a pattern): the foot point, which segment it landed on, where along
/// that segment, and the Euclidean distance in (d+1)-space.
struct Projection {
    CurvePoint point;
    int class_id = 0;
    std::size_t segment_index = 0;
    double distance = 0.0;
    double arc_position = 0.0;  // in [0,1] along the segment
};

/// Clamped segment parameter and squared distance of p to [a, b],
/// computed without materializing the foot. The workhorse behind every
/// projection; public so hot loops can skip the allocation.
struct SegmentParam {
    double s = 0.0;      // in [0,1]
    double dist2 = 0.0;
};
SegmentParam segment_param(const CurvePoint& p, const CurvePoint& a, const CurvePoint& b);

/// Orthogonal projection of p onto the closed segment [a, b], all in
/// (d+1)-space (p = (t, x...)). Returns the foot, the clamped segment
/// parameter, and the exact Euclidean distance.
/// Throws DegenerateSegment when a == b in every coordinate.
struct SegmentProjection {
    CurvePoint foot;
    double arc_position = 0.0;
    double distance = 0.0;
};
SegmentProjection project_onto_segment(const CurvePoint& p, const CurvePoint& a,
                                       const CurvePoint& b);

/// Minimum-distance projection of p over all segments of the curve.
/// Ties are broken toward the lowest segment index.
Projection project_onto_curve(const CurvePoint& p, const PrincipalCurve& curve);

/// Minimum-distance projection of p over all curves of the pattern.
/// Ties are broken toward the lowest class id.
Projection project_nearest(const CurvePoint& p, const GoverningPattern& pattern);

/// Euclidean norm of a curve point viewed as a (d+1)-vector.
double point_norm(const CurvePoint& p);

/// Euclidean distance between two (d+1)-points.
double point_distance(const CurvePoint& a, const CurvePoint& b);

/// A sample viewed as a point of (d+1)-space, optionally shifted in time.
inline CurvePoint as_point(const TimedSample& s, double t_shift = 0.0) {
    return CurvePoint{s.t + t_shift, s.x};
}

}  // namespace govpat

#endif
