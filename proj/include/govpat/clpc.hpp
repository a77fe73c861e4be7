#ifndef GOVPAT_CLPC_HPP
#define GOVPAT_CLPC_HPP

#include <optional>
#include <span>
#include <vector>

#include "govpat/model.hpp"

namespace govpat {

/// Controls for the incremental curve extraction.
struct FitConfig {
    /// Largest mean projection distance of consumed samples tolerated
    /// when appending a new curve point.
    double error_threshold = 1.0;
    /// Half-width of the annulus band around the search circle, as a
    /// fraction of its radius.
    double bar_width = 0.1;
    /// Radius seeding the first growth step. When unset, the distance
    /// from the first sample to its 5th nearest class neighbour is used.
    std::optional<double> initial_radius;
    /// Interior vertices whose deviation from collinearity falls below
    /// this angle (degrees) are pruned after fitting.
    double angle_threshold_deg = 5.0;
};

/// Extract one principal curve from the time-ordered samples of a
/// single class. The first and last samples become the curve endpoints;
/// interior points are grown as annulus-band means with the radius of
/// each step equal to the length of the previous one. Growth stops when
/// the band is empty, the candidate fails to advance in time, or the
/// mean projection error of consumed samples would exceed the
/// configured threshold.
/// Throws TooFewSamples and NonMonotoneTime.
PrincipalCurve fit_clpc(std::span<const TimedSample> data, const FitConfig& cfg,
                        int class_id = 0);

/// Remove interior vertices that deviate from collinearity by less than
/// angle_threshold_deg, repeatedly (smallest deviation first) until every
/// surviving interior vertex meets the threshold. Endpoints are kept.
PrincipalCurve prune_low_angle(const PrincipalCurve& curve, double angle_threshold_deg);

/// Turning deviation at interior vertex i: 180 degrees minus the
/// interior angle between the segments meeting there. 0 for collinear.
double vertex_deviation_deg(const PrincipalCurve& curve, std::size_t i);

/// Assemble per-class curves into the governing pattern: sort by class
/// id, verify ids are dense and dimensions agree, and shift every
/// vertex time so the earliest one lands on the time origin.
/// Throws DuplicateClass and DimensionMismatch.
GoverningPattern build_governing_pattern(std::vector<PrincipalCurve> curves);

}  // namespace govpat

#endif
