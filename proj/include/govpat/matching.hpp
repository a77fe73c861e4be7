#ifndef GOVPAT_MATCHING_HPP
#define GOVPAT_MATCHING_HPP

#include <optional>
#include <vector>

#include "govpat/model.hpp"

namespace govpat {

/// Clamp applied to both log arguments of the similarity score, and to
/// norm denominators in relative-distance tests.
inline constexpr double kEps = 1e-12;

/// The most recent H samples of the input stream. Times are strictly
/// increasing; after normalization the first sample sits at t = 0.
struct Window {
    std::vector<TimedSample> samples;
    bool normalized = false;

    double duration() const {
        return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
    }
};

struct MatchConfig {
    /// Curve points whose feature vector lies within this relative
    /// distance of the window's feature mean seed the candidate set.
    double potential_rel_threshold = 0.2;
    /// Offset grid resolution in seconds. Unset: pattern.t_end / 500.
    std::optional<double> grid_step;
    /// Half-width of the candidate interval contributed by each seed
    /// point. Unset: the window duration.
    std::optional<double> refine_halfwidth;
    bool prune_enabled = true;
};

struct MatchResult {
    double t_offset = 0.0;
    /// Lower is more similar.
    double score = 0.0;
    std::size_t candidates_evaluated = 0;
};

/// Shift the window so its first sample lands on t = 0. Features and
/// durations are unchanged. Throws EmptyWindow.
Window normalize_window(Window w);

/// Similarity of the normalized window placed at offset t_o against the
/// pattern: sum over samples of ||F|| * log(max(||F - X||, eps) /
/// max(||F||, eps)), where X is the sample shifted by t_o and F its
/// nearest-curve projection, both as (d+1)-vectors. Finite for all
/// inputs. Throws OffsetOutOfRange and EmptyPattern.
double similarity_score(const Window& w, const GoverningPattern& pattern, double t_o);

/// Candidate offsets worth scoring, ascending. Every value lies on the
/// global grid {k * grid_step : k >= 0} within [0, pattern.t_end].
/// Seeds are curve points near the window's feature mean; each seed
/// contributes the grid indices within refine_halfwidth of its time.
/// No seeds: the full grid is returned.
std::vector<double> potential_offsets(const Window& w, const GoverningPattern& pattern,
                                      const MatchConfig& cfg);

/// Normalize the window, score every candidate offset (pruned set, or
/// the full grid when prune_enabled is false) and return the minimizer.
/// Ties resolve to the smallest offset. Throws EmptyPattern, EmptyWindow.
MatchResult match_offset(Window w, const GoverningPattern& pattern,
                         const MatchConfig& cfg);

}  // namespace govpat

#endif
