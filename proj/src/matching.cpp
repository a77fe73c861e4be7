#include "govpat/matching.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "govpat/errors.hpp"

namespace govpat {

namespace {

// Offsets live on a global grid anchored at 0 so that pruned candidate
// sets are always subsets of the full grid.
struct OffsetGrid {
    double step = 0.0;
    long k_max = 0;
};

OffsetGrid make_grid(const GoverningPattern& pattern, const MatchConfig& cfg) {
    const double step = cfg.grid_step ? *cfg.grid_step : pattern.t_end / 500.0;
    if (!(step > 0.0)) throw Error("offset grid step must be strictly positive");
    // largest k with k * step <= t_end, judged by the product itself:
    // the division seed can land one off in either direction
    long k_max = static_cast<long>(std::floor(pattern.t_end / step));
    while (k_max > 0 && static_cast<double>(k_max) * step > pattern.t_end) --k_max;
    while (static_cast<double>(k_max + 1) * step <= pattern.t_end) ++k_max;
    return {step, k_max};
}

std::vector<double> full_grid(const OffsetGrid& grid) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(grid.k_max) + 1);
    for (long k = 0; k <= grid.k_max; ++k)
        out.push_back(static_cast<double>(k) * grid.step);
    return out;
}

}  // namespace

Window normalize_window(Window w) {
    if (w.samples.empty()) throw EmptyWindow();
    const double t0 = w.samples.front().t;
    for (TimedSample& s : w.samples) s.t -= t0;
    w.normalized = true;
    return w;
}

double similarity_score(const Window& w, const GoverningPattern& pattern, double t_o) {
    if (pattern.curves.empty()) throw EmptyPattern();
    if (!(t_o >= 0.0 && t_o <= pattern.t_end)) throw OffsetOutOfRange(t_o, pattern.t_end);
    double total = 0.0;
    for (const TimedSample& s : w.samples) {
        const CurvePoint x = as_point(s, t_o);
        const Projection pr = project_nearest(x, pattern);
        const double f_norm = point_norm(pr.point);
        total += f_norm * std::log(std::max(pr.distance, kEps) / std::max(f_norm, kEps));
    }
    return total;
}

std::vector<double> potential_offsets(const Window& w, const GoverningPattern& pattern,
                                      const MatchConfig& cfg) {
    if (w.samples.empty()) throw EmptyWindow();
    if (pattern.curves.empty()) throw EmptyPattern();
    if (!(cfg.potential_rel_threshold > 0.0))
        throw Error("potential_rel_threshold must be strictly positive");

    const std::size_t d = pattern.dim();
    std::vector<double> mean(d, 0.0);
    for (const TimedSample& s : w.samples) {
        if (s.x.size() != d) throw DimensionMismatch(d, s.x.size());
        for (std::size_t j = 0; j < d; ++j) mean[j] += s.x[j];
    }
    for (double& v : mean) v /= static_cast<double>(w.samples.size());

    const OffsetGrid grid = make_grid(pattern, cfg);
    const double halfwidth =
        cfg.refine_halfwidth ? *cfg.refine_halfwidth : w.duration();

    std::set<long> ks;
    for (const PrincipalCurve& curve : pattern.curves) {
        for (const CurvePoint& p : curve.points) {
            double dist2 = 0.0;
            double norm2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                dist2 += (p.y[j] - mean[j]) * (p.y[j] - mean[j]);
                norm2 += p.y[j] * p.y[j];
            }
            const double rel = std::sqrt(dist2) / std::max(std::sqrt(norm2), kEps);
            if (rel > cfg.potential_rel_threshold) continue;

            const double lo = std::max(0.0, p.t - halfwidth);
            const double hi = std::min(pattern.t_end, p.t + halfwidth);
            if (lo > hi) continue;
            // small slack keeps boundary indices from dropping out to
            // float rounding
            long k_lo = static_cast<long>(std::ceil(lo / grid.step - 1e-9));
            long k_hi = static_cast<long>(std::floor(hi / grid.step + 1e-9));
            k_lo = std::max(k_lo, 0L);
            k_hi = std::min(k_hi, grid.k_max);
            for (long k = k_lo; k <= k_hi; ++k) ks.insert(k);
        }
    }

    if (ks.empty()) return full_grid(grid);
    std::vector<double> out;
    out.reserve(ks.size());
    for (long k : ks) out.push_back(static_cast<double>(k) * grid.step);
    return out;
}

MatchResult match_offset(Window w, const GoverningPattern& pattern,
                         const MatchConfig& cfg) {
    if (pattern.curves.empty()) throw EmptyPattern();
    w = normalize_window(std::move(w));

    const std::vector<double> candidates =
        cfg.prune_enabled ? potential_offsets(w, pattern, cfg)
                          : full_grid(make_grid(pattern, cfg));

    MatchResult best;
    bool have = false;
    for (const double t_o : candidates) {  // ascending: smallest offset wins ties
        const double sc = similarity_score(w, pattern, t_o);
        if (!have || sc < best.score) {
            best.t_offset = t_o;
            best.score = sc;
            have = true;
        }
    }
    best.candidates_evaluated = candidates.size();
    return best;
}

}  // namespace govpat
