// Shared generators for tests: a noisy piecewise-linear multi-class
// stream, random polylines for projection oracles, and random
// window/pattern instances for matching oracles.
#ifndef GOVPAT_TESTS_SYNTHETIC_HPP
#define GOVPAT_TESTS_SYNTHETIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "govpat/harness.hpp"
#include "govpat/model.hpp"

namespace testsupport {

// Triangle wave with the given period, range [-1, 1], vertex every
// quarter period.
inline double triangle_wave(double u, double period) {
    const double phase = u / period - std::floor(u / period);
    return 1.0 - 4.0 * std::abs(phase - 0.5);
}

struct ZigzagOptions {
    std::size_t cycles = 10;
    std::size_t block_len = 100;  // samples per class block, 1 s apart
    std::vector<double> levels = {10.0, 14.0, 18.0};
    double amplitude = 1.0;
    double period = 50.0;
    double noise_sigma = 0.5;  // 5% of the ~10-unit signal range
    // Feature offset added inside [drift_begin_frac, drift_end_frac) of
    // the stream (fractions of total length). Inactive by default.
    double drift_offset = 0.0;
    double drift_begin_frac = 2.0;
    double drift_end_frac = 2.0;
};

// Classes take turns in fixed-length blocks; each block is a zigzag
// around the class level in feature 0 plus a level-locked feature 1.
inline govpat::Dataset make_zigzag_dataset(std::uint64_t seed,
                                           const ZigzagOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, opt.noise_sigma);
    const std::size_t classes = opt.levels.size();
    const double total =
        static_cast<double>(opt.cycles * classes * opt.block_len);

    std::vector<govpat::TimedSample> samples;
    samples.reserve(static_cast<std::size_t>(total));
    double t = 0.0;
    for (std::size_t cycle = 0; cycle < opt.cycles; ++cycle) {
        for (std::size_t cls = 0; cls < classes; ++cls) {
            for (std::size_t k = 0; k < opt.block_len; ++k) {
                const double u = static_cast<double>(k);
                double f0 = opt.levels[cls] +
                            opt.amplitude * triangle_wave(u, opt.period) + noise(rng);
                double f1 = opt.levels[cls] - 2.0 + noise(rng);
                const double frac = t / total;
                if (frac >= opt.drift_begin_frac && frac < opt.drift_end_frac) {
                    f0 += opt.drift_offset;
                    f1 += opt.drift_offset;
                }
                govpat::TimedSample s;
                s.t = t;
                s.x = {f0, f1};
                s.label = static_cast<int>(cls);
                samples.push_back(std::move(s));
                t += 1.0;
            }
        }
    }
    return govpat::make_dataset(std::move(samples), classes);
}

// Random polyline with strictly increasing times and bounded total
// length (keeps dense-sampling oracles tight).
inline govpat::PrincipalCurve random_polyline(std::mt19937_64& rng, std::size_t dim,
                                              std::size_t min_points = 2,
                                              std::size_t max_points = 8) {
    std::uniform_int_distribution<std::size_t> count(min_points, max_points);
    std::uniform_real_distribution<double> t_step(0.5, 1.5);
    std::uniform_real_distribution<double> y0(-2.0, 2.0);
    std::uniform_real_distribution<double> dy(-1.5, 1.5);

    govpat::PrincipalCurve curve;
    const std::size_t n = count(rng);
    govpat::CurvePoint p;
    p.t = 0.0;
    for (std::size_t j = 0; j < dim; ++j) p.y.push_back(y0(rng));
    curve.points.push_back(p);
    for (std::size_t i = 1; i < n; ++i) {
        p.t += t_step(rng);
        for (std::size_t j = 0; j < dim; ++j) p.y[j] += dy(rng);
        curve.points.push_back(p);
    }
    return curve;
}

inline govpat::CurvePoint random_point(std::mt19937_64& rng, std::size_t dim,
                                       double t_lo, double t_hi, double y_span) {
    std::uniform_real_distribution<double> t_dist(t_lo, t_hi);
    std::uniform_real_distribution<double> y_dist(-y_span, y_span);
    govpat::CurvePoint p;
    p.t = t_dist(rng);
    for (std::size_t j = 0; j < dim; ++j) p.y.push_back(y_dist(rng));
    return p;
}

// Minimum distance from p to the polyline via dense arc-length
// sampling (at least `samples` points spread over the segments,
// endpoints always included). Deliberately knows nothing about
// project_onto_curve.
inline double dense_polyline_distance(const govpat::CurvePoint& p,
                                      const govpat::PrincipalCurve& curve,
                                      std::size_t samples) {
    double total_len = 0.0;
    std::vector<double> seg_len;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[i + 1];
        double len2 = (b.t - a.t) * (b.t - a.t);
        for (std::size_t j = 0; j < a.y.size(); ++j)
            len2 += (b.y[j] - a.y[j]) * (b.y[j] - a.y[j]);
        seg_len.push_back(std::sqrt(len2));
        total_len += seg_len.back();
    }

    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[i + 1];
        const std::size_t steps = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(
                   static_cast<double>(samples) * seg_len[i] / std::max(total_len, 1e-300))));
        for (std::size_t k = 0; k <= steps; ++k) {
            const double s = static_cast<double>(k) / static_cast<double>(steps);
            double d2 = (p.t - (a.t + s * (b.t - a.t))) * (p.t - (a.t + s * (b.t - a.t)));
            for (std::size_t j = 0; j < a.y.size(); ++j) {
                const double dy = p.y[j] - (a.y[j] + s * (b.y[j] - a.y[j]));
                d2 += dy * dy;
            }
            best2 = std::min(best2, d2);
        }
    }
    return std::sqrt(best2);
}

}  // namespace testsupport

#endif
