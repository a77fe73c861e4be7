#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "govpat/errors.hpp"
#include "govpat/matching.hpp"
#include "../support/synthetic.hpp"

using namespace govpat;

namespace {

Window make_window(std::initializer_list<std::pair<double, double>> pts) {
    Window w;
    for (const auto& [t, x] : pts) {
        TimedSample s;
        s.t = t;
        s.x = {x};
        w.samples.push_back(std::move(s));
    }
    return w;
}

GoverningPattern flat_pattern(double level, double t_end) {
    GoverningPattern p;
    PrincipalCurve c;
    c.points = {CurvePoint{0.0, {level}}, CurvePoint{t_end, {level}}};
    p.curves = {c};
    p.t_end = t_end;
    return p;
}

GoverningPattern line_pattern(double t_end) {
    GoverningPattern p;
    PrincipalCurve c;
    c.points = {CurvePoint{0.0, {0.0}}, CurvePoint{t_end, {t_end}}};
    p.curves = {c};
    p.t_end = t_end;
    return p;
}

}  // namespace

TEST_CASE("window normalization shifts times to the origin") {
    auto w = make_window({{100, 1}, {101, 2}, {103, 3}});
    const double dur = w.duration();
    const auto n = normalize_window(w);
    REQUIRE(n.samples.size() == 3);
    CHECK(n.samples[0].t == doctest::Approx(0.0));
    CHECK(n.samples[1].t == doctest::Approx(1.0));
    CHECK(n.samples[2].t == doctest::Approx(3.0));
    CHECK(n.normalized);
    CHECK(n.duration() == doctest::Approx(dur));
    CHECK(n.samples[1].x[0] == doctest::Approx(2.0));  // features untouched

    const auto again = normalize_window(n);
    CHECK(again.samples[0].t == doctest::Approx(0.0));
    CHECK(again.samples[2].t == doctest::Approx(3.0));

    CHECK_THROWS_AS(normalize_window(Window{}), EmptyWindow);
}

TEST_CASE("similarity score: frozen single-term values") {
    const auto pat = flat_pattern(2.0, 10.0);

    // foot (0, 2) has norm 2; sample at distance 1
    auto w1 = normalize_window(make_window({{0, 1}}));
    CHECK(similarity_score(w1, pat, 0.0) ==
          doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-12));

    // distance equals the foot norm, so the log vanishes
    auto w2 = normalize_window(make_window({{0, 4}}));
    CHECK(similarity_score(w2, pat, 0.0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(similarity_score(w1, pat, -0.1), OffsetOutOfRange);
    CHECK_THROWS_AS(similarity_score(w1, pat, 10.5), OffsetOutOfRange);
    CHECK_THROWS_AS(similarity_score(w1, GoverningPattern{}, 0.0), EmptyPattern);
}

TEST_CASE("an on-curve window scores below any perturbed offset") {
    const auto pat = line_pattern(20.0);
    // trajectory copied from the pattern over [7, 9]
    auto w = normalize_window(make_window({{0, 7}, {1, 8}, {2, 9}}));
    const double at_match = similarity_score(w, pat, 7.0);
    for (double off : {6.5, 7.5, 0.0, 13.0, 18.0})
        CHECK(at_match < similarity_score(w, pat, off));
}

TEST_CASE("score rises strictly as the window moves away along features") {
    const auto pat = flat_pattern(10.0, 10.0);
    double prev = -std::numeric_limits<double>::infinity();
    for (double delta : {0.5, 1.0, 2.0, 4.0}) {
        auto w = normalize_window(make_window({{0, 10.0 + delta}, {1, 10.0 + delta}}));
        const double sc = similarity_score(w, pat, 0.0);
        CHECK(sc > prev);
        prev = sc;
    }
}

TEST_CASE("potential offsets: worked pruning example") {
    GoverningPattern pat;
    PrincipalCurve c;
    c.points = {CurvePoint{0, {10}}, CurvePoint{5, {10}}, CurvePoint{10, {50}}};
    pat.curves = {c};
    pat.t_end = 10.0;

    MatchConfig cfg;
    cfg.grid_step = 1.0;
    cfg.refine_halfwidth = 1.0;

    // window mean 10: the two level-10 vertices pass the 0.2 test
    // (relative distance 0), the level-50 vertex sits at 0.8 and fails
    auto w = normalize_window(make_window({{0, 10}, {1, 10}}));
    const auto cands = potential_offsets(w, pat, cfg);
    REQUIRE(cands.size() == 5);
    const double expect[] = {0, 1, 4, 5, 6};
    for (std::size_t i = 0; i < 5; ++i) CHECK(cands[i] == doctest::Approx(expect[i]));
}

TEST_CASE("potential offsets fall back to the full grid when nothing passes") {
    GoverningPattern pat;
    PrincipalCurve c;
    c.points = {CurvePoint{0, {10}}, CurvePoint{10, {50}}};
    pat.curves = {c};
    pat.t_end = 10.0;

    MatchConfig cfg;
    cfg.grid_step = 1.0;
    cfg.refine_halfwidth = 1.0;

    // mean 25: relative distances 1.5 and 0.5, both above 0.2
    auto w = normalize_window(make_window({{0, 25}, {1, 25}}));
    const auto cands = potential_offsets(w, pat, cfg);
    REQUIRE(cands.size() == 11);
    for (std::size_t i = 0; i < cands.size(); ++i)
        CHECK(cands[i] == doctest::Approx(static_cast<double>(i)));
}

TEST_CASE("pruned candidates always come from the anchored grid") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 40; ++rep) {
        GoverningPattern pat;
        PrincipalCurve c0 = testsupport::random_polyline(rng, 1, 3, 7);
        c0.class_id = 0;
        PrincipalCurve c1 = testsupport::random_polyline(rng, 1, 3, 7);
        c1.class_id = 1;
        pat.curves = {c0, c1};
        pat.t_end = std::max(c0.points.back().t, c1.points.back().t);

        MatchConfig cfg;
        cfg.grid_step = pat.t_end / 37.0;

        std::uniform_real_distribution<double> feat(-2.5, 2.5);
        auto w = normalize_window(make_window({{0, feat(rng)}, {1, feat(rng)}}));

        const auto cands = potential_offsets(w, pat, cfg);
        CHECK(!cands.empty());
        double prev = -1.0;
        for (const double t_o : cands) {
            CHECK(t_o > prev);  // ascending and deduplicated
            prev = t_o;
            CHECK(t_o >= 0.0);
            CHECK(t_o <= pat.t_end + 1e-9);
            const double k = t_o / *cfg.grid_step;
            CHECK(std::abs(k - std::round(k)) < 1e-9);
        }
    }
}

TEST_CASE("match offset: self-match lands at zero") {
    const auto pat = line_pattern(20.0);
    const auto res = match_offset(make_window({{0, 0}, {1, 1}, {2, 2}}), pat, MatchConfig{});
    CHECK(res.t_offset == doctest::Approx(0.0));
    CHECK(res.candidates_evaluated > 0);
}

TEST_CASE("match offset recovers an interior shift") {
    const auto pat = line_pattern(20.0);
    MatchConfig cfg;
    cfg.grid_step = 0.5;  // 7 sits on the grid
    // raw times deliberately not starting at zero
    const auto res = match_offset(make_window({{107, 7}, {108, 8}, {109, 9}}), pat, cfg);
    CHECK(res.t_offset == doctest::Approx(7.0));
}

TEST_CASE("match offset equals a brute-force grid scan with pruning off") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 30; ++rep) {
        GoverningPattern pat;
        PrincipalCurve c0 = testsupport::random_polyline(rng, 2, 3, 6);
        c0.class_id = 0;
        PrincipalCurve c1 = testsupport::random_polyline(rng, 2, 3, 6);
        c1.class_id = 1;
        pat.curves = {c0, c1};
        pat.t_end = std::max(c0.points.back().t, c1.points.back().t);

        MatchConfig cfg;
        cfg.prune_enabled = false;
        cfg.grid_step = pat.t_end / 97.0;

        Window w;
        std::uniform_real_distribution<double> feat(-3.0, 3.0);
        std::uniform_real_distribution<double> step(0.2, 0.7);
        double t = 0.0;
        for (int i = 0; i < 4; ++i) {
            TimedSample s;
            s.t = t;
            s.x = {feat(rng), feat(rng)};
            w.samples.push_back(std::move(s));
            t += step(rng);
        }

        const auto res = match_offset(w, pat, cfg);

        const auto nw = normalize_window(w);
        double best_sc = 0.0;
        double best_t = 0.0;
        bool have = false;
        for (long k = 0;; ++k) {
            const double t_o = static_cast<double>(k) * *cfg.grid_step;
            if (t_o > pat.t_end) break;
            const double sc = similarity_score(nw, pat, t_o);
            if (!have || sc < best_sc) {
                best_sc = sc;
                best_t = t_o;
                have = true;
            }
        }
        CHECK(res.t_offset == best_t);  // exact, both walk the same grid
        CHECK(res.score == best_sc);
    }
}

TEST_CASE("match offset ignores rigid time translation of the window") {
    const auto pat = line_pattern(20.0);
    MatchConfig cfg;
    cfg.grid_step = 0.25;
    const auto a = match_offset(make_window({{3, 9}, {4, 10}, {5, 11}}), pat, cfg);
    const auto b = match_offset(make_window({{1003, 9}, {1004, 10}, {1005, 11}}), pat, cfg);
    CHECK(a.t_offset == b.t_offset);
    CHECK(a.score == b.score);
    CHECK(a.candidates_evaluated == b.candidates_evaluated);
}

TEST_CASE("exact score ties resolve to the smallest offset") {
    // every candidate's nearest foot is the zero-norm origin vertex, so
    // every candidate scores exactly 0; the first grid point must win
    GoverningPattern pat;
    PrincipalCurve c;
    c.points = {CurvePoint{0, {0}}, CurvePoint{1, {1}}};
    pat.curves = {c};
    pat.t_end = 1.0;

    MatchConfig cfg;
    cfg.grid_step = 0.25;
    cfg.prune_enabled = false;
    const auto res = match_offset(make_window({{0, -9}}), pat, cfg);
    CHECK(res.score == 0.0);
    CHECK(res.t_offset == 0.0);
    CHECK(res.candidates_evaluated == 5);
}

TEST_CASE("match offset error contracts") {
    const auto pat = line_pattern(10.0);
    CHECK_THROWS_AS(match_offset(Window{}, pat, MatchConfig{}), EmptyWindow);
    CHECK_THROWS_AS(match_offset(make_window({{0, 1}}), GoverningPattern{}, MatchConfig{}),
                    EmptyPattern);
    MatchConfig bad;
    bad.grid_step = 0.0;
    CHECK_THROWS_AS(match_offset(make_window({{0, 1}}), pat, bad), Error);
}
