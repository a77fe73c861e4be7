#include <doctest.h>

#include <random>
#include <vector>

#include "govpat/errors.hpp"
#include "govpat/metrics.hpp"

using namespace govpat;

namespace {

// Builds counts whose class-0 row is exactly (tp, fp, fn) by streaming
// synthetic predictions against a 3-class universe.
ConfusionCounts counts_for_class0(int tp, int fp, int fn) {
    ConfusionCounts c(3);
    for (int i = 0; i < tp; ++i) c.add(0, 0);
    for (int i = 0; i < fp; ++i) c.add(0, 1);
    for (int i = 0; i < fn; ++i) c.add(2, 0);
    return c;
}

}  // namespace

TEST_CASE("confusion accounting: totals, correct, derived tn") {
    ConfusionCounts c(3);
    c.add(0, 0);
    c.add(1, 1);
    c.add(2, 1);  // fp for 2, fn for 1
    c.add(0, 2);  // fp for 0, fn for 2

    CHECK(c.total() == 4);
    CHECK(c.correct() == 2);

    const auto k0 = c.for_class(0);
    CHECK(k0.tp == 1);
    CHECK(k0.fp == 1);
    CHECK(k0.fn == 0);
    CHECK(k0.tn == 2);

    const auto k1 = c.for_class(1);
    CHECK(k1.tp == 1);
    CHECK(k1.fp == 0);
    CHECK(k1.fn == 1);
    CHECK(k1.tn == 2);

    CHECK_THROWS_AS(c.add(3, 0), InvalidClass);
    CHECK_THROWS_AS(c.add(0, -1), InvalidClass);
}

TEST_CASE("confusion merge adds shard counts") {
    ConfusionCounts a(2), b(2);
    a.add(0, 0);
    a.add(1, 0);
    b.add(0, 1);
    b.add(1, 1);
    a.merge(b);
    CHECK(a.total() == 4);
    CHECK(a.correct() == 2);
    CHECK(a.for_class(0).fp == 1);
    CHECK(a.for_class(1).fp == 1);

    ConfusionCounts wide(3);
    CHECK_THROWS_AS(a.merge(wide), Error);
}

TEST_CASE("f-score: frozen examples") {
    const auto perfect = f_score(counts_for_class0(5, 0, 0));
    CHECK(perfect.per_class[0] == doctest::Approx(1.0));
    CHECK(!perfect.zero_support[0]);

    const auto mixed = f_score(counts_for_class0(3, 1, 2));
    CHECK(mixed.per_class[0] == doctest::Approx(6.0 / 9.0).epsilon(1e-12));

    // a class that never appears scores 0 and is flagged, not excluded
    CHECK(mixed.per_class[1] == doctest::Approx(0.0));
    const auto empty = f_score(ConfusionCounts(2));
    CHECK(empty.per_class[0] == 0.0);
    CHECK(empty.zero_support[0]);
    CHECK(empty.macro == doctest::Approx(0.0));
}

TEST_CASE("g-score: frozen examples") {
    const auto perfect = g_score(counts_for_class0(5, 0, 0));
    CHECK(perfect.per_class[0] == doctest::Approx(1.0));

    const auto mixed = g_score(counts_for_class0(3, 1, 2));
    CHECK(mixed.per_class[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("beta skews the balance between fp and fn") {
    // beta=2 weighs fn four times harder in F, twice in G
    const auto c = counts_for_class0(3, 1, 2);
    const auto f2 = f_score(c, 2.0);
    CHECK(f2.per_class[0] == doctest::Approx(15.0 / 24.0).epsilon(1e-12));
    const auto g2 = g_score(c, 2.0);
    CHECK(g2.per_class[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("macro mean respects weights") {
    ConfusionCounts c(2);
    c.add(0, 0);  // class 0 perfect
    c.add(1, 0);  // class 1 fp, class 0 fn
    const auto plain = f_score(c);
    // class 0: tp=1 fp=0 fn=1 -> 2/3; class 1: tp=0 fp=1 fn=0 -> 0
    CHECK(plain.per_class[0] == doctest::Approx(2.0 / 3.0));
    CHECK(plain.per_class[1] == doctest::Approx(0.0));
    CHECK(plain.macro == doctest::Approx((2.0 / 3.0 + 0.0) / 2.0));

    const std::vector<double> w = {3.0, 1.0};
    const auto weighted = f_score(c, 1.0, w);
    CHECK(weighted.macro == doctest::Approx((3.0 * 2.0 / 3.0) / 4.0));

    const std::vector<double> bad = {1.0};
    CHECK_THROWS_AS(f_score(c, 1.0, bad), Error);
    CHECK_THROWS_AS(f_score(c, 0.0), Error);
}

TEST_CASE("g never exceeds f at beta 1") {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> n(0, 40);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto c = counts_for_class0(n(rng), n(rng), n(rng));
        const auto f = f_score(c);
        const auto g = g_score(c);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(g.per_class[k] <= f.per_class[k] + 1e-15);
            CHECK(f.per_class[k] >= 0.0);
            CHECK(f.per_class[k] <= 1.0);
            CHECK(g.per_class[k] >= 0.0);
            CHECK(g.per_class[k] <= 1.0);
        }
        CHECK(g.macro <= f.macro + 1e-15);
    }
}

TEST_CASE("query tally: apt means the prediction was wrong") {
    QueryTally t;
    record_query(t, 1, 2);
    CHECK(t.apt == 1);
    record_query(t, 1, 1);
    CHECK(t.inapt == 1);
    for (int i = 0; i < 2; ++i) record_query(t, 0, 1);
    for (int i = 0; i < 6; ++i) record_query(t, 2, 2);
    CHECK(t.apt == 3);
    CHECK(t.inapt == 7);
    CHECK(t.ratio_defined());
    CHECK(t.ratio() == doctest::Approx(0.3));

    const QueryTally empty;
    CHECK(!empty.ratio_defined());
    CHECK(empty.ratio() == 0.0);
}

TEST_CASE("report assembly ties the pieces together") {
    ConfusionCounts c(2);
    c.add(0, 0);
    c.add(0, 0);
    c.add(1, 1);
    c.add(0, 1);
    QueryTally t;
    record_query(t, 0, 1);
    record_query(t, 1, 1);

    const auto r = build_report(c, t);
    CHECK(r.total_samples == 4);
    CHECK(r.accuracy == doctest::Approx(0.75));
    CHECK(r.per_class.size() == 2);
    CHECK(r.per_class[0].tp == 2);
    CHECK(r.per_class[1].fn == 1);
    CHECK(r.f1.per_class[0] == doctest::Approx(4.0 / 5.0));
    CHECK(r.g1.per_class[1] == doctest::Approx(0.5));
    CHECK(r.apt_queries == 1);
    CHECK(r.inapt_queries == 1);
    CHECK(r.apt_ratio_defined);
    CHECK(r.apt_ratio == doctest::Approx(0.5));
    CHECK(r.runtime_seconds == 0.0);  // callers stamp this after the fact
}
