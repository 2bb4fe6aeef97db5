#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "macvlc/regions.hpp"

using namespace macvlc;

namespace {

const double ln2 = std::log(2.0);

// independent construction of the bound region: per input, take the box
// [0,B1] x [0,B2] cut by s*R1 + R2 <= B12 with the constraint right-hand
// sides written out by hand, and hull the union
std::vector<RatePair> cut_box(double w, double h, double s, double cap) {
    std::vector<RatePair> out;
    const double tiny = 1e-15;
    for (RatePair c : {RatePair{0, 0}, RatePair{w, 0}, RatePair{w, h}, RatePair{0, h}})
        if (s * c.r1 + c.r2 <= cap + tiny) out.push_back(c);
    double y = cap - s * w;
    if (y >= -tiny && y <= h + tiny) out.push_back({w, std::clamp(y, 0.0, h)});
    if (s > 0.0) {
        double x = (cap - h) / s;
        if (x >= -tiny && x <= w + tiny) out.push_back({std::clamp(x, 0.0, w), h});
        x = cap / s;
        if (x >= -tiny && x <= w + tiny) out.push_back({std::clamp(x, 0.0, w), 0.0});
    }
    if (cap >= -tiny && cap <= h + tiny) out.push_back({0.0, std::clamp(cap, 0.0, h)});
    return out;
}

RateRegion oracle_outer(const McChannel& ch, const RegionQuery& q, int grid) {
    ChannelSummary sum = channel_summary(ch);
    auto triples = info_triples(ch, product_input_grid(ch, grid), 1);
    std::vector<RatePair> cloud;
    for (const auto& t : triples) {
        double b1 = q.r1 * t.i1 + (1.0 - q.r1) * sum.c1;
        double b2 = q.r2 * t.i2 + (1.0 - q.r2) * sum.c2;
        double b12 = q.r2 * t.i12 + q.s * (1.0 - q.r1) * sum.c1 + (1.0 - q.r2) * sum.c2;
        for (const auto& v : cut_box(b1, b2, q.s, b12)) cloud.push_back(v);
    }
    RateRegion reg;
    reg.provenance = Provenance::outer;
    reg.query = q;
    reg.hull = convex_hull(std::move(cloud));
    return reg;
}

bool contains_all_vertices(const RateRegion& outer, const RateRegion& inner, double tol) {
    for (const auto& v : inner.hull)
        if (!region_contains(outer, v, tol)) return false;
    return true;
}

} // namespace

TEST_CASE("pentagon vertices and dominant-face corners") {
    InfoTriple t{0.6, 0.8, 1.1};
    auto v = pentagon_vertices(t);
    REQUIRE(v.size() == 5);
    CHECK(v[1].r1 == 0.6);
    CHECK(v[2].r2 == doctest::Approx(0.5));
    CHECK(v[3].r1 == doctest::Approx(0.3));
    CHECK(v[4].r2 == 0.8);
    PentagonCorners c = pentagon_corners(Pentagon{t});
    CHECK(c.corner_a.r1 == 0.6);
    CHECK(c.corner_a.r2 == doctest::Approx(0.5));
    CHECK(c.corner_b.r1 == doctest::Approx(0.3));
    CHECK(c.corner_b.r2 == 0.8);
}

TEST_CASE("convex_hull drops interior, duplicate, and collinear points") {
    std::vector<RatePair> pts{{0, 0}, {2, 0}, {2, 2}, {0, 2},   // square
                              {1, 0}, {2, 1}, {1, 2}, {0, 1},   // edge midpoints
                              {1, 1}, {0.5, 0.5}, {2, 2}};      // interior + dup
    auto h = convex_hull(pts);
    REQUIRE(h.size() == 4);
    CHECK(h[0].r1 == 0.0);  // lexicographically smallest vertex first
    CHECK(h[0].r2 == 0.0);
    // a point a float hair off an edge is treated as on it
    pts.push_back({1.0, 2.0 + 1e-12});
    auto h2 = convex_hull(pts);
    CHECK(h2.size() == 4);

    CHECK(convex_hull({}).empty());
    CHECK(convex_hull({{1, 1}, {1, 1}}).size() == 1);
    CHECK(convex_hull({{0, 0}, {1, 1}, {2, 2}}).size() == 2);  // all collinear
}

TEST_CASE("simplex_grid enumerates all compositions") {
    auto g = simplex_grid(2, 4);
    CHECK(g.size() == 5);
    auto g3 = simplex_grid(3, 3);
    CHECK(g3.size() == 10);  // C(5,2)
    for (const auto& pmf : g3) {
        double s = 0.0;
        for (double p : pmf) s += p;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(simplex_grid(0, 3), Error);
    CHECK_THROWS_AS(product_input_grid(builtin_channel(Builtin::adder), 5), Error);
}

TEST_CASE("block capacity region of the adder is the analytic pentagon") {
    McChannel ch = builtin_channel(Builtin::adder);
    RateRegion r = block_capacity_region(ch, 101, 1);
    RateRegion want;
    want.hull = {{0, 0}, {ln2, 0}, {ln2, 0.5 * ln2}, {0.5 * ln2, ln2}, {0, ln2}};
    CHECK(hull_distance(r, want) < 1e-9);
    REQUIRE(r.hull.size() == 5);
}

TEST_CASE("info_triples parallel path reproduces the serial reference bitwise") {
    McChannel ch = builtin_channel(Builtin::noisy_adder, 0.1);
    auto inputs = product_input_grid(ch, 41);
    auto serial = info_triples(ch, inputs, 1);
    auto parallel = info_triples(ch, inputs, 4);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].i1 == parallel[i].i1);
        CHECK(serial[i].i2 == parallel[i].i2);
        CHECK(serial[i].i12 == parallel[i].i12);
    }
}

TEST_CASE("bound region endpoints: (1,1) gives the block region, (0,0) the rectangle") {
    McChannel ch = builtin_channel(Builtin::noisy_adder, 0.1);
    RateRegion rmac = block_capacity_region(ch, 41, 1);
    RateRegion at11 = outer_region(ch, {1.0, 1.0, 1.0}, 41, 1);
    CHECK(hull_distance(rmac, at11) < 1e-9);

    ChannelSummary s = channel_summary(ch);
    RateRegion at00 = outer_region(ch, {0.0, 0.0, 1.0}, 41, 1);
    REQUIRE(at00.hull.size() == 4);
    RateRegion box;
    box.hull = {{0, 0}, {s.c1, 0}, {s.c1, s.c2}, {0, s.c2}};
    CHECK(hull_distance(at00, box) < 1e-12);
}

TEST_CASE("bound region matches the halfplane-cut oracle, including s != 1") {
    for (const auto& name : {"adder", "noisy_adder(0.1)"}) {
        McChannel ch = builtin_channel(name);
        for (RegionQuery q : {RegionQuery{0.5, 0.5, 1.0}, RegionQuery{0.5, 1.0, 2.0},
                              RegionQuery{0.8, 0.4, 0.5}, RegionQuery{0.25, 0.75, 3.0}}) {
            RateRegion impl = outer_region(ch, q, 31, 1);
            RateRegion want = oracle_outer(ch, q, 31);
            CHECK(hull_distance(impl, want) < 1e-9);
        }
    }
}

TEST_CASE("bound region is sandwiched between block region and rectangle") {
    McChannel ch = builtin_channel(Builtin::adder);
    ChannelSummary s = channel_summary(ch);
    RateRegion rmac = block_capacity_region(ch, 41, 1);
    RateRegion box;
    box.hull = convex_hull({{0, 0}, {s.c1, 0}, {s.c1, s.c2}, {0, s.c2}});
    for (double r2 : {0.25, 0.6}) {
        RateRegion reg = outer_region(ch, {r2, r2, 1.0}, 41, 1);
        CHECK(contains_all_vertices(reg, rmac, 1e-9));
        CHECK(contains_all_vertices(box, reg, 1e-9));
    }
}

TEST_CASE("query validation") {
    McChannel ch = builtin_channel(Builtin::adder);
    CHECK_THROWS_AS(outer_region(ch, {0.5, 0.3, 1.0}, 21, 1), DegenerateQuery);
    CHECK_THROWS_AS(outer_region(ch, {1.2, 1.2, 1.0}, 21, 1), DegenerateQuery);
    CHECK_THROWS_AS(outer_region(ch, {0.5, 0.5, -1.0}, 21, 1), DegenerateQuery);
    CHECK_THROWS_AS(outer_region(ch, {0.0, 0.5, 1.0}, 21, 1), DegenerateQuery);
    CHECK_THROWS_AS(r1_fixed_outer(ch, 1.5, 21, 1), DegenerateQuery);
}

TEST_CASE("first-decoder-fixed region agrees with the general query") {
    McChannel ch = builtin_channel(Builtin::noisy_adder, 0.1);
    for (double r2 : {0.45, 1.0}) {
        RateRegion a = r1_fixed_outer(ch, r2, 31, 1);
        RateRegion b = outer_region(ch, {1.0, r2, r2}, 31, 1);
        CHECK(hull_distance(a, b) < 1e-9);
    }
    // r2 = 0: the other user is unconstrained by the sum face
    ChannelSummary s = channel_summary(ch);
    RateRegion z = r1_fixed_outer(ch, 0.0, 31, 1);
    RateRegion box;
    box.hull = convex_hull({{0, 0}, {s.c1, 0}, {s.c1, s.c2}, {0, s.c2}});
    CHECK(hull_distance(z, box) < 1e-9);
    // and r2 = 1 collapses onto the block region
    RateRegion one = r1_fixed_outer(ch, 1.0, 31, 1);
    CHECK(hull_distance(one, block_capacity_region(ch, 31, 1)) < 1e-9);
}

TEST_CASE("dependent-input bound contains the product-input region") {
    McChannel ch = builtin_channel(Builtin::adder);
    // grid 29: steps = 28, so the uniform joint pmf (entries 7/28) and the
    // uniform marginals (14/28) both sit exactly on their grids
    RateRegion rmac = block_capacity_region(ch, 29, 1);
    RateRegion fb = feedback_outer_region(ch, {1.0, 1.0, 1.0}, 29, 1);
    CHECK(contains_all_vertices(fb, rmac, 1e-9));
    // correlated inputs can make the output uniform on three letters, pushing
    // the sum rate toward log 3 > 1.5 log 2
    double best = 0.0;
    for (const auto& v : fb.hull) best = std::max(best, v.r1 + v.r2);
    CHECK(best > 1.5 * ln2 + 0.01);
    CHECK(best < std::log(3.0) + 1e-6);
}

TEST_CASE("two-corner boundary curve endpoints and non-convexity") {
    McChannel ch = builtin_channel(Builtin::adder);
    ChannelSummary s = channel_summary(ch);
    PentagonCorners c = detect_pentagon_corners(ch, s, 101);
    RateRegion curve = timeshare_boundary(s, c, 101);
    REQUIRE(curve.hull.size() == 101);
    // p = 0: user 1 throttled by the shared phase, user 2 at capacity
    CHECK(curve.hull.front().r1 == doctest::Approx(2.0 / 3.0 * ln2).epsilon(1e-12));
    CHECK(curve.hull.front().r2 == doctest::Approx(ln2).epsilon(1e-12));
    CHECK(curve.hull.back().r1 == doctest::Approx(ln2).epsilon(1e-12));
    CHECK(curve.hull.back().r2 == doctest::Approx(2.0 / 3.0 * ln2).epsilon(1e-12));
    // union of dominated rectangles is not convex: the midpoint of the two
    // endpoints lies outside even though both endpoints are in
    CHECK(region_contains(curve, {0.66 * ln2, 0.99 * ln2}, 1e-9));
    CHECK(!region_contains(curve, {0.83 * ln2, 0.83 * ln2}, 1e-9));
    // the curve itself is inside
    for (const auto& v : curve.hull) CHECK(region_contains(curve, v, 1e-12));

    CHECK_THROWS_AS(timeshare_boundary(s, c, 1), Error);
}

TEST_CASE("time sharing sweeps between the curve endpoints") {
    McChannel ch = builtin_channel(Builtin::adder);
    ChannelSummary s = channel_summary(ch);
    PentagonCorners c = detect_pentagon_corners(ch, s, 101);

    // with log M proportional to the capacities and eps = 0 the share
    // parameter traces exactly the two-corner curve
    RateRegion curve = timeshare_boundary(s, c, 11);
    for (int k = 0; k < 11; ++k) {
        double lam = k / 10.0;
        RatePair got = timeshare_rates(s, c, lam, s.c1, s.c2, 0.0);
        CHECK(got.r1 == doctest::Approx(curve.hull[k].r1).epsilon(1e-12));
        CHECK(got.r2 == doctest::Approx(curve.hull[k].r2).epsilon(1e-12));
    }

    // monotone in the share; eps only drags the endpoints down a little
    double eps = 0.01;
    RatePair lo = timeshare_rates(s, c, 0.0, 3.0, 2.0, eps);
    RatePair mid = timeshare_rates(s, c, 0.5, 3.0, 2.0, eps);
    RatePair hi = timeshare_rates(s, c, 1.0, 3.0, 2.0, eps);
    CHECK(lo.r1 < mid.r1);
    CHECK(mid.r1 < hi.r1);
    CHECK(lo.r2 > mid.r2);
    CHECK(mid.r2 > hi.r2);
    CHECK(hi.r1 == doctest::Approx(s.c1 - eps).epsilon(1e-12));
    CHECK(lo.r2 == doctest::Approx(s.c2 - eps).epsilon(1e-12));

    CHECK_THROWS_AS(timeshare_rates(s, c, -0.1, 1.0, 1.0, eps), Error);
    CHECK_THROWS_AS(timeshare_rates(s, c, 0.5, 0.0, 1.0, eps), Error);
    CHECK_THROWS_AS(timeshare_rates(s, c, 0.5, 1.0, 1.0, 10.0), Error);
}

TEST_CASE("corner detection accepts the adder, rejects the multiplier") {
    McChannel adder = builtin_channel(Builtin::adder);
    ChannelSummary sa = channel_summary(adder);
    PentagonCorners c = detect_pentagon_corners(adder, sa, 101);
    CHECK(c.corner_a.r1 == doctest::Approx(ln2).epsilon(1e-9));
    CHECK(c.corner_a.r2 == doctest::Approx(0.5 * ln2).epsilon(1e-9));
    CHECK(c.corner_b.r1 == doctest::Approx(0.5 * ln2).epsilon(1e-9));
    CHECK(c.corner_b.r2 == doctest::Approx(ln2).epsilon(1e-9));

    McChannel mult = builtin_channel(Builtin::multiplier);
    ChannelSummary sm = channel_summary(mult);
    CHECK_THROWS_AS(detect_pentagon_corners(mult, sm, 51), NotPentagonShaped);
}

TEST_CASE("stopping-time entropy slack") {
    CHECK(stopping_entropy_bound(1.0) == doctest::Approx(1.0));
    CHECK(stopping_entropy_bound(std::exp(1.0)) == doctest::Approx(2.0));
    CHECK(stopping_entropy_bound(20.0) == doctest::Approx(1.0 + std::log(20.0)).epsilon(1e-12));
    CHECK_THROWS_AS(stopping_entropy_bound(0.0), Error);
}
