#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "macvlc/regions.hpp"
#include "macvlc/schemes.hpp"

using namespace macvlc;

namespace {
const double ln2 = std::log(2.0);
}

TEST_CASE("codeword symbols are a pure function of (seed, user, message, position)") {
    Codebook cb{16, {0.25, 0.5, 0.25}, 42, User::one};
    for (uint64_t w = 1; w <= 16; ++w)
        for (uint64_t i = 1; i <= 5; ++i) {
            int a = codeword_symbol(cb, w, i);
            int b = codeword_symbol(cb, w, i);
            CHECK(a == b);
            CHECK(a >= 0);
            CHECK(a < 3);
        }
    CHECK_THROWS_AS(codeword_symbol(cb, 0, 1), MessageOutOfRange);
    CHECK_THROWS_AS(codeword_symbol(cb, 17, 1), MessageOutOfRange);
    CHECK_THROWS_AS(codeword_symbol(cb, 1, 0), MessageOutOfRange);

    // different seed, user, or message changes the stream
    Codebook other = cb;
    other.seed = 43;
    Codebook user2 = cb;
    user2.user = User::two;
    bool seed_differs = false, user_differs = false, msg_differs = false;
    for (uint64_t i = 1; i <= 64; ++i) {
        seed_differs |= codeword_symbol(cb, 1, i) != codeword_symbol(other, 1, i);
        user_differs |= codeword_symbol(cb, 1, i) != codeword_symbol(user2, 1, i);
        msg_differs |= codeword_symbol(cb, 1, i) != codeword_symbol(cb, 2, i);
    }
    CHECK(seed_differs);
    CHECK(user_differs);
    CHECK(msg_differs);
}

TEST_CASE("codeword letters follow the input pmf") {
    Codebook cb{64, {0.2, 0.3, 0.5}, 7, User::two};
    std::map<int, long> counts;
    long n = 0;
    for (uint64_t w = 1; w <= 64; ++w)
        for (uint64_t i = 1; i <= 2000; ++i) {
            ++counts[codeword_symbol(cb, w, i)];
            ++n;
        }
    std::vector<double> want{0.2, 0.3, 0.5};
    for (int a = 0; a < 3; ++a) {
        double se = std::sqrt(want[a] * (1 - want[a]) / n);
        CHECK(std::fabs((double)counts[a] / n - want[a]) < 4 * se);
    }
}

TEST_CASE("two-phase construction reproduces the hand-derived lengths") {
    // joint phase at (R1*, R2*) = (0.6, 0.35) nats; finished user pins a
    // letter while the other continues alone at 0.8 - 0.05 nats
    ConcatScheme sc = build_concat(1 << 20, 1 << 12, {0.6, 0.35}, 0.8, 0.05, ConcatOrder::v1);
    double lm1 = 20 * ln2, lm2 = 12 * ln2;
    double n1 = lm1 / 0.6;
    CHECK(sc.n1 == doctest::Approx(n1).epsilon(1e-12));
    // phase 2 must carry the residual log M2 - R2* N1 at rate 0.75
    double residual = lm2 - 0.35 * n1;
    CHECK(sc.n2 == doctest::Approx(n1 + residual / 0.75).epsilon(1e-12));
    CHECK(sc.n2 > sc.n1);
    CHECK(sc.phase2_rate == doctest::Approx(0.75));

    // receiver-side rate identities
    CHECK(lm1 / sc.n1 == doctest::Approx(0.6).epsilon(1e-12));
    double r2 = lm2 / sc.n2;
    double s = sc.n1 / sc.n2;
    CHECK(r2 == doctest::Approx(lm2 / (sc.n1 + residual / 0.75)).epsilon(1e-12));
    CHECK(s <= 1.0);
}

TEST_CASE("two-phase construction collapses when phase 1 already carries user 2") {
    // log M2 == R2* N1 exactly: nothing left for phase 2
    double r1 = 0.5, r2 = 0.25;
    uint64_t m1 = 1 << 10;
    double lm1 = 10 * ln2;
    double n1 = lm1 / r1;
    double lm2 = r2 * n1;
    uint64_t m2 = (uint64_t)std::llround(std::exp(lm2));
    // adjust r2 so the identity is exact for the integer m2
    r2 = std::log((double)m2) / n1;
    ConcatScheme sc = build_concat(m1, m2, {r1, r2}, 0.9, 0.1, ConcatOrder::v1);
    CHECK(sc.n2 == doctest::Approx(sc.n1).epsilon(1e-12));

    // log M2 materially below R2* N1 is a contradiction
    CHECK_THROWS_AS(build_concat(m1, 2, {r1, 0.5}, 0.9, 0.1, ConcatOrder::v1),
                    NonPositiveRate);
}

TEST_CASE("mirrored order swaps the roles of the users") {
    ConcatScheme v1 = build_concat(1 << 8, 1 << 6, {0.5, 0.3}, 0.7, 0.05, ConcatOrder::v1);
    ConcatScheme v2 = build_concat(1 << 6, 1 << 8, {0.3, 0.5}, 0.7, 0.05, ConcatOrder::v2);
    CHECK(v1.n1 == doctest::Approx(v2.n2).epsilon(1e-12));
    CHECK(v1.n2 == doctest::Approx(v2.n1).epsilon(1e-12));
    CHECK(v2.n1 >= v2.n2);
}

TEST_CASE("degenerate two-phase parameters are rejected") {
    CHECK_THROWS_AS(build_concat(4, 4, {0.5, 0.3}, 0.7, 0.0, ConcatOrder::v1), NonPositiveRate);
    CHECK_THROWS_AS(build_concat(4, 4, {0.5, 0.3}, 0.1, 0.2, ConcatOrder::v1), NonPositiveRate);
    CHECK_THROWS_AS(build_concat(4, 4, {0.0, 0.3}, 0.7, 0.05, ConcatOrder::v1), NonPositiveRate);
    CHECK_THROWS_AS(build_concat(1, 4, {0.5, 0.3}, 0.7, 0.05, ConcatOrder::v1), NonPositiveRate);
    CHECK_THROWS_AS(build_concat(4, 4, {0.5, 0.0}, 0.7, 0.05, ConcatOrder::v2), NonPositiveRate);
    CHECK_THROWS_AS(build_concat(4, 1, {0.5, 0.3}, 0.7, 0.05, ConcatOrder::v2), NonPositiveRate);
    CHECK_THROWS_AS(build_concat(0, 4, {0.5, 0.3}, 0.7, 0.05, ConcatOrder::v1), NonPositiveRate);
}

TEST_CASE("mixture rates interpolate the component decode times") {
    ConcatScheme v1 = build_concat(1 << 8, 1 << 8, {0.5, 0.3}, 0.7, 0.05, ConcatOrder::v1);
    ConcatScheme v2 = build_concat(1 << 8, 1 << 8, {0.3, 0.5}, 0.7, 0.05, ConcatOrder::v2);
    double lm = 8 * ln2;

    MixedRates at1 = mixed_rates({1.0, v1, v2}, lm, lm);
    CHECK(at1.en1 == doctest::Approx(v1.n1).epsilon(1e-12));
    CHECK(at1.en2 == doctest::Approx(v1.n2).epsilon(1e-12));
    CHECK(at1.rate1 == doctest::Approx(lm / v1.n1).epsilon(1e-12));

    MixedRates at0 = mixed_rates({0.0, v1, v2}, lm, lm);
    CHECK(at0.en1 == doctest::Approx(v2.n1).epsilon(1e-12));
    CHECK(at0.en2 == doctest::Approx(v2.n2).epsilon(1e-12));

    MixedRates mid = mixed_rates({0.5, v1, v2}, lm, lm);
    CHECK(mid.en1 == doctest::Approx(0.5 * (v1.n1 + v2.n1)).epsilon(1e-12));
    CHECK(mid.rate1 == doctest::Approx(lm / mid.en1).epsilon(1e-12));

    CHECK_THROWS_AS(mixed_rates({1.5, v1, v2}, lm, lm), Error);
    ConcatScheme odd = v2;
    odd.m1 = 4;
    CHECK_THROWS_AS(mixed_rates({0.5, v1, odd}, lm, lm), Error);
}

TEST_CASE("mixture of the two corner schemes matches the share formula") {
    // corner schemes on the noiseless adder: phase 1 on the dominant face,
    // phase 2 at capacity minus eps
    McChannel ch = builtin_channel(Builtin::adder);
    ChannelSummary s = channel_summary(ch);
    PentagonCorners c = detect_pentagon_corners(ch, s, 101);
    double eps = 0.02;
    double lm1 = 9 * ln2, lm2 = 7 * ln2;
    uint64_t m1 = 1 << 9, m2 = 1 << 7;

    // v1: phase 1 at (C1 - eps, d2) so user 1 finishes first; mirrored for v2
    ConcatScheme v1 =
        build_concat(m1, m2, {s.c1 - eps, c.corner_a.r2}, s.c2, eps, ConcatOrder::v1);
    ConcatScheme v2 =
        build_concat(m1, m2, {c.corner_b.r1, s.c2 - eps}, s.c1, eps, ConcatOrder::v2);

    for (double lam : {0.0, 0.3, 0.5, 0.8, 1.0}) {
        MixedRates got = mixed_rates({lam, v1, v2}, lm1, lm2);
        RatePair want = timeshare_rates(s, c, lam, lm1, lm2, eps);
        CHECK(got.rate1 == doctest::Approx(want.r1).epsilon(1e-9));
        CHECK(got.rate2 == doctest::Approx(want.r2).epsilon(1e-9));
    }
}
