#include <catch_amalgamated.hpp>

#include <cmath>

#include "ffr/queueing.hpp"

using namespace ffr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent oracle: the closed-form sum (A^S/S!) / sum_{k<=S} A^k/k!,
// evaluated in extended precision.
long double erlang_b_direct(int servers, long double offered) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k <= servers; ++k) {
        term *= offered / k;
        sum += term;
    }
    return term / sum;
}

}  // namespace

TEST_CASE("erlang_b closed-form values") {
    CHECK(erlang_b(0, 3.7) == 1.0);
    CHECK_THAT(erlang_b(1, 1.0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(erlang_b(2, 1.0), WithinAbs(0.2, 1e-15));
    CHECK(erlang_b(50, 0.0) == 0.0);
    CHECK_THROWS_AS(erlang_b(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(erlang_b(1, -0.5), std::invalid_argument);
}

TEST_CASE("erlang_b recursion matches the direct summation oracle") {
    for (double a : {0.01, 0.1, 1.0, 10.0, 100.0, 300.0})
        for (int s = 0; s <= 200; ++s) {
            double expected = double(erlang_b_direct(s, a));
            REQUIRE_THAT(erlang_b(s, a), WithinRel(expected, 1e-12));
        }
    // The regime swept in the experiments: S = 120, holding time 90 s.
    double a = 90.0 * 6.0 * 6.0 / 30.0;
    REQUIRE_THAT(erlang_b(120, a), WithinRel(double(erlang_b_direct(120, a)), 1e-12));
}

TEST_CASE("erlang_b monotonicity") {
    for (int s : {1, 10, 60, 120, 200}) {
        double prev = erlang_b(s, 0.01);
        for (double a = 0.5; a <= 300.0; a += 0.5) {
            double b = erlang_b(s, a);
            // Strictness is only meaningful once the value rises above the
            // double underflow floor; deep in the tail both sides are 0.
            if (b > 1e-280)
                REQUIRE(b > prev);
            else
                REQUIRE(b >= prev);
            prev = b;
        }
    }
    for (double a : {0.5, 5.0, 50.0, 290.0}) {
        double prev = erlang_b(0, a);
        for (int s = 1; s <= 200; ++s) {
            double b = erlang_b(s, a);
            if (prev > 1e-280)
                REQUIRE(b < prev);
            else
                REQUIRE(b <= prev);
            prev = b;
        }
    }
}

TEST_CASE("birth-death steady state") {
    SECTION("two symmetric states") {
        auto p = birth_death_steady_state(1.0, 1.0, 1);
        REQUIRE(p.size() == 2);
        CHECK_THAT(p[0], WithinAbs(0.5, 1e-15));
        CHECK_THAT(p[1], WithinAbs(0.5, 1e-15));
    }
    SECTION("no arrivals pins the chain at zero") {
        auto p = birth_death_steady_state(0.0, 2.0, 5);
        CHECK(p[0] == 1.0);
        for (int k = 1; k <= 5; ++k) CHECK(p[k] == 0.0);
    }
    SECTION("normalization and the Erlang identity") {
        for (double a : {0.1, 1.0, 10.0, 100.0})
            for (int s : {0, 1, 7, 40, 120, 200}) {
                auto p = birth_death_steady_state(a, 1.0, s);
                long double sum = 0.0L;
                for (double v : p) {
                    REQUIRE(v >= 0.0);
                    sum += v;
                }
                REQUIRE_THAT(double(sum), WithinAbs(1.0, 1e-12));
                double b = erlang_b(s, a);
                if (b < 1e-250)
                    REQUIRE(p[s] <= 1e-250);  // both underflow together
                else
                    REQUIRE_THAT(p[s], WithinRel(b, 1e-10));
            }
    }
    CHECK_THROWS_AS(birth_death_steady_state(1.0, 0.0, 5), std::invalid_argument);
}

TEST_CASE("effective capacity sums grants per role") {
    std::vector<BorrowGrant> grants{{3, 7, BandId(5), 20, SectorLabel::X},
                                    {3, 7, BandId(6), 5, SectorLabel::Y}};
    CHECK(effective_capacity(120, grants, 7) == 145);
    CHECK(effective_capacity(120, grants, 3) == 95);
    CHECK(effective_capacity(120, {}, 7) == 120);
    CHECK(effective_capacity(120, grants, 2) == 120);
}

TEST_CASE("borrowing strictly lowers the borrower's blocking") {
    for (double a : {60.0, 100.0, 126.0, 150.0}) {
        double before = erlang_b(120, a);
        double after = erlang_b(145, a);
        CHECK(after < before);
    }
}

TEST_CASE("overall blocking") {
    TrafficProfile profile;
    std::array<double, 7> weights = {1, 2, 4, 5, 5, 6, 7};
    double total = 0.21;
    double wsum = 30.0;
    for (int i = 0; i < 7; ++i) {
        profile.arrival_rate[i] = total * weights[i] / wsum;
        profile.release_rate[i] = 1.0 / 90.0;
    }
    std::array<int, 7> caps;
    caps.fill(20);

    SECTION("traffic-weighted mode is the lambda-weighted mean") {
        BlockingResult r = overall_blocking(profile, caps, OverallBlockingMode::TrafficWeighted);
        long double expected = 0.0L;
        double lo = 1.0, hi = 0.0;
        for (int i = 0; i < 7; ++i) {
            expected += profile.arrival_rate[i] * r.per_cell[i];
            lo = std::min(lo, r.per_cell[i]);
            hi = std::max(hi, r.per_cell[i]);
        }
        expected /= total;
        CHECK_THAT(r.overall, WithinRel(double(expected), 1e-12));
        CHECK(r.overall >= lo);
        CHECK(r.overall <= hi);
    }
    SECTION("degenerate loads") {
        TrafficProfile zero = profile;
        for (double& l : zero.arrival_rate) l = 0.0;
        std::array<int, 7> none{};
        // Every cell blocking 1 (zero servers) -> overall 1; zero load is a domain error.
        BlockingResult all_blocked =
            overall_blocking(profile, none, OverallBlockingMode::TrafficWeighted);
        CHECK_THAT(all_blocked.overall, WithinAbs(1.0, 1e-15));
        BlockingResult open = overall_blocking(profile, caps, OverallBlockingMode::TrafficWeighted);
        CHECK(open.overall < 1.0);
        CHECK_THROWS_AS(overall_blocking(zero, caps, OverallBlockingMode::TrafficWeighted),
                        std::invalid_argument);
    }
    SECTION("literal mode evaluates the printed formula verbatim") {
        BlockingResult r = overall_blocking(profile, caps, OverallBlockingMode::Literal);
        long double carried = 0.0L;
        for (int i = 0; i < 7; ++i)
            carried += profile.arrival_rate[i] * (1.0 - erlang_b(caps[i], 90.0 * profile.arrival_rate[i]));
        double expected = double(1.0L - carried / (7.0L * 140.0L));
        CHECK_THAT(r.overall, WithinRel(expected, 1e-12));
    }
}
