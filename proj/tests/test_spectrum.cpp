#include <catch_amalgamated.hpp>

#include <random>

#include "ffr/spectrum.hpp"

using namespace ffr;

namespace {

std::vector<int> indices(const std::vector<BandId>& bands) {
    std::vector<int> out;
    for (BandId b : bands) out.push_back(b.index());
    return out;
}

}  // namespace

TEST_CASE("segment split is equal with remainder to lowest bands") {
    CHECK(segment_channel_counts(120) == std::array<int, 6>{20, 20, 20, 20, 20, 20});
    CHECK(segment_channel_counts(121) == std::array<int, 6>{21, 20, 20, 20, 20, 20});
    CHECK(segment_channel_counts(6) == std::array<int, 6>{1, 1, 1, 1, 1, 1});
    CHECK_THROWS_AS(segment_channel_counts(5), std::invalid_argument);
}

TEST_CASE("default plan reproduces the band layout") {
    SpectrumPlan plan = default_plan(120);

    CHECK(indices(plan.cell(7).allocation.eup_bands()) == std::vector<int>{1, 2});
    CHECK(indices(plan.cell(3).allocation.cup_bands()) == std::vector<int>{1, 2, 3, 4});
    CHECK(indices(plan.cell(2).allocation.eup_bands()) == std::vector<int>{3, 4});
    CHECK(indices(plan.cell(1).allocation.eup_bands()) == std::vector<int>{5, 6});
    for (BandId b : BandId::all())
        CHECK(plan.cell(7).pool.band(b).total == 20);

    // Reuse structure: odd ring cells share one allocation, even ring cells
    // another, the reference cell differs from both.
    CHECK(plan.cell(1).allocation == plan.cell(3).allocation);
    CHECK(plan.cell(3).allocation == plan.cell(5).allocation);
    CHECK(plan.cell(2).allocation == plan.cell(4).allocation);
    CHECK(plan.cell(4).allocation == plan.cell(6).allocation);
    CHECK_FALSE(plan.cell(7).allocation == plan.cell(1).allocation);
    CHECK_FALSE(plan.cell(7).allocation == plan.cell(2).allocation);

    SECTION("CUP and EUP are disjoint and exhaustive per cell") {
        for (int cell = 1; cell <= 7; ++cell) {
            const BandAllocation& a = plan.cell(cell).allocation;
            for (BandId b : BandId::all()) CHECK(a.in_cup(b) != a.in_eup(b));
            CHECK(a.eup_bands().size() == 2);
        }
    }
}

TEST_CASE("default plan rejects non-divisible totals") {
    CHECK_THROWS_AS(default_plan(121), std::invalid_argument);
    SpectrumPlan tiny = default_plan(6);
    for (BandId b : BandId::all()) CHECK(tiny.cell(1).pool.band(b).total == 1);
}

TEST_CASE("free EUP counting") {
    SpectrumPlan plan = default_plan(120);
    for (int cell = 1; cell <= 7; ++cell) CHECK(plan.free_eup_count(cell) == 40);

    ChannelPool& p3 = plan.cell(3).pool;
    for (int i = 0; i < 15; ++i) REQUIRE(p3.try_reserve(BandId(5)));
    CHECK(plan.free_eup_count(3) == 25);

    ChannelPool& p2 = plan.cell(2).pool;
    p2.lend(BandId(3), 20);
    p2.lend(BandId(4), 20);
    CHECK(plan.free_eup_count(2) == 0);
}

TEST_CASE("reserve and release bookkeeping") {
    ChannelPool pool({20, 20, 20, 20, 20, 20});
    BandId f1(1);

    CHECK(pool.try_reserve(f1));
    CHECK(pool.band(f1).occupied == 1);
    pool.release(f1);
    CHECK(pool.band(f1).occupied == 0);
    CHECK_THROWS_AS(pool.release(f1), std::logic_error);

    SECTION("exhaustion by occupancy") {
        for (int i = 0; i < 20; ++i) REQUIRE(pool.try_reserve(f1));
        CHECK_FALSE(pool.try_reserve(f1));
    }
    SECTION("lent channels are unavailable") {
        for (int i = 0; i < 10; ++i) REQUIRE(pool.try_reserve(f1));
        pool.lend(f1, 10);
        CHECK_FALSE(pool.try_reserve(f1));
        CHECK_THROWS_AS(pool.lend(f1, 1), std::logic_error);
    }
}

TEST_CASE("random reserve/release walk conserves totals and round-trips") {
    std::mt19937_64 rng(7);
    ChannelPool pool({20, 20, 20, 20, 20, 20});
    ChannelPool original = pool;
    std::vector<int> held;
    for (int step = 0; step < 2000; ++step) {
        int band = 1 + int(rng() % 6);
        if (!held.empty() && rng() % 2 == 0) {
            int i = int(rng() % held.size());
            pool.release(BandId(held[i]));
            held.erase(held.begin() + i);
        } else if (pool.try_reserve(BandId(band))) {
            held.push_back(band);
        }
        REQUIRE(pool.consistent());
        for (BandId b : BandId::all()) {
            const BandChannels& bc = pool.band(b);
            REQUIRE(bc.occupied + bc.lent + bc.free_count() == bc.total);
        }
    }
    for (int band : held) pool.release(BandId(band));
    for (BandId b : BandId::all())
        CHECK(pool.band(b).occupied == original.band(b).occupied);
}

TEST_CASE("band id bounds") {
    CHECK_THROWS_AS(BandId(0), std::invalid_argument);
    CHECK_THROWS_AS(BandId(7), std::invalid_argument);
}
