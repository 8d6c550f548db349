#include <catch_amalgamated.hpp>

#include <cmath>

#include "ffr/radio.hpp"

using namespace ffr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("log-distance path loss") {
    PathLossModel model{2.0, 10.0, 40.0};
    CHECK_THAT(model.loss_db(10.0), WithinAbs(40.0, 1e-12));
    CHECK_THAT(model.loss_db(100.0), WithinAbs(60.0, 1e-12));  // one decade, n=2
    // Below the reference distance the loss clamps to the reference value.
    CHECK_THAT(model.loss_db(1.0), WithinAbs(40.0, 1e-12));
    CHECK_THROWS_AS(model.loss_db(0.0), std::invalid_argument);

    PathLossModel urban{3.5, 1.0, 38.5};
    CHECK_THAT(urban.loss_db(2.0) - urban.loss_db(1.0),
               WithinAbs(10.0 * 3.5 * std::log10(2.0), 1e-12));  // +10.536 dB per doubling
}

TEST_CASE("received power composition") {
    PathLossModel model{2.0, 1.0, 0.0};
    Emitter bs{{0.0, 0.0}, 1500.0, omni_pattern(), std::nullopt, 1};
    // Zero loss, zero gain: the full transmit power arrives.
    CHECK_THAT(emitter_power_towards(bs, {1.0, 0.0}, model), WithinRel(1500.0, 1e-12));
    // 30 dB of loss divides by 1000.
    PathLossModel lossy{2.0, 1.0, 30.0};
    CHECK_THAT(emitter_power_towards(bs, {1.0, 0.0}, lossy), WithinRel(1.5, 1e-12));

    SECTION("front-to-back attenuation") {
        Emitter sect = bs;
        sect.pattern = {0.0, 20.0};
        sect.sector_arc = AngularArc{-std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};
        double in = emitter_power_towards(sect, {1.0, 0.0}, model);
        double out = emitter_power_towards(sect, {-1.0, 0.0}, model);
        CHECK_THAT(in / out, WithinRel(100.0, 1e-12));
    }
}

TEST_CASE("sinr composition") {
    PathLossModel model{3.0, 1.0, 0.0};
    Emitter serving{{-100.0, 0.0}, 1000.0, omni_pattern(), std::nullopt, 1};

    SECTION("symmetric two-BS case gives exactly 0 dB") {
        std::vector<Emitter> interf{{{100.0, 0.0}, 1000.0, omni_pattern(), std::nullopt, 1}};
        auto s = evaluate_sinr({0.0, 0.0}, 7, 1, serving, interf, model, 0.0);
        CHECK_THAT(s.sinr, WithinRel(1.0, 1e-12));
    }
    SECTION("interferer at twice the distance gives 2^n") {
        std::vector<Emitter> interf{{{200.0, 0.0}, 1000.0, omni_pattern(), std::nullopt, 1}};
        auto s = evaluate_sinr({0.0, 0.0}, 7, 1, serving, interf, model, 0.0);
        CHECK_THAT(s.sinr, WithinRel(8.0, 1e-12));
    }
    SECTION("no interference reduces to SNR, or a clean infinity") {
        auto snr = evaluate_sinr({0.0, 0.0}, 7, 1, serving, {}, model, 1e-3);
        CHECK_THAT(snr.sinr, WithinRel(1000.0 / 1e6 / 1e-3, 1e-12));
        auto free = evaluate_sinr({0.0, 0.0}, 7, 1, serving, {}, model, 0.0);
        CHECK(std::isinf(free.sinr));
    }
    SECTION("tx power scale invariance at zero noise") {
        std::vector<Emitter> interf{
            {{200.0, 50.0}, 1000.0, omni_pattern(), std::nullopt, 1},
            {{-300.0, 120.0}, 1000.0, {3.0, 15.0},
             AngularArc{0.3, 2.0 * std::numbers::pi / 3.0}, 2}};
        auto base = evaluate_sinr({10.0, 20.0}, 7, 1, serving, interf, model, 0.0);
        Emitter serving_big = serving;
        serving_big.tx_power_w *= 1e3;
        auto scaled_interf = interf;
        for (auto& e : scaled_interf) e.tx_power_w *= 1e3;
        auto scaled = evaluate_sinr({10.0, 20.0}, 7, 1, serving_big, scaled_interf, model, 0.0);
        CHECK_THAT(scaled.sinr, WithinRel(base.sinr, 1e-12));
    }
    SECTION("every added interferer strictly lowers SINR") {
        std::vector<Emitter> interf;
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 5; ++i) {
            interf.push_back({{300.0 + 100.0 * i, 40.0 * i}, 500.0, omni_pattern(),
                              std::nullopt, 1});
            double cur = evaluate_sinr({0.0, 0.0}, 7, 1, serving, interf, model, 0.0).sinr;
            REQUIRE(cur < prev);
            prev = cur;
        }
    }
    SECTION("tier bookkeeping separates interference sums") {
        std::vector<Emitter> interf{{{200.0, 0.0}, 1000.0, omni_pattern(), std::nullopt, 1},
                                    {{400.0, 0.0}, 1000.0, omni_pattern(), std::nullopt, 2}};
        auto s = evaluate_sinr({0.0, 0.0}, 7, 1, serving, interf, model, 0.0);
        CHECK(s.tier1_interference_w > s.tier2_interference_w);
        CHECK(s.tier1_interference_w > 0.0);
        CHECK(s.tier2_interference_w > 0.0);
    }
}

TEST_CASE("noise calibration hits the requested edge SNR") {
    PathLossModel model{3.5, 1.0, 38.5};
    LinkBudget budget{1500.0, 100.0, 0.0};
    double n = noise_for_edge_snr(budget, model, 1000.0, 20.0);
    double edge_rx = 1500.0 / model.loss_linear(1000.0);
    CHECK_THAT(linear_to_db(edge_rx / n), WithinAbs(20.0, 1e-12));
}

TEST_CASE("outage estimation") {
    ClusterLayout layout(1000.0, 0.5);
    SectorRegion region = layout.eup_region(7);
    PathLossModel model{3.5, 1.0, 38.5};
    Emitter serving{{0.0, 0.0}, 1500.0, omni_pattern(), std::nullopt, 1};
    std::vector<Emitter> interf{{{1732.0, 0.0}, 1500.0, omni_pattern(), std::nullopt, 1}};
    auto sinr_of = [&](Point p) {
        return evaluate_sinr(p, 7, 1, serving, interf, model, 0.0).sinr;
    };

    SECTION("gamma below and above the achievable range") {
        std::mt19937_64 rng(5);
        auto none = outage_probability(layout, region, sinr_of, -80.0, 20000, rng);
        CHECK(none.probability == 0.0);
        std::mt19937_64 rng2(5);
        auto all = outage_probability(layout, region, sinr_of, 120.0, 20000, rng2);
        CHECK(all.probability == 1.0);
    }
    SECTION("outage is monotone in gamma on a shared stream") {
        double prev = -1.0;
        for (double g = -10.0; g <= 25.0; g += 2.5) {
            std::mt19937_64 rng(17);  // identical positions per threshold
            auto est = outage_probability(layout, region, sinr_of, g, 5000, rng);
            REQUIRE(est.probability >= prev);
            prev = est.probability;
        }
    }
    SECTION("added interference can only raise per-trial outage") {
        auto more_interf = interf;
        more_interf.push_back({{-1732.0, 0.0}, 1500.0, omni_pattern(), std::nullopt, 1});
        auto worse = [&](Point p) {
            return evaluate_sinr(p, 7, 1, serving, more_interf, model, 0.0).sinr;
        };
        std::mt19937_64 rng_a(23), rng_b(23);
        auto base = outage_probability(layout, region, sinr_of, 6.0, 20000, rng_a);
        auto loaded = outage_probability(layout, region, worse, 6.0, 20000, rng_b);
        CHECK(loaded.probability >= base.probability);
    }
    SECTION("standard error matches the binomial formula") {
        std::mt19937_64 rng(31);
        auto est = outage_probability(layout, region, sinr_of, 6.0, 10000, rng);
        CHECK_THAT(est.std_error,
                   WithinRel(std::sqrt(est.probability * (1 - est.probability) / 10000.0), 1e-12));
    }
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(outage_probability(layout, region, sinr_of, 9.0, 0, rng),
                    std::invalid_argument);
}
