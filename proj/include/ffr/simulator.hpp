#pragma once

#include <array>
#include <cstdint>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

#include "ffr/borrowing.hpp"
#include "ffr/queueing.hpp"
#include "ffr/spectrum.hpp"

namespace ffr {

enum class Scheme { Conventional, Proposed };

inline const char* to_string(Scheme s) {
    return s == Scheme::Conventional ? "conventional" : "proposed";
}

struct SimConfig {
    Scheme scheme = Scheme::Conventional;
    double total_arrival_rate = 0.0;             // calls/second over the cluster
    std::array<double, kNumCells> ratio{};       // per-cell arrival weights
    double holding_time_mean = 90.0;             // seconds
    double duration = 0.0;
    double warmup = 0.0;
    std::uint64_t seed = 1;
    int threshold = 80;
    int hysteresis = 10;
    int request_quantum = 20;                    // one band's worth per borrow request
    int channels_per_cell = 120;
    int borrower_cell = kReferenceCell;

    void validate() const {
        double wsum = 0.0;
        for (double w : ratio) {
            if (w < 0) throw std::invalid_argument("ratio weights must be nonnegative");
            wsum += w;
        }
        if (wsum <= 0) throw std::invalid_argument("at least one ratio weight must be positive");
        if (total_arrival_rate < 0) throw std::invalid_argument("total arrival rate must be nonnegative");
        if (holding_time_mean <= 0) throw std::invalid_argument("holding time must be positive");
        if (warmup < 0 || duration <= warmup)
            throw std::invalid_argument("need duration > warmup >= 0");
        if (hysteresis < 0 || request_quantum <= 0 || threshold < 0)
            throw std::invalid_argument("threshold/hysteresis/quantum out of range");
    }

    std::array<double, kNumCells> per_cell_rates() const {
        double wsum = 0.0;
        for (double w : ratio) wsum += w;
        std::array<double, kNumCells> rates{};
        for (int i = 0; i < kNumCells; ++i) rates[i] = total_arrival_rate * ratio[i] / wsum;
        return rates;
    }
};

struct CellMetrics {
    long offered = 0;
    long blocked = 0;
    long carried = 0;

    friend bool operator==(const CellMetrics&, const CellMetrics&) = default;
};

struct GrantEvent {
    double time = 0.0;
    int lender = 0;
    int borrower = 0;
    int band_index = 0;
    int channels = 0;
    SectorLabel sector = SectorLabel::X;

    friend bool operator==(const GrantEvent&, const GrantEvent&) = default;
};

struct Metrics {
    std::array<CellMetrics, kNumCells> cells{};
    double busy_time_integral = 0.0;  // channel-seconds, post warmup
    double measured_duration = 0.0;
    std::vector<GrantEvent> grant_log;

    long total_offered() const {
        long s = 0;
        for (const auto& c : cells) s += c.offered;
        return s;
    }

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

inline double utilization(const Metrics& m, const SimConfig& cfg) {
    if (m.measured_duration <= 0) return 0.0;
    return m.busy_time_integral /
           (m.measured_duration * double(kNumCells) * double(cfg.channels_per_cell));
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Call {
    int cell = 0;
    int band_index = 0;  // own-pool band, or the borrowed band when lender > 0
    int lender = 0;      // 0 for a call on the cell's own channels
};

struct SimEvent {
    double time = 0.0;
    std::uint64_t seq = 0;
    bool is_departure = false;
    int cell = 0;
    Call call;  // valid for departures
};

struct EventLater {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

}  // namespace detail

// Event-driven Monte-Carlo of the cluster as seven loss systems. Poisson
// arrivals per cell, exponential holding; arrivals fill the centre bands
// first, then the cell's own edge bands, and under the proposed scheme the
// borrower additionally admits on granted channels. Holding times are drawn
// per arrival whether or not it is admitted, so runs with equal seeds see
// identical traffic across schemes.
inline Metrics run_sim(const SimConfig& cfg, SpectrumPlan plan) {
    cfg.validate();
    if (plan.cell(1).pool.total_channels() != cfg.channels_per_cell)
        throw std::invalid_argument("plan channel count does not match config");

    auto rates = cfg.per_cell_rates();
    std::array<std::mt19937_64, kNumCells> arrival_rng;
    std::array<std::mt19937_64, kNumCells> holding_rng;
    for (int i = 0; i < kNumCells; ++i) {
        arrival_rng[i].seed(detail::splitmix64(cfg.seed * 2654435761ULL + i));
        holding_rng[i].seed(detail::splitmix64(cfg.seed * 2654435761ULL + 100 + i));
    }
    std::exponential_distribution<double> holding(1.0 / cfg.holding_time_mean);

    std::priority_queue<detail::SimEvent, std::vector<detail::SimEvent>, detail::EventLater> queue;
    std::uint64_t seq = 0;
    auto schedule_arrival = [&](int cell, double now) {
        if (rates[cell - 1] <= 0) return;
        std::exponential_distribution<double> gap(rates[cell - 1]);
        double t = now + gap(arrival_rng[cell - 1]);
        if (t <= cfg.duration) queue.push({t, seq++, false, cell, {}});
    };
    for (int cell = 1; cell <= kNumCells; ++cell) schedule_arrival(cell, 0.0);

    LendingState lending;
    Metrics metrics;
    std::array<long, kNumCells> live_calls{};
    long live_total = 0;
    double last_time = 0.0;
    int busy_now = 0;

    auto occupancy_of = [&](int cell) {
        return plan.cell(cell).pool.total_occupied() + lending.occupied_by(cell);
    };

    auto check_conservation = [&]() {
        if (!plan.consistent())
            throw std::logic_error("channel pool counts violated conservation");
        int lent_pools = 0;
        for (int c = 1; c <= kNumCells; ++c)
            for (BandId b : BandId::all()) lent_pools += plan.cell(c).pool.band(b).lent;
        int lent_grants = 0;
        for (const auto& g : lending.grants()) lent_grants += g.grant.channels;
        if (lent_pools != lent_grants)
            throw std::logic_error("lent-channel ledger out of sync with active grants");
        long occupied = 0;
        for (int c = 1; c <= kNumCells; ++c) occupied += occupancy_of(c);
        if (occupied != live_total)
            throw std::logic_error("occupied channels out of sync with live calls");
    };

    auto advance_clock = [&](double t) {
        double lo = std::max(last_time, cfg.warmup);
        double hi = std::min(t, cfg.duration);
        if (hi > lo) metrics.busy_time_integral += double(busy_now) * (hi - lo);
        last_time = t;
    };

    auto maybe_borrow = [&](double now) {
        int cell = cfg.borrower_cell;
        int occ = occupancy_of(cell);
        if (!needs_borrowing(occ, cfg.threshold)) return;
        int free_total = cfg.channels_per_cell - plan.cell(cell).pool.total_occupied() -
                         lending.lent_by(cell) + lending.granted_to(cell) -
                         lending.occupied_by(cell);
        if (free_total >= cfg.request_quantum) return;
        auto grants = plan_assignment({cell, cfg.request_quantum}, plan);
        if (grants.empty()) return;
        lending.apply(plan, grants);
        for (const BorrowGrant& g : grants)
            metrics.grant_log.push_back({now, g.lender, g.borrower, g.band.index(), g.channels,
                                         g.sector});
    };

    while (!queue.empty()) {
        detail::SimEvent ev = queue.top();
        queue.pop();
        if (ev.time > cfg.duration) break;
        advance_clock(ev.time);
        bool counted = ev.time >= cfg.warmup;

        if (!ev.is_departure) {
            int cell = ev.cell;
            if (counted) ++metrics.cells[cell - 1].offered;
            double hold = holding(holding_rng[cell - 1]);  // drawn even when blocked

            if (cfg.scheme == Scheme::Proposed && cell == cfg.borrower_cell) maybe_borrow(ev.time);

            detail::Call call{cell, 0, 0};
            bool admitted = false;
            CellSpectrum& cs = plan.cell(cell);
            for (BandId b : cs.allocation.cup_bands())
                if (cs.pool.try_reserve(b)) {
                    call.band_index = b.index();
                    admitted = true;
                    break;
                }
            if (!admitted)
                for (BandId b : cs.allocation.eup_bands())
                    if (cs.pool.try_reserve(b)) {
                        call.band_index = b.index();
                        admitted = true;
                        break;
                    }
            if (!admitted && cfg.scheme == Scheme::Proposed && cell == cfg.borrower_cell) {
                if (auto gi = lending.find_free_grant(cell)) {
                    lending.occupy(*gi);
                    call.band_index = lending.grants()[*gi].grant.band.index();
                    call.lender = lending.grants()[*gi].grant.lender;
                    admitted = true;
                }
            }

            if (admitted) {
                if (counted) ++metrics.cells[cell - 1].carried;
                ++live_calls[cell - 1];
                ++live_total;
                ++busy_now;
                queue.push({ev.time + hold, seq++, true, cell, call});
            } else if (counted) {
                ++metrics.cells[cell - 1].blocked;
            }
            schedule_arrival(cell, ev.time);
        } else {
            const detail::Call& call = ev.call;
            if (call.lender > 0) {
                bool found = false;
                auto& grants = lending.grants();
                for (std::size_t i = 0; i < grants.size(); ++i)
                    if (grants[i].occupied > 0 && grants[i].grant.borrower == call.cell &&
                        grants[i].grant.lender == call.lender &&
                        grants[i].grant.band.index() == call.band_index) {
                        lending.vacate(i);
                        found = true;
                        break;
                    }
                if (!found) throw std::logic_error("departure references a vanished grant");
            } else {
                plan.cell(call.cell).pool.release(BandId(call.band_index));
            }
            --live_calls[call.cell - 1];
            --live_total;
            --busy_now;
            if (cfg.scheme == Scheme::Proposed && call.cell == cfg.borrower_cell)
                release_grants(lending, plan, occupancy_of(call.cell), cfg.threshold,
                               cfg.hysteresis);
        }
        check_conservation();
    }
    advance_clock(cfg.duration);
    metrics.measured_duration = cfg.duration - cfg.warmup;
    return metrics;
}

struct SchemePair {
    double total_arrival_rate = 0.0;
    Metrics conventional;
    Metrics proposed;
};

// Runs both schemes per sweep point on common random numbers (same seed).
inline std::vector<SchemePair> compare_schemes(SimConfig config,
                                               const std::vector<double>& sweep) {
    if (sweep.empty()) throw std::invalid_argument("sweep must contain at least one rate");
    std::vector<SchemePair> out;
    for (double rate : sweep) {
        SchemePair pair;
        pair.total_arrival_rate = rate;
        config.total_arrival_rate = rate;
        config.scheme = Scheme::Conventional;
        pair.conventional = run_sim(config, default_plan(config.channels_per_cell));
        config.scheme = Scheme::Proposed;
        pair.proposed = run_sim(config, default_plan(config.channels_per_cell));
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace ffr
