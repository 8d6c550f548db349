#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ffr/borrowing.hpp"

namespace ffr {

struct TrafficProfile {
    std::array<double, kNumCells> arrival_rate{};  // calls/second per cell
    std::array<double, kNumCells> release_rate{};  // 1/second per cell

    void validate() const {
        for (double l : arrival_rate)
            if (l < 0) throw std::invalid_argument("arrival rates must be nonnegative");
        for (double m : release_rate)
            if (m <= 0) throw std::invalid_argument("release rates must be positive");
    }
};

// Erlang-B via the stable recursion B(k) = A*B(k-1) / (k + A*B(k-1)).
inline double erlang_b(int servers, double offered_load) {
    if (servers < 0 || offered_load < 0)
        throw std::invalid_argument("erlang_b requires servers >= 0 and offered load >= 0");
    double b = 1.0;
    for (int k = 1; k <= servers; ++k) b = offered_load * b / (k + offered_load * b);
    return b;
}

// Steady state of the S-server loss chain: P(k) proportional to A^k / k!.
inline std::vector<double> birth_death_steady_state(double arrival, double release, int capacity) {
    if (release <= 0) throw std::invalid_argument("release rate must be positive");
    if (arrival < 0 || capacity < 0)
        throw std::invalid_argument("arrival rate and capacity must be nonnegative");
    double a = arrival / release;
    std::vector<double> p(capacity + 1);
    double term = 1.0;
    double sum = 1.0;
    p[0] = 1.0;
    for (int k = 1; k <= capacity; ++k) {
        term *= a / k;
        p[k] = term;
        sum += term;
    }
    for (double& v : p) v /= sum;
    return p;
}

inline int effective_capacity(int base, const std::vector<BorrowGrant>& grants, int cell) {
    int s = base;
    for (const BorrowGrant& g : grants) {
        if (g.borrower == cell) s += g.channels;
        if (g.lender == cell) s -= g.channels;
    }
    return s;
}

enum class OverallBlockingMode { Literal, TrafficWeighted };

struct BlockingResult {
    std::array<double, kNumCells> per_cell{};
    double overall = 0.0;
    OverallBlockingMode mode = OverallBlockingMode::TrafficWeighted;
};

// Per-cell Erlang-B plus the cluster-wide figure. Literal mode evaluates the
// printed formula P_T = 1 - sum(lambda_m (1-P_Bm)) / (M * sum(S_m)); weighted
// mode is the standard lost-over-offered ratio.
inline BlockingResult overall_blocking(const TrafficProfile& profile,
                                       const std::array<int, kNumCells>& capacity,
                                       OverallBlockingMode mode) {
    profile.validate();
    BlockingResult r;
    r.mode = mode;
    double lambda_sum = 0.0;
    double carried = 0.0;
    double weighted = 0.0;
    long cap_sum = 0;
    for (int m = 0; m < kNumCells; ++m) {
        double a = profile.arrival_rate[m] / profile.release_rate[m];
        r.per_cell[m] = erlang_b(capacity[m], a);
        lambda_sum += profile.arrival_rate[m];
        carried += profile.arrival_rate[m] * (1.0 - r.per_cell[m]);
        weighted += profile.arrival_rate[m] * r.per_cell[m];
        cap_sum += capacity[m];
    }
    if (mode == OverallBlockingMode::Literal) {
        r.overall = 1.0 - carried / (double(kNumCells) * double(cap_sum));
    } else {
        if (lambda_sum == 0.0)
            throw std::invalid_argument("traffic-weighted overall blocking undefined for zero total traffic");
        r.overall = weighted / lambda_sum;
    }
    return r;
}

}  // namespace ffr
