#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ffr/cluster.hpp"
#include "ffr/spectrum.hpp"

namespace ffr {

struct BorrowRequest {
    int borrower = 0;
    int needed = 0;
};

// One lender->borrower transfer of channels from a single band, pinned to the
// sector where it picks up the least interference.
struct BorrowGrant {
    int lender = 0;
    int borrower = 0;
    BandId band{1};
    int channels = 0;
    SectorLabel sector = SectorLabel::X;
};

inline bool needs_borrowing(int cell_occupancy, int threshold) {
    return cell_occupancy >= threshold;
}

// Bands borrowed from the beta lender land in sector X, bands from the alpha
// lender in Y, so each sector carries one band from each lender.
inline SectorLabel sector_for_band(BandId band) {
    switch (band.index()) {
        case 3:
        case 5: return SectorLabel::X;
        case 4:
        case 6: return SectorLabel::Y;
        default:
            throw std::invalid_argument("bands F1/F2 belong to the reference cell and are never borrowed");
    }
}

// Category member with the most free edge channels; ties go to the lowest
// cell index, nothing lendable gives no lender.
inline std::optional<int> select_lender(const SpectrumPlan& plan, Category category) {
    if (category == Category::Reference)
        throw std::invalid_argument("the reference cell cannot be a lender");
    std::optional<int> best;
    int best_free = 0;
    for (int id = 1; id <= 6; ++id) {
        if (category_of(id) != category) continue;
        int free = plan.free_eup_count(id);
        if (free > best_free) {
            best_free = free;
            best = id;
        }
    }
    return best;
}

namespace detail {

// Draw `count` channels from the lender's EUP bands, lowest band first.
inline void draw_from_lender(const SpectrumPlan& plan, int lender, int borrower, int count,
                             std::vector<BorrowGrant>& out) {
    const CellSpectrum& c = plan.cell(lender);
    for (BandId b : c.allocation.eup_bands()) {
        if (count <= 0) break;
        int take = std::min(count, c.pool.band(b).free_count());
        if (take > 0) {
            out.push_back({lender, borrower, b, take, sector_for_band(b)});
            count -= take;
        }
    }
}

}  // namespace detail

// The assignment cascade: satisfy the request from the alpha lender if it
// can; otherwise take everything it has and ask the beta lender for the
// remainder; otherwise take everything the beta lender has too.
inline std::vector<BorrowGrant> plan_assignment(const BorrowRequest& request,
                                                const SpectrumPlan& plan) {
    std::vector<BorrowGrant> grants;
    if (request.needed <= 0) return grants;

    int remaining = request.needed;
    if (auto alpha = select_lender(plan, Category::First)) {
        int avail = plan.free_eup_count(*alpha);
        int take = std::min(remaining, avail);
        detail::draw_from_lender(plan, *alpha, request.borrower, take, grants);
        remaining -= take;
    }
    if (remaining > 0) {
        if (auto beta = select_lender(plan, Category::Second)) {
            int avail = plan.free_eup_count(*beta);
            int take = std::min(remaining, avail);
            detail::draw_from_lender(plan, *beta, request.borrower, take, grants);
        }
    }
    return grants;
}

// A grant plus how many of its channels currently carry calls.
struct ActiveGrant {
    BorrowGrant grant;
    int occupied = 0;
};

// All grants currently in force, owned by the simulation loop.
class LendingState {
public:
    const std::vector<ActiveGrant>& grants() const { return grants_; }
    std::vector<ActiveGrant>& grants() { return grants_; }

    int granted_to(int borrower) const {
        int s = 0;
        for (const auto& g : grants_)
            if (g.grant.borrower == borrower) s += g.grant.channels;
        return s;
    }

    int occupied_by(int borrower) const {
        int s = 0;
        for (const auto& g : grants_)
            if (g.grant.borrower == borrower) s += g.occupied;
        return s;
    }

    int lent_by(int lender) const {
        int s = 0;
        for (const auto& g : grants_)
            if (g.grant.lender == lender) s += g.grant.channels;
        return s;
    }

    std::vector<ActiveBorrow> active_borrows() const {
        std::vector<ActiveBorrow> out;
        for (const auto& g : grants_)
            out.push_back({g.grant.borrower, g.grant.band.index()});
        return out;
    }

    // Commits grants: marks channels lent in the lenders' pools.
    void apply(SpectrumPlan& plan, const std::vector<BorrowGrant>& grants) {
        for (const BorrowGrant& g : grants) {
            plan.cell(g.lender).pool.lend(g.band, g.channels);
            grants_.push_back({g, 0});
        }
    }

    // Index of a grant to `borrower` with a free channel, if any.
    std::optional<std::size_t> find_free_grant(int borrower) const {
        for (std::size_t i = 0; i < grants_.size(); ++i)
            if (grants_[i].grant.borrower == borrower &&
                grants_[i].occupied < grants_[i].grant.channels)
                return i;
        return std::nullopt;
    }

    void occupy(std::size_t index) {
        ActiveGrant& g = grants_.at(index);
        if (g.occupied >= g.grant.channels)
            throw std::logic_error("grant has no free channel to occupy");
        ++g.occupied;
    }

    void vacate(std::size_t index) {
        ActiveGrant& g = grants_.at(index);
        if (g.occupied <= 0) throw std::logic_error("grant has no occupied channel to vacate");
        --g.occupied;
    }

private:
    std::vector<ActiveGrant> grants_;
};

// Once the borrower's load has fallen below threshold - hysteresis, idle
// granted channels go back to their lenders; occupied ones follow as the
// calls holding them complete.
inline void release_grants(LendingState& state, SpectrumPlan& plan, int borrower_occupancy,
                           int threshold, int hysteresis) {
    if (hysteresis < 0) throw std::invalid_argument("hysteresis must be nonnegative");
    if (borrower_occupancy >= threshold - hysteresis) return;
    auto& grants = state.grants();
    for (auto& g : grants) {
        int idle = g.grant.channels - g.occupied;
        if (idle > 0) {
            plan.cell(g.grant.lender).pool.take_back(g.grant.band, idle);
            g.grant.channels -= idle;
        }
    }
    std::erase_if(grants, [](const ActiveGrant& g) { return g.grant.channels == 0; });
}

}  // namespace ffr
