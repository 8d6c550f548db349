#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffr {

inline constexpr int kNumBands = 6;
inline constexpr int kNumCells = 7;
inline constexpr int kReferenceCell = 7;

// One of the six band segments F1..F6, 1-based.
class BandId {
public:
    explicit BandId(int index) : index_(index) {
        if (index < 1 || index > kNumBands)
            throw std::invalid_argument("band index must be in 1..6, got " + std::to_string(index));
    }

    int index() const { return index_; }

    friend bool operator==(BandId a, BandId b) { return a.index_ == b.index_; }
    friend bool operator!=(BandId a, BandId b) { return a.index_ != b.index_; }
    friend bool operator<(BandId a, BandId b) { return a.index_ < b.index_; }

    static std::array<BandId, kNumBands> all() {
        return {BandId(1), BandId(2), BandId(3), BandId(4), BandId(5), BandId(6)};
    }

private:
    int index_;
};

enum class BandRole { Cup, Eup };

// Which segments a cell dedicates to its centre part and which to its edge part.
class BandAllocation {
public:
    BandAllocation(std::vector<BandId> cup, std::vector<BandId> eup) {
        for (BandId b : cup) cup_mask_ |= bit(b);
        for (BandId b : eup) eup_mask_ |= bit(b);
        if (eup.size() != 2 || (cup_mask_ & eup_mask_) != 0 ||
            (cup_mask_ | eup_mask_) != 0x3F)
            throw std::invalid_argument("band allocation must split F1..F6 into CUP plus a 2-band EUP");
    }

    bool in_cup(BandId b) const { return cup_mask_ & bit(b); }
    bool in_eup(BandId b) const { return eup_mask_ & bit(b); }
    BandRole role_of(BandId b) const { return in_cup(b) ? BandRole::Cup : BandRole::Eup; }

    std::vector<BandId> cup_bands() const { return expand(cup_mask_); }
    std::vector<BandId> eup_bands() const { return expand(eup_mask_); }

    friend bool operator==(const BandAllocation& a, const BandAllocation& b) {
        return a.cup_mask_ == b.cup_mask_ && a.eup_mask_ == b.eup_mask_;
    }

private:
    static std::uint8_t bit(BandId b) { return std::uint8_t(1u << (b.index() - 1)); }

    static std::vector<BandId> expand(std::uint8_t mask) {
        std::vector<BandId> out;
        for (BandId b : BandId::all())
            if (mask & bit(b)) out.push_back(b);
        return out;
    }

    std::uint8_t cup_mask_ = 0;
    std::uint8_t eup_mask_ = 0;
};

struct BandChannels {
    int total = 0;
    int occupied = 0;
    int lent = 0;

    int free_count() const { return total - occupied - lent; }
};

// Per-band occupancy bookkeeping for one cell. Channels are counted, not
// individually identified; lent channels are unavailable to the owner until
// returned.
class ChannelPool {
public:
    ChannelPool() = default;

    explicit ChannelPool(const std::array<int, kNumBands>& totals) {
        for (int i = 0; i < kNumBands; ++i) bands_[i].total = totals[i];
    }

    const BandChannels& band(BandId b) const { return bands_[b.index() - 1]; }

    int total_channels() const {
        int s = 0;
        for (const auto& b : bands_) s += b.total;
        return s;
    }

    int total_occupied() const {
        int s = 0;
        for (const auto& b : bands_) s += b.occupied;
        return s;
    }

    // Returns false when the band has no free channel; the caller falls
    // through to the next band or blocks the call.
    bool try_reserve(BandId b) {
        BandChannels& bc = bands_[b.index() - 1];
        if (bc.free_count() <= 0) return false;
        ++bc.occupied;
        return true;
    }

    void release(BandId b) {
        BandChannels& bc = bands_[b.index() - 1];
        if (bc.occupied <= 0)
            throw std::logic_error("release on band F" + std::to_string(b.index()) +
                                   " with no occupied channel");
        --bc.occupied;
    }

    void lend(BandId b, int count) {
        BandChannels& bc = bands_[b.index() - 1];
        if (count < 0 || bc.free_count() < count)
            throw std::logic_error("lend exceeds free channels on band F" + std::to_string(b.index()));
        bc.lent += count;
    }

    void take_back(BandId b, int count) {
        BandChannels& bc = bands_[b.index() - 1];
        if (count < 0 || bc.lent < count)
            throw std::logic_error("take_back exceeds lent channels on band F" + std::to_string(b.index()));
        bc.lent -= count;
    }

    bool consistent() const {
        for (const auto& b : bands_)
            if (b.occupied < 0 || b.lent < 0 || b.occupied + b.lent > b.total) return false;
        return true;
    }

private:
    std::array<BandChannels, kNumBands> bands_{};
};

// Equal split of `total` channels over the six segments, remainder to the
// lowest-index bands.
inline std::array<int, kNumBands> segment_channel_counts(int total) {
    if (total < kNumBands)
        throw std::invalid_argument("need at least 6 channels to populate six segments");
    std::array<int, kNumBands> counts{};
    int base = total / kNumBands;
    int rem = total % kNumBands;
    for (int i = 0; i < kNumBands; ++i) counts[i] = base + (i < rem ? 1 : 0);
    return counts;
}

struct CellSpectrum {
    BandAllocation allocation;
    ChannelPool pool;
};

// Band plan plus occupancy for all seven cells of the cluster.
class SpectrumPlan {
public:
    explicit SpectrumPlan(std::vector<CellSpectrum> cells) : cells_(std::move(cells)) {
        if (cells_.size() != kNumCells)
            throw std::invalid_argument("spectrum plan requires exactly 7 cells");
    }

    const CellSpectrum& cell(int id) const { return cells_.at(check(id) - 1); }
    CellSpectrum& cell(int id) { return cells_.at(check(id) - 1); }

    int free_eup_count(int id) const {
        const CellSpectrum& c = cell(id);
        int s = 0;
        for (BandId b : c.allocation.eup_bands()) s += c.pool.band(b).free_count();
        return s;
    }

    bool consistent() const {
        for (const auto& c : cells_)
            if (!c.pool.consistent()) return false;
        return true;
    }

private:
    static int check(int id) {
        if (id < 1 || id > kNumCells)
            throw std::invalid_argument("cell id must be in 1..7, got " + std::to_string(id));
        return id;
    }

    std::vector<CellSpectrum> cells_;
};

// The initial allocation: odd outer cells edge on {F5,F6}, even outer cells
// edge on {F3,F4}, the reference cell edges on {F1,F2}.
inline SpectrumPlan default_plan(int total_channels_per_cell) {
    if (total_channels_per_cell % kNumBands != 0)
        throw std::invalid_argument("total channels per cell must be divisible by 6, got " +
                                    std::to_string(total_channels_per_cell));
    auto counts = segment_channel_counts(total_channels_per_cell);
    ChannelPool pool(counts);

    BandAllocation first({BandId(1), BandId(2), BandId(3), BandId(4)}, {BandId(5), BandId(6)});
    BandAllocation second({BandId(1), BandId(2), BandId(5), BandId(6)}, {BandId(3), BandId(4)});
    BandAllocation reference({BandId(3), BandId(4), BandId(5), BandId(6)}, {BandId(1), BandId(2)});

    std::vector<CellSpectrum> cells;
    for (int id = 1; id <= 6; ++id)
        cells.push_back({id % 2 == 1 ? first : second, pool});
    cells.push_back({reference, pool});
    return SpectrumPlan(std::move(cells));
}

}  // namespace ffr
