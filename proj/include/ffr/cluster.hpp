#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffr/spectrum.hpp"

namespace ffr {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class Category { First, Second, Reference };

inline Category category_of(int cell) {
    if (cell == kReferenceCell) return Category::Reference;
    return cell % 2 == 1 ? Category::First : Category::Second;
}

struct CellGeometry {
    Point center;
    double radius = 0.0;      // hexagon corner radius
    double cup_radius = 0.0;  // disk approximation of the centre part
};

enum class SectorLabel { X, Y, Native };

inline const char* to_string(SectorLabel s) {
    switch (s) {
        case SectorLabel::X: return "X";
        case SectorLabel::Y: return "Y";
        default: return "Native";
    }
}

inline double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

// Shortest circular distance between two angles.
inline double angular_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    const double two_pi = 2.0 * std::numbers::pi;
    return d > std::numbers::pi ? two_pi - d : d;
}

// An annular wedge of one cell, in cell-local polar coordinates.
struct SectorRegion {
    int cell = 0;
    SectorLabel label = SectorLabel::Native;
    double angle_start = 0.0;  // radians, interval is [start, start+span)
    double angle_span = 2.0 * std::numbers::pi;
    double inner_radius = 0.0;
    double outer_radius = 0.0;

    bool contains_angle(double theta) const {
        const double two_pi = 2.0 * std::numbers::pi;
        double rel = wrap_angle(theta - angle_start);
        // Angles a rounding error shy of the start wrap to just under 2*pi;
        // snap them back so adjacent wedges tile without a seam.
        if (rel >= two_pi - 1e-12) rel = 0.0;
        return rel < angle_span || angle_span >= two_pi - 1e-12;
    }
};

// Hexagonal 7-cell cluster: reference cell at the origin, outer cells on a
// ring of radius sqrt(3)*R at multiples of 60 degrees.
class ClusterLayout {
public:
    ClusterLayout(double radius, double cup_area_fraction) : radius_(radius) {
        if (radius <= 0.0) throw std::invalid_argument("cell radius must be positive");
        if (!(cup_area_fraction > 0.0 && cup_area_fraction < 1.0))
            throw std::invalid_argument("cup area fraction must lie in (0,1)");
        double cup_r = radius * std::sqrt(cup_area_fraction);
        double ring = std::sqrt(3.0) * radius;
        for (int id = 1; id <= 6; ++id) {
            double ang = (id - 1) * std::numbers::pi / 3.0;
            cells_[id - 1] = {{ring * std::cos(ang), ring * std::sin(ang)}, radius, cup_r};
        }
        cells_[kReferenceCell - 1] = {{0.0, 0.0}, radius, cup_r};
    }

    const CellGeometry& cell(int id) const { return cells_.at(check(id) - 1); }
    double radius() const { return radius_; }

    bool adjacent(int a, int b) const {
        if (a == b) return false;
        check(a);
        check(b);
        if (a == kReferenceCell || b == kReferenceCell) return true;  // all ring cells touch cell 7
        int d = std::abs(a - b);
        return d == 1 || d == 5;  // ring neighbours, wrapping 6-1
    }

    SectorRegion cup_region(int id) const {
        const CellGeometry& g = cell(id);
        return {id, SectorLabel::Native, 0.0, 2.0 * std::numbers::pi, 0.0, g.cup_radius};
    }

    SectorRegion eup_region(int id) const {
        const CellGeometry& g = cell(id);
        return {id, SectorLabel::Native, 0.0, 2.0 * std::numbers::pi, g.cup_radius, g.radius};
    }

private:
    static int check(int id) {
        if (id < 1 || id > kNumCells)
            throw std::invalid_argument("cell id must be in 1..7");
        return id;
    }

    std::array<CellGeometry, kNumCells> cells_{};
    double radius_ = 0.0;
};

// Splits the borrower's edge annulus into three 120-degree wedges. X bisects
// the direction pointing directly away from the beta lender; Y is placed on
// whichever side of X lies closer to the direction away from the alpha
// lender; Native takes the remaining arc.
inline std::array<SectorRegion, 3> sector_regions(const ClusterLayout& layout, int cell,
                                                  int alpha_lender, int beta_lender) {
    if (alpha_lender == beta_lender)
        throw std::invalid_argument("alpha and beta lenders must be distinct cells");
    if (!layout.adjacent(cell, alpha_lender) || !layout.adjacent(cell, beta_lender))
        throw std::invalid_argument("lenders must be adjacent to the borrowing cell");
    const double third = 2.0 * std::numbers::pi / 3.0;
    const CellGeometry& g = layout.cell(cell);

    auto away_from = [&](int lender) {
        const CellGeometry& l = layout.cell(lender);
        return wrap_angle(std::atan2(l.center.y - g.center.y, l.center.x - g.center.x) +
                          std::numbers::pi);
    };

    double x_center = away_from(beta_lender);
    double y_target = away_from(alpha_lender);
    double ccw = wrap_angle(x_center + third);
    double cw = wrap_angle(x_center - third);
    double y_center = angular_distance(y_target, ccw) <= angular_distance(y_target, cw) ? ccw : cw;
    double native_center = wrap_angle(y_center == ccw ? cw : ccw);

    auto wedge = [&](SectorLabel label, double center) {
        return SectorRegion{cell, label, wrap_angle(center - third / 2.0), third,
                            g.cup_radius, g.radius};
    };
    return {wedge(SectorLabel::X, x_center), wedge(SectorLabel::Y, y_center),
            wedge(SectorLabel::Native, native_center)};
}

// Uniform point over an annular wedge, in global coordinates.
inline Point sample_position(const ClusterLayout& layout, const SectorRegion& region,
                             std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double ri2 = region.inner_radius * region.inner_radius;
    double ro2 = region.outer_radius * region.outer_radius;
    double r = std::sqrt(ri2 + unit(rng) * (ro2 - ri2));
    double theta = region.angle_start + unit(rng) * region.angle_span;
    Point c = layout.cell(region.cell).center;
    return {c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
}

// A band currently borrowed into a cell's edge part.
struct ActiveBorrow {
    int borrower = 0;
    int band_index = 0;
};

struct CochannelCell {
    int cell = 0;       // source cell id, also for mirrored copies
    Point position;     // BS position (shifted for tier-2 mirrors)
    int tier = 1;
};

// Every other cell (tier 1 inside the cluster, tier 2 via wrap-around
// mirrored cluster copies) using `band` in the same CUP/EUP role as `cell`
// does. A cell holding the band through an active borrow counts as an EUP
// user of it.
inline std::vector<CochannelCell> cochannel_cells(const ClusterLayout& layout,
                                                  const SpectrumPlan& plan,
                                                  std::span<const ActiveBorrow> borrows,
                                                  int cell, BandId band, int tiers) {
    if (tiers < 0 || tiers > 2) throw std::invalid_argument("tiers must be 0, 1 or 2");

    auto borrowed_by = [&](int id) {
        for (const ActiveBorrow& b : borrows)
            if (b.borrower == id && b.band_index == band.index()) return true;
        return false;
    };
    BandRole role = borrowed_by(cell) ? BandRole::Eup : plan.cell(cell).allocation.role_of(band);
    auto uses_in_role = [&](int id) {
        if (role == BandRole::Eup && borrowed_by(id)) return true;
        return plan.cell(id).allocation.role_of(band) == role;
    };

    std::vector<CochannelCell> out;
    if (tiers >= 1) {
        for (int id = 1; id <= kNumCells; ++id)
            if (id != cell && uses_in_role(id))
                out.push_back({id, layout.cell(id).center, 1});
    }
    if (tiers >= 2) {
        // Cluster repeat vector for a 7-cell pattern: (2,1) in the hex basis,
        // magnitude sqrt(21)*R, replicated at 60-degree rotations.
        double d = std::sqrt(3.0) * layout.radius();
        double ox = 2.5 * d;
        double oy = std::sqrt(3.0) / 2.0 * d;
        for (int k = 0; k < 6; ++k) {
            double rot = k * std::numbers::pi / 3.0;
            double sx = ox * std::cos(rot) - oy * std::sin(rot);
            double sy = ox * std::sin(rot) + oy * std::cos(rot);
            for (int id = 1; id <= kNumCells; ++id)
                if (uses_in_role(id)) {
                    Point c = layout.cell(id).center;
                    out.push_back({id, {c.x + sx, c.y + sy}, 2});
                }
        }
    }
    return out;
}

}  // namespace ffr
