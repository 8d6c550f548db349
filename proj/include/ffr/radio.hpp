#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffr/cluster.hpp"

namespace ffr {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct LinkBudget {
    double tx_power_w = 1500.0;
    double bs_height_m = 100.0;
    double noise_w = 0.0;  // per channel; 0 models the interference-limited regime
};

// Log-distance power law; reference loss defaults to free space at 1 m for a
// 2 GHz carrier.
struct PathLossModel {
    double exponent = 3.5;
    double reference_distance_m = 1.0;
    double reference_loss_db = 38.5;

    double loss_db(double distance_m) const {
        if (distance_m <= 0) throw std::invalid_argument("distance must be positive");
        double d = std::max(distance_m, reference_distance_m);
        return reference_loss_db + 10.0 * exponent * std::log10(d / reference_distance_m);
    }

    double loss_linear(double distance_m) const { return db_to_linear(loss_db(distance_m)); }
};

// Noise level putting the single-link SNR at `edge_snr_db` for a user at the
// cell corner.
inline double noise_for_edge_snr(const LinkBudget& budget, const PathLossModel& model,
                                 double cell_radius_m, double edge_snr_db = 20.0) {
    double rx = budget.tx_power_w / model.loss_linear(cell_radius_m);
    return rx / db_to_linear(edge_snr_db);
}

// Flat in-sector gain with a finite front-to-back ratio everywhere else.
struct AntennaPattern {
    double in_sector_gain_db = 0.0;
    double front_to_back_db = 0.0;

    double gain_linear(bool in_sector) const {
        return db_to_linear(in_sector ? in_sector_gain_db
                                      : in_sector_gain_db - front_to_back_db);
    }
};

inline AntennaPattern omni_pattern() { return {0.0, 0.0}; }

// A 120-degree sector fed with the whole transmit power has a directivity
// advantage of 10*log10(3) over omni.
inline AntennaPattern sector_pattern(double front_to_back_db,
                                     double in_sector_gain_db = 10.0 * std::log10(3.0)) {
    if (front_to_back_db < 0) throw std::invalid_argument("front-to-back attenuation must be >= 0 dB");
    return {in_sector_gain_db, front_to_back_db};
}

struct AngularArc {
    double start = 0.0;
    double span = 2.0 * std::numbers::pi;

    bool contains(double theta) const {
        return wrap_angle(theta - start) < span;
    }
};

// One transmitting base station as seen on a single channel.
struct Emitter {
    Point position;
    double tx_power_w = 0.0;
    AntennaPattern pattern;
    std::optional<AngularArc> sector_arc;  // absent means omni coverage
    int tier = 1;
};

inline double emitter_power_towards(const Emitter& e, Point user, const PathLossModel& model) {
    double d = distance(e.position, user);
    bool in_sector = true;
    if (e.sector_arc) {
        double theta = std::atan2(user.y - e.position.y, user.x - e.position.x);
        in_sector = e.sector_arc->contains(theta);
    }
    return e.tx_power_w * e.pattern.gain_linear(in_sector) / model.loss_linear(d);
}

struct SinrSample {
    Point position;
    int serving_cell = 0;
    int band_index = 0;
    double sinr = 0.0;  // linear ratio; +inf when interference-free and noiseless
    double tier1_interference_w = 0.0;
    double tier2_interference_w = 0.0;
};

inline SinrSample evaluate_sinr(Point user, int serving_cell, int band_index,
                                const Emitter& serving, std::span<const Emitter> interferers,
                                const PathLossModel& model, double noise_w) {
    SinrSample s;
    s.position = user;
    s.serving_cell = serving_cell;
    s.band_index = band_index;
    double signal = emitter_power_towards(serving, user, model);
    double interference = 0.0;
    for (const Emitter& e : interferers) {
        double p = emitter_power_towards(e, user, model);
        interference += p;
        (e.tier >= 2 ? s.tier2_interference_w : s.tier1_interference_w) += p;
    }
    double denom = interference + noise_w;
    s.sinr = denom > 0.0 ? signal / denom : std::numeric_limits<double>::infinity();
    return s;
}

struct OutageEstimate {
    double probability = 0.0;
    double std_error = 0.0;
    long trials = 0;
};

// Monte-Carlo fraction of uniformly sampled positions whose SINR falls below
// gamma, with the binomial standard error of the estimate.
template <typename SinrOfPoint>
OutageEstimate outage_probability(const ClusterLayout& layout, const SectorRegion& region,
                                  SinrOfPoint&& sinr_of_point, double gamma_db, long trials,
                                  std::mt19937_64& rng) {
    if (trials < 1) throw std::invalid_argument("outage estimation needs at least one trial");
    double gamma = db_to_linear(gamma_db);
    long below = 0;
    for (long i = 0; i < trials; ++i) {
        Point p = sample_position(layout, region, rng);
        if (sinr_of_point(p) < gamma) ++below;
    }
    OutageEstimate e;
    e.trials = trials;
    e.probability = double(below) / double(trials);
    e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / double(trials));
    return e;
}

}  // namespace ffr
