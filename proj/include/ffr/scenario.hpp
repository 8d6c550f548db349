#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ffr/queueing.hpp"
#include "ffr/simulator.hpp"

namespace ffr {

// Flat key = value scenario description with '#' comments. Defaults carry the
// reference parameter set: 120 channels, threshold 80, 1.5 kW, 100 m mast,
// 90 s holding, 1 km radius.
struct Scenario {
    Scheme scheme = Scheme::Proposed;
    int channels_per_cell = 120;
    int threshold = 80;
    int hysteresis = 10;
    int request_quantum = 20;
    double holding_time_s = 90.0;
    // Arrival-weight ratio per cell. The hotspot (cell 7) carries the largest
    // weight; within each lender category the lowest-indexed cell is the
    // lightest, so tie-breaks in lender selection favour the cheapest donor.
    std::array<double, kNumCells> ratio = {1, 2, 4, 5, 5, 6, 7};
    double duration_s = 200000.0;
    double warmup_fraction = 0.1;
    std::uint64_t seed = 1;
    int comparison_seeds = 10;

    double sweep_start = 4.0;  // total arrival rate, calls/second
    double sweep_stop = 7.0;
    double sweep_step = 0.5;

    double cell_radius_m = 1000.0;
    double cup_area_fraction = 0.5;
    double tx_power_w = 1500.0;
    double bs_height_m = 100.0;
    double pathloss_exponent = 3.5;
    double reference_loss_db = 38.5;
    double reference_distance_m = 1.0;
    double edge_snr_db = 20.0;
    double noise_w = -1.0;  // <0 means derive from edge_snr_db
    double sector_attenuation_db = 20.0;
    double sector_gain_db = 10.0 * std::log10(3.0);
    int interference_tiers = 2;

    double gamma_db = 9.0;
    double gamma_start_db = 0.0;
    double gamma_stop_db = 20.0;
    double gamma_step_db = 1.0;
    long radio_trials = 100000;

    OverallBlockingMode eq2_mode = OverallBlockingMode::TrafficWeighted;

    void validate() const {
        if (sweep_start > sweep_stop || sweep_step <= 0)
            throw std::invalid_argument("sweep requires start <= stop and step > 0");
        if (warmup_fraction < 0 || warmup_fraction >= 1)
            throw std::invalid_argument("warmup fraction must lie in [0,1)");
        if (radio_trials < 1) throw std::invalid_argument("radio_trials must be >= 1");
        if (comparison_seeds < 1) throw std::invalid_argument("comparison_seeds must be >= 1");
        if (gamma_step_db <= 0) throw std::invalid_argument("gamma_step_db must be > 0");
        sim_config(sweep_start).validate();
    }

    SimConfig sim_config(double total_rate) const {
        SimConfig cfg;
        cfg.scheme = scheme;
        cfg.total_arrival_rate = total_rate;
        cfg.ratio = ratio;
        cfg.holding_time_mean = holding_time_s;
        cfg.duration = duration_s;
        cfg.warmup = warmup_fraction * duration_s;
        cfg.seed = seed;
        cfg.threshold = threshold;
        cfg.hysteresis = hysteresis;
        cfg.request_quantum = request_quantum;
        cfg.channels_per_cell = channels_per_cell;
        return cfg;
    }

    std::vector<double> sweep_rates() const {
        std::vector<double> rates;
        for (double r = sweep_start; r <= sweep_stop + 1e-9 * sweep_step; r += sweep_step)
            rates.push_back(r);
        return rates;
    }

    TrafficProfile traffic_profile(double total_rate) const {
        TrafficProfile p;
        double wsum = 0.0;
        for (double w : ratio) wsum += w;
        for (int i = 0; i < kNumCells; ++i) {
            p.arrival_rate[i] = total_rate * ratio[i] / wsum;
            p.release_rate[i] = 1.0 / holding_time_s;
        }
        return p;
    }
};

namespace detail {

inline std::array<double, kNumCells> parse_ratio(const std::string& text) {
    std::array<double, kNumCells> out{};
    std::stringstream ss(text);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ':')) {
        if (i >= kNumCells) throw std::invalid_argument("ratio needs exactly 7 values");
        out[i++] = std::stod(item);
    }
    if (i != kNumCells) throw std::invalid_argument("ratio needs exactly 7 values");
    return out;
}

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace detail

namespace detail {
struct ScenarioParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
}  // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& source_name = "<scenario>") {
    Scenario s;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw detail::ScenarioParseError(source_name + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        try {
            if (key == "scheme") {
                if (value == "conventional") s.scheme = Scheme::Conventional;
                else if (value == "proposed") s.scheme = Scheme::Proposed;
                else fail("scheme must be 'conventional' or 'proposed'");
            } else if (key == "channels_per_cell") s.channels_per_cell = std::stoi(value);
            else if (key == "threshold") s.threshold = std::stoi(value);
            else if (key == "hysteresis") s.hysteresis = std::stoi(value);
            else if (key == "request_quantum") s.request_quantum = std::stoi(value);
            else if (key == "holding_time_s") s.holding_time_s = std::stod(value);
            else if (key == "ratio") s.ratio = detail::parse_ratio(value);
            else if (key == "duration_s") s.duration_s = std::stod(value);
            else if (key == "warmup_fraction") s.warmup_fraction = std::stod(value);
            else if (key == "seed") s.seed = std::stoull(value);
            else if (key == "comparison_seeds") s.comparison_seeds = std::stoi(value);
            else if (key == "sweep_start") s.sweep_start = std::stod(value);
            else if (key == "sweep_stop") s.sweep_stop = std::stod(value);
            else if (key == "sweep_step") s.sweep_step = std::stod(value);
            else if (key == "cell_radius_m") s.cell_radius_m = std::stod(value);
            else if (key == "cup_area_fraction") s.cup_area_fraction = std::stod(value);
            else if (key == "tx_power_w") s.tx_power_w = std::stod(value);
            else if (key == "bs_height_m") s.bs_height_m = std::stod(value);
            else if (key == "pathloss_exponent") s.pathloss_exponent = std::stod(value);
            else if (key == "reference_loss_db") s.reference_loss_db = std::stod(value);
            else if (key == "reference_distance_m") s.reference_distance_m = std::stod(value);
            else if (key == "edge_snr_db") s.edge_snr_db = std::stod(value);
            else if (key == "noise_w") s.noise_w = std::stod(value);
            else if (key == "sector_attenuation_db") s.sector_attenuation_db = std::stod(value);
            else if (key == "sector_gain_db") s.sector_gain_db = std::stod(value);
            else if (key == "interference_tiers") s.interference_tiers = std::stoi(value);
            else if (key == "gamma_db") s.gamma_db = std::stod(value);
            else if (key == "gamma_start_db") s.gamma_start_db = std::stod(value);
            else if (key == "gamma_stop_db") s.gamma_stop_db = std::stod(value);
            else if (key == "gamma_step_db") s.gamma_step_db = std::stod(value);
            else if (key == "radio_trials") s.radio_trials = std::stol(value);
            else if (key == "eq2_mode") {
                if (value == "literal") s.eq2_mode = OverallBlockingMode::Literal;
                else if (value == "weighted") s.eq2_mode = OverallBlockingMode::TrafficWeighted;
                else fail("eq2_mode must be 'literal' or 'weighted'");
            } else fail("unknown key '" + key + "'");
        } catch (const detail::ScenarioParseError&) {
            throw;
        } catch (const std::exception&) {
            fail("could not parse value '" + value + "' for key '" + key + "'");
        }
    }
    s.validate();
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    return parse_scenario(in, path);
}

}  // namespace ffr
