#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>
#include <vector>

#include "ffr/csv.hpp"
#include "ffr/radio.hpp"
#include "ffr/scenario.hpp"
#include "ffr/simulator.hpp"

namespace ffr {

// Physical-layer view of the default borrowing configuration: cell 7 borrows
// band F3 from the beta lender (cell 2) and serves it in sector X, with cell 1
// as the alpha lender fixing the sector orientation.
struct RadioSetup {
    ClusterLayout layout;
    SpectrumPlan plan;
    PathLossModel model;
    double tx_power_w;
    double noise_w;
    double sector_attenuation_db;
    double sector_gain_db;
    int tiers;
    int borrower = kReferenceCell;
    int alpha_lender = 1;
    int beta_lender = 2;
    BandId band{3};

    explicit RadioSetup(const Scenario& sc)
        : layout(sc.cell_radius_m, sc.cup_area_fraction),
          plan(default_plan(sc.channels_per_cell)),
          model{sc.pathloss_exponent, sc.reference_distance_m, sc.reference_loss_db},
          tx_power_w(sc.tx_power_w),
          noise_w(sc.noise_w >= 0
                      ? sc.noise_w
                      : noise_for_edge_snr({sc.tx_power_w, sc.bs_height_m, 0.0}, model,
                                           sc.cell_radius_m, sc.edge_snr_db)),
          sector_attenuation_db(sc.sector_attenuation_db),
          sector_gain_db(sc.sector_gain_db),
          tiers(sc.interference_tiers) {}

    int lender_of_band() const { return band.index() <= 4 ? beta_lender : alpha_lender; }

    SectorRegion victim_region() const {
        auto regions = sector_regions(layout, borrower, alpha_lender, beta_lender);
        SectorLabel want = sector_for_band(band);
        for (const SectorRegion& r : regions)
            if (r.label == want) return r;
        throw std::logic_error("sector region for borrowed band not found");
    }
};

struct SectorScenarioEmitters {
    Emitter serving;
    std::vector<Emitter> interferers;
    SectorRegion victim_region;
};

// When `sectored`, the borrower transmits the borrowed band only into its
// pinned sector, and the lender keeps its remaining co-channel carriers in
// its own sector facing away from the borrower. The unsectored baseline has
// everybody omni.
inline SectorScenarioEmitters build_sector_scenario(const RadioSetup& setup, bool sectored) {
    SectorRegion region = setup.victim_region();
    AngularArc region_arc{region.angle_start, region.angle_span};
    AntennaPattern sect = sector_pattern(setup.sector_attenuation_db, setup.sector_gain_db);

    SectorScenarioEmitters out{{}, {}, region};
    out.serving.position = setup.layout.cell(setup.borrower).center;
    out.serving.tx_power_w = setup.tx_power_w;
    if (sectored) {
        out.serving.pattern = sect;
        out.serving.sector_arc = region_arc;
    } else {
        out.serving.pattern = omni_pattern();
    }

    int lender = setup.lender_of_band();
    Point borrower_c = setup.layout.cell(setup.borrower).center;
    Point lender_c = setup.layout.cell(lender).center;
    double lender_away = wrap_angle(
        std::atan2(borrower_c.y - lender_c.y, borrower_c.x - lender_c.x) + std::numbers::pi);
    const double third = 2.0 * std::numbers::pi / 3.0;
    AngularArc lender_arc{wrap_angle(lender_away - third / 2.0), third};

    std::array<ActiveBorrow, 1> borrows{{{setup.borrower, setup.band.index()}}};
    for (const CochannelCell& cc :
         cochannel_cells(setup.layout, setup.plan, borrows, setup.borrower, setup.band,
                         setup.tiers)) {
        Emitter e;
        e.position = cc.position;
        e.tx_power_w = setup.tx_power_w;
        e.tier = cc.tier;
        if (sectored && cc.cell == lender) {
            e.pattern = sect;
            e.sector_arc = lender_arc;
        } else if (sectored && cc.cell == setup.borrower) {
            e.pattern = sect;  // wrap-around copies of the borrower mirror its sectoring
            e.sector_arc = region_arc;
        } else {
            e.pattern = omni_pattern();
        }
        out.interferers.push_back(e);
    }
    return out;
}

struct PairedSinrSamples {
    std::vector<double> sectored_db;
    std::vector<double> omni_db;
};

// Evaluates both schemes at identical user positions inside the borrowed
// band's sector, so per-sample differences isolate the sectoring effect.
inline PairedSinrSamples sample_paired_sinr(const RadioSetup& setup, long trials,
                                            std::uint64_t seed) {
    SectorScenarioEmitters sectored = build_sector_scenario(setup, true);
    SectorScenarioEmitters omni = build_sector_scenario(setup, false);
    std::mt19937_64 rng(seed);
    PairedSinrSamples out;
    out.sectored_db.reserve(trials);
    out.omni_db.reserve(trials);
    for (long i = 0; i < trials; ++i) {
        Point p = sample_position(setup.layout, sectored.victim_region, rng);
        out.sectored_db.push_back(linear_to_db(
            evaluate_sinr(p, setup.borrower, setup.band.index(), sectored.serving,
                          sectored.interferers, setup.model, setup.noise_w)
                .sinr));
        out.omni_db.push_back(linear_to_db(
            evaluate_sinr(p, setup.borrower, setup.band.index(), omni.serving,
                          omni.interferers, setup.model, setup.noise_w)
                .sinr));
    }
    return out;
}

inline OutageEstimate outage_from_samples(const std::vector<double>& sinr_db, double gamma_db) {
    long below = 0;
    for (double v : sinr_db)
        if (v < gamma_db) ++below;
    OutageEstimate e;
    e.trials = long(sinr_db.size());
    e.probability = double(below) / double(e.trials);
    e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / double(e.trials));
    return e;
}

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

inline MeanEstimate mean_with_error(const std::vector<double>& xs) {
    double n = double(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= std::max(1.0, n - 1.0);
    return {mean, std::sqrt(var / n)};
}

// Steady-state capacity the borrower can reach once the cascade has run: its
// own channels plus the lendable edge channels of the best lender in each
// category, with lenders' own expected edge usage subtracted.
inline int analytic_proposed_capacity(const Scenario& sc, double total_rate) {
    TrafficProfile profile = sc.traffic_profile(total_rate);
    int eup = sc.channels_per_cell / 3;   // two of six equal segments
    int cup = sc.channels_per_cell - eup;
    auto lendable = [&](Category cat) {
        int best = 0;
        for (int id = 1; id <= 6; ++id) {
            if (category_of(id) != cat) continue;
            double a = profile.arrival_rate[id - 1] / profile.release_rate[id - 1];
            double occ = a * (1.0 - erlang_b(sc.channels_per_cell, a));
            int free = eup - std::max(0, int(std::ceil(occ)) - cup);
            best = std::max(best, std::clamp(free, 0, eup));
        }
        return best;
    };
    return sc.channels_per_cell + lendable(Category::First) + lendable(Category::Second);
}

struct SweepPoint {
    double total_rate = 0.0;
    double conv_analytic = 0.0;
    double conv_simulated = 0.0;
    double prop_analytic = 0.0;
    double prop_simulated = 0.0;
    double overall_analytic = 0.0;
    double conv_utilization = 0.0;
    double prop_utilization = 0.0;
    std::vector<GrantEvent> grants;
};

inline double cell_blocking(const Metrics& m, int cell) {
    const CellMetrics& c = m.cells[cell - 1];
    return c.offered > 0 ? double(c.blocked) / double(c.offered) : 0.0;
}

inline SweepPoint evaluate_sweep_point(const Scenario& sc, double rate) {
    SweepPoint p;
    p.total_rate = rate;

    TrafficProfile profile = sc.traffic_profile(rate);
    double a7 = profile.arrival_rate[kReferenceCell - 1] / profile.release_rate[kReferenceCell - 1];
    p.conv_analytic = erlang_b(sc.channels_per_cell, a7);
    p.prop_analytic = erlang_b(analytic_proposed_capacity(sc, rate), a7);
    std::array<int, kNumCells> caps{};
    caps.fill(sc.channels_per_cell);
    p.overall_analytic = overall_blocking(profile, caps, sc.eq2_mode).overall;

    SimConfig cfg = sc.sim_config(rate);
    cfg.scheme = Scheme::Conventional;
    Metrics conv = run_sim(cfg, default_plan(sc.channels_per_cell));
    cfg.scheme = Scheme::Proposed;
    Metrics prop = run_sim(cfg, default_plan(sc.channels_per_cell));

    p.conv_simulated = cell_blocking(conv, kReferenceCell);
    p.prop_simulated = cell_blocking(prop, kReferenceCell);
    p.conv_utilization = utilization(conv, cfg);
    p.prop_utilization = utilization(prop, cfg);
    p.grants = prop.grant_log;
    return p;
}

inline std::vector<SweepPoint> run_sweep(const Scenario& sc, int workers) {
    std::vector<double> rates = sc.sweep_rates();
    std::vector<SweepPoint> points(rates.size());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, int(rates.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < rates.size(); i = next.fetch_add(1)) {
            try {
                points[i] = evaluate_sweep_point(sc, rates[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return points;
}

inline void write_blocking_csv(const std::vector<SweepPoint>& points, const std::string& path) {
    std::vector<std::vector<CsvValue>> rows;
    for (const SweepPoint& p : points)
        rows.push_back({p.total_rate, p.conv_analytic, p.conv_simulated, p.prop_analytic,
                        p.prop_simulated, p.overall_analytic});
    emit_csv({"total_rate", "conventional_analytic", "conventional_simulated",
              "proposed_analytic", "proposed_simulated", "overall_analytic"},
             rows, path);
}

inline void write_utilization_csv(const std::vector<SweepPoint>& points, const std::string& path) {
    std::vector<std::vector<CsvValue>> rows;
    for (const SweepPoint& p : points)
        rows.push_back({p.total_rate, p.conv_utilization, p.prop_utilization});
    emit_csv({"total_rate", "conventional", "proposed"}, rows, path);
}

inline void write_grants_csv(const std::vector<SweepPoint>& points, const std::string& path) {
    std::vector<std::vector<CsvValue>> rows;
    for (const SweepPoint& p : points)
        for (const GrantEvent& g : p.grants)
            rows.push_back({p.total_rate, g.time, long(g.lender), long(g.borrower),
                            std::string("F") + std::to_string(g.band_index), long(g.channels),
                            std::string(to_string(g.sector))});
    emit_csv({"total_rate", "time", "lender", "borrower", "band", "channels", "sector"}, rows,
             path);
}

inline void write_sinr_cdf_csv(const PairedSinrSamples& samples, const std::string& path) {
    std::vector<double> sect = samples.sectored_db;
    std::vector<double> omni = samples.omni_db;
    std::sort(sect.begin(), sect.end());
    std::sort(omni.begin(), omni.end());
    std::vector<std::vector<CsvValue>> rows;
    int steps = 200;
    for (int i = 1; i <= steps; ++i) {
        double q = double(i) / steps;
        std::size_t idx = std::min(sect.size() - 1, std::size_t(q * sect.size()));
        rows.push_back({q, omni[idx], sect[idx]});
    }
    emit_csv({"quantile", "conventional_sinr_db", "proposed_sinr_db"}, rows, path);
}

inline void write_outage_csv(const Scenario& sc, const PairedSinrSamples& samples,
                             const std::string& path) {
    std::vector<std::vector<CsvValue>> rows;
    for (double g = sc.gamma_start_db; g <= sc.gamma_stop_db + 1e-9 * sc.gamma_step_db;
         g += sc.gamma_step_db) {
        OutageEstimate omni = outage_from_samples(samples.omni_db, g);
        OutageEstimate sect = outage_from_samples(samples.sectored_db, g);
        rows.push_back({g, omni.probability, omni.std_error, sect.probability, sect.std_error});
    }
    emit_csv({"gamma_db", "conventional", "conventional_se", "proposed", "proposed_se"}, rows,
             path);
}

inline void write_analytic_csv(const Scenario& sc, const std::string& path) {
    std::vector<std::vector<CsvValue>> rows;
    std::array<int, kNumCells> caps{};
    caps.fill(sc.channels_per_cell);
    for (double rate : sc.sweep_rates()) {
        BlockingResult r = overall_blocking(sc.traffic_profile(rate), caps, sc.eq2_mode);
        std::vector<CsvValue> row{rate};
        for (double b : r.per_cell) row.push_back(b);
        row.push_back(r.overall);
        rows.push_back(std::move(row));
    }
    emit_csv({"total_rate", "cell1", "cell2", "cell3", "cell4", "cell5", "cell6", "cell7",
              "overall"},
             rows, path);
}

// The whole result pipeline: traffic sweep, radio comparison, five CSVs.
inline void run_scenario(const Scenario& sc, const std::string& out_dir, int workers = 1) {
    std::filesystem::create_directories(out_dir);
    auto points = run_sweep(sc, workers);
    write_blocking_csv(points, out_dir + "/blocking.csv");
    write_utilization_csv(points, out_dir + "/utilization.csv");
    write_grants_csv(points, out_dir + "/grants.csv");

    RadioSetup setup(sc);
    PairedSinrSamples samples = sample_paired_sinr(setup, sc.radio_trials, sc.seed);
    write_sinr_cdf_csv(samples, out_dir + "/sinr_cdf.csv");
    write_outage_csv(sc, samples, out_dir + "/outage.csv");
}

}  // namespace ffr
