#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "ffr/experiments.hpp"

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = "results";
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> eq2_mode;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "scenario file (key = value lines)");
    cmd->add_option("--out", opts.out_dir, "output directory for CSV results");
    cmd->add_option("--workers", opts.workers, "parallel sweep workers")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "override the scenario seed");
    cmd->add_option("--eq2-mode", opts.eq2_mode, "overall blocking formula")
        ->check(CLI::IsMember({"literal", "weighted"}));
}

ffr::Scenario load(const CommonOpts& opts) {
    ffr::Scenario sc =
        opts.scenario_path.empty() ? ffr::Scenario{} : ffr::load_scenario(opts.scenario_path);
    if (opts.seed) sc.seed = *opts.seed;
    if (opts.eq2_mode)
        sc.eq2_mode = *opts.eq2_mode == "literal" ? ffr::OverallBlockingMode::Literal
                                                  : ffr::OverallBlockingMode::TrafficWeighted;
    sc.validate();
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"On-demand sectoring FFR: analytic blocking, traffic simulation, SINR/outage"};
    app.require_subcommand(1);

    CommonOpts opts;
    CLI::App* analytic = app.add_subcommand("analytic", "Erlang-B blocking over the rate sweep");
    CLI::App* simulate = app.add_subcommand("simulate", "event-driven scheme comparison sweep");
    CLI::App* radio = app.add_subcommand("radio", "SINR distribution and outage comparison");
    CLI::App* figures = app.add_subcommand("figures", "all result sets in one run");
    for (CLI::App* cmd : {analytic, simulate, radio, figures}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        ffr::Scenario sc = load(opts);
        std::filesystem::create_directories(opts.out_dir);
        if (analytic->parsed()) {
            ffr::write_analytic_csv(sc, opts.out_dir + "/analytic.csv");
        } else if (simulate->parsed()) {
            auto points = ffr::run_sweep(sc, opts.workers);
            ffr::write_blocking_csv(points, opts.out_dir + "/blocking.csv");
            ffr::write_utilization_csv(points, opts.out_dir + "/utilization.csv");
            ffr::write_grants_csv(points, opts.out_dir + "/grants.csv");
        } else if (radio->parsed()) {
            ffr::RadioSetup setup(sc);
            auto samples = ffr::sample_paired_sinr(setup, sc.radio_trials, sc.seed);
            ffr::write_sinr_cdf_csv(samples, opts.out_dir + "/sinr_cdf.csv");
            ffr::write_outage_csv(sc, samples, opts.out_dir + "/outage.csv");
        } else {
            ffr::run_scenario(sc, opts.out_dir, opts.workers);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
