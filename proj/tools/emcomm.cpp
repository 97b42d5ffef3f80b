// Command-line front end: simulate / sweep / theory / reproduce.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "emcomm/experiment.hpp"
#include "emcomm/theory.hpp"

namespace {

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> replicates;
    std::optional<int> jobs;
    bool snapshot = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "master random seed");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--replicates", flags.replicates, "independent replicates");
    cmd->add_option("--jobs", flags.jobs, "worker threads (0 = hardware)");
    cmd->add_flag("--snapshot", flags.snapshot, "write final-state snapshots");
}

void apply_common(emcomm::ExperimentConfig& cfg, const CommonFlags& flags) {
    if (flags.seed) cfg.society.seed = *flags.seed;
    if (flags.out) cfg.output_dir = *flags.out;
    if (flags.replicates) cfg.replicates = *flags.replicates;
    if (flags.jobs) cfg.jobs = *flags.jobs;
    if (flags.snapshot) cfg.snapshot = true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"agent-based simulator and closed-form analysis of emergent signalling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::string theory_mode = "no_feedback";
    bool svg = false;
    CommonFlags flags;

    double th_lambda = 0.01, th_alpha = 0.05, th_c = 0.1, th_a = 1.0;
    int th_m = 55, th_s = 11;
    bool th_pmf = false;
    std::string th_out;

    auto* simulate = app.add_subcommand("simulate", "run one configuration for several replicates");
    simulate->add_option("--config", config_path, "config file")->required();
    add_common(simulate, flags);

    auto* sweep_cmd = app.add_subcommand("sweep", "cross-product parameter sweep");
    sweep_cmd->add_option("--config", config_path, "config file with grid.* lists")->required();
    add_common(sweep_cmd, flags);

    auto* theory_cmd = app.add_subcommand("theory", "closed-form regime report and dominance pmf");
    theory_cmd->add_option("--mode", theory_mode, "feedback | no_feedback")
        ->check(CLI::IsMember({"feedback", "no_feedback"}));
    theory_cmd->add_option("--lambda", th_lambda, "memory decay rate");
    theory_cmd->add_option("--alpha", th_alpha, "prior strength");
    theory_cmd->add_option("--C", th_c, "certainty");
    theory_cmd->add_option("--A", th_a, "alignment");
    theory_cmd->add_option("--M", th_m, "meanings");
    theory_cmd->add_option("--S", th_s, "signals");
    theory_cmd->add_flag("--pmf", th_pmf, "also emit the dominant-signal-count pmf");
    theory_cmd->add_option("--out", th_out, "output directory (default: stdout)");

    auto* reproduce = app.add_subcommand("reproduce", "run a named experiment preset");
    reproduce->add_option("preset", preset_name, "fig5 | fig6 | fig8 | fig9 | fig10")->required();
    reproduce->add_flag("--svg", svg, "emit a summary plot");
    add_common(reproduce, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            emcomm::ExperimentConfig cfg = emcomm::load_config(config_path);
            apply_common(cfg, flags);
            const auto result = emcomm::run_experiment(cfg);
            std::printf("replicates ok: %d/%d\n", result.ok_count, cfg.replicates);
            std::printf("window gain: %.6g +- %.6g\n", result.g_window.mean,
                        result.g_window.standard_error);
            std::printf("window variability: %.6g +- %.6g\n", result.v_window.mean,
                        result.v_window.standard_error);
            std::printf("outputs in %s\n", cfg.output_dir.c_str());
            return result.ok_count == cfg.replicates ? 0 : 1;
        }
        if (sweep_cmd->parsed()) {
            emcomm::ExperimentConfig cfg = emcomm::load_config(config_path);
            apply_common(cfg, flags);
            const auto rows = emcomm::sweep(cfg);
            std::printf("%zu grid points -> %s/sweep.csv\n", rows.size(), cfg.output_dir.c_str());
            return 0;
        }
        if (theory_cmd->parsed()) {
            const double lambda_alpha = th_lambda * th_alpha;
            const double v = emcomm::variability_estimate(th_lambda, th_alpha, th_c, th_a, th_m);
            const double gamma = theory_mode == "feedback"
                                     ? emcomm::threshold_gamma_feedback(th_m)
                                     : emcomm::threshold_gamma_no_feedback(th_c, th_a, v);
            const auto report = emcomm::classify_regime(lambda_alpha, gamma, th_s);

            std::ostream* os = &std::cout;
            std::ofstream regime_file;
            if (!th_out.empty()) {
                std::filesystem::create_directories(th_out);
                regime_file.open(th_out + "/regime.csv");
                os = &regime_file;
            }
            *os << "mode,M,S,lambda,alpha,C,A,V,gamma,lambda_alpha,ratio,noncomm_unstable,"
                   "comm_exists,bistable,x_c,predicted_gain\n";
            *os << theory_mode << ',' << th_m << ',' << th_s << ',' << th_lambda << ',' << th_alpha
                << ',' << th_c << ',' << th_a << ',' << v << ',' << gamma << ',' << lambda_alpha
                << ',' << (gamma != 0.0 ? lambda_alpha / gamma : 0.0) << ','
                << report.noncomm_unstable << ',' << report.comm_exists << ',' << report.bistable
                << ',';
            if (report.x_c) *os << *report.x_c;
            *os << ',';
            if (report.predicted_gain_at_fixed_point) *os << *report.predicted_gain_at_fixed_point;
            *os << '\n';

            if (th_pmf) {
                std::ostream* ps = &std::cout;
                std::ofstream pmf_file;
                if (!th_out.empty()) {
                    pmf_file.open(th_out + "/dominant_count_pmf.csv");
                    ps = &pmf_file;
                }
                const auto pmf = emcomm::dominant_count_pmf(th_s, th_m);
                *ps << "D,probability\n";
                for (std::size_t d = 0; d < pmf.size(); ++d) {
                    *ps << d << ',' << pmf[d] << '\n';
                }
            }
            return 0;
        }
        if (reproduce->parsed()) {
            emcomm::ExperimentConfig cfg;  // presets pin the physics; flags pin the bookkeeping
            cfg.output_dir = "out_" + preset_name;
            apply_common(cfg, flags);
            cfg.max_total_steps = 50'000'000'000LL;
            const auto rows = emcomm::reproduce_preset(
                preset_name, cfg, svg,
                flags.replicates ? std::optional<int>(*flags.replicates) : std::nullopt);
            std::printf("%zu points -> %s/summary.csv\n", rows.size(), cfg.output_dir.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
