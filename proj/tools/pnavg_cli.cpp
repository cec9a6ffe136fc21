// Command-line runner: figure data, acceptance report, raw waveform dumps.

#include "pnavg/acceptance.hpp"
#include "pnavg/config.hpp"
#include "pnavg/error.hpp"
#include "pnavg/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> paths;
    std::string format = "table";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value configuration file");
    cmd->add_option("--seed", c.seed, "master seed (overrides config)");
    cmd->add_option("--out", c.out, "output directory (overrides config)");
    cmd->add_option("--paths", c.paths, "Monte Carlo paths (overrides config)")->check(CLI::PositiveNumber);
    cmd->add_option("--format", c.format, "table or json")->check(CLI::IsMember({"table", "json"}));
}

pnavg::ExperimentConfig resolve(const Common& c) {
    pnavg::ExperimentConfig cfg = c.config_path.empty() ? pnavg::ExperimentConfig{} : pnavg::load_config(c.config_path);
    if (c.seed)
        cfg.seed = *c.seed;
    if (c.out)
        cfg.output_dir = *c.out;
    if (c.paths)
        cfg.n_paths = *c.paths;
    cfg.validate();
    return cfg;
}

pnavg::OutputFormat format_of(const Common& c) {
    return c.format == "json" ? pnavg::OutputFormat::json : pnavg::OutputFormat::table;
}

void report_written(const std::vector<std::filesystem::path>& files) {
    for (const auto& f : files)
        std::cout << f.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-noise averaging circuits: simulation, spectra and checks"};
    app.require_subcommand(1);

    Common log_opts, lin_opts, acc_opts, sim_opts;
    auto* log_cmd = app.add_subcommand("figure-log", "log-frequency PSD tables for base, independent and delayed");
    auto* lin_cmd = app.add_subcommand("figure-linear", "linear-band PSD tables and notch summary");
    auto* acc_cmd = app.add_subcommand("acceptance", "run every acceptance check and write a JSON report");
    auto* sim_cmd = app.add_subcommand("simulate", "waveform-mode run of the configured scenario");
    add_common(log_cmd, log_opts);
    add_common(lin_cmd, lin_opts);
    add_common(acc_cmd, acc_opts);
    add_common(sim_cmd, sim_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (log_cmd->parsed()) {
            const auto cfg = resolve(log_opts);
            report_written(pnavg::write_output(pnavg::run_figure_log(cfg), cfg, format_of(log_opts)));
        } else if (lin_cmd->parsed()) {
            const auto cfg = resolve(lin_opts);
            report_written(pnavg::write_output(pnavg::run_figure_linear(cfg), cfg, format_of(lin_opts)));
        } else if (sim_cmd->parsed()) {
            const auto cfg = resolve(sim_opts);
            report_written(pnavg::write_output(pnavg::run_simulate(cfg), cfg, format_of(sim_opts)));
        } else if (acc_cmd->parsed()) {
            const auto cfg = resolve(acc_opts);
            const pnavg::AcceptanceReport report = pnavg::run_acceptance(cfg);
            for (const auto& c : report.checks)
                std::printf("%-4s %2d %-48s %.6g %s %.6g\n", c.passed ? "PASS" : "FAIL", c.criterion, c.name.c_str(),
                            c.measured, c.relation.c_str(), c.tolerance);
            std::filesystem::create_directories(cfg.output_dir);
            const auto path = cfg.output_dir / "acceptance_report.json";
            pnavg::write_text_file(path, report.to_json());
            std::cout << path.string() << '\n';
            return report.all_passed() ? 0 : 1;
        }
    } catch (const pnavg::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const pnavg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
