// nldiss_cli.cpp — Command-line runner for scenarios, temperature sweeps and convergence checks

#include "nldiss/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kIntegrationFailure = 3, kIoFailure = 4 };

struct Flags {
    std::string config_path;
    std::string out;
    std::string solver;
    std::string frame;
    int truncation = 0;
    double t_final = 0.0;
    int samples = 0;
    double temperature = 0.0;
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config_path, "Flat key = value config file");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--solver", f.solver, "rwa | redfield")->check(CLI::IsMember({"rwa", "redfield"}));
    cmd->add_option("--truncation", f.truncation, "Fock levels per mode (M)");
    cmd->add_option("--t-final", f.t_final, "Final time");
    cmd->add_option("--samples", f.samples, "Number of samples, t = 0 included");
    cmd->add_option("--temperature", f.temperature, "k_B T / omega0");
    cmd->add_option("--frame", f.frame, "rotating | lab-phase")->check(CLI::IsMember({"rotating", "lab-phase"}));
}

// Config file first, explicit flags on top, then the scenario of the subcommand.
nldiss::RunConfig build_config(const CLI::App* cmd, const Flags& f, std::optional<nldiss::Scenario> scenario)
{
    nldiss::RunConfig cfg;
    if (cmd->count("--config")) cfg = nldiss::load_config(f.config_path);
    nldiss::RunConfig flags;
    if (cmd->count("--out")) flags.output_path = f.out;
    if (cmd->count("--solver")) flags.solver = nldiss::solver_from_string(f.solver);
    if (cmd->count("--truncation")) flags.truncation = f.truncation;
    if (cmd->count("--t-final")) flags.t_final = f.t_final;
    if (cmd->count("--samples")) flags.sample_count = f.samples;
    if (cmd->count("--temperature")) flags.temperature = f.temperature;
    if (cmd->count("--frame")) flags.frame = nldiss::frame_from_string(f.frame);
    if (scenario) flags.scenario = scenario;
    return nldiss::merge(cfg, flags);
}

void report(const nldiss::RunResult& res)
{
    const auto& m = res.manifest;
    const auto& last = res.trajectory.records.back();
    std::cout << "scenario " << nldiss::to_string(*res.config.scenario) << " -> " << *res.config.output_path << "\n"
              << "  samples " << res.trajectory.records.size() << ", wall " << m.wall_time_s << " s\n"
              << "  trace drift " << m.max_trace_dev << ", P_even drift " << m.p_even_drift
              << ", min eigenvalue " << m.min_eigenvalue << "\n"
              << "  final: P00 " << last.p00 << ", P_odd " << last.p_odd << ", negativity " << last.negativity << "\n";
}

int run_single(const nldiss::RunConfig& cfg)
{
    const nldiss::RunResult res = nldiss::run_scenario(cfg);
    report(res);
    return kOk;
}

int run_sweep(nldiss::RunConfig cfg, bool single_temperature)
{
    std::vector<double> temps = nldiss::kDefaultSweepTemperatures;
    if (cfg.temperatures) temps = *cfg.temperatures;
    if (single_temperature) temps = {*cfg.temperature};
    cfg.temperature.reset();
    const auto entries = nldiss::sweep_temperature(cfg, temps);
    nldiss::write_sweep_summary(std::cout, entries);
    return kOk;
}

int run_convergence(const nldiss::RunConfig& cfg)
{
    const std::vector<int> ms = cfg.truncations.value_or(std::vector<int>{6, 8, 10});
    const auto rows = nldiss::convergence_report(cfg, ms);
    nldiss::write_convergence_csv(std::cout, rows);
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two coupled anharmonic oscillators with two-quantum dissipation"};
    app.set_version_flag("--version", std::string(NLDISS_VERSION));
    app.require_subcommand(1);

    Flags flags;
    struct Command {
        const char* name;
        const char* help;
        std::optional<nldiss::Scenario> scenario;
    };
    const Command commands[] = {
        {"run", "Run the scenario named in the config (custom by default)", std::nullopt},
        {"fig1", "Populations, one displaced oscillator", nldiss::Scenario::fig1},
        {"fig2a", "Negativity over the first periods, one displaced oscillator", nldiss::Scenario::fig2a},
        {"fig2c", "Negativity, both oscillators displaced", nldiss::Scenario::fig2c},
        {"fig3", "Negativity versus temperature", nldiss::Scenario::fig3},
        {"sweep-temperature", "Temperature sweep with sudden-death summary", nldiss::Scenario::sweep_temperature},
        {"convergence", "Truncation convergence report", nldiss::Scenario::convergence},
    };
    std::vector<CLI::App*> subs;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            CLI::App* sub = subs[k];
            if (!sub->parsed()) continue;
            const Command& c = commands[k];
            nldiss::RunConfig cfg = build_config(sub, flags, c.scenario);
            const nldiss::Scenario scenario = cfg.scenario.value_or(nldiss::Scenario::custom);
            const bool one_t = sub->count("--temperature") > 0;
            switch (scenario) {
            case nldiss::Scenario::fig3:
            case nldiss::Scenario::sweep_temperature:
                return run_sweep(cfg, one_t);
            case nldiss::Scenario::convergence:
                return run_convergence(cfg);
            default:
                return run_single(cfg);
            }
        }
    } catch (const nldiss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nldiss::IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << " (last good time " << e.last_good_time << ")\n";
        return kIntegrationFailure;
    } catch (const nldiss::OutputError& e) {
        std::cerr << "I/O failure: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O failure: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}
