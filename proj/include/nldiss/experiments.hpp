// experiments.hpp — Run configuration, named scenarios, sweeps and their file outputs

#pragma once

#include "nldiss/redfield.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nldiss {

enum class Solver { rwa, redfield };
enum class Scenario { custom, fig1, fig2a, fig2c, fig3, sweep_temperature, convergence };

std::string to_string(Solver s);
Solver solver_from_string(const std::string& name);
std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every field is optional so scenario presets can tell "unset" from "set".
/// Text keys match the member names.
struct RunConfig {
    std::optional<double> omega0;
    std::optional<double> mu1;
    std::optional<double> mu2;
    std::optional<double> lambda;
    std::optional<double> gamma0;  // sets both baths unless gamma1/gamma2 are given
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    std::optional<double> temperature;
    std::optional<Complex> alpha1;
    std::optional<Complex> alpha2;
    std::optional<int> truncation;
    std::optional<Solver> solver;
    std::optional<Frame> frame;
    std::optional<double> t_final;
    std::optional<int> sample_count;
    std::optional<std::string> output_path;
    std::optional<Scenario> scenario;
    std::optional<Method> method;
    std::optional<Spacing> spacing;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<std::vector<double>> temperatures;  // sweep grid
    std::optional<std::vector<int>> truncations;      // convergence grid

    bool operator==(const RunConfig&) const = default;
};

// Field names in the order they are written.
const std::vector<std::string>& config_keys();

// Parses flat "key = value" text; '#' starts a comment. Unknown or repeated keys throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
// Set fields only, one "key = value" line each; doubles keep 17 significant digits.
std::string format_config(const RunConfig& cfg);

// Fields set in `over` replace those in `base`.
RunConfig merge(const RunConfig& base, const RunConfig& over);

// Applies the scenario preset to unset fields, then global defaults, then validates.
// Every field of the result is set.
RunConfig resolve(const RunConfig& cfg);

SystemParams system_params(const RunConfig& resolved);
IntegratorConfig integrator_config(const RunConfig& resolved);
// Upsilon+ of the resolved parameters; the t_upsilon column uses it.
double dephasing_rate(const RunConfig& resolved);

struct InitialState {
    DensityMatrix rho = DensityMatrix::unchecked(TruncatedSpace(2), ComplexMatrix::Zero(4, 4));
    double truncation_deficit = 0.0;  // larger of the two single-mode deficits
    bool truncation_warning = false;
};

InitialState initial_state(const RunConfig& resolved);

// Evolves the resolved configuration with the selected solver; no I/O.
Trajectory simulate(const RunConfig& resolved);

struct RunManifest {
    RunConfig config;  // resolved
    std::string code_version;
    std::string status = "ok";  // ok | integration_failure
    std::string message;
    double wall_time_s = 0.0;
    double max_trace_dev = 0.0;
    double max_herm_dev = 0.0;
    double min_eigenvalue = 0.0;
    double p_even_drift = 0.0;
    double upsilon_plus = 0.0;
    double upsilon_minus = 0.0;
    double gamma_loss = 0.0;  // gamma(2 omega0)
    double gamma_gain = 0.0;  // gamma(-2 omega0)
    double p_odd_initial = 0.0;
    double truncation_deficit = 0.0;
    long steps = 0;
    std::string temperature_unit = "omega0/k_B";
};

// Config keys are written bare, everything else under "run.", "diag." or "derived.".
void write_manifest(std::ostream& out, const RunManifest& manifest);
RunManifest parse_manifest(const std::string& text);
RunManifest load_manifest(const std::filesystem::path& path);

inline constexpr const char* kTrajectoryHeader =
    "t,t_lambda,t_upsilon,p00,p10,p01,s,u,v,w,negativity,p_even,p_odd,trace_dev,min_eig";

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double lambda, double upsilon);

struct RunResult {
    RunConfig config;  // resolved
    Trajectory trajectory;
    RunManifest manifest;
};

// Resolves, simulates and writes trajectory.csv and manifest.txt under output_path.
// An integration failure still writes the manifest (status integration_failure) and rethrows.
RunResult run_scenario(const RunConfig& cfg);

struct EsdResult {
    std::optional<double> esd_time;      // first sample with N <= threshold whose successor is also <= threshold
    std::optional<double> rebirth_time;  // first later sample with N > threshold
};

EsdResult detect_esd(const std::vector<double>& times, const std::vector<double>& negativity,
                     double threshold = kEsdThreshold);
EsdResult detect_esd(const Trajectory& traj, double threshold = kEsdThreshold);

struct SweepEntry {
    double temperature = 0.0;
    EsdResult esd;
    double negativity_final = 0.0;
    std::filesystem::path directory;
};

inline const std::vector<double> kDefaultSweepTemperatures{0.0, 1e-3, 1e-2, 5e-2, 1e-1};

// Runs the two-displaced scenario at each temperature into output_path/T_<index>,
// then writes output_path/summary.csv (T, esd_time, rebirth_time, negativity_at_t_final).
std::vector<SweepEntry> sweep_temperature(const RunConfig& cfg, const std::vector<double>& temperatures);
void write_sweep_summary(std::ostream& out, const std::vector<SweepEntry>& entries);

struct ConvergenceRow {
    int m_from = 0;
    int m_to = 0;
    double negativity_diff = 0.0;  // sup over samples
    double p00_diff = 0.0;
};

// Reruns the scenario at each truncation (ascending, each >= 4) and writes output_path/convergence.csv.
std::vector<ConvergenceRow> convergence_report(const RunConfig& cfg, const std::vector<int>& truncations);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

// "%.17g"
std::string format_double(double x);

} // namespace nldiss
