// experiments.cpp — Scenario presets, config text, runners and CSV/manifest writers

#include "nldiss/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace nldiss {

namespace fs = std::filesystem;

#ifndef NLDISS_VERSION
#define NLDISS_VERSION "unknown"
#endif

std::string to_string(Solver s)
{
    return s == Solver::rwa ? "rwa" : "redfield";
}

Solver solver_from_string(const std::string& name)
{
    if (name == "rwa") return Solver::rwa;
    if (name == "redfield") return Solver::redfield;
    throw ConfigError("unknown solver '" + name + "' (expected rwa or redfield)");
}

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_names()
{
    static const std::vector<std::pair<Scenario, std::string>> names{
        {Scenario::custom, "custom"}, {Scenario::fig1, "fig1"},   {Scenario::fig2a, "fig2a"},
        {Scenario::fig2c, "fig2c"},   {Scenario::fig3, "fig3"},   {Scenario::sweep_temperature, "sweep_temperature"},
        {Scenario::convergence, "convergence"},
    };
    return names;
}

} // namespace

std::string to_string(Scenario s)
{
    for (const auto& [value, name] : scenario_names()) {
        if (value == s) return name;
    }
    return "custom";
}

Scenario scenario_from_string(const std::string& name)
{
    const std::string key = name == "sweep-temperature" ? "sweep_temperature" : name;
    for (const auto& [value, n] : scenario_names()) {
        if (n == key) return value;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Config text

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError(key + ": trailing characters in '" + text + "'");
    if (!std::isfinite(x)) throw ConfigError(key + ": must be finite");
    return x;
}

int parse_int(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError(key + ": not an integer: '" + text + "'");
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError(key + ": out of range");
    }
    return static_cast<int>(x);
}

// "re" or "(re,im)"
Complex parse_complex(const std::string& key, const std::string& text)
{
    if (!text.empty() && text.front() == '(') {
        const auto comma = text.find(',');
        if (text.back() != ')' || comma == std::string::npos) {
            throw ConfigError(key + ": complex values are written (re,im)");
        }
        const double re = parse_double(key, trim(text.substr(1, comma - 1)));
        const double im = parse_double(key, trim(text.substr(comma + 1, text.size() - comma - 2)));
        return {re, im};
    }
    return {parse_double(key, text), 0.0};
}

std::string format_complex(Complex z)
{
    return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")";
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& text, F parse_one)
{
    std::vector<T> out;
    for (const std::string& item : split_list(text)) {
        if (item.empty()) throw ConfigError(key + ": empty list entry");
        out.push_back(parse_one(key, item));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

template <class E, class F>
E parse_enum(const std::string& key, const std::string& text, F from_string)
{
    try {
        return from_string(text);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

struct FieldCodec {
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
std::optional<std::string> fmt_opt(const std::optional<T>& v, std::string (*f)(T))
{
    if (!v) return std::nullopt;
    return f(*v);
}

std::string fmt_int(int x)
{
    return std::to_string(x);
}

std::string fmt_string(std::string s)
{
    return s;
}

std::string fmt_doubles(std::vector<double> v)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_double(v[k]);
    return out;
}

std::string fmt_ints(std::vector<int> v)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + std::to_string(v[k]);
    return out;
}

std::string fmt_frame(Frame f)
{
    return to_string(f);
}

std::string fmt_solver(Solver s)
{
    return to_string(s);
}

std::string fmt_scenario(Scenario s)
{
    return to_string(s);
}

std::string fmt_method(Method m)
{
    return to_string(m);
}

std::string fmt_spacing(Spacing s)
{
    return to_string(s);
}

#define NLDISS_DOUBLE_FIELD(name)                                                                         \
    {#name, FieldCodec{[](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_double(k, v); }, \
                       [](const RunConfig& c) { return fmt_opt(c.name, format_double); }}}

const std::vector<std::pair<std::string, FieldCodec>>& codecs()
{
    static const std::vector<std::pair<std::string, FieldCodec>> table{
        NLDISS_DOUBLE_FIELD(omega0),
        NLDISS_DOUBLE_FIELD(mu1),
        NLDISS_DOUBLE_FIELD(mu2),
        NLDISS_DOUBLE_FIELD(lambda),
        NLDISS_DOUBLE_FIELD(gamma0),
        NLDISS_DOUBLE_FIELD(gamma1),
        NLDISS_DOUBLE_FIELD(gamma2),
        NLDISS_DOUBLE_FIELD(temperature),
        {"alpha1", {[](RunConfig& c, const std::string& k, const std::string& v) { c.alpha1 = parse_complex(k, v); },
                    [](const RunConfig& c) { return fmt_opt(c.alpha1, format_complex); }}},
        {"alpha2", {[](RunConfig& c, const std::string& k, const std::string& v) { c.alpha2 = parse_complex(k, v); },
                    [](const RunConfig& c) { return fmt_opt(c.alpha2, format_complex); }}},
        {"truncation", {[](RunConfig& c, const std::string& k, const std::string& v) { c.truncation = parse_int(k, v); },
                        [](const RunConfig& c) { return fmt_opt(c.truncation, fmt_int); }}},
        {"solver", {[](RunConfig& c, const std::string& k, const std::string& v) {
                        c.solver = parse_enum<Solver>(k, v, solver_from_string);
                    },
                    [](const RunConfig& c) { return fmt_opt(c.solver, fmt_solver); }}},
        {"frame", {[](RunConfig& c, const std::string& k, const std::string& v) {
                       c.frame = parse_enum<Frame>(k, v, frame_from_string);
                   },
                   [](const RunConfig& c) { return fmt_opt(c.frame, fmt_frame); }}},
        NLDISS_DOUBLE_FIELD(t_final),
        {"sample_count", {[](RunConfig& c, const std::string& k, const std::string& v) { c.sample_count = parse_int(k, v); },
                          [](const RunConfig& c) { return fmt_opt(c.sample_count, fmt_int); }}},
        {"output_path", {[](RunConfig& c, const std::string&, const std::string& v) { c.output_path = v; },
                         [](const RunConfig& c) { return fmt_opt(c.output_path, fmt_string); }}},
        {"scenario", {[](RunConfig& c, const std::string& k, const std::string& v) {
                          c.scenario = parse_enum<Scenario>(k, v, scenario_from_string);
                      },
                      [](const RunConfig& c) { return fmt_opt(c.scenario, fmt_scenario); }}},
        {"method", {[](RunConfig& c, const std::string& k, const std::string& v) {
                        c.method = parse_enum<Method>(k, v, method_from_string);
                    },
                    [](const RunConfig& c) { return fmt_opt(c.method, fmt_method); }}},
        {"spacing", {[](RunConfig& c, const std::string& k, const std::string& v) {
                         c.spacing = parse_enum<Spacing>(k, v, spacing_from_string);
                     },
                     [](const RunConfig& c) { return fmt_opt(c.spacing, fmt_spacing); }}},
        NLDISS_DOUBLE_FIELD(rel_tol),
        NLDISS_DOUBLE_FIELD(abs_tol),
        {"temperatures", {[](RunConfig& c, const std::string& k, const std::string& v) {
                              c.temperatures = parse_list<double>(k, v, parse_double);
                          },
                          [](const RunConfig& c) { return fmt_opt(c.temperatures, fmt_doubles); }}},
        {"truncations", {[](RunConfig& c, const std::string& k, const std::string& v) {
                             c.truncations = parse_list<int>(k, v, parse_int);
                         },
                         [](const RunConfig& c) { return fmt_opt(c.truncations, fmt_ints); }}},
    };
    return table;
}

#undef NLDISS_DOUBLE_FIELD

const FieldCodec* find_codec(const std::string& key)
{
    for (const auto& [name, codec] : codecs()) {
        if (name == key) return &codec;
    }
    return nullptr;
}

// Splits "key = value" lines; comments and blank lines are dropped.
std::vector<std::pair<std::string, std::string>> split_lines(const std::string& text)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw OutputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& entry : codecs()) k.push_back(entry.first);
        return k;
    }();
    return keys;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::map<std::string, bool> seen;
    for (const auto& [key, value] : split_lines(text)) {
        const FieldCodec* codec = find_codec(key);
        if (!codec) throw ConfigError("unknown key '" + key + "'");
        if (seen[key]) throw ConfigError("duplicate key '" + key + "'");
        seen[key] = true;
        if (value.empty()) throw ConfigError(key + ": empty value");
        codec->set(cfg, key, value);
    }
    return cfg;
}

RunConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const RunConfig& cfg)
{
    std::string out;
    for (const auto& [name, codec] : codecs()) {
        if (auto v = codec.get(cfg)) out += name + " = " + *v + "\n";
    }
    return out;
}

RunConfig merge(const RunConfig& base, const RunConfig& over)
{
    RunConfig out = base;
    auto take = [](auto& dst, const auto& src) {
        if (src) dst = src;
    };
    take(out.omega0, over.omega0);
    take(out.mu1, over.mu1);
    take(out.mu2, over.mu2);
    take(out.lambda, over.lambda);
    take(out.gamma0, over.gamma0);
    take(out.gamma1, over.gamma1);
    take(out.gamma2, over.gamma2);
    take(out.temperature, over.temperature);
    take(out.alpha1, over.alpha1);
    take(out.alpha2, over.alpha2);
    take(out.truncation, over.truncation);
    take(out.solver, over.solver);
    take(out.frame, over.frame);
    take(out.t_final, over.t_final);
    take(out.sample_count, over.sample_count);
    take(out.output_path, over.output_path);
    take(out.scenario, over.scenario);
    take(out.method, over.method);
    take(out.spacing, over.spacing);
    take(out.rel_tol, over.rel_tol);
    take(out.abs_tol, over.abs_tol);
    take(out.temperatures, over.temperatures);
    take(out.truncations, over.truncations);
    return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

template <class T>
void fill(std::optional<T>& field, const T& value)
{
    if (!field) field = value;
}

void paper_parameters(RunConfig& c)
{
    fill(c.omega0, 1.0);
    fill(c.gamma0, 1e-3);
    fill(c.mu1, *c.gamma0);
    fill(c.mu2, *c.gamma0);
    fill(c.lambda, *c.gamma0 / 2.0);
    fill(c.truncation, 10);
    fill(c.solver, Solver::rwa);
}

// Quarter-period sampling so samples land on the zeros and maxima of the exchange oscillation.
void fill_half_periods(RunConfig& c, double half_periods)
{
    const double lambda = *c.lambda;
    if (lambda <= 0.0) return;
    const double k = std::ceil(half_periods);
    fill(c.t_final, k * std::numbers::pi / lambda);
    fill(c.sample_count, static_cast<int>(std::llround(4.0 * *c.t_final * lambda / std::numbers::pi)) + 1);
}

Upsilons resolved_upsilons(const RunConfig& c, double temperature)
{
    return upsilons(BathSpectrum{*c.gamma1, *c.omega0, temperature}, *c.lambda);
}

void apply_preset(RunConfig& c)
{
    switch (*c.scenario) {
    case Scenario::custom:
        break;
    case Scenario::fig1:
    case Scenario::convergence:
        fill(c.alpha1, Complex(1.0, 0.0));
        fill(c.alpha2, Complex(0.0, 0.0));
        paper_parameters(c);
        break;
    case Scenario::fig2a:
        fill(c.alpha1, Complex(1.0, 0.0));
        fill(c.alpha2, Complex(0.0, 0.0));
        paper_parameters(c);
        break;
    case Scenario::fig2c:
    case Scenario::fig3:
    case Scenario::sweep_temperature:
        fill(c.alpha1, Complex(1.0, 0.0));
        fill(c.alpha2, Complex(1.0, 0.0));
        paper_parameters(c);
        break;
    }
}

void fill_defaults(RunConfig& c)
{
    fill(c.omega0, 1.0);
    fill(c.gamma0, 1e-3);
    fill(c.mu1, 1e-3);
    fill(c.mu2, 1e-3);
    fill(c.lambda, 5e-4);
    fill(c.gamma1, *c.gamma0);
    fill(c.gamma2, *c.gamma0);
    fill(c.temperature, 0.0);
    fill(c.alpha1, Complex(1.0, 0.0));
    fill(c.alpha2, Complex(0.0, 0.0));
    fill(c.truncation, 10);
    fill(c.solver, Solver::rwa);
    fill(c.frame, Frame::rotating);
    fill(c.output_path, std::string("out"));
    fill(c.method, Method::exact);
    fill(c.spacing, Spacing::uniform);
    fill(c.rel_tol, 1e-8);
    fill(c.abs_tol, 1e-10);
    fill(c.temperatures, kDefaultSweepTemperatures);
    fill(c.truncations, std::vector<int>{6, 8, 10});
}

// Horizons depend on the resolved rates, so they are filled last.
void fill_horizon(RunConfig& c)
{
    const double lambda = *c.lambda;
    const double ups = resolved_upsilons(c, *c.temperature).plus;
    const double ups0 = resolved_upsilons(c, 0.0).plus;
    switch (*c.scenario) {
    case Scenario::fig1:
        // Until the exchange oscillation has dephased: 4/Upsilon.
        if (ups > 0.0) fill_half_periods(c, 4.0 * lambda / (std::numbers::pi * ups));
        break;
    case Scenario::fig2a:
        fill_half_periods(c, 20.0);
        break;
    case Scenario::convergence:
        fill_half_periods(c, 4.0);
        break;
    case Scenario::fig2c:
        if (ups > 0.0) {
            fill(c.t_final, 6.0 / ups);
            fill(c.sample_count, 2001);
        }
        break;
    case Scenario::fig3:
    case Scenario::sweep_temperature:
        // Half a zero-temperature dephasing time on a grid of 4000 intervals.
        if (ups0 > 0.0) {
            fill(c.t_final, 0.5 / ups0);
            fill(c.sample_count, 4001);
        }
        break;
    case Scenario::custom:
        break;
    }
    fill(c.t_final, 1e4);
    fill(c.sample_count, 1001);
}

void validate_resolved(const RunConfig& c)
{
    try {
        system_params(c).validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (*c.truncation < 2) throw ConfigError("truncation must be >= 2");
    if (!(*c.t_final > 0.0)) throw ConfigError("t_final must be > 0");
    if (*c.sample_count < 2) throw ConfigError("sample_count must be >= 2");
    if (!(*c.rel_tol > 0.0) || !(*c.abs_tol > 0.0)) throw ConfigError("rel_tol and abs_tol must be > 0");
    if (c.output_path->empty()) throw ConfigError("output_path must not be empty");
    if (*c.solver == Solver::rwa && *c.gamma1 != *c.gamma2) {
        throw ConfigError("solver rwa requires gamma1 == gamma2; use solver = redfield");
    }
    for (double t : *c.temperatures) {
        if (!(t >= 0.0)) throw ConfigError("temperatures must be >= 0");
    }
    const auto& ms = *c.truncations;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (ms[k] < 4) throw ConfigError("truncations must be >= 4");
        if (k > 0 && ms[k] <= ms[k - 1]) throw ConfigError("truncations must be strictly ascending");
    }
    try {
        integrator_config(c).validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

} // namespace

RunConfig resolve(const RunConfig& cfg)
{
    RunConfig c = cfg;
    fill(c.scenario, Scenario::custom);
    apply_preset(c);
    fill_defaults(c);
    if (*c.lambda < 0.0 || *c.omega0 <= 0.0) {
        throw ConfigError("lambda must be >= 0 and omega0 > 0");
    }
    if (!(*c.temperature >= 0.0) || !(*c.gamma0 >= 0.0)) {
        throw ConfigError("temperature and gamma0 must be >= 0");
    }
    fill_horizon(c);
    validate_resolved(c);
    return c;
}

SystemParams system_params(const RunConfig& r)
{
    SystemParams p;
    p.omega0 = r.omega0.value();
    p.mu1 = r.mu1.value();
    p.mu2 = r.mu2.value();
    p.lambda = r.lambda.value();
    p.gamma1 = r.gamma1.value();
    p.gamma2 = r.gamma2.value();
    p.temperature = r.temperature.value();
    return p;
}

IntegratorConfig integrator_config(const RunConfig& r)
{
    IntegratorConfig cfg;
    cfg.rel_tol = r.rel_tol.value();
    cfg.abs_tol = r.abs_tol.value();
    cfg.t_final = r.t_final.value();
    cfg.sample_count = r.sample_count.value();
    cfg.method = r.method.value();
    cfg.spacing = r.spacing.value();
    return cfg;
}

double dephasing_rate(const RunConfig& r)
{
    return upsilons(BathSpectrum{r.gamma1.value(), r.omega0.value(), r.temperature.value()}, r.lambda.value()).plus;
}

InitialState initial_state(const RunConfig& r)
{
    const int m = r.truncation.value();
    const StateVector psi1 = coherent_state(r.alpha1.value(), m);
    const StateVector psi2 = coherent_state(r.alpha2.value(), m);
    InitialState init;
    init.rho = product_density(psi1, psi2);
    init.truncation_deficit = std::max(psi1.truncation_deficit, psi2.truncation_deficit);
    init.truncation_warning = psi1.truncation_warning || psi2.truncation_warning;
    return init;
}

Trajectory simulate(const RunConfig& r)
{
    const SystemParams params = system_params(r);
    const TruncatedSpace space(r.truncation.value(), 2);
    const InitialState init = initial_state(r);
    const IntegratorConfig icfg = integrator_config(r);
    if (r.solver.value() == Solver::redfield) {
        return evolve_redfield(GeneratorRedfield(params, space), init.rho, icfg);
    }
    return evolve(GeneratorRWA(params, space, r.frame.value()), init.rho, icfg);
}

// ---------------------------------------------------------------------------
// Manifest

void write_manifest(std::ostream& out, const RunManifest& m)
{
    out << "# nldiss run manifest\n";
    out << format_config(m.config);
    out << "run.code_version = " << m.code_version << "\n";
    out << "run.status = " << m.status << "\n";
    std::string msg = m.message;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::replace(msg.begin(), msg.end(), '#', ' ');
    out << "run.message = " << msg << "\n";
    out << "run.wall_time_s = " << format_double(m.wall_time_s) << "\n";
    out << "run.steps = " << m.steps << "\n";
    out << "run.temperature_unit = " << m.temperature_unit << "\n";
    out << "diag.max_trace_dev = " << format_double(m.max_trace_dev) << "\n";
    out << "diag.max_herm_dev = " << format_double(m.max_herm_dev) << "\n";
    out << "diag.min_eigenvalue = " << format_double(m.min_eigenvalue) << "\n";
    out << "diag.p_even_drift = " << format_double(m.p_even_drift) << "\n";
    out << "derived.upsilon_plus = " << format_double(m.upsilon_plus) << "\n";
    out << "derived.upsilon_minus = " << format_double(m.upsilon_minus) << "\n";
    out << "derived.gamma_loss = " << format_double(m.gamma_loss) << "\n";
    out << "derived.gamma_gain = " << format_double(m.gamma_gain) << "\n";
    out << "derived.p_odd_initial = " << format_double(m.p_odd_initial) << "\n";
    out << "derived.truncation_deficit = " << format_double(m.truncation_deficit) << "\n";
}

RunManifest parse_manifest(const std::string& text)
{
    RunManifest m;
    std::string config_text;
    for (const auto& [key, value] : split_lines(text)) {
        if (key.find('.') == std::string::npos) {
            config_text += key + " = " + value + "\n";
            continue;
        }
        auto num = [&] { return parse_double(key, value); };
        if (key == "run.code_version") m.code_version = value;
        else if (key == "run.status") m.status = value;
        else if (key == "run.message") m.message = value;
        else if (key == "run.wall_time_s") m.wall_time_s = num();
        else if (key == "run.steps") m.steps = parse_int(key, value);
        else if (key == "run.temperature_unit") m.temperature_unit = value;
        else if (key == "diag.max_trace_dev") m.max_trace_dev = num();
        else if (key == "diag.max_herm_dev") m.max_herm_dev = num();
        else if (key == "diag.min_eigenvalue") m.min_eigenvalue = num();
        else if (key == "diag.p_even_drift") m.p_even_drift = num();
        else if (key == "derived.upsilon_plus") m.upsilon_plus = num();
        else if (key == "derived.upsilon_minus") m.upsilon_minus = num();
        else if (key == "derived.gamma_loss") m.gamma_loss = num();
        else if (key == "derived.gamma_gain") m.gamma_gain = num();
        else if (key == "derived.p_odd_initial") m.p_odd_initial = num();
        else if (key == "derived.truncation_deficit") m.truncation_deficit = num();
        else throw ConfigError("unknown manifest key '" + key + "'");
    }
    m.config = parse_config(config_text);
    return m;
}

RunManifest load_manifest(const fs::path& path)
{
    return parse_manifest(read_file(path));
}

// ---------------------------------------------------------------------------
// CSV

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double lambda, double upsilon)
{
    out << kTrajectoryHeader << "\n";
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const BlochRecord& r = traj.records[k];
        const double t = traj.times[k];
        const double cols[] = {t,   t * lambda / two_pi, t * upsilon, r.p00,        r.p10,    r.p01,
                               r.s, r.u,                 r.v,         r.w,          r.negativity, r.p_even,
                               r.p_odd, r.trace_dev,     r.min_eig};
        for (std::size_t c = 0; c < std::size(cols); ++c) out << (c ? "," : "") << format_double(cols[c]);
        out << "\n";
    }
}

namespace {

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw OutputError("cannot open " + path.string() + " for writing");
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) throw OutputError("write failed for " + path.string());
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError("cannot create directory " + dir.string());
}

RunManifest base_manifest(const RunConfig& r)
{
    RunManifest m;
    m.config = r;
    m.code_version = NLDISS_VERSION;
    const SystemParams p = system_params(r);
    const BathSpectrum bath = bath_for_mode(p, 1);
    const Upsilons ups = upsilons(bath, p.lambda);
    m.upsilon_plus = ups.plus;
    m.upsilon_minus = ups.minus;
    m.gamma_loss = rate_gamma(bath, 2.0 * p.omega0);
    m.gamma_gain = rate_gamma(bath, -2.0 * p.omega0);
    const InitialState init = initial_state(r);
    m.p_odd_initial = parity_populations(init.rho).odd;
    m.truncation_deficit = init.truncation_deficit;
    return m;
}

void write_manifest_file(const fs::path& path, const RunManifest& m)
{
    std::ofstream out = open_output(path);
    write_manifest(out, m);
    finish_output(out, path);
}

} // namespace

RunResult run_scenario(const RunConfig& cfg)
{
    RunResult result;
    result.config = resolve(cfg);
    const RunConfig& r = result.config;
    const fs::path dir = *r.output_path;
    ensure_directory(dir);
    const fs::path manifest_path = dir / "manifest.txt";
    const fs::path csv_path = dir / "trajectory.csv";

    RunManifest m = base_manifest(r);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        result.trajectory = simulate(r);
    } catch (const IntegrationError& e) {
        m.status = "integration_failure";
        m.message = std::string(e.what()) + " (last good time " + format_double(e.last_good_time) + ")";
        m.wall_time_s = elapsed();
        write_manifest_file(manifest_path, m);
        throw;
    }
    const Trajectory& traj = result.trajectory;
    m.wall_time_s = elapsed();
    m.max_trace_dev = traj.max_trace_dev();
    m.max_herm_dev = traj.max_herm_dev();
    m.min_eigenvalue = traj.min_eigenvalue();
    m.p_even_drift = traj.p_even_drift();
    m.steps = traj.stats.steps;

    std::ofstream csv = open_output(csv_path);
    write_trajectory_csv(csv, traj, *r.lambda, dephasing_rate(r));
    finish_output(csv, csv_path);
    write_manifest_file(manifest_path, m);
    result.manifest = std::move(m);
    return result;
}

// ---------------------------------------------------------------------------
// Sudden death, sweeps, convergence

EsdResult detect_esd(const std::vector<double>& times, const std::vector<double>& negativity, double threshold)
{
    if (times.size() != negativity.size()) throw std::invalid_argument("detect_esd: length mismatch");
    EsdResult r;
    const std::size_t n = times.size();
    // Death needs entanglement to have existed; the separable start does not count.
    std::size_t k = 0;
    while (k < n && !(negativity[k] > threshold)) ++k;
    for (; k + 1 < n; ++k) {
        if (negativity[k] <= threshold && negativity[k + 1] <= threshold) {
            r.esd_time = times[k];
            break;
        }
    }
    if (!r.esd_time) return r;
    for (std::size_t j = k + 1; j < n; ++j) {
        if (negativity[j] > threshold) {
            r.rebirth_time = times[j];
            break;
        }
    }
    return r;
}

EsdResult detect_esd(const Trajectory& traj, double threshold)
{
    std::vector<double> neg;
    neg.reserve(traj.records.size());
    for (const BlochRecord& rec : traj.records) neg.push_back(rec.negativity);
    return detect_esd(traj.times, neg, threshold);
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepEntry>& entries)
{
    auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string("none"); };
    out << "T,esd_time,rebirth_time,negativity_at_t_final\n";
    for (const SweepEntry& e : entries) {
        out << format_double(e.temperature) << "," << opt(e.esd.esd_time) << "," << opt(e.esd.rebirth_time) << ","
            << format_double(e.negativity_final) << "\n";
    }
}

std::vector<SweepEntry> sweep_temperature(const RunConfig& cfg, const std::vector<double>& temperatures)
{
    if (temperatures.empty()) throw ConfigError("sweep_temperature: empty temperature list");
    RunConfig base = cfg;
    fill(base.scenario, Scenario::sweep_temperature);
    // Resolve once at T = 0 so every entry shares the same window and grid.
    RunConfig at_zero = base;
    at_zero.temperature = 0.0;
    const RunConfig shared = resolve(at_zero);
    const fs::path root = *shared.output_path;
    ensure_directory(root);

    std::vector<SweepEntry> entries;
    for (std::size_t k = 0; k < temperatures.size(); ++k) {
        RunConfig one = shared;
        one.temperature = temperatures[k];
        one.output_path = (root / ("T_" + std::to_string(k))).string();
        const RunResult res = run_scenario(one);
        SweepEntry e;
        e.temperature = temperatures[k];
        e.esd = detect_esd(res.trajectory);
        e.negativity_final = res.trajectory.records.back().negativity;
        e.directory = *one.output_path;
        entries.push_back(std::move(e));
    }
    const fs::path summary = root / "summary.csv";
    std::ofstream out = open_output(summary);
    write_sweep_summary(out, entries);
    finish_output(out, summary);
    return entries;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows)
{
    out << "m_from,m_to,negativity_diff,p00_diff\n";
    for (const ConvergenceRow& r : rows) {
        out << r.m_from << "," << r.m_to << "," << format_double(r.negativity_diff) << ","
            << format_double(r.p00_diff) << "\n";
    }
}

std::vector<ConvergenceRow> convergence_report(const RunConfig& cfg, const std::vector<int>& truncations)
{
    if (truncations.size() < 2) throw ConfigError("convergence_report: need at least two truncations");
    for (std::size_t k = 0; k < truncations.size(); ++k) {
        if (truncations[k] < 4) throw ConfigError("convergence_report: truncations must be >= 4");
        if (k > 0 && truncations[k] <= truncations[k - 1]) {
            throw ConfigError("convergence_report: truncations must be strictly ascending");
        }
    }
    RunConfig base = cfg;
    fill(base.scenario, Scenario::convergence);
    base.truncation = truncations.front();
    const RunConfig shared = resolve(base);
    const fs::path root = *shared.output_path;
    ensure_directory(root);

    std::vector<Trajectory> runs;
    for (int m : truncations) {
        RunConfig one = shared;
        one.truncation = m;
        one.output_path = (root / ("M_" + std::to_string(m))).string();
        runs.push_back(run_scenario(one).trajectory);
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        ConvergenceRow row{truncations[k - 1], truncations[k], 0.0, 0.0};
        const auto& a = runs[k - 1].records;
        const auto& b = runs[k].records;
        for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) {
            row.negativity_diff = std::max(row.negativity_diff, std::abs(a[j].negativity - b[j].negativity));
            row.p00_diff = std::max(row.p00_diff, std::abs(a[j].p00 - b[j].p00));
        }
        rows.push_back(row);
    }
    const fs::path csv = root / "convergence.csv";
    std::ofstream out = open_output(csv);
    write_convergence_csv(out, rows);
    finish_output(out, csv);
    return rows;
}

} // namespace nldiss
