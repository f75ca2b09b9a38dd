// acceptance.cpp — Runs the reference scenarios and prints one PASS/FAIL line per acceptance criterion

#include "nldiss/experiments.hpp"
#include "nldiss/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nldiss;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    int id = 0;
    bool pass = false;
    std::string title;
    std::string detail;
};

std::vector<Verdict> verdicts;
std::ofstream report;

std::string fmt(const char* spec, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string sci(double x) { return fmt("%.4g", x); }

void emit(int id, bool pass, const std::string& title, const std::string& detail)
{
    verdicts.push_back({id, pass, title, detail});
    std::ostringstream line;
    line << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << title << "  [" << detail << "]";
    std::cout << line.str() << std::endl;
    report << line.str() << '\n';
    report.flush();
}

void note(const std::string& text)
{
    std::cout << "  " << text << std::endl;
    report << "  " << text << '\n';
}

// Diagnostics gathered from every run for the property suite.
struct RunDiag {
    std::string name;
    double trace_dev = 0.0;
    double p_even_drift = 0.0;
    double min_eig = 0.0;
    bool lindblad = true;
};

std::vector<RunDiag> runs;

void record(const std::string& name, const Trajectory& tr, bool lindblad)
{
    runs.push_back({name, tr.max_trace_dev(), tr.p_even_drift(), tr.min_eigenvalue(), lindblad});
}

RunConfig scenario(Scenario s, const fs::path& out)
{
    RunConfig c;
    c.scenario = s;
    c.output_path = out.string();
    return c;
}

// ---------------------------------------------------------------------------

void criterion1(const RunResult& fig1)
{
    const double lambda = *fig1.config.lambda;
    const double t_after = 10.0 * 2.0 * kPi / (4.0 * lambda);
    const double p00_ref = std::exp(-1.0) * std::cosh(1.0);
    const double s_ref = std::exp(-1.0) * std::sinh(1.0);
    double worst_p00 = 0.0, worst_s = 0.0;
    int checked = 0;
    const auto& recs = fig1.trajectory.records;
    for (std::size_t k = 0; k < recs.size(); ++k) {
        if (fig1.trajectory.times[k] <= t_after) continue;
        worst_p00 = std::max(worst_p00, std::abs(recs[k].p00 - p00_ref));
        worst_s = std::max(worst_s, std::abs(recs[k].s - s_ref));
        ++checked;
    }
    const double wall = fig1.manifest.wall_time_s;
    const bool pass = checked > 0 && worst_p00 < 5e-3 && worst_s < 5e-3 && wall <= 300.0;
    emit(1, pass, "steady populations P00 = e^-1 cosh 1, P01 + P10 = e^-1 sinh 1 within 5e-3, runtime <= 300 s",
         "max|P00 - " + fmt("%.5f", p00_ref) + "| = " + sci(worst_p00) + ", max|s - " + fmt("%.5f", s_ref) +
             "| = " + sci(worst_s) + " over " + std::to_string(checked) + " samples, fig1 wall time " +
             fmt("%.1f", wall) + " s");
}

void criterion2(const RunResult& fig1)
{
    const auto& t = fig1.trajectory.times;
    const auto& r = fig1.trajectory.records;
    const double lambda = *fig1.config.lambda;
    const double ups = fig1.manifest.upsilon_minus;

    // Period from successive upward zero crossings of w = P10 - P01 during the first 40 periods.
    std::vector<double> ups_crossings;
    for (std::size_t k = 1; k < r.size() && t[k] < 80.0 * kPi / lambda; ++k) {
        const double a = r[k - 1].w, b = r[k].w;
        if (a < 0.0 && b >= 0.0) ups_crossings.push_back(t[k - 1] + (t[k] - t[k - 1]) * (-a) / (b - a));
    }
    double period = 0.0;
    if (ups_crossings.size() >= 2) {
        period = (ups_crossings.back() - ups_crossings.front()) / static_cast<double>(ups_crossings.size() - 1);
    }
    const double period_ref = 2.0 * kPi / lambda;
    const bool period_ok = period > 0.0 && std::abs(period / period_ref - 1.0) < 1e-2;

    // Equalization: |P10 - P01| < 1e-2 P_odd for t >= 4/Upsilon.
    const double t_eq = 4.0 / ups;
    double worst_ratio = 0.0;
    int eq_samples = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (t[k] < t_eq) continue;
        worst_ratio = std::max(worst_ratio, std::abs(r[k].w) / r[k].p_odd);
        ++eq_samples;
    }
    const bool eq_ok = eq_samples > 0 && worst_ratio < 1e-2;

    // Envelope: Bloch solution seeded from the simulator at the end of the transient.
    const double t_tr = 2.0 * kPi / (4.0 * lambda);
    std::size_t k0 = 0;
    while (k0 < t.size() && t[k0] < t_tr - 1e-9 * t_tr) ++k0;
    double env = 0.0, uvw = 0.0;
    if (k0 < t.size()) {
        const BlochRecord& x0 = r[k0];
        const BlochInitial init{x0.s, x0.u, x0.v, x0.w, x0.p_odd, lambda, ups};
        for (std::size_t k = k0; k < t.size(); ++k) {
            const BlochState x = bloch_solution(init, t[k] - t[k0]);
            env = std::max({env, std::abs(r[k].p10 - 0.5 * (x.s + x.w)), std::abs(r[k].p01 - 0.5 * (x.s - x.w))});
            uvw = std::max({uvw, std::abs(r[k].u - x.u), std::abs(r[k].v - x.v), std::abs(r[k].w - x.w)});
        }
    }
    const bool env_ok = k0 < t.size() && env < 5e-3;

    emit(2, period_ok && eq_ok && env_ok,
         "P10/P01 oscillate with period 2 pi/lambda, equalize to 1e-2 P_odd by 4/Upsilon, envelope within 5e-3",
         "period " + fmt("%.6g", period) + " vs " + fmt("%.6g", period_ref) + (period_ok ? " ok" : " off") +
             "; max|P10 - P01|/P_odd after 4/Upsilon = " + sci(worst_ratio) + (eq_ok ? " ok" : " (> 1e-2)") +
             "; envelope sup " + sci(env) + (env_ok ? " ok" : " (> 5e-3)") + ", (u,v,w) sup " + sci(uvw));
    if (!eq_ok && k0 < t.size()) {
        // Bloch radius at the end of the transient sets the oscillation amplitude of w.
        const double r0 = std::hypot(r[k0].w, r[k0].v);
        note("Bloch radius after the transient " + sci(r0) + " (" + fmt("%.3f", r0 / r[k0].p_odd) +
             " P_odd); the closed form leaves |w| up to " + sci(r0 * std::exp(-4.0) / r[k0].p_odd) +
             " P_odd at t = 4/Upsilon and needs t = " + fmt("%.2f", std::log(r0 / (1e-2 * r[k0].p_odd))) +
             "/Upsilon to reach 1e-2");
    }
}

void criterion3(const RunResult& fig1)
{
    const auto& t = fig1.trajectory.times;
    const auto& r = fig1.trajectory.records;
    const double lambda = *fig1.config.lambda;
    const double half = kPi / lambda;
    const double dt = t[1] - t[0];

    int total = 0, missed = 0;
    double worst = 0.0, worst_t = 0.0;
    std::vector<double> missed_at;
    for (int k = 1;; ++k) {
        const double th = k * half;
        if (th > t.back() + 0.5 * dt) break;
        ++total;
        const auto c = static_cast<std::size_t>(std::llround(th / dt));
        double best = r[c].negativity;
        if (c > 0) best = std::min(best, r[c - 1].negativity);
        if (c + 1 < r.size()) best = std::min(best, r[c + 1].negativity);
        if (!(best < 1e-4)) {
            ++missed;
            missed_at.push_back(th);
        }
        if (best > worst) {
            worst = best;
            worst_t = th;
        }
    }

    // Peaks: inside every half-period the sampled maximum of N sits where |P10 - P01| < 1e-2.
    int windows = 0, off_peak = 0;
    for (int k = 0;; ++k) {
        const double a = k * half, b = (k + 1) * half;
        if (b > t.back() + 0.5 * dt) break;
        std::size_t best = 0;
        double nmax = -1.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (t[j] <= a + 0.5 * dt || t[j] >= b - 0.5 * dt) continue;
            if (r[j].negativity > nmax) {
                nmax = r[j].negativity;
                best = j;
            }
        }
        if (nmax < 0.0) continue;
        ++windows;
        if (!(std::abs(r[best].w) < 1e-2)) ++off_peak;
    }

    const bool pass = total > 0 && missed == 0 && off_peak == 0;
    std::string where;
    if (!missed_at.empty()) {
        where = ", first missed at t lambda/2pi = " + fmt("%.1f", missed_at.front() * lambda / (2 * kPi)) +
                ", last at " + fmt("%.1f", missed_at.back() * lambda / (2 * kPi));
    }
    emit(3, pass, "negativity < 1e-4 within one sample of every half-period, peaks where |P10 - P01| < 1e-2",
         std::to_string(total - missed) + "/" + std::to_string(total) + " half-periods reach < 1e-4" + where +
             "; largest near-zero value " + sci(worst) + " at t lambda/2pi = " +
             fmt("%.1f", worst_t * lambda / (2 * kPi)) + "; peaks at |w| < 1e-2 in " +
             std::to_string(windows - off_peak) + "/" + std::to_string(windows) + " half-periods");
    if (missed > 0) {
        // Dephasing-built coherence sets the floor at a half-period: N ~ (u/2)^2 / P00 when P01 ~ 0.
        const double last_half = std::floor(t.back() / half + 0.5) * half;
        const auto c = static_cast<std::size_t>(std::llround(last_half / dt));
        const BlochRecord& e = r[std::min(c, r.size() - 1)];
        note("at half-periods the excitation is localized (|w| ~ P_odd) but u = " + sci(e.u) + " at the end; "
             "the PT block on {|0,0>, |1,1>} gives N ~ (u/2)^2/P00 = " + sci(0.25 * e.u * e.u / e.p00));
    }
}

void criteria4and5(const fs::path& root)
{
    const RunResult fig2c = run_scenario(scenario(Scenario::fig2c, root / "fig2c"));
    record("fig2c", fig2c.trajectory, true);
    const double p_odd_ref = std::exp(-2.0) * std::sinh(2.0);
    const double n_ref = asymptotic_negativity(p_odd_ref);
    const BlochRecord& last = fig2c.trajectory.records.back();
    const double diff = std::abs(last.negativity - n_ref);
    emit(4, diff < 5e-3, "negativity at t = 6/Upsilon within 5e-3 of the closed form at P_odd = e^-2 sinh 2",
         "N = " + fmt("%.6f", last.negativity) + " vs " + fmt("%.6f", n_ref) + ", |diff| = " + sci(diff) +
             ", simulated P_odd " + fmt("%.6f", last.p_odd) + " vs " + fmt("%.6f", p_odd_ref) + ", wall " +
             fmt("%.1f", fig2c.manifest.wall_time_s) + " s");

    // Switch the coupling off and keep evolving for 1/Gamma0.
    SystemParams p = system_params(fig2c.config);
    p.lambda = 0.0;
    const GeneratorRWA off(p, fig2c.trajectory.final_state.space(), *fig2c.config.frame);
    IntegratorConfig cfg = integrator_config(fig2c.config);
    cfg.t_final = 1.0 / *fig2c.config.gamma0;
    cfg.sample_count = 201;
    const Trajectory cont = evolve(off, fig2c.trajectory.final_state, cfg);
    record("fig2c lambda = 0 continuation", cont, true);
    const double n0 = cont.records.front().negativity;
    double drift = 0.0;
    for (const BlochRecord& x : cont.records) drift = std::max(drift, std::abs(x.negativity - n0));
    emit(5, drift < 1e-6, "with lambda switched off the negativity stays constant to 1e-6 over 1/Gamma0",
         "N0 = " + fmt("%.6f", n0) + ", max|N - N0| = " + sci(drift) + " over " +
             std::to_string(cont.records.size()) + " samples");
}

void criterion6(const fs::path& root)
{
    const std::vector<double> temps{1e-3, 1e-2, 5e-2, 1e-1};
    const auto entries = sweep_temperature(scenario(Scenario::sweep_temperature, root / "sweep"), temps);
    for (const SweepEntry& e : entries) {
        const RunManifest m = load_manifest(e.directory / "manifest.txt");
        runs.push_back({"sweep T = " + sci(e.temperature), m.max_trace_dev, m.p_even_drift, m.min_eigenvalue, true});
    }
    bool none_low = false, finite_high = true, monotone = true;
    double prev_t = -1.0, prev_esd = 0.0;
    std::string table;
    for (const SweepEntry& e : entries) {
        const bool has = e.esd.esd_time.has_value();
        if (e.temperature == 1e-3) none_low = !has;
        if (e.temperature >= 5e-2 && !has) finite_high = false;
        if (has) {
            if (prev_t >= 0.0 && !(*e.esd.esd_time < prev_esd)) monotone = false;
            prev_t = e.temperature;
            prev_esd = *e.esd.esd_time;
        }
        table += (table.empty() ? "" : "; ") + std::string("T=") + sci(e.temperature) + " esd " +
                 (has ? sci(*e.esd.esd_time) : std::string("none")) + " N_final " + sci(e.negativity_final);
    }
    const double window = entries.empty() ? 0.0 : load_manifest(entries[0].directory / "manifest.txt").config.t_final.value();
    emit(6, none_low && finite_high && monotone,
         "no ESD at T = 1e-3, finite esd_time at T >= 5e-2, esd_time decreasing with T",
         table + "; window " + sci(window));
    for (const SweepEntry& e : entries) {
        if (e.temperature >= 5e-2 && !e.esd.esd_time) {
            std::ifstream csv(e.directory / "trajectory.csv");
            std::string line;
            std::getline(csv, line);
            double nmin = 1.0, tmin = 0.0;
            bool seen = false;
            while (std::getline(csv, line)) {
                std::vector<std::string> cols;
                std::stringstream ss(line);
                for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
                const double tt = std::stod(cols[0]), n = std::stod(cols[10]);
                if (n > kEsdThreshold) seen = true;
                if (seen && n < nmin) {
                    nmin = n;
                    tmin = tt;
                }
            }
            note("T = " + sci(e.temperature) + ": smallest sampled negativity after onset " + sci(nmin) + " at t = " +
                 sci(tmin) + ", above the 1e-9 death threshold");
        }
    }
}

void criterion7(const fs::path& root)
{
    RunConfig base = scenario(Scenario::fig1, root / "rwa_m6");
    base.truncation = 6;
    base.t_final = 4.0 * kPi / 5e-4;
    base.sample_count = 401;
    const RunResult rwa = run_scenario(base);
    record("fig1 M=6 rwa", rwa.trajectory, true);
    RunConfig rf = base;
    rf.solver = Solver::redfield;
    rf.output_path = (root / "redfield_m6").string();
    const RunResult red = run_scenario(rf);
    record("fig1 M=6 redfield", red.trajectory, false);

    double sup = 0.0, pop = 0.0;
    for (std::size_t k = 0; k < rwa.trajectory.records.size(); ++k) {
        const BlochRecord& a = rwa.trajectory.records[k];
        const BlochRecord& b = red.trajectory.records[k];
        sup = std::max(sup, std::abs(a.negativity - b.negativity));
        pop = std::max({pop, std::abs(a.p00 - b.p00), std::abs(a.p10 - b.p10), std::abs(a.p01 - b.p01)});
    }
    emit(7, sup < 5e-2, "M = 6 Redfield vs RWA negativity sup-norm < 5e-2 over [0, 4 pi/lambda]",
         "sup|N_rwa - N_redfield| = " + sci(sup) + ", manifold populations sup diff " + sci(pop) +
             ", Redfield min eigenvalue " + sci(red.trajectory.min_eigenvalue()));
}

// Property suite.
DensityMatrix random_manifold(const TruncatedSpace& s, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double a = u01(rng), b = u01(rng), c = u01(rng);
    const double sum = a + b + c;
    a /= sum, b /= sum, c /= sum;
    const Complex coh = std::polar(std::sqrt(b * c) * u01(rng), 2.0 * kPi * u01(rng));
    return manifold_state(s, a, b + c, 2.0 * coh.real(), 2.0 * coh.imag(), b - c);
}

void criterion8()
{
    std::vector<std::string> failed;
    auto check = [&](bool ok, const std::string& what, const std::string& value) {
        note(std::string(ok ? "ok   " : "FAIL ") + what + ": " + value);
        if (!ok) failed.push_back(what);
    };

    double trace = 0.0, parity = 0.0, eig = 0.0;
    std::string worst_eig_run;
    for (const RunDiag& d : runs) {
        trace = std::max(trace, d.trace_dev);
        parity = std::max(parity, d.p_even_drift);
        if (d.lindblad && d.min_eig < eig) {
            eig = d.min_eig;
            worst_eig_run = d.name;
        }
    }

    // Manifold invariance at T = 0 on the paper parameters.
    const TruncatedSpace space(10);
    const SystemParams paper;
    const GeneratorRWA gen(paper, space);
    const DensityMatrix m0 = manifold_state(space, 0.5, 0.5, 0.2, 0.1, 0.3);
    IntegratorConfig ic;
    ic.method = Method::exact;
    ic.t_final = 4e6;
    ic.sample_count = 5;
    const Trajectory mt = evolve(gen, m0, ic);
    record("manifold invariance", mt, true);
    const Eigen::Index keep[3] = {space.index(0, 0), space.index(1, 0), space.index(0, 1)};
    ComplexMatrix outside = mt.final_state.matrix();
    for (Eigen::Index a : keep)
        for (Eigen::Index b : keep) outside(a, b) = 0.0;
    const double leak = max_abs(outside);
    trace = std::max(trace, mt.max_trace_dev());
    parity = std::max(parity, mt.p_even_drift());

    check(trace < 1e-8, "trace drift < 1e-8 over every run", sci(trace) + " over " + std::to_string(runs.size()) + " runs");
    check(parity < 1e-8, "P_even drift < 1e-8 over every run", sci(parity));
    check(eig > -1e-8, "Lindblad min eigenvalue > -1e-8", sci(eig) + " (" + worst_eig_run + ")");
    check(leak < 1e-9, "manifold invariance at T = 0 to 1e-9", sci(leak) + " after t = 4e6 at M = 10");

    std::mt19937 rng(2024);
    const TruncatedSpace s3(3);
    double vieta = 0.0;
    for (int k = 0; k < 100; ++k) {
        const VietaProduct v = vieta_product(random_manifold(s3, rng));
        vieta = std::max(vieta, std::abs(v.lhs - v.rhs));
    }
    check(vieta < 1e-10, "Vieta identity on 100 random manifold states to 1e-10", sci(vieta));

    double closed = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double q = 0.1 * k;
        const DensityMatrix st = manifold_state(s3, 1.0 - q, q, -q, 0.0, 0.0);
        closed = std::max(closed, std::abs(negativity(st) - asymptotic_negativity(q)));
    }
    check(closed < 1e-12, "closed-form asymptotic negativity equals the PT eigensolve to 1e-12", sci(closed));

    ComplexVector bell = ComplexVector::Zero(s3.dim());
    bell(s3.index(0, 1)) = bell(s3.index(1, 0)) = 1.0 / std::sqrt(2.0);
    const double nb = negativity(pure_density(s3, bell));
    double np = 0.0;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        ComplexVector a(4), b(4);
        for (int j = 0; j < 4; ++j) a(j) = Complex(g(rng), g(rng)), b(j) = Complex(g(rng), g(rng));
        np = std::max(np, negativity(product_density(StateVector{TruncatedSpace(4, 1), a.normalized()},
                                                     StateVector{TruncatedSpace(4, 1), b.normalized()})));
    }
    check(std::abs(nb - 0.5) < 1e-12 && np < 1e-12, "Bell negativity 0.5 and product negativity 0 to 1e-12",
          "Bell " + fmt("%.15f", nb) + ", product max " + sci(np));

    // Bloch-equation consistency of the generator on manifold states at T = 0.
    double ode = 0.0;
    const double ups = gen.upsilon().minus;
    for (int k = 0; k < 20; ++k) {
        const DensityMatrix st = random_manifold(space, rng);
        const BlochRecord x = bloch_extract(st);
        const BlochRecord dx = bloch_extract(DensityMatrix::unchecked(space, rhs_rwa(gen, st)));
        const BlochInitial init{x.s, x.u, x.v, x.w, x.s, paper.lambda, ups};
        const BlochState ref = bloch_derivative(init, BlochState{x.s, x.u, x.v, x.w});
        const double scale = std::max({std::abs(ref.u), std::abs(ref.v), std::abs(ref.w)});
        ode = std::max({ode, std::abs(dx.u - ref.u) / scale, std::abs(dx.v - ref.v) / scale,
                        std::abs(dx.w - ref.w) / scale, std::abs(dx.s) / scale});
    }
    check(ode < 1e-3, "Bloch ODE consistency to relative 1e-3", sci(ode));

    std::string detail = failed.empty() ? "all sub-properties hold" : "failing:";
    for (std::size_t k = 0; k < failed.size(); ++k) detail += (k ? "; " : " ") + failed[k];
    emit(8, failed.empty(), "property suites", detail);
}

} // namespace

int main(int argc, char** argv)
{
    bool strict = false;
    fs::path root = "acceptance_out";
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a == "--strict") strict = true;
        else root = a;
    }
    try {
        fs::create_directories(root);
        report.open(root / "acceptance.txt");
        const auto start = std::chrono::steady_clock::now();

        const RunResult fig1 = run_scenario(scenario(Scenario::fig1, root / "fig1"));
        record("fig1", fig1.trajectory, true);
        criterion1(fig1);
        criterion2(fig1);
        criterion3(fig1);
        criteria4and5(root);
        criterion6(root);
        criterion7(root);
        criterion8();

        const auto passed = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream tail;
        tail << "acceptance: " << passed << "/" << verdicts.size() << " criteria pass, " << fmt("%.0f", wall)
             << " s total";
        std::cout << tail.str() << std::endl;
        report << tail.str() << '\n';
        // Every criterion was evaluated; failing verdicts are reported above and only change the exit code under --strict.
        return strict && passed != static_cast<long>(verdicts.size()) ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "acceptance: evaluation aborted: " << e.what() << std::endl;
        return 2;
    }
}
