// lindblad.cpp — RWA master-equation propagation and trajectory sampling

#include "nldiss/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace nldiss {

double Trajectory::max_trace_dev() const
{
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.trace_dev);
    return m;
}

double Trajectory::max_herm_dev() const
{
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.herm_dev);
    return m;
}

double Trajectory::min_eigenvalue() const
{
    double m = records.empty() ? 0.0 : records.front().min_eig;
    for (const auto& r : records) m = std::min(m, r.min_eig);
    return m;
}

double Trajectory::p_even_drift() const
{
    if (records.empty()) return 0.0;
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, std::abs(r.p_even - records.front().p_even));
    return m;
}

Trajectory collect_trajectory(const TruncatedSpace& space, const std::vector<double>& times,
                              const std::function<IntegrationStats(const SampleCallback&)>& run)
{
    Trajectory traj;
    traj.times.reserve(times.size());
    traj.records.reserve(times.size());
    ComplexMatrix last;
    traj.stats = run([&](double t, const ComplexMatrix& rho) {
        const DensityMatrix raw = DensityMatrix::unchecked(space, rho);
        traj.times.push_back(t);
        traj.records.push_back(analyze_state(raw, t));
        last = rho;
    });
    traj.final_state = DensityMatrix::unchecked(space, std::move(last));
    return traj;
}

IntegratorConfig resolve_rwa_config(const GeneratorRWA& gen, IntegratorConfig cfg)
{
    if (cfg.max_step == 0.0 && gen.frame() == Frame::rotating && gen.params().lambda > 0.0) {
        cfg.max_step = 0.1 / gen.params().lambda;
    }
    return cfg;
}

Trajectory evolve(const GeneratorRWA& gen, const DensityMatrix& rho0, const IntegratorConfig& cfg_in)
{
    if (!(rho0.space() == gen.space())) throw DimensionMismatch("evolve: initial state and generator spaces differ");
    IntegratorConfig cfg = resolve_rwa_config(gen, cfg_in);
    const std::vector<double> times = sample_times(cfg);
    const LinearGenerator rhs = [&gen](const ComplexMatrix& rho, ComplexMatrix& out) { gen.rhs(rho, out); };

    if (cfg.method == Method::exact) {
        ExactPropagator prop(gen.space().dim(), gen.superoperator());
        Trajectory traj = collect_trajectory(gen.space(), times, [&](const SampleCallback& cb) {
            return integrate_exact(prop, rho0.matrix(), times, cb);
        });
        traj.config = cfg;
        return traj;
    }

    auto run_rk = [&](const IntegratorConfig& c) {
        Trajectory traj = collect_trajectory(gen.space(), times, [&](const SampleCallback& cb) {
            return integrate_adaptive(rhs, rho0.matrix(), times, c, cb);
        });
        traj.config = c;
        return traj;
    };
    Trajectory traj = run_rk(cfg);
    if (cfg.auto_tighten && traj.max_trace_dev() > cfg.drift_limit) {
        IntegratorConfig tight = cfg;
        tight.rel_tol /= 10.0;
        tight.abs_tol /= 10.0;
        traj = run_rk(tight);
    }
    return traj;
}

} // namespace nldiss
