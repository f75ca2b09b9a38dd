// lindblad.hpp — Time evolution under the RWA master equation

#pragma once

#include "nldiss/entanglement.hpp"
#include "nldiss/integrator.hpp"
#include "nldiss/model.hpp"

#include <vector>

namespace nldiss {

struct Trajectory {
    std::vector<double> times;
    std::vector<BlochRecord> records;
    DensityMatrix final_state = DensityMatrix::unchecked(TruncatedSpace(2), ComplexMatrix::Zero(4, 4));
    IntegrationStats stats;
    IntegratorConfig config;  // as actually used, after any automatic tightening

    double max_trace_dev() const;
    double max_herm_dev() const;
    double min_eigenvalue() const;
    // max_k |P_even(t_k) - P_even(0)|
    double p_even_drift() const;
};

// Samples the state at `times` and records observables of the Hermitized, normalized copy.
Trajectory collect_trajectory(const TruncatedSpace& space, const std::vector<double>& times,
                              const std::function<IntegrationStats(const SampleCallback&)>& run);

// Default step bound 0.1/lambda in the rotating frame when cfg.max_step is unset.
IntegratorConfig resolve_rwa_config(const GeneratorRWA& gen, IntegratorConfig cfg);

Trajectory evolve(const GeneratorRWA& gen, const DensityMatrix& rho0, const IntegratorConfig& cfg);

} // namespace nldiss
