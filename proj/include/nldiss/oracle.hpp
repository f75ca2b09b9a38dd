// oracle.hpp — Closed-form Bloch dynamics on the single-excitation manifold

#pragma once

#include "nldiss/entanglement.hpp"

namespace nldiss {

// Valid for lambda >> Upsilon+ = Upsilon- = Upsilon.
struct BlochInitial {
    double s0 = 0.0;
    double u0 = 0.0;
    double v0 = 0.0;
    double w0 = 0.0;
    double p_odd = 0.0;
    double lambda = 0.0;
    double upsilon = 0.0;
};

struct BlochState {
    double s = 0.0;
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
};

BlochState bloch_solution(const BlochInitial& init, double t);

// Right-hand side of the Bloch equations the closed form solves.
BlochState bloch_derivative(const BlochInitial& init, const BlochState& x);

double steady_negativity_two_displaced(double p_odd);

} // namespace nldiss
