// oracle.cpp — Closed-form Bloch dynamics

#include "nldiss/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace nldiss {

BlochState bloch_solution(const BlochInitial& init, double t)
{
    if (t < 0.0) throw std::domain_error("bloch_solution: t must be >= 0");
    const double decay = std::exp(-init.upsilon * t);
    const double decay2 = std::exp(-2.0 * init.upsilon * t);
    const double cs = std::cos(init.lambda * t);
    const double sn = std::sin(init.lambda * t);
    BlochState x;
    x.s = init.p_odd;
    x.w = decay * (init.w0 * cs - init.v0 * sn);
    x.u = init.p_odd * (decay2 - 1.0) + init.u0 * decay2;
    x.v = decay * (init.v0 * cs + init.w0 * sn);
    return x;
}

BlochState bloch_derivative(const BlochInitial& init, const BlochState& x)
{
    const double g = init.upsilon;
    return {0.0, -2.0 * g * (x.u + init.p_odd), -g * x.v + init.lambda * x.w, -g * x.w - init.lambda * x.v};
}

double steady_negativity_two_displaced(double p_odd)
{
    return asymptotic_negativity(p_odd);
}

} // namespace nldiss
