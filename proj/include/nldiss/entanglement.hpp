// entanglement.hpp — Partial transpose, negativity, parity and Bloch-vector observables

#pragma once

#include "nldiss/fock.hpp"

#include <utility>

namespace nldiss {

// Eigenvalues below -kNegativityFloor count toward the negativity.
inline constexpr double kNegativityFloor = 1e-12;
// Sudden-death detection threshold on the negativity.
inline constexpr double kEsdThreshold = 1e-9;

/// Observables on the manifold span{|0,0>, |0,1>, |1,0>} plus global diagnostics.
struct BlochRecord {
    double time = 0.0;
    double p00 = 0.0;
    double p10 = 0.0;
    double p01 = 0.0;
    double s = 0.0;  // P01 + P10
    double u = 0.0;  // rho_{01,10} + rho_{10,01}
    double v = 0.0;  // -i (rho_{10,01} - rho_{01,10})
    double w = 0.0;  // P10 - P01
    double negativity = 0.0;
    double p_even = 0.0;
    double p_odd = 0.0;
    double trace_dev = 0.0;
    double min_eig = 0.0;
    double herm_dev = 0.0;
};

struct ParityPopulations {
    double even = 0.0;
    double odd = 0.0;
};

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const TruncatedSpace& space, int subsystem = 1);
inline ComplexMatrix partial_transpose(const DensityMatrix& rho, int subsystem = 1)
{
    return partial_transpose(rho.matrix(), rho.space(), subsystem);
}

double negativity(const DensityMatrix& rho);
// (||rho^T1||_1 - trace)/2, the trace-norm form.
double negativity_trace_norm(const DensityMatrix& rho);

ParityPopulations parity_populations(const DensityMatrix& rho);

// Fills p00, p10, p01, s, u, v, w; everything else is left at zero.
BlochRecord bloch_extract(const DensityMatrix& rho);

// Full record: Bloch components, parity, negativity and diagnostics of a (possibly raw) state.
BlochRecord analyze_state(const DensityMatrix& raw, double time);

struct VietaProduct {
    double lhs = 0.0;  // product of the eigenvalues of the restricted partial transpose
    double rhs = 0.0;  // -|rho_{01,10}|^2 P10 P01
};

// Precondition: population outside span{|0,0>,|0,1>,|1,0>} below `leakage_tol`.
VietaProduct vieta_product(const DensityMatrix& rho, double leakage_tol = 1e-6);

// Long-time negativity 1/2 (p - 1 + sqrt((p-1)^2 + p^2)) of the dephased manifold state.
double asymptotic_negativity(double p_odd);

// Manifold state with the given Bloch components and vanishing |0,0>-coherences.
DensityMatrix manifold_state(const TruncatedSpace& space, double p00, double s, double u, double v, double w);

} // namespace nldiss
