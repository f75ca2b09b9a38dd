// helpers.hpp — Shared fixtures for the unit suite: random states and a dense reference generator

#pragma once

#include "nldiss/model.hpp"

#include <random>

namespace nldiss::testing {

inline ComplexMatrix random_matrix(int n, std::mt19937& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) m(r, c) = Complex(g(rng), g(rng));
    }
    return m;
}

inline ComplexVector random_vector(int n, std::mt19937& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(n);
    for (int k = 0; k < n; ++k) v(k) = Complex(g(rng), g(rng));
    return v.normalized();
}

inline ComplexMatrix random_hermitian(int n, std::mt19937& rng)
{
    const ComplexMatrix a = random_matrix(n, rng);
    return 0.5 * (a + a.adjoint());
}

// Random mixed state: A A^dagger / tr.
inline ComplexMatrix random_density(int n, std::mt19937& rng)
{
    const ComplexMatrix a = random_matrix(n, rng);
    ComplexMatrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

// Dense textbook form of the RWA generator, assembled independently of GeneratorRWA::rhs.
inline ComplexMatrix reference_rhs(const SystemParams& p, const TruncatedSpace& space, Frame frame,
                                   const ComplexMatrix& rho)
{
    const Complex i{0.0, 1.0};
    const ComplexMatrix h = hamiltonian_rwa(p, space, frame);
    const ComplexMatrix a1 = lower_on_mode(space, 1);
    const ComplexMatrix a2 = lower_on_mode(space, 2);
    const BathSpectrum bath{p.gamma1, p.omega0, p.temperature};
    const double loss = rate_gamma(bath, 2.0 * p.omega0);
    const double gain = rate_gamma(bath, -2.0 * p.omega0);
    ComplexMatrix out = -i * (h * rho - rho * h);
    for (const ComplexMatrix* a : {&a1, &a2}) {
        const ComplexMatrix up = a->adjoint() * a->adjoint();
        const ComplexMatrix down = (*a) * (*a);
        out += loss * lindblad_apply(up, rho) + gain * lindblad_apply(down, rho);
    }
    const Upsilons ups = upsilons(bath, p.lambda);
    const ComplexMatrix d = number_on_mode(space, 1) - number_on_mode(space, 2);
    const ComplexMatrix j = a1.adjoint() * a2 - a2.adjoint() * a1;
    const ComplexMatrix jd = j.adjoint();
    out += ups.plus * lindblad_apply(d, rho);
    out -= 0.5 * ups.minus * (d * j * rho - j * rho * d + rho * jd * d - d * rho * jd);
    return out;
}

} // namespace nldiss::testing
