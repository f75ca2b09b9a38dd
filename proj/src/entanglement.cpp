// entanglement.cpp — State analysis on the two-oscillator Fock space

#include "nldiss/entanglement.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace nldiss {

namespace {

void require_two_modes(const TruncatedSpace& space, const char* who)
{
    if (space.num_modes() != 2) throw InvalidDimension(std::string(who) + ": requires a two-mode space");
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m)
{
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const TruncatedSpace& space, int subsystem)
{
    require_two_modes(space, "partial_transpose");
    if (subsystem != 1 && subsystem != 2) throw std::invalid_argument("partial_transpose: subsystem must be 1 or 2");
    if (rho.rows() != space.dim() || rho.cols() != space.dim()) {
        throw DimensionMismatch("partial_transpose: matrix does not match space");
    }
    const int m = space.cutoff();
    ComplexMatrix out(rho.rows(), rho.cols());
    // Mode 1 is the slow index, so transposing it swaps M x M blocks; mode 2 transposes within blocks.
    for (int n = 0; n < m; ++n) {
        for (int np = 0; np < m; ++np) {
            const auto src = rho.block(n * m, np * m, m, m);
            if (subsystem == 1) {
                out.block(np * m, n * m, m, m) = src;
            } else {
                out.block(n * m, np * m, m, m) = src.transpose();
            }
        }
    }
    return out;
}

double negativity(const DensityMatrix& rho)
{
    const Eigen::VectorXd eig = hermitian_eigenvalues(partial_transpose(rho));
    double sum = 0.0;
    for (Eigen::Index k = 0; k < eig.size(); ++k) {
        if (eig(k) < -kNegativityFloor) sum += eig(k);
    }
    return std::abs(sum);
}

double negativity_trace_norm(const DensityMatrix& rho)
{
    const Eigen::VectorXd eig = hermitian_eigenvalues(partial_transpose(rho));
    return 0.5 * (eig.cwiseAbs().sum() - rho.trace());
}

ParityPopulations parity_populations(const DensityMatrix& rho)
{
    require_two_modes(rho.space(), "parity_populations");
    const int m = rho.space().cutoff();
    ParityPopulations p;
    for (int n = 0; n < m; ++n) {
        for (int i = 0; i < m; ++i) {
            const Eigen::Index k = rho.space().index(n, i);
            ((n + i) % 2 == 0 ? p.even : p.odd) += rho(k, k).real();
        }
    }
    return p;
}

BlochRecord bloch_extract(const DensityMatrix& rho)
{
    require_two_modes(rho.space(), "bloch_extract");
    const auto& sp = rho.space();
    const Eigen::Index k00 = sp.index(0, 0);
    const Eigen::Index k10 = sp.index(1, 0);
    const Eigen::Index k01 = sp.index(0, 1);
    BlochRecord r;
    r.p00 = rho(k00, k00).real();
    r.p10 = rho(k10, k10).real();
    r.p01 = rho(k01, k01).real();
    r.s = r.p01 + r.p10;
    r.w = r.p10 - r.p01;
    const Complex c_01_10 = rho(k01, k10);
    const Complex c_10_01 = rho(k10, k01);
    r.u = (c_01_10 + c_10_01).real();
    r.v = (Complex(0.0, -1.0) * (c_10_01 - c_01_10)).real();
    return r;
}

BlochRecord analyze_state(const DensityMatrix& raw, double time)
{
    const DensityMatrix rho = raw.hermitized_normalized();
    BlochRecord r = bloch_extract(rho);
    r.time = time;
    const ParityPopulations par = parity_populations(rho);
    r.p_even = par.even;
    r.p_odd = par.odd;
    r.negativity = negativity(rho);
    r.trace_dev = std::abs(raw.trace() - 1.0);
    r.herm_dev = raw.hermiticity_error();
    r.min_eig = rho.min_eigenvalue();
    return r;
}

VietaProduct vieta_product(const DensityMatrix& rho, double leakage_tol)
{
    require_two_modes(rho.space(), "vieta_product");
    const auto& sp = rho.space();
    const Eigen::Index k00 = sp.index(0, 0);
    const Eigen::Index k01 = sp.index(0, 1);
    const Eigen::Index k10 = sp.index(1, 0);
    const Eigen::Index k11 = sp.index(1, 1);

    const double in_manifold = (rho(k00, k00) + rho(k01, k01) + rho(k10, k10)).real();
    const double leakage = std::abs(rho.trace() - in_manifold);
    if (leakage > leakage_tol) {
        throw std::domain_error("vieta_product: state leaks " + std::to_string(leakage) +
                                " population outside the single-excitation manifold");
    }

    const ComplexMatrix pt = partial_transpose(rho);
    const Eigen::Index idx[4] = {k00, k01, k10, k11};
    ComplexMatrix block(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) block(r, c) = pt(idx[r], idx[c]);
    }
    const Eigen::VectorXd eig = hermitian_eigenvalues(block);

    VietaProduct out;
    out.lhs = eig.prod();
    out.rhs = -std::norm(rho(k01, k10)) * rho(k10, k10).real() * rho(k01, k01).real();
    return out;
}

double asymptotic_negativity(double p_odd)
{
    if (!(p_odd >= 0.0 && p_odd <= 1.0)) {
        throw std::domain_error("asymptotic_negativity: p_odd must lie in [0, 1]");
    }
    const double q = p_odd - 1.0;
    return 0.5 * (q + std::sqrt(q * q + p_odd * p_odd));
}

DensityMatrix manifold_state(const TruncatedSpace& space, double p00, double s, double u, double v, double w)
{
    require_two_modes(space, "manifold_state");
    ComplexMatrix m = ComplexMatrix::Zero(space.dim(), space.dim());
    const Eigen::Index k00 = space.index(0, 0);
    const Eigen::Index k10 = space.index(1, 0);
    const Eigen::Index k01 = space.index(0, 1);
    m(k00, k00) = p00;
    m(k10, k10) = 0.5 * (s + w);
    m(k01, k01) = 0.5 * (s - w);
    // u = 2 Re rho_{10,01}, v = 2 Im rho_{10,01}
    m(k10, k01) = Complex(0.5 * u, 0.5 * v);
    m(k01, k10) = std::conj(m(k10, k01));
    return DensityMatrix(space, std::move(m));
}

} // namespace nldiss
