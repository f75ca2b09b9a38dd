// model.hpp — Physical parameters, Ohmic bath rates, Hamiltonians and dissipators
//
// Units: hbar = k_B = m = 1. The symmetric setup omega_1 = omega_2 = omega0 is assumed.

#pragma once

#include "nldiss/fock.hpp"

#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace nldiss {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SystemParams {
    double omega0 = 1.0;
    double mu1 = 1e-3;
    double mu2 = 1e-3;
    double lambda = 5e-4;
    double gamma1 = 1e-3;
    double gamma2 = 1e-3;
    double temperature = 0.0;

    // Throws DomainError when a field is out of range.
    void validate() const;
    // lambda < omega0/10; the RWA is not trusted beyond it.
    bool weak_coupling() const noexcept { return lambda < omega0 / 10.0; }
    bool symmetric_dissipation() const noexcept { return gamma1 == gamma2; }
};

// Ohmic spectral density kappa(w) = gamma * w / (2 omega0) with thermal occupation at `temperature`.
struct BathSpectrum {
    double gamma0 = 1e-3;
    double omega0 = 1.0;
    double temperature = 0.0;

    double kappa(double omega) const;
};

BathSpectrum bath_for_mode(const SystemParams& params, int mode);

// (e^{w/T} - 1)^{-1}; exactly 0 at T = 0.
double bose_einstein(double omega, double temperature);

// Emission rate kappa(w)[N(w)+1] for w > 0, absorption kappa(|w|) N(|w|) for w < 0.
double rate_gamma(const BathSpectrum& spectrum, double omega);

// Rate at a vanishing Bohr frequency: limit of kappa(w) N(w) as w -> 0+.
double rate_gamma_zero(const BathSpectrum& spectrum);

struct Upsilons {
    double plus = 0.0;
    double minus = 0.0;
};

// gamma(lambda) +- gamma(-lambda). lambda = 0 gives the continuous limit (plus = Gamma0 T/omega0, minus = 0).
Upsilons upsilons(const BathSpectrum& spectrum, double lambda);

enum class Frame { rotating, lab_phase };

std::string to_string(Frame frame);
Frame frame_from_string(const std::string& name);

ComplexMatrix hamiltonian_rwa(const SystemParams& params, const TruncatedSpace& space,
                              Frame frame = Frame::lab_phase);
ComplexMatrix hamiltonian_lab(const SystemParams& params, const TruncatedSpace& space);

// L[X]rho = -1/2 X X^dag rho - 1/2 rho X X^dag + X^dag rho X
ComplexMatrix lindblad_apply(const ComplexMatrix& x, const ComplexMatrix& rho);
inline ComplexMatrix lindblad_apply(const ComplexMatrix& x, const DensityMatrix& rho)
{
    return lindblad_apply(x, rho.matrix());
}

struct JumpTerm {
    std::string label;
    ComplexMatrix op;
    double rate = 0.0;
};

/// Generator of the RWA master equation for two symmetric oscillators.
///
/// Holds the dense operator set plus sparse copies used by the right-hand
/// side. Immutable after construction.
class GeneratorRWA {
public:
    GeneratorRWA(const SystemParams& params, const TruncatedSpace& space, Frame frame = Frame::rotating);

    const TruncatedSpace& space() const noexcept { return space_; }
    const SystemParams& params() const noexcept { return params_; }
    Frame frame() const noexcept { return frame_; }

    const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
    // a1†a1†, a2†a2† (loss, rate gamma(2 omega0)) then a1 a1, a2 a2 (gain, rate gamma(-2 omega0)).
    const std::vector<JumpTerm>& jumps() const noexcept { return jumps_; }
    const Upsilons& upsilon() const noexcept { return upsilon_; }
    // D = n1 - n2 and J = a1†a2 - a2†a1.
    const ComplexMatrix& number_difference() const noexcept { return diff_; }
    const ComplexMatrix& hopping() const noexcept { return hop_; }

    void rhs(const ComplexMatrix& rho, ComplexMatrix& out) const;
    void cross_dissipator(const ComplexMatrix& rho, ComplexMatrix& out) const;

    // The same generator assembled as a sparse superoperator on column-major vec(rho),
    // from vec(A rho B) = (B^T kron A) vec(rho).
    SparseMatrix superoperator() const;

private:
    struct SparseJump {
        SparseMatrix op;      // X
        SparseMatrix op_adj;  // X^dag
        Eigen::VectorXd xxdag_diag;  // diag(X X^dag), diagonal for all jumps used here
        double rate;
    };

    TruncatedSpace space_;
    SystemParams params_;
    Frame frame_;
    ComplexMatrix hamiltonian_;
    std::vector<JumpTerm> jumps_;
    Upsilons upsilon_;
    ComplexMatrix diff_;
    ComplexMatrix hop_;

    SparseMatrix h_sparse_;
    std::vector<SparseJump> sparse_jumps_;
    Eigen::VectorXd diff_diag_;
    SparseMatrix hop_sparse_;
    SparseMatrix diff_hop_sparse_;  // D J
};

ComplexMatrix cross_dissipator_apply(const GeneratorRWA& gen, const ComplexMatrix& rho);
ComplexMatrix rhs_rwa(const GeneratorRWA& gen, const ComplexMatrix& rho);
inline ComplexMatrix rhs_rwa(const GeneratorRWA& gen, const DensityMatrix& rho) { return rhs_rwa(gen, rho.matrix()); }

} // namespace nldiss
