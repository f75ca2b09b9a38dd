// redfield.hpp — Bloch–Redfield master equation in the eigenbasis of the lab-frame Hamiltonian

#pragma once

#include "nldiss/lindblad.hpp"

namespace nldiss {

struct EigenSystem {
    TruncatedSpace space{2};
    Eigen::VectorXd energies;  // ascending
    ComplexMatrix vectors;     // columns are eigenvectors in the Fock basis

    ComplexMatrix to_eigenbasis(const ComplexMatrix& fock) const { return vectors.adjoint() * fock * vectors; }
    ComplexMatrix to_fock(const ComplexMatrix& eigen) const { return vectors * eigen * vectors.adjoint(); }
};

// Diagonalizes H within each total-parity block so that eigenvectors have definite parity.
// Throws std::runtime_error when the residual or unitarity check exceeds `tol`.
EigenSystem diagonalize(const ComplexMatrix& hamiltonian, const TruncatedSpace& space, double tol = 1e-10);

/// Time-independent Redfield generator
///   d(rho)/dt = -i[E, rho] + sum_m [Lambda_m rho - rho Lambda_m^dag, S_m]
/// with S_m = (a_m^dag + a_m)^2 and (Lambda_m)_{jk} = 1/2 gamma_m(E_k - E_j) (S_m)_{jk}.
class GeneratorRedfield {
public:
    GeneratorRedfield(const SystemParams& params, const TruncatedSpace& space);

    const SystemParams& params() const noexcept { return params_; }
    const TruncatedSpace& space() const noexcept { return eig_.space; }
    const EigenSystem& eigensystem() const noexcept { return eig_; }
    const ComplexMatrix& coupling(int mode) const { return coupling_.at(mode - 1); }
    const ComplexMatrix& lambda_op(int mode) const { return lambda_.at(mode - 1); }

    // rho in the eigenbasis.
    void rhs(const ComplexMatrix& rho, ComplexMatrix& out) const;

private:
    SystemParams params_;
    EigenSystem eig_;
    std::vector<ComplexMatrix> coupling_;
    std::vector<ComplexMatrix> lambda_;
};

inline GeneratorRedfield build_redfield(const SystemParams& params, const TruncatedSpace& space)
{
    return GeneratorRedfield(params, space);
}

ComplexMatrix rhs_redfield(const GeneratorRedfield& gen, const ComplexMatrix& rho_eigen);

// rho0 in the Fock basis; sampled records are taken in the Fock basis as well.
Trajectory evolve_redfield(const GeneratorRedfield& gen, const DensityMatrix& rho0, const IntegratorConfig& cfg);

} // namespace nldiss
