// fock.cpp — Truncated Fock space operators and states

#include "nldiss/fock.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace nldiss {

TruncatedSpace::TruncatedSpace(int cutoff_per_mode, int num_modes)
    : cutoff_(cutoff_per_mode), num_modes_(num_modes), dim_(1)
{
    if (cutoff_per_mode < 2) {
        throw InvalidDimension("TruncatedSpace: cutoff per mode must be >= 2, got " +
                               std::to_string(cutoff_per_mode));
    }
    if (num_modes != 1 && num_modes != 2) {
        throw InvalidDimension("TruncatedSpace: num_modes must be 1 or 2");
    }
    for (int m = 0; m < num_modes; ++m) dim_ *= cutoff_per_mode;
}

ComplexMatrix ladder_lower(int mode_dim)
{
    if (mode_dim < 2) {
        throw InvalidDimension("ladder_lower: dimension must be >= 2, got " + std::to_string(mode_dim));
    }
    ComplexMatrix a = ComplexMatrix::Zero(mode_dim, mode_dim);
    for (int n = 1; n < mode_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix identity(int dim)
{
    return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw DimensionMismatch("tensor_product: both factors must be square");
    }
    return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix embed(const TruncatedSpace& space, const ComplexMatrix& single, int mode)
{
    if (space.num_modes() != 2) throw InvalidDimension("embed: requires a two-mode space");
    if (single.rows() != space.cutoff() || single.cols() != space.cutoff()) {
        throw DimensionMismatch("embed: operator does not match the per-mode cutoff");
    }
    const ComplexMatrix id = identity(space.cutoff());
    switch (mode) {
    case 1: return tensor_product(single, id);
    case 2: return tensor_product(id, single);
    default: throw std::invalid_argument("embed: mode must be 1 or 2");
    }
}

ComplexMatrix lower_on_mode(const TruncatedSpace& space, int mode)
{
    return embed(space, ladder_lower(space.cutoff()), mode);
}

ComplexMatrix number_on_mode(const TruncatedSpace& space, int mode)
{
    // Exact integer diagonal rather than a^dag a, which rounds sqrt(n)^2.
    const Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(space.cutoff(), 0.0, space.cutoff() - 1.0);
    return embed(space, ComplexMatrix(n.cast<Complex>().asDiagonal()), mode);
}

double max_abs(const ComplexMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& m)
{
    return max_abs(m - m.adjoint());
}

bool all_finite(const ComplexMatrix& m)
{
    return m.allFinite();
}

StateVector coherent_state(Complex alpha, int mode_dim)
{
    if (mode_dim < 2) {
        throw InvalidDimension("coherent_state: dimension must be >= 2, got " + std::to_string(mode_dim));
    }
    StateVector psi;
    psi.space = TruncatedSpace(mode_dim, 1);
    psi.amplitudes.resize(mode_dim);

    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built recursively to avoid overflow.
    Complex c = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < mode_dim; ++n) {
        psi.amplitudes(n) = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    const double norm2 = psi.amplitudes.squaredNorm();
    psi.truncation_deficit = 1.0 - norm2;
    psi.truncation_warning = std::norm(alpha) > 0.25 * mode_dim;
    psi.amplitudes /= std::sqrt(norm2);
    return psi;
}

StateVector fock_state(int n, int mode_dim)
{
    if (mode_dim < 2) throw InvalidDimension("fock_state: dimension must be >= 2");
    if (n < 0 || n >= mode_dim) throw std::out_of_range("fock_state: level outside truncation");
    StateVector psi;
    psi.space = TruncatedSpace(mode_dim, 1);
    psi.amplitudes = ComplexVector::Zero(mode_dim);
    psi.amplitudes(n) = 1.0;
    return psi;
}

DensityMatrix::DensityMatrix(TruncatedSpace space, ComplexMatrix matrix)
    : space_(space), matrix_(std::move(matrix))
{
    if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
        throw DimensionMismatch("DensityMatrix: matrix is " + std::to_string(matrix_.rows()) + "x" +
                                std::to_string(matrix_.cols()) + ", space has dim " +
                                std::to_string(space_.dim()));
    }
    if (!matrix_.allFinite()) throw std::domain_error("DensityMatrix: non-finite entries");
    if (nldiss::hermiticity_error(matrix_) > kHermiticityTol) {
        throw std::domain_error("DensityMatrix: matrix is not Hermitian");
    }
}

DensityMatrix::DensityMatrix(TruncatedSpace space, ComplexMatrix matrix, bool)
    : space_(space), matrix_(std::move(matrix))
{}

DensityMatrix DensityMatrix::unchecked(TruncatedSpace space, ComplexMatrix matrix)
{
    return DensityMatrix(space, std::move(matrix), true);
}

double DensityMatrix::min_eigenvalue() const
{
    const ComplexMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::hermitized_normalized() const
{
    ComplexMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
    const double tr = h.trace().real();
    if (tr != 0.0) h /= tr;
    return DensityMatrix(space_, std::move(h), true);
}

DensityMatrix pure_density(const TruncatedSpace& space, const ComplexVector& psi)
{
    if (psi.size() != space.dim()) throw DimensionMismatch("pure_density: vector length != space dim");
    return DensityMatrix::unchecked(space, psi * psi.adjoint());
}

DensityMatrix product_density(const StateVector& psi1, const StateVector& psi2)
{
    if (psi1.space.cutoff() != psi2.space.cutoff()) {
        throw DimensionMismatch("product_density: cutoff mismatch (" +
                                std::to_string(psi1.space.cutoff()) + " vs " +
                                std::to_string(psi2.space.cutoff()) + ")");
    }
    const TruncatedSpace space(psi1.space.cutoff(), 2);
    const ComplexVector joint = Eigen::kroneckerProduct(psi1.amplitudes, psi2.amplitudes).eval();
    return pure_density(space, joint);
}

} // namespace nldiss
