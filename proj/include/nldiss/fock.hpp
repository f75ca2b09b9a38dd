// fock.hpp — Truncated Fock spaces, ladder operators, coherent and product states

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace nldiss {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Fock space of `num_modes` oscillators, each truncated to `cutoff` levels.
/// Two-mode basis |n,i> sits at index n*M + i (mode 1 is the slow index).
class TruncatedSpace {
public:
    explicit TruncatedSpace(int cutoff_per_mode, int num_modes = 2);

    int cutoff() const noexcept { return cutoff_; }
    int num_modes() const noexcept { return num_modes_; }
    int dim() const noexcept { return dim_; }

    Eigen::Index index(int n, int i) const noexcept {
        return static_cast<Eigen::Index>(n) * cutoff_ + i;
    }
    int occupation(Eigen::Index idx, int mode) const noexcept {
        return mode == 1 ? static_cast<int>(idx / cutoff_) : static_cast<int>(idx % cutoff_);
    }

    bool operator==(const TruncatedSpace&) const = default;

private:
    int cutoff_;
    int num_modes_;
    int dim_;
};

// Single-mode annihilation operator: <n-1|a|n> = sqrt(n).
ComplexMatrix ladder_lower(int mode_dim);
inline ComplexMatrix ladder_lower(const TruncatedSpace& space) { return ladder_lower(space.cutoff()); }

ComplexMatrix identity(int dim);

// Kronecker product, first factor on the slow (outer) index.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Embed a single-mode operator on `mode` (1 or 2) of a two-mode space.
ComplexMatrix embed(const TruncatedSpace& space, const ComplexMatrix& single, int mode);
ComplexMatrix lower_on_mode(const TruncatedSpace& space, int mode);
ComplexMatrix number_on_mode(const TruncatedSpace& space, int mode);

double max_abs(const ComplexMatrix& m);
double hermiticity_error(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

struct StateVector {
    TruncatedSpace space{2, 1};
    ComplexVector amplitudes;
    // 1 - (norm^2 before renormalization); zero for exactly represented states.
    double truncation_deficit = 0.0;
    // Set when |alpha|^2 > M/4: the cutoff is too small for the requested amplitude.
    bool truncation_warning = false;

    double norm() const { return amplitudes.norm(); }
};

StateVector coherent_state(Complex alpha, int mode_dim);
StateVector fock_state(int n, int mode_dim);

class DensityMatrix {
public:
    static constexpr double kHermiticityTol = 1e-10;

    // Checks shape, finiteness and Hermiticity; does not normalize.
    DensityMatrix(TruncatedSpace space, ComplexMatrix matrix);

    // Skips validation; for states produced internally by trusted propagation.
    static DensityMatrix unchecked(TruncatedSpace space, ComplexMatrix matrix);

    const TruncatedSpace& space() const noexcept { return space_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return matrix_(r, c); }

    double trace() const { return matrix_.trace().real(); }
    double hermiticity_error() const { return nldiss::hermiticity_error(matrix_); }
    double min_eigenvalue() const;

    // (rho + rho^dagger)/2 with unit trace.
    DensityMatrix hermitized_normalized() const;

private:
    DensityMatrix(TruncatedSpace space, ComplexMatrix matrix, bool);

    TruncatedSpace space_;
    ComplexMatrix matrix_;
};

DensityMatrix pure_density(const TruncatedSpace& space, const ComplexVector& psi);
DensityMatrix product_density(const StateVector& psi1, const StateVector& psi2);

} // namespace nldiss
