// redfield.cpp — Eigenbasis Redfield generator and propagation

#include "nldiss/redfield.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace nldiss {

EigenSystem diagonalize(const ComplexMatrix& hamiltonian, const TruncatedSpace& space, double tol)
{
    const Eigen::Index n = space.dim();
    if (hamiltonian.rows() != n || hamiltonian.cols() != n) {
        throw DimensionMismatch("diagonalize: Hamiltonian does not match space");
    }

    std::vector<Eigen::Index> groups[2];
    for (Eigen::Index k = 0; k < n; ++k) {
        const int quanta = space.occupation(k, 1) + (space.num_modes() == 2 ? space.occupation(k, 2) : 0);
        groups[quanta % 2].push_back(k);
    }

    std::vector<double> energies;
    std::vector<ComplexVector> vectors;
    for (const auto& g : groups) {
        if (g.empty()) continue;
        const auto m = static_cast<Eigen::Index>(g.size());
        ComplexMatrix block(m, m);
        for (Eigen::Index r = 0; r < m; ++r) {
            for (Eigen::Index c = 0; c < m; ++c) block(r, c) = hamiltonian(g[r], g[c]);
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(block);
        if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
        for (Eigen::Index k = 0; k < m; ++k) {
            ComplexVector v = ComplexVector::Zero(n);
            for (Eigen::Index r = 0; r < m; ++r) v(g[r]) = es.eigenvectors()(r, k);
            energies.push_back(es.eigenvalues()(k));
            vectors.push_back(std::move(v));
        }
    }

    std::vector<std::size_t> order(energies.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

    EigenSystem out;
    out.space = space;
    out.energies.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.energies(k) = energies[order[k]];
        out.vectors.col(k) = vectors[order[k]];
    }

    const double scale = std::max(1.0, out.energies.cwiseAbs().maxCoeff());
    const double residual = max_abs(hamiltonian * out.vectors - out.vectors * out.energies.asDiagonal());
    const double unitarity = max_abs(out.vectors.adjoint() * out.vectors - ComplexMatrix::Identity(n, n));
    if (residual > tol * scale || unitarity > tol) {
        throw std::runtime_error("diagonalize: eigendecomposition residual above tolerance");
    }
    return out;
}

GeneratorRedfield::GeneratorRedfield(const SystemParams& params, const TruncatedSpace& space)
    : params_(params)
{
    params.validate();
    if (space.num_modes() != 2) throw InvalidDimension("GeneratorRedfield: requires a two-mode space");
    eig_ = diagonalize(hamiltonian_lab(params, space), space);

    const Eigen::Index n = space.dim();
    for (int m = 1; m <= 2; ++m) {
        const ComplexMatrix a = lower_on_mode(space, m);
        const ComplexMatrix x = a + a.adjoint();
        ComplexMatrix s = eig_.to_eigenbasis(x * x);
        const BathSpectrum bath = bath_for_mode(params, m);
        ComplexMatrix lam(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                // Transition k -> j releases E_k - E_j into the bath.
                const double released = eig_.energies(k) - eig_.energies(j);
                const double rate = released == 0.0 ? rate_gamma_zero(bath) : rate_gamma(bath, released);
                lam(j, k) = 0.5 * rate * s(j, k);
            }
        }
        coupling_.push_back(std::move(s));
        lambda_.push_back(std::move(lam));
    }
}

void GeneratorRedfield::rhs(const ComplexMatrix& rho, ComplexMatrix& out) const
{
    const Eigen::Index n = eig_.space.dim();
    if (rho.rows() != n || rho.cols() != n) throw DimensionMismatch("rhs_redfield: state dimension mismatch");
    const Complex minus_i{0.0, -1.0};
    out.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            out(r, c) = minus_i * (eig_.energies(r) - eig_.energies(c)) * rho(r, c);
        }
    }
    ComplexMatrix x(n, n);
    for (std::size_t m = 0; m < coupling_.size(); ++m) {
        x.noalias() = lambda_[m] * rho;
        x.noalias() -= rho * lambda_[m].adjoint();
        out.noalias() += x * coupling_[m];
        out.noalias() -= coupling_[m] * x;
    }
}

ComplexMatrix rhs_redfield(const GeneratorRedfield& gen, const ComplexMatrix& rho_eigen)
{
    ComplexMatrix out;
    gen.rhs(rho_eigen, out);
    return out;
}

Trajectory evolve_redfield(const GeneratorRedfield& gen, const DensityMatrix& rho0, const IntegratorConfig& cfg)
{
    if (!(rho0.space() == gen.space())) throw DimensionMismatch("evolve_redfield: state and generator spaces differ");
    const std::vector<double> times = sample_times(cfg);
    const EigenSystem& es = gen.eigensystem();
    const ComplexMatrix rho_e = es.to_eigenbasis(rho0.matrix());
    const LinearGenerator rhs = [&gen](const ComplexMatrix& rho, ComplexMatrix& out) { gen.rhs(rho, out); };

    auto to_fock = [&](const SampleCallback& cb) {
        return [&es, cb](double t, const ComplexMatrix& rho) { cb(t, es.to_fock(rho)); };
    };

    if (cfg.method == Method::exact) {
        ExactPropagator prop(gen.space().dim(), rhs);
        Trajectory traj = collect_trajectory(gen.space(), times, [&](const SampleCallback& cb) {
            return integrate_exact(prop, rho_e, times, to_fock(cb));
        });
        traj.config = cfg;
        return traj;
    }

    auto run_rk = [&](const IntegratorConfig& c) {
        Trajectory traj = collect_trajectory(gen.space(), times, [&](const SampleCallback& cb) {
            return integrate_adaptive(rhs, rho_e, times, c, to_fock(cb));
        });
        traj.config = c;
        return traj;
    };
    Trajectory traj = run_rk(cfg);
    if (cfg.auto_tighten && traj.max_trace_dev() > cfg.drift_limit) {
        IntegratorConfig tight = cfg;
        tight.rel_tol /= 10.0;
        tight.abs_tol /= 10.0;
        traj = run_rk(tight);
    }
    return traj;
}

} // namespace nldiss
