// model.cpp — Bath rates, Hamiltonians and the RWA generator

#include "nldiss/model.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace nldiss {

void SystemParams::validate() const
{
    auto fail = [](const std::string& what) { throw DomainError("SystemParams: " + what); };
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) fail("omega0 must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) fail("gamma1, gamma2 must be >= 0");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) fail("temperature must be >= 0");
    if (!std::isfinite(mu1) || !std::isfinite(mu2)) fail("mu1, mu2 must be finite");
}

double BathSpectrum::kappa(double omega) const
{
    if (omega < 0.0) throw DomainError("kappa: defined for omega >= 0 only");
    return gamma0 * omega / (2.0 * omega0);
}

BathSpectrum bath_for_mode(const SystemParams& params, int mode)
{
    return BathSpectrum{mode == 1 ? params.gamma1 : params.gamma2, params.omega0, params.temperature};
}

double bose_einstein(double omega, double temperature)
{
    if (!(omega > 0.0)) throw DomainError("bose_einstein: omega must be > 0");
    if (temperature < 0.0) throw DomainError("bose_einstein: temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double rate_gamma(const BathSpectrum& spectrum, double omega)
{
    if (omega == 0.0) throw DomainError("rate_gamma: omega = 0 is outside the domain");
    const double w = std::abs(omega);
    const double occupation = bose_einstein(w, spectrum.temperature);
    return omega > 0.0 ? spectrum.kappa(w) * (occupation + 1.0) : spectrum.kappa(w) * occupation;
}

double rate_gamma_zero(const BathSpectrum& spectrum)
{
    return spectrum.gamma0 * spectrum.temperature / (2.0 * spectrum.omega0);
}

Upsilons upsilons(const BathSpectrum& spectrum, double lambda)
{
    if (lambda < 0.0) throw DomainError("upsilons: lambda must be >= 0");
    if (lambda == 0.0) return {2.0 * rate_gamma_zero(spectrum), 0.0};
    const double emit = rate_gamma(spectrum, lambda);
    const double absorb = rate_gamma(spectrum, -lambda);
    return {emit + absorb, emit - absorb};
}

std::string to_string(Frame frame)
{
    return frame == Frame::rotating ? "rotating" : "lab-phase";
}

Frame frame_from_string(const std::string& name)
{
    if (name == "rotating") return Frame::rotating;
    if (name == "lab-phase" || name == "lab_phase") return Frame::lab_phase;
    throw std::invalid_argument("unknown frame '" + name + "' (expected rotating or lab-phase)");
}

ComplexMatrix hamiltonian_rwa(const SystemParams& params, const TruncatedSpace& space, Frame frame)
{
    if (space.num_modes() != 2) throw InvalidDimension("hamiltonian_rwa: requires a two-mode space");
    const ComplexMatrix n1 = number_on_mode(space, 1);
    const ComplexMatrix n2 = number_on_mode(space, 2);
    const ComplexMatrix a1 = lower_on_mode(space, 1);
    const ComplexMatrix a2 = lower_on_mode(space, 2);
    const double linear = frame == Frame::rotating ? 0.0 : params.omega0;

    ComplexMatrix h = (linear + params.mu1) * n1 + params.mu1 * n1 * n1
                    + (linear + params.mu2) * n2 + params.mu2 * n2 * n2;
    h += 0.5 * params.lambda * (a1.adjoint() * a2 + a2.adjoint() * a1);
    return h;
}

ComplexMatrix hamiltonian_lab(const SystemParams& params, const TruncatedSpace& space)
{
    if (space.num_modes() != 2) throw InvalidDimension("hamiltonian_lab: requires a two-mode space");
    const double w = params.omega0;
    const Complex i{0.0, 1.0};
    ComplexMatrix h = ComplexMatrix::Zero(space.dim(), space.dim());
    ComplexMatrix q[2];
    for (int m = 1; m <= 2; ++m) {
        const ComplexMatrix a = lower_on_mode(space, m);
        const ComplexMatrix ad = a.adjoint();
        q[m - 1] = (ad + a) / std::sqrt(2.0 * w);
        const ComplexMatrix p = i * std::sqrt(w / 2.0) * (ad - a);
        const ComplexMatrix q2 = q[m - 1] * q[m - 1];
        const double mu = m == 1 ? params.mu1 : params.mu2;
        h += 0.5 * p * p + 0.5 * w * w * q2 + (2.0 * mu / 3.0) * q2 * q2;
    }
    h += w * params.lambda * q[0] * q[1];
    return 0.5 * (h + h.adjoint());
}

ComplexMatrix lindblad_apply(const ComplexMatrix& x, const ComplexMatrix& rho)
{
    if (x.rows() != x.cols() || x.rows() != rho.rows() || rho.rows() != rho.cols()) {
        throw DimensionMismatch("lindblad_apply: operator and state dimensions differ");
    }
    const ComplexMatrix xxd = x * x.adjoint();
    return -0.5 * xxd * rho - 0.5 * rho * xxd + x.adjoint() * rho * x;
}

namespace {

SparseMatrix to_sparse(const ComplexMatrix& m)
{
    return m.sparseView(Complex(0.0), 0.0);
}

Eigen::VectorXd real_diagonal(const ComplexMatrix& m)
{
    return m.diagonal().real();
}

} // namespace

GeneratorRWA::GeneratorRWA(const SystemParams& params, const TruncatedSpace& space, Frame frame)
    : space_(space), params_(params), frame_(frame)
{
    params.validate();
    if (space.num_modes() != 2) throw InvalidDimension("GeneratorRWA: requires a two-mode space");
    if (!params.symmetric_dissipation()) {
        throw DomainError("GeneratorRWA: the cross dissipator requires gamma1 == gamma2; use the Redfield solver");
    }

    hamiltonian_ = hamiltonian_rwa(params, space, frame);

    const ComplexMatrix a1 = lower_on_mode(space, 1);
    const ComplexMatrix a2 = lower_on_mode(space, 2);
    const ComplexMatrix a[2] = {a1, a2};
    const double two_w = 2.0 * params.omega0;
    for (int m = 0; m < 2; ++m) {
        const BathSpectrum bath = bath_for_mode(params, m + 1);
        const ComplexMatrix ad = a[m].adjoint();
        jumps_.push_back({"a" + std::to_string(m + 1) + "+a" + std::to_string(m + 1) + "+",
                          ad * ad, rate_gamma(bath, two_w)});
    }
    for (int m = 0; m < 2; ++m) {
        const BathSpectrum bath = bath_for_mode(params, m + 1);
        jumps_.push_back({"a" + std::to_string(m + 1) + "a" + std::to_string(m + 1),
                          a[m] * a[m], rate_gamma(bath, -two_w)});
    }

    const BathSpectrum coupling_bath{params.gamma1, params.omega0, params.temperature};
    upsilon_ = upsilons(coupling_bath, params.lambda);
    diff_ = number_on_mode(space, 1) - number_on_mode(space, 2);
    hop_ = a1.adjoint() * a2 - a2.adjoint() * a1;

    h_sparse_ = to_sparse(hamiltonian_);
    for (const JumpTerm& j : jumps_) {
        const ComplexMatrix xxd = j.op * j.op.adjoint();
        // All jumps here are products of two ladder operators of one mode; X X^dag is diagonal.
        if (max_abs(xxd - ComplexMatrix(xxd.diagonal().asDiagonal())) != 0.0) {
            throw std::logic_error("GeneratorRWA: X X^dag expected to be diagonal");
        }
        sparse_jumps_.push_back({to_sparse(j.op), to_sparse(j.op.adjoint()), real_diagonal(xxd), j.rate});
    }
    diff_diag_ = real_diagonal(diff_);
    hop_sparse_ = to_sparse(hop_);
    diff_hop_sparse_ = to_sparse(diff_ * hop_);
}

void GeneratorRWA::cross_dissipator(const ComplexMatrix& rho, ComplexMatrix& out) const
{
    const Eigen::Index n = rho.rows();
    // Upsilon+ L[D] with D diagonal: (D rho D - 1/2 D^2 rho - 1/2 rho D^2)_{rc} = -1/2 (d_r - d_c)^2 rho_{rc}
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double delta = diff_diag_(r) - diff_diag_(c);
            out(r, c) += -0.5 * upsilon_.plus * delta * delta * rho(r, c);
        }
    }
    if (upsilon_.minus == 0.0) return;

    // -(Upsilon-/2) [ D J rho - J rho D + rho J^dag D - D rho J^dag ]
    ComplexMatrix block = diff_hop_sparse_ * rho;
    const ComplexMatrix j_rho = hop_sparse_ * rho;
    const ComplexMatrix rho_jdag = (hop_sparse_ * rho.adjoint()).adjoint();
    for (Eigen::Index c = 0; c < n; ++c) {
        const double dc = diff_diag_(c);
        for (Eigen::Index r = 0; r < n; ++r) {
            block(r, c) += -j_rho(r, c) * dc + rho_jdag(r, c) * dc - diff_diag_(r) * rho_jdag(r, c);
        }
    }
    out.noalias() -= 0.5 * upsilon_.minus * block;
}

void GeneratorRWA::rhs(const ComplexMatrix& rho, ComplexMatrix& out) const
{
    if (rho.rows() != space_.dim() || rho.cols() != space_.dim()) {
        throw DimensionMismatch("rhs_rwa: state dimension does not match the generator");
    }
    const Complex minus_i{0.0, -1.0};
    const Eigen::Index n = rho.rows();

    // -i[H, rho]; (rho H) = (H^dag rho^dag)^dag = (H rho^dag)^dag for Hermitian H.
    const ComplexMatrix h_rho = h_sparse_ * rho;
    const ComplexMatrix rho_h = (h_sparse_ * rho.adjoint()).adjoint();
    out = minus_i * (h_rho - rho_h);

    for (const SparseJump& j : sparse_jumps_) {
        if (j.rate == 0.0) continue;
        // X^dag rho X = X^dag (X^dag rho^dag)^dag
        const ComplexMatrix tmp = (j.op_adj * rho.adjoint()).adjoint();
        out.noalias() += j.rate * (j.op_adj * tmp);
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index r = 0; r < n; ++r) {
                out(r, c) -= 0.5 * j.rate * (j.xxdag_diag(r) + j.xxdag_diag(c)) * rho(r, c);
            }
        }
    }
    cross_dissipator(rho, out);
}

SparseMatrix GeneratorRWA::superoperator() const
{
    const Eigen::Index n = space_.dim();
    SparseMatrix id(n, n);
    id.setIdentity();
    const Complex i{0.0, 1.0};
    auto kron = [](const SparseMatrix& a, const SparseMatrix& b) {
        SparseMatrix k = Eigen::kroneckerProduct(a, b);
        return k;
    };
    const SparseMatrix h_t = SparseMatrix(h_sparse_.transpose());
    SparseMatrix l = kron(id, (-i) * h_sparse_) + kron(i * h_t, id);

    for (const SparseJump& j : sparse_jumps_) {
        if (j.rate == 0.0) continue;
        const SparseMatrix xxd = to_sparse(ComplexMatrix(j.xxdag_diag.cast<Complex>().asDiagonal()));
        l += j.rate * kron(SparseMatrix(j.op.transpose()), j.op_adj);
        l -= 0.5 * j.rate * (kron(id, xxd) + kron(xxd, id));
    }

    const SparseMatrix d = to_sparse(diff_);
    const SparseMatrix d2 = d * d;
    l += upsilon_.plus * (kron(d, d) - 0.5 * kron(id, d2) - 0.5 * kron(d2, id));

    if (upsilon_.minus != 0.0) {
        const SparseMatrix j_adj = SparseMatrix(hop_sparse_.adjoint());
        const SparseMatrix block = kron(id, diff_hop_sparse_) - kron(d, hop_sparse_)
                                 + kron(SparseMatrix((j_adj * d).transpose()), id)
                                 - kron(SparseMatrix(j_adj.transpose()), d);
        l -= 0.5 * upsilon_.minus * block;
    }
    l.prune(Complex(0.0), 0.0);
    return l;
}

ComplexMatrix cross_dissipator_apply(const GeneratorRWA& gen, const ComplexMatrix& rho)
{
    if (rho.rows() != gen.space().dim() || rho.cols() != gen.space().dim()) {
        throw DimensionMismatch("cross_dissipator_apply: state dimension does not match the generator");
    }
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    gen.cross_dissipator(rho, out);
    return out;
}

ComplexMatrix rhs_rwa(const GeneratorRWA& gen, const ComplexMatrix& rho)
{
    ComplexMatrix out;
    gen.rhs(rho, out);
    return out;
}

} // namespace nldiss
