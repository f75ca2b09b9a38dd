// integrator.cpp — Dormand–Prince stepping and sector-blocked matrix exponentials

#include "nldiss/integrator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nldiss {

std::string to_string(Method m)
{
    return m == Method::adaptive_rk ? "rk45" : "exact";
}

Method method_from_string(const std::string& name)
{
    if (name == "rk45" || name == "adaptive_rk") return Method::adaptive_rk;
    if (name == "exact" || name == "expm") return Method::exact;
    throw std::invalid_argument("unknown method '" + name + "' (expected rk45 or exact)");
}

std::string to_string(Spacing s)
{
    return s == Spacing::uniform ? "uniform" : "log";
}

Spacing spacing_from_string(const std::string& name)
{
    if (name == "uniform") return Spacing::uniform;
    if (name == "log") return Spacing::log;
    throw std::invalid_argument("unknown spacing '" + name + "' (expected uniform or log)");
}

void IntegratorConfig::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("IntegratorConfig: rel_tol must lie in (0, 1)");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("IntegratorConfig: abs_tol must be > 0");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("IntegratorConfig: t_final must be > 0");
    if (sample_count < 2) throw std::invalid_argument("IntegratorConfig: sample_count must be >= 2");
    if (max_step < 0.0) throw std::invalid_argument("IntegratorConfig: max_step must be >= 0");
    if (spacing == Spacing::log && sample_count < 3) {
        throw std::invalid_argument("IntegratorConfig: log spacing needs at least 3 samples");
    }
}

std::vector<double> sample_times(const IntegratorConfig& cfg)
{
    cfg.validate();
    const int n = cfg.sample_count;
    std::vector<double> t(n);
    if (cfg.spacing == Spacing::uniform) {
        for (int k = 0; k < n; ++k) t[k] = cfg.t_final * static_cast<double>(k) / (n - 1);
    } else {
        const double first = cfg.log_first > 0.0 ? cfg.log_first : cfg.t_final * 1e-4;
        if (first >= cfg.t_final) throw std::invalid_argument("IntegratorConfig: log_first must be < t_final");
        t[0] = 0.0;
        const double ratio = std::log(cfg.t_final / first);
        for (int k = 1; k < n; ++k) t[k] = first * std::exp(ratio * (k - 1) / (n - 2));
    }
    t.back() = cfg.t_final;
    return t;
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const ComplexMatrix& err, const ComplexMatrix& y0, const ComplexMatrix& y1,
                  double rtol, double atol)
{
    double acc = 0.0;
    const Eigen::Index n = err.size();
    const Complex* e = err.data();
    const Complex* a = y0.data();
    const Complex* b = y1.data();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double scale = atol + rtol * std::max(std::abs(a[k]), std::abs(b[k]));
        const double r = std::abs(e[k]) / scale;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

} // namespace

IntegrationStats integrate_adaptive(const LinearGenerator& rhs, ComplexMatrix rho,
                                    const std::vector<double>& times, const IntegratorConfig& cfg,
                                    const SampleCallback& on_sample)
{
    if (times.empty()) return {};
    IntegrationStats stats;
    const Eigen::Index r = rho.rows(), c = rho.cols();
    ComplexMatrix k1(r, c), k2(r, c), k3(r, c), k4(r, c), k5(r, c), k6(r, c), k7(r, c);
    ComplexMatrix y_new(r, c), tmp(r, c), err(r, c);

    double t = times.front();
    rhs(rho, k1);
    ++stats.rhs_evals;

    const double horizon = times.back() - times.front();
    const double hmax = cfg.max_step > 0.0 ? cfg.max_step : std::max(horizon, 1e-300);
    double h;
    {
        // Initial step from the scale of rho and its derivative.
        const double d0 = rho.norm();
        const double d1 = k1.norm();
        h = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-6;
        h = std::min({h, hmax, horizon > 0.0 ? horizon : h});
    }

    on_sample(t, rho);
    for (std::size_t next = 1; next < times.size(); ++next) {
        const double target = times[next];
        while (t < target) {
            const double remaining = target - t;
            const bool clipped = h >= remaining;
            const double step = clipped ? remaining : h;
            if (step < 1e-14 * std::max(1.0, std::abs(t))) {
                std::ostringstream os;
                os << "step size underflow at t = " << t << " (h = " << step << ")";
                throw IntegrationError(os.str(), t);
            }

            tmp = rho + step * a21 * k1;
            rhs(tmp, k2);
            tmp = rho + step * (a31 * k1 + a32 * k2);
            rhs(tmp, k3);
            tmp = rho + step * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(tmp, k4);
            tmp = rho + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(tmp, k5);
            tmp = rho + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(tmp, k6);
            y_new = rho + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(y_new, k7);
            stats.rhs_evals += 6;

            err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double en = error_norm(err, rho, y_new, cfg.rel_tol, cfg.abs_tol);
            if (!std::isfinite(en)) {
                throw IntegrationError("non-finite state during integration", t);
            }

            const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (en <= 1.0) {
                t = clipped ? target : t + step;
                rho.swap(y_new);
                k1.swap(k7);
                ++stats.steps;
                // A step shortened to hit a sample time says nothing about the natural step size.
                if (!clipped) h = std::min(step * factor, hmax);
                else h = std::min(std::max(h, step * factor), hmax);
            } else {
                ++stats.rejected;
                h = step * std::max(factor, 0.1);
            }
        }
        on_sample(t, rho);
    }
    return stats;
}

Eigen::SparseMatrix<Complex> probe_superoperator(Eigen::Index dim, const LinearGenerator& rhs)
{
    const Eigen::Index n = dim * dim;
    std::vector<Eigen::Triplet<Complex>> triplets;
    ComplexMatrix unit = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix out(dim, dim);
    for (Eigen::Index col = 0; col < n; ++col) {
        unit.data()[col] = 1.0;
        rhs(unit, out);
        unit.data()[col] = 0.0;
        const Complex* o = out.data();
        for (Eigen::Index row = 0; row < n; ++row) {
            if (o[row] != Complex(0.0)) triplets.emplace_back(row, col, o[row]);
        }
    }
    Eigen::SparseMatrix<Complex> s(n, n);
    s.setFromTriplets(triplets.begin(), triplets.end());
    return s;
}

ExactPropagator::ExactPropagator(Eigen::Index dim, const LinearGenerator& rhs)
    : ExactPropagator(dim, probe_superoperator(dim, rhs))
{}

ExactPropagator::ExactPropagator(Eigen::Index dim, const Eigen::SparseMatrix<Complex>& superoperator)
    : dim_(dim)
{
    const Eigen::Index n = dim * dim;
    if (superoperator.rows() != n || superoperator.cols() != n) {
        throw DimensionMismatch("ExactPropagator: superoperator must be dim^2 x dim^2");
    }
    Eigen::SparseMatrix<Complex> s = superoperator;
    s.prune(Complex(0.0), 0.0);

    // Union-find over vec positions linked by nonzero entries.
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (Eigen::Index col = 0; col < s.outerSize(); ++col) {
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(s, col); it; ++it) {
            const Complex v = it.value();
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw std::domain_error("ExactPropagator: generator has non-finite entries");
            }
            const Eigen::Index a = find(it.row()), b = find(col);
            if (a != b) parent[a] = b;
        }
    }

    std::vector<Eigen::Index> sector_of(static_cast<std::size_t>(n), -1);
    std::vector<Eigen::Index> local(static_cast<std::size_t>(n), -1);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index root = find(k);
        if (sector_of[root] < 0) {
            sector_of[root] = static_cast<Eigen::Index>(sectors_.size());
            sectors_.emplace_back();
        }
        Sector& sec = sectors_[sector_of[root]];
        local[k] = static_cast<Eigen::Index>(sec.indices.size());
        sec.indices.push_back(k);
    }
    for (Sector& sec : sectors_) {
        const auto m = static_cast<Eigen::Index>(sec.indices.size());
        sec.generator = ComplexMatrix::Zero(m, m);
    }
    for (Eigen::Index col = 0; col < s.outerSize(); ++col) {
        Sector& sec = sectors_[sector_of[find(col)]];
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(s, col); it; ++it) {
            sec.generator(local[it.row()], local[col]) = it.value();
        }
    }
}

void ExactPropagator::decompose(Sector& sec)
{
    // Spectral route when the eigenvector basis is well conditioned; Pade otherwise.
    Eigen::ComplexEigenSolver<ComplexMatrix> es(sec.generator, true);
    if (es.info() != Eigen::Success) return;
    const ComplexMatrix& v = es.eigenvectors();
    Eigen::PartialPivLU<ComplexMatrix> lu(v);
    ComplexMatrix v_inv = lu.inverse();
    if (!v_inv.allFinite()) return;
    const double cond = v.cwiseAbs().colwise().sum().maxCoeff() * v_inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!(cond < kMaxCondition)) return;
    const double scale = std::max(1.0, max_abs(sec.generator));
    const ComplexMatrix rebuilt = v * es.eigenvalues().asDiagonal() * v_inv;
    if (max_abs(rebuilt - sec.generator) > 1e-12 * scale) return;
    sec.eigenvalues = es.eigenvalues();
    sec.eigenvectors = v;
    sec.eigenvectors_inv = std::move(v_inv);
    sec.spectral = true;
}

std::size_t ExactPropagator::spectral_sectors() const noexcept
{
    std::size_t count = 0;
    for (const Sector& s : sectors_) count += s.spectral ? 1 : 0;
    return count;
}

std::size_t ExactPropagator::largest_sector() const noexcept
{
    std::size_t best = 0;
    for (const Sector& s : sectors_) best = std::max(best, s.indices.size());
    return best;
}

void ExactPropagator::advance(ComplexMatrix& rho, double dt)
{
    if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionMismatch("ExactPropagator: state dimension mismatch");
    if (dt == 0.0) return;
    // Uniform grids produce dt values differing in the last bits; reuse the cached blocks for those.
    if (std::abs(dt - cached_dt_) > 1e-13 * std::abs(dt)) {
        // Non-uniform grids miss the cache on every interval; past a few misses one
        // eigendecomposition per sector is cheaper than a Pade exponential per step.
        if (++cache_misses_ == kMissesBeforeSpectral) {
            for (Sector& s : sectors_) decompose(s);
        }
        for (Sector& s : sectors_) {
            if (!s.spectral) s.step = (s.generator * dt).exp();
        }
        cached_dt_ = dt;
    }
    Complex* data = rho.data();
    ComplexVector v, w;
    for (const Sector& s : sectors_) {
        const auto m = static_cast<Eigen::Index>(s.indices.size());
        v.resize(m);
        for (Eigen::Index k = 0; k < m; ++k) v(k) = data[s.indices[k]];
        if (s.spectral) {
            w.noalias() = s.eigenvectors_inv * v;
            w.array() *= (s.eigenvalues.array() * dt).exp();
            v.noalias() = s.eigenvectors * w;
            w.swap(v);
        } else {
            w.noalias() = s.step * v;
        }
        for (Eigen::Index k = 0; k < m; ++k) data[s.indices[k]] = w(k);
    }
}

IntegrationStats integrate_exact(ExactPropagator& propagator, ComplexMatrix rho,
                                 const std::vector<double>& times, const SampleCallback& on_sample)
{
    IntegrationStats stats;
    if (times.empty()) return stats;
    on_sample(times.front(), rho);
    for (std::size_t k = 1; k < times.size(); ++k) {
        propagator.advance(rho, times[k] - times[k - 1]);
        ++stats.steps;
        on_sample(times[k], rho);
    }
    return stats;
}

} // namespace nldiss
