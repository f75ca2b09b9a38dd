// integrator.hpp — Time stepping for linear matrix ODEs d(rho)/dt = L(rho)
//
// Two routes share one generator interface:
//   * adaptive Dormand–Prince 5(4) with per-step error control,
//   * an exact propagator exp(L dt) assembled from the generator's invariant
//     sectors, for horizons where explicit stepping is too slow.

#pragma once

#include "nldiss/fock.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nldiss {

enum class Method { adaptive_rk, exact };
enum class Spacing { uniform, log };

std::string to_string(Method m);
Method method_from_string(const std::string& name);
std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string& name);

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;  // 0 means unbounded
    double t_final = 1.0;
    int sample_count = 2;
    Method method = Method::adaptive_rk;
    Spacing spacing = Spacing::uniform;
    double log_first = 0.0;  // first nonzero time for log spacing; 0 picks t_final * 1e-4
    // Rerun once with tolerances one decade tighter when the trace drifts by more than drift_limit.
    bool auto_tighten = true;
    double drift_limit = 1e-8;

    void validate() const;
};

// Sample times, t = 0 first and t_final last.
std::vector<double> sample_times(const IntegratorConfig& cfg);

struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, double last_good)
        : std::runtime_error(what), last_good_time(last_good) {}
    double last_good_time;
};

using LinearGenerator = std::function<void(const ComplexMatrix& rho, ComplexMatrix& out)>;
using SampleCallback = std::function<void(double t, const ComplexMatrix& rho)>;

struct IntegrationStats {
    long steps = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

// Integrates from times.front() and calls `on_sample` at every entry of `times` (ascending).
IntegrationStats integrate_adaptive(const LinearGenerator& rhs, ComplexMatrix rho,
                                    const std::vector<double>& times, const IntegratorConfig& cfg,
                                    const SampleCallback& on_sample);

/// exp(L dt) for a time-independent linear generator, built blockwise.
///
/// Vectorized indices connected by nonzero superoperator entries form one
/// invariant sector. Sectors are exponentiated densely for each new step size;
/// once several distinct steps have been requested, sectors with well
/// conditioned eigenvectors switch to a one-off eigendecomposition. A matrix-free
/// generator is first probed on every matrix unit |r><c|.
class ExactPropagator {
public:
    // `superoperator` acts on column-major vec(rho), dimension dim^2.
    ExactPropagator(Eigen::Index dim, const Eigen::SparseMatrix<Complex>& superoperator);
    ExactPropagator(Eigen::Index dim, const LinearGenerator& rhs);

    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t sector_count() const noexcept { return sectors_.size(); }
    std::size_t largest_sector() const noexcept;
    // Sectors currently propagated through an eigendecomposition.
    std::size_t spectral_sectors() const noexcept;

    // Advances rho (in place) by dt. The block exponentials for the last dt are cached.
    void advance(ComplexMatrix& rho, double dt);

private:
    struct Sector {
        std::vector<Eigen::Index> indices;  // column-major vec positions
        ComplexMatrix generator;
        ComplexMatrix step;  // exp(generator * cached_dt_), Pade sectors only
        bool spectral = false;
        ComplexVector eigenvalues;
        ComplexMatrix eigenvectors;
        ComplexMatrix eigenvectors_inv;
    };

    static constexpr double kMaxCondition = 1e6;
    static constexpr int kMissesBeforeSpectral = 4;
    static void decompose(Sector& sec);

    Eigen::Index dim_;
    std::vector<Sector> sectors_;
    double cached_dt_ = -1.0;
    int cache_misses_ = 0;
};

// Superoperator of a matrix-free generator, probed on every matrix unit.
Eigen::SparseMatrix<Complex> probe_superoperator(Eigen::Index dim, const LinearGenerator& rhs);

IntegrationStats integrate_exact(ExactPropagator& propagator, ComplexMatrix rho,
                                 const std::vector<double>& times, const SampleCallback& on_sample);

} // namespace nldiss
