// test_entanglement.cpp — Partial transpose, negativity, parity and manifold identities

#include "helpers.hpp"
#include "nldiss/entanglement.hpp"

#include <doctest.h>

#include <cmath>

using namespace nldiss;

namespace {

DensityMatrix random_product(int m, std::mt19937& rng)
{
    StateVector a{TruncatedSpace(m, 1), testing::random_vector(m, rng)};
    StateVector b{TruncatedSpace(m, 1), testing::random_vector(m, rng)};
    return product_density(a, b);
}

DensityMatrix bell(int m)
{
    const TruncatedSpace s(m);
    ComplexVector psi = ComplexVector::Zero(s.dim());
    psi(s.index(0, 1)) = psi(s.index(1, 0)) = 1.0 / std::sqrt(2.0);
    return pure_density(s, psi);
}

// Random manifold state obeying |rho_{10,01}|^2 <= P10 P01.
DensityMatrix random_manifold(const TruncatedSpace& s, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double a = u01(rng), b = u01(rng), c = u01(rng);
    const double sum = a + b + c;
    a /= sum, b /= sum, c /= sum;
    const double mag = std::sqrt(b * c) * u01(rng);
    const double phase = 2.0 * M_PI * u01(rng);
    const Complex coh = std::polar(mag, phase);
    return manifold_state(s, a, b + c, 2.0 * coh.real(), 2.0 * coh.imag(), b - c);
}

} // namespace

TEST_CASE("partial transpose is an involution and keeps product states positive")
{
    std::mt19937 rng(21);
    const TruncatedSpace s(3);
    const ComplexMatrix rho = testing::random_density(s.dim(), rng);
    for (int sub : {1, 2}) CHECK(max_abs(partial_transpose(partial_transpose(rho, s, sub), s, sub) - rho) == 0.0);

    const DensityMatrix prod = random_product(3, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(partial_transpose(prod));
    CHECK(es.eigenvalues().minCoeff() > -1e-14);

    CHECK_THROWS(partial_transpose(rho, s, 3));
    CHECK_THROWS_AS(partial_transpose(rho, TruncatedSpace(4)), DimensionMismatch);
}

TEST_CASE("negativity of canonical states")
{
    CHECK(std::abs(negativity(bell(2)) - 0.5) < 1e-12);
    CHECK(std::abs(negativity(bell(5)) - 0.5) < 1e-12);
    const DensityMatrix vac = product_density(coherent_state(0.0, 4), coherent_state(0.0, 4));
    CHECK(negativity(vac) == 0.0);

    std::mt19937 rng(23);
    for (int k = 0; k < 100; ++k) CHECK(negativity(random_product(4, rng)) < 1e-12);
}

TEST_CASE("negativity from eigenvalues equals the trace-norm form")
{
    std::mt19937 rng(29);
    for (int k = 0; k < 20; ++k) {
        const TruncatedSpace s(3);
        const DensityMatrix rho(s, testing::random_density(s.dim(), rng));
        CHECK(std::abs(negativity(rho) - negativity_trace_norm(rho)) < 1e-10);
    }
    CHECK(std::abs(negativity_trace_norm(bell(3)) - 0.5) < 1e-12);
}

TEST_CASE("dephased two-displaced state has the closed-form negativity")
{
    const TruncatedSpace s(4);
    const double p = std::exp(-2.0) * std::sinh(2.0);
    const DensityMatrix rho = manifold_state(s, 1.0 - p, p, -p, 0.0, 0.0);
    CHECK(negativity(rho) == doctest::Approx(0.0990).epsilon(5e-3));
    CHECK(std::abs(negativity(rho) - asymptotic_negativity(p)) < 1e-12);

    for (int k = 1; k <= 9; ++k) {
        const double q = 0.1 * k;
        const DensityMatrix st = manifold_state(s, 1.0 - q, q, -q, 0.0, 0.0);
        CHECK(std::abs(negativity(st) - asymptotic_negativity(q)) < 1e-12);
    }
}

TEST_CASE("asymptotic negativity endpoints")
{
    CHECK(asymptotic_negativity(0.0) == 0.0);
    CHECK(asymptotic_negativity(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(asymptotic_negativity(0.49084) == doctest::Approx(0.09899).epsilon(1e-4));
    CHECK_THROWS_AS(asymptotic_negativity(1.5), std::domain_error);
    CHECK_THROWS_AS(asymptotic_negativity(-0.1), std::domain_error);
}

TEST_CASE("parity populations")
{
    const DensityMatrix vac = product_density(coherent_state(0.0, 4), coherent_state(0.0, 4));
    CHECK(parity_populations(vac).even == 1.0);
    CHECK(parity_populations(vac).odd == 0.0);

    const DensityMatrix one = product_density(coherent_state(1.0, 10), coherent_state(0.0, 10));
    CHECK(std::abs(parity_populations(one).odd - std::exp(-1.0) * std::sinh(1.0)) < 1e-6);

    const DensityMatrix two = product_density(coherent_state(1.0, 10), coherent_state(1.0, 10));
    CHECK(std::abs(parity_populations(two).odd - std::exp(-2.0) * std::sinh(2.0)) < 1e-6);
}

TEST_CASE("bloch_extract")
{
    const TruncatedSpace s(3);
    ComplexVector psi = ComplexVector::Zero(s.dim());
    psi(s.index(1, 0)) = 1.0;
    BlochRecord r = bloch_extract(pure_density(s, psi));
    CHECK(r.s == 1.0);
    CHECK(r.u == 0.0);
    CHECK(r.v == 0.0);
    CHECK(r.w == 1.0);

    r = bloch_extract(bell(3));
    CHECK(r.s == doctest::Approx(1.0));
    CHECK(r.u == doctest::Approx(1.0));
    CHECK(std::abs(r.v) < 1e-15);
    CHECK(std::abs(r.w) < 1e-15);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const DensityMatrix m = random_manifold(s, rng);
        const BlochRecord a = bloch_extract(m);
        const BlochRecord b = bloch_extract(manifold_state(s, a.p00, a.s, a.u, a.v, a.w));
        CHECK(std::abs(a.s - b.s) < 1e-15);
        CHECK(std::abs(a.u - b.u) < 1e-15);
        CHECK(std::abs(a.v - b.v) < 1e-15);
        CHECK(std::abs(a.w - b.w) < 1e-15);
    }
}

TEST_CASE("Vieta identity on manifold states")
{
    const TruncatedSpace s(3);
    const DensityMatrix zero_coh = manifold_state(s, 0.5, 0.5, 0.0, 0.0, 0.1);
    VietaProduct vp = vieta_product(zero_coh);
    CHECK(vp.rhs == 0.0);
    CHECK(std::abs(vp.lhs) < 1e-15);

    vp = vieta_product(manifold_state(s, 0.5, 0.5, 0.5, 0.0, 0.0));
    CHECK(vp.rhs == doctest::Approx(-1.0 / 256.0).epsilon(1e-14));
    CHECK(std::abs(vp.lhs - vp.rhs) < 1e-15);

    vp = vieta_product(manifold_state(s, 0.0, 1.0, 1.0, 0.0, 0.0));
    CHECK(vp.rhs == doctest::Approx(-1.0 / 16.0).epsilon(1e-14));
    CHECK(std::abs(vp.lhs - vp.rhs) < 1e-14);

    std::mt19937 rng(37);
    for (int k = 0; k < 100; ++k) {
        const VietaProduct r = vieta_product(random_manifold(s, rng));
        CHECK(std::abs(r.lhs - r.rhs) < 1e-10);
    }

    const DensityMatrix leaky = product_density(coherent_state(1.0, 3), coherent_state(1.0, 3));
    CHECK_THROWS_AS(vieta_product(leaky), std::domain_error);
}
