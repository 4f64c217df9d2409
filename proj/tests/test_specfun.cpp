#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gegenbauer.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include "virial/errors.hpp"
#include "virial/specfun.hpp"

using namespace virial;
using namespace virial::specfun;

TEST_CASE("Airy function against Boost")
{
    for (double x = -20.0; x <= 20.0; x += 0.137) {
        const AiryValue a = airy(x);
        const double ai = boost::math::airy_ai(x), dai = boost::math::airy_ai_prime(x);
        // relative to the oscillation envelope on the negative axis
        const double env = x < 0 ? std::pow(std::fabs(x), -0.25) : std::fabs(ai);
        const double denv = x < 0 ? std::pow(std::fabs(x), 0.25) : std::fabs(dai);
        CHECK(std::fabs(a.ai - ai) <= 1e-12 * env + 1e-300);
        CHECK(std::fabs(a.dai - dai) <= 1e-12 * denv + 1e-300);
    }
}

TEST_CASE("Airy zeros against Boost")
{
    for (int k = 1; k <= 12; ++k)
        CHECK(airy_zero(k) == doctest::Approx(boost::math::airy_ai_zero<double>(k)).epsilon(1e-13));
    CHECK(airy_zero(1) == doctest::Approx(-2.338107410459767).epsilon(1e-14));
    CHECK_THROWS_AS(airy_zero(0), domain_error);
}

TEST_CASE("Hermite polynomials and functions")
{
    for (int n = 0; n <= 12; ++n)
        for (double x : {-1.3, 0.0, 0.4, 2.2})
            CHECK(hermite(n, x) == doctest::Approx(boost::math::hermite(n, x)).epsilon(1e-13));
    // H_{2n+1}(rho)/rho at rho -> 0: (-1)^n (2n+2)!/(n+1)!
    CHECK(hermite(3, 1e-8) / 1e-8 == doctest::Approx(-12.0));
    CHECK(hermite(1, 1e-8) / 1e-8 == doctest::Approx(2.0));
    // normalized: int psi_n^2 = 1 on a wide grid
    for (int n : {0, 5, 40}) {
        double s = 0.0;
        const double h = 1e-3;
        for (double x = -15.0; x <= 15.0; x += h) s += std::pow(hermite_function(n, x), 2) * h;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("Laguerre and Gegenbauer against Boost")
{
    for (int n = 0; n <= 8; ++n)
        for (double x : {0.0, 0.7, 3.1}) {
            CHECK(laguerre(n, 0.0, x) == doctest::Approx(boost::math::laguerre(n, x)).epsilon(1e-12));
            CHECK(laguerre(n, 3.0, x) == doctest::Approx(boost::math::laguerre(n, 3u, x)).epsilon(1e-12));
        }
    for (int l = 0; l <= 7; ++l)
        for (double a : {0.5, 1.0, 2.5})
            for (double z : {-0.8, 0.1, 0.95})
                CHECK(gegenbauer(l, a, z) == doctest::Approx(boost::math::gegenbauer(l, a, z)).epsilon(1e-12));
}

TEST_CASE("associated Gegenbauer reduces to associated Legendre at j = 1")
{
    // F_{l,m}^{(1)} = (-1)^m (1-z^2)^{m/2} d^m P_l: at m = 1, l = 2 this is -3 z sqrt(1-z^2)
    const double z = 0.3;
    CHECK(assoc_gegenbauer(2, 1, 1, z) == doctest::Approx(-3.0 * z * std::sqrt(1 - z * z)));
    CHECK(assoc_gegenbauer(2, 3, 1, z) == 0.0);
    CHECK(assoc_gegenbauer(3, 0, 2, z) == doctest::Approx(gegenbauer(3, 1.0, z)));
}

TEST_CASE("associated Gegenbauer satisfies its differential equation")
{
    std::mt19937 rng(3);
    for (int t = 0; t < 50; ++t) {
        const int l = std::uniform_int_distribution<int>(0, 6)(rng);
        const int m = std::uniform_int_distribution<int>(0, l)(rng);
        const int j = std::uniform_int_distribution<int>(1, 4)(rng);
        const double z = std::uniform_real_distribution<double>(-0.9, 0.9)(rng), h = 1e-4;
        const double f = assoc_gegenbauer(l, m, j, z);
        const double fp = assoc_gegenbauer(l, m, j, z + h), fm = assoc_gegenbauer(l, m, j, z - h);
        const double d1 = (fp - fm) / (2 * h), d2 = (fp - 2 * f + fm) / (h * h);
        const double a = -(1 - z * z) * d2, b = (j + 1.0) * z * d1, c = m * (m + j - 1.0) / (1 - z * z) * f,
                     d = l * (l + j + 0.0) * f;
        CHECK(std::fabs(a + b + c - d) <= 1e-6 * (std::fabs(a) + std::fabs(b) + std::fabs(c) + std::fabs(d) + 1e-12));
    }
}

TEST_CASE("angular functions: index validation and eigenvalues")
{
    const AngularIndexSet ok{4, {2, 1, -1}}, unordered{4, {1, 2, 0}}, short_chain{4, {1, 0}};
    CHECK_NOTHROW(ok.validate());
    CHECK_THROWS_AS(unordered.validate(), domain_error);
    CHECK_THROWS_AS(short_chain.validate(), domain_error);
    CHECK(lambda_of({5, {2, 1, 0, 0}}) == 10.0);
}

TEST_CASE("angular functions are orthonormal in 3 and 5 dimensions")
{
    const std::vector<AngularIndexSet> three{{3, {0, 0}}, {3, {1, 0}}, {3, {1, 1}}, {3, {2, -1}}, {3, {2, 2}}};
    for (const auto& a : three)
        for (const auto& b : three)
            CHECK(std::abs(omega_inner(a, b, true) - std::complex<double>(&a == &b ? 1.0 : 0.0)) < 1e-10);
    const std::vector<AngularIndexSet> five{{5, {0, 0, 0, 0}}, {5, {1, 1, 0, 0}}, {5, {2, 1, 1, -1}}, {5, {2, 2, 0, 0}}};
    for (const auto& a : five)
        for (const auto& b : five)
            CHECK(std::abs(omega_inner(a, b, true) - std::complex<double>(&a == &b ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("unnormalized Omega norms on the 3-sphere")
{
    const double pi = std::numbers::pi;
    CHECK(omega_norm({4, {0, 0, 0}}) == doctest::Approx(std::sqrt(2 * pi * pi)));
    CHECK(omega_norm({4, {1, 1, 1}}) == doctest::Approx(2 * pi));
}

TEST_CASE("3-d angular functions match spherical harmonics in shape")
{
    // Omega_{1,0} is proportional to cos(theta_1)
    const double t1[2] = {0.4, 1.1}, t2[2] = {1.3, 2.0};
    const auto r1 = omega({3, {1, 0}}, t1, true) / std::cos(t1[0]);
    const auto r2 = omega({3, {1, 0}}, t2, true) / std::cos(t2[0]);
    CHECK(std::abs(r1 - r2) < 1e-12);
    CHECK(std::abs(r1) == doctest::Approx(std::sqrt(3.0 / (4 * std::numbers::pi))));
}

TEST_CASE("spherical to Cartesian conversion has unit radius")
{
    const double t[3] = {0.3, 1.2, 4.0};
    const auto x = spherical_to_cartesian(4, 2.0, t);
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    CHECK(r2 == doctest::Approx(4.0));
    CHECK(x[0] == doctest::Approx(2.0 * std::cos(0.3)));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    auto [x, w] = gauss_legendre(10);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 18);
    CHECK(s == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
}
