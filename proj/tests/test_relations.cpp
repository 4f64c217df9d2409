#include <doctest.h>

#include <cmath>
#include <numbers>

#include "virial/errors.hpp"
#include "virial/expectations.hpp"
#include "virial/relations.hpp"

using namespace virial;

namespace {
const ScaledPotential oscillator = ScaledPotential::power_law(1.0, 2.0);
const ScaledPotential linear = ScaledPotential::power_law(1.0, 1.0);
const ScaledPotential coulomb = ScaledPotential::coulomb(1.0);

Eigenstate solve(const ScaledPotential& p, int n, int l, int N = 3)
{
    const DimensionConfig d{N, l};
    return solve_eigenstate(p, d, n, default_grid(p, d, n));
}
} // namespace

TEST_CASE("general relation on oscillator states")
{
    for (int l = 0; l <= 2; ++l) {
        const Eigenstate s = solve(oscillator, 1, l);
        for (double j : {0.0, 1.0, 2.0, 3.0, 2.0 * l + 2}) {
            const RelationReport r = general_residual(s, ProbeFunction::power(j));
            CHECK(std::fabs(r.relative_residual) < 1e-7);
            CHECK(r.boundary_active == (j == 2.0 - 2.0 * (l + 1)));
        }
    }
}

TEST_CASE("boundary term at q = -2l equals C^2 (2l+1)^2")
{
    const Eigenstate s = solve(coulomb, 0, 1);
    const RelationReport r = general_residual(s, ProbeFunction::power(-2.0));
    CHECK(r.boundary_active);
    CHECK(r.rhs == doctest::Approx(s.C2 * 9.0));
    CHECK(std::fabs(r.relative_residual) < 1e-7);
    CHECK(r.id == "GEN[rho^-2]");
}

TEST_CASE("oscillator ground with f = rho^3: both sides of the j = 3 case are 3.75")
{
    const Eigenstate s = solve(oscillator, 0, 0);
    const RelationReport r = special_case_residual(s, SpecialCase::J3);
    CHECK(r.lhs == doctest::Approx(3.75).epsilon(1e-9));
    CHECK(r.rhs == doctest::Approx(3.75).epsilon(1e-9));
}

TEST_CASE("named special cases hold on linear and Coulomb states")
{
    for (const auto* p : {&linear, &coulomb})
        for (int l = 0; l <= 1; ++l) {
            const Eigenstate s = solve(*p, 1, l);
            for (auto c : {SpecialCase::J0, SpecialCase::J1_virial, SpecialCase::J2, SpecialCase::J3,
                           SpecialCase::J2L2}) {
                const RelationReport r = special_case_residual(s, c);
                CHECK_MESSAGE(std::fabs(r.relative_residual) < 1e-7, to_string(c));
            }
            if (l > 0) CHECK(std::fabs(special_case_residual(s, SpecialCase::JNEG2L).relative_residual) < 1e-7);
        }
}

TEST_CASE("power-law identities")
{
    const Eigenstate s0 = solve(linear, 0, 0), s1 = solve(linear, 0, 1);
    const PowerLaw pl{1.0, 1.0};
    CHECK(std::fabs(power_law_relation(s0, pl, PowerCase::P1).relative_residual) < 1e-8);
    for (auto c : {PowerCase::p1, PowerCase::P2, PowerCase::P3, PowerCase::P4, PowerCase::P5})
        CHECK_MESSAGE(std::fabs(power_law_relation(s1, pl, c).relative_residual) < 1e-8, to_string(c));
    CHECK(power_case_applies(PowerCase::P3, 1, 1.0));
    CHECK_FALSE(power_case_applies(PowerCase::P3, 0, 1.0));
    CHECK_THROWS_AS(power_law_relation(s0, pl, PowerCase::p1), domain_error);
    CHECK_THROWS_AS(power_law_relation(s0, PowerLaw{2.0, 1.0}, PowerCase::P2), domain_error);
}

TEST_CASE("custom probes")
{
    const Eigenstate s = solve(oscillator, 0, 1);
    auto g = [](double x) { return std::exp(-x); };
    const ProbeFunction f = ProbeFunction::custom(
        g, [g](double x) { return -g(x); }, g, [g](double x) { return -g(x); }, 0.0, 1.0, "exp");
    CHECK(std::fabs(general_residual(s, f).relative_residual) < 1e-8);
    CHECK(f.derivative(1.0, 2) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("probes below the boundary exponent are refused")
{
    const Eigenstate s = solve(oscillator, 0, 0);
    CHECK_THROWS_AS(general_residual(s, ProbeFunction::power(-5.0)), domain_error);
}

TEST_CASE("N-dimensional boundary term")
{
    for (int l = 0; l <= 3; ++l) {
        const DimensionConfig d{3, l};
        CHECK(delta_n(d, 2.0, 0.5) == doctest::Approx(delta_n_closed_form(d, 2.0, 0.5)));
        CHECK(delta_n(d, 2.0, 0.5) == doctest::Approx((2 * l + 1.0) * (2 * l + 1.0)));
        CHECK(boundary_exponent(d) == -2.0 * l);
    }
    CHECK(boundary_exponent({5, 0}) == -2.0);
    CHECK(delta_n({5, 1}, 1.0, 1.0) != delta_n_closed_form({5, 1}, 1.0, 1.0));
}

TEST_CASE("N-dimensional relation")
{
    const Eigenstate s5 = solve(oscillator, 0, 1, 5);
    for (double j : {-2.0, 1.0, 2.0, 4.0})
        CHECK(std::fabs(ndim_residual(s5, ProbeFunction::power(j)).relative_residual) < 1e-8);
    // N = 1: q0 = 2 and the boundary term is C
    const Eigenstate s1 = solve(oscillator, 0, 0, 1);
    const RelationReport r = ndim_residual(s1, ProbeFunction::power(2.0));
    CHECK(r.boundary_active);
    CHECK(r.lhs == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-8));
    CHECK(std::fabs(r.relative_residual) < 1e-8);
}

TEST_CASE("oscillator chains")
{
    const auto v = oscillator_v_chain(1.5, 0, 3);
    REQUIRE(v.size() == 4);
    CHECK(v[1].value == doctest::Approx(0.75));
    CHECK(v[2].value == doctest::Approx(0.9375));
    CHECK(v[3].value == doctest::Approx(1.640625));
    const Eigenstate s = solve(oscillator, 1, 1);
    for (const auto& c : oscillator_odd_chain(s, 7))
        CHECK(c.value == doctest::Approx(expect_power(s, c.power).value).epsilon(1e-7));
}

TEST_CASE("linear chain")
{
    const Eigenstate s = solve(linear, 1, 0);
    for (const auto& c : linear_chain(s.eps, 5))
        CHECK(c.value == doctest::Approx(expect_power(s, c.power).value / std::pow(2.0, c.power)).epsilon(1e-7));
}

TEST_CASE("Kramer chain for hydrogen 1s")
{
    const auto c = coulomb_kramer_chain(-0.5, 0, 3);
    REQUIRE(c.size() == 5);
    const double expected[] = {1.0, 1.0, 1.5, 3.0, 7.5};
    for (int i = 0; i < 5; ++i) {
        CHECK(c[i].power == i - 1.0);
        CHECK(c[i].value == doctest::Approx(expected[i]));
    }
    CHECK(coulomb_kramer_chain(-0.5, 0, 0).empty());
    CHECK_THROWS_AS(coulomb_kramer_chain(0.1, 0, 3), domain_error);
}

TEST_CASE("leptonic width")
{
    // a = 1/GeV and M_V = 3.1 GeV reduce the width to 16 (alpha e_q / 3.1)^2 GeV at C^2 = 4
    constexpr double hbar = 1.054571817e-34, c = 299792458.0, GeV = 1.602176634e-10;
    const double a = hbar * c / GeV, M = 3.1 * GeV / (c * c);
    const double w = decay_width(4.0, a, M, 2.0 / 3.0, 1.0 / 137.0);
    CHECK(w == doctest::Approx(16.0 * std::pow(2.0 / 3.0 / 137.0 / 3.1, 2)).epsilon(1e-12));
    CHECK(w == doctest::Approx(3.942511261768016e-05).epsilon(1e-13));
    CHECK(decay_width(8.0, a, M, 2.0 / 3.0, 1.0 / 137.0) == doctest::Approx(2 * w));
    CHECK(decay_width(4.0, a, M, -2.0 / 3.0, 1.0 / 137.0) == doctest::Approx(w));
    CHECK_THROWS_AS(decay_width(4.0, -a, M, 2.0 / 3.0, 1.0 / 137.0), domain_error);
}
