#include "virial/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "virial/errors.hpp"
#include "virial/expectations.hpp"
#include "virial/kernels.hpp"
#include "virial/specfun.hpp"

namespace virial {

namespace {

constexpr double circular_width = 1e-8;

double veff(const ScaledPotential& p, double l2, double r)
{
    return p(r) + 0.5 * l2 / (r * r);
}

// Bisection on a sign change of f over [a, b] down to adjacent doubles.
template <class F>
double bisect(F&& f, double a, double b)
{
    double fa = f(a);
    for (int it = 0; it < 2000; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Weighted nodes for int_{r_min}^{r_max} g(r) dr / sqrt(2 T_r).
struct PeriodRule {
    std::vector<double> r, w;
};

PeriodRule period_rule(const ClassicalOrbit& o)
{
    PeriodRule rule;
    const int n = o.nodes;
    rule.r.resize(n);
    rule.w.resize(n);
    if (o.r_min > 0.0) {
        // r = mid + half cos(theta): the endpoint square roots cancel against sin(theta).
        const double mid = 0.5 * (o.r_max + o.r_min), half = 0.5 * (o.r_max - o.r_min);
        for (int k = 0; k < n; ++k) {
            const double theta = (2.0 * k + 1.0) * std::numbers::pi / (2.0 * n);
            const double r = mid + half * std::cos(theta);
            const double tr = o.radial_kinetic(r);
            if (!(tr > 0.0)) throw convergence_error("T_r vanishes inside the orbit");
            rule.r[k] = r;
            rule.w[k] = std::numbers::pi / n * half * std::sin(theta) / std::sqrt(2.0 * tr);
        }
    } else {
        // l2 = 0: r = r_max sin^2(phi) on [0, pi/2] removes the outer square root.
        auto [x, wx] = specfun::gauss_legendre(n);
        for (int k = 0; k < n; ++k) {
            const double phi = std::numbers::pi / 4.0 * (x[k] + 1.0);
            const double s = std::sin(phi), c = std::cos(phi);
            const double r = o.r_max * s * s;
            const double tr = o.radial_kinetic(r);
            if (!(tr > 0.0)) throw convergence_error("T_r vanishes inside the orbit");
            rule.r[k] = r;
            rule.w[k] = std::numbers::pi / 4.0 * wx[k] * 2.0 * o.r_max * s * c / std::sqrt(2.0 * tr);
        }
    }
    return rule;
}

std::string orbit_label(const ClassicalOrbit& o)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "orbit_E%.17g_l2%.17g", o.E, o.l2);
    return buf;
}

} // namespace

double ClassicalOrbit::radial_kinetic(double r) const
{
    return E - veff(potential, l2, r);
}

double ClassicalOrbit::radial_kinetic_derivative(double r) const
{
    return -potential.derivative(r, 1) + l2 / (r * r * r);
}

std::pair<double, double> find_turning_points(const ScaledPotential& p, double E, double l2)
{
    if (!(l2 >= 0.0) || !std::isfinite(E)) throw domain_error("orbit needs finite E and l2 >= 0");
    auto tr = [&](double r) { return E - veff(p, l2, r); };
    constexpr double far = 1e8;

    double r_min = 0.0, inner = 0.0;
    if (l2 > 0.0) {
        // Minimum of the effective potential: V' - l2 / r^3 changes sign there.
        auto slope = [&](double r) { return p.derivative(r, 1) - l2 / (r * r * r); };
        double a = 1.0, b = 1.0;
        while (slope(a) > 0.0) {
            a *= 0.5;
            if (a < 1e-12) throw no_orbit("effective potential has no well");
        }
        while (slope(b) < 0.0) {
            b *= 2.0;
            if (b > far) throw no_orbit("effective potential has no well");
        }
        const double rc = (a == b) ? a : bisect(slope, a, b);
        const double depth = tr(rc);
        const double scale = std::max(1.0, std::fabs(E));
        if (depth < -1e-12 * scale) throw no_orbit("E lies below the effective potential minimum");
        if (depth <= 1e-14 * scale) return {rc, rc};
        double lo = rc;
        while (tr(lo) > 0.0) lo *= 0.5;
        r_min = bisect(tr, lo, rc);
        inner = rc;
    } else {
        if (!(tr(1e-8) > 0.0))
            throw no_orbit("E lies below the potential at the origin");
        inner = 1e-8;
    }
    double hi = std::max(2.0 * inner, 1.0);
    while (tr(hi) > 0.0) {
        hi *= 2.0;
        if (hi > far) throw no_orbit("motion is unbound");
    }
    const double r_max = bisect(tr, inner, hi);
    return {r_min, r_max};
}

ClassicalOrbit make_orbit(const ScaledPotential& p, double E, double l2, int nodes)
{
    if (nodes < 8) throw domain_error("orbit quadrature needs at least 8 nodes");
    const auto [r_min, r_max] = find_turning_points(p, E, l2);
    ClassicalOrbit o{p, E, l2, r_min, r_max, 0.0, false, nodes};
    if (r_min > 0.0 && r_max - r_min < circular_width) {
        o.circular = true;
        const double rc = 0.5 * (r_min + r_max);
        o.r_min = o.r_max = rc;
        const double w2 = p.derivative(rc, 2) + 3.0 * l2 / std::pow(rc, 4);
        o.period = 2.0 * std::numbers::pi / std::sqrt(w2);
        return o;
    }
    const PeriodRule rule = period_rule(o);
    double t = 0.0;
    for (double w : rule.w) t += w;
    o.period = 2.0 * t;
    return o;
}

double period_average(const ClassicalOrbit& o, const std::function<double(double)>& g)
{
    if (o.circular) return g(o.r_min);
    const PeriodRule rule = period_rule(o);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < rule.r.size(); ++k) {
        num += rule.w[k] * g(rule.r[k]);
        den += rule.w[k];
    }
    return num / den;
}

RelationReport classical_virial_residual(const ClassicalOrbit& o, const ProbeFunction& f)
{
    RelationReport r;
    r.id = "CLASSICAL[" + f.name + "]";
    r.state = orbit_label(o);
    r.N = 3;
    if (!o.circular) {
        r.lhs = period_average(o, [&](double x) { return 2.0 * f.derivative(x, 1) * o.radial_kinetic(x); });
        r.rhs = -period_average(o, [&](double x) { return f.derivative(x, 0) * o.radial_kinetic_derivative(x); });
    }
    r.residual = r.lhs - r.rhs;
    r.relative_residual = r.residual / std::max({1.0, std::fabs(r.lhs), std::fabs(r.rhs)});
    return r;
}

GapReport quantum_classical_gap(const Eigenstate& s, const ClassicalOrbit& o, const ProbeFunction& f)
{
    if (s.dim.N != 3) throw domain_error("the quantum-classical comparison is set up for N = 3");
    const int l = s.dim.l1;
    const double ell = l * (l + 1.0);
    const double tol = 1e-9 * std::max(1.0, std::fabs(s.eps));
    if (std::fabs(o.E - s.eps) > tol || std::fabs(o.l2 - ell) > 1e-12 * std::max(1.0, ell))
        throw domain_error("orbit must have E = eps and l2 = l(l+1) of the state");

    const ScaledPotential& v = s.potential;
    const double eps = s.eps;
    const double e = v.origin_exponent();
    const double q = f.q;

    // <2 f' T_r + f T_r'> over P, T_r = eps - v - l(l+1) / (2 rho^2)
    std::vector<double> g(s.grid.nodes), d3(s.grid.nodes);
    kernels::sample(
        g,
        [&](double r) {
            const double tr = eps - v(r) - 0.5 * ell / (r * r);
            const double dtr = -v.derivative(r, 1) + ell / (r * r * r);
            return 2.0 * f.derivative(r, 1) * tr + f.derivative(r, 0) * dtr;
        },
        s.grid.rho_min(), s.grid.h);
    kernels::sample(d3, [&](double r) { return f.derivative(r, 3); }, s.grid.rho_min(), s.grid.h);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double P = s.R[i] * s.R[i];
        g[i] *= P;
        d3[i] *= P;
    }
    const double K = s.dim.K();
    double lead = std::min(q - 1.0 + std::min(e, 0.0), q + e - 1.0);
    if (l > 0) lead = std::min(lead, q - 3.0);
    const auto quantum = kernels::integrate_from_origin(g, s.grid.h, 2.0 * K + lead);
    const auto third = kernels::integrate_from_origin(d3, s.grid.h, 2.0 * K + q - 3.0);

    double predicted = -0.25 * third.value;
    if (std::fabs(q - boundary_exponent(s.dim)) < 1e-12) predicted -= 0.5 * delta_n(s.dim, s.C2, f.b);

    const RelationReport classical = classical_virial_residual(o, f);
    GapReport out;
    out.quantum_lhs = quantum.value;
    out.classical_lhs = classical.residual;
    out.predicted_gap = predicted;
    out.residual = out.quantum_lhs - out.classical_lhs - out.predicted_gap;
    out.error = quantum.error + 0.25 * third.error;
    return out;
}

} // namespace virial
