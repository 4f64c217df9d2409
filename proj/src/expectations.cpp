#include "virial/expectations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "virial/errors.hpp"
#include "virial/kernels.hpp"
#include "virial/specfun.hpp"

namespace virial {

namespace {

std::string number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

Moment integrate(const Eigenstate& s, const std::function<double(double)>& g, double q,
                 std::string observable)
{
    const double exponent = 2.0 * s.dim.K() + q;
    if (!(exponent > -1.0))
        throw domain_error("<" + observable + "> diverges at the origin: integrand ~ rho^" + number(exponent));
    std::vector<double> f(s.grid.nodes);
    kernels::sample(f, g, s.grid.rho_min(), s.grid.h);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= s.R[i] * s.R[i];
    const auto quad = kernels::integrate_from_origin(f, s.grid.h, exponent);
    return {state_label(s), std::move(observable), quad.value, quad.error};
}

} // namespace

std::string state_label(const Eigenstate& s)
{
    return "N" + std::to_string(s.dim.N) + "_n" + std::to_string(s.n) + "_l" + std::to_string(s.dim.l1);
}

Moment expect(const Eigenstate& s, const std::function<double(double)>& g, double q, std::string observable)
{
    return integrate(s, g, q, std::move(observable));
}

Moment expect_power(const Eigenstate& s, double j)
{
    return integrate(s, [j](double r) { return std::pow(r, j); }, j, "rho^" + number(j));
}

Moment kinetic_moment(const Eigenstate& s, int order)
{
    return kinetic_moment(s, s.potential, order);
}

Moment kinetic_moment(const Eigenstate& s, const ScaledPotential& p, int order)
{
    if (order < 1 || order > 4) throw unsupported_order("kinetic moment order must be 1..4");
    if (order >= 3 && s.dim.N != 3) throw domain_error("kinetic moments of order 3, 4 need N = 3");
    if (order == 4 && !p.has_derivative(3))
        throw domain_error("<T^4> needs v''' and the potential does not provide it");

    const double eps = s.eps;
    const double e = p.origin_exponent();
    const double ev = std::min(0.0, e); // eps - v ~ rho^ev
    const double ell = s.dim.l1 * (s.dim.l1 + 1.0);
    const std::string name = "T^" + std::to_string(order);

    switch (order) {
    case 1: {
        Moment m = integrate(s, [&p](double r) { return p(r); }, e, name);
        m.value = eps - m.value;
        return m;
    }
    case 2:
        return integrate(s, [&](double r) { return std::pow(eps - p(r), 2); }, 2 * ev, name);
    case 3:
        return integrate(
            s,
            [&](double r) {
                const double dv = p.derivative(r, 1);
                return std::pow(eps - p(r), 3) + 0.5 * dv * dv;
            },
            std::min(3 * ev, 2 * (e - 1)), name);
    default: {
        const double cent = (ell > 0.0) ? -2.0 : 0.0;
        return integrate(
            s,
            [&](double r) {
                const double w = eps - p(r);
                const double d1 = p.derivative(r, 1), d2 = p.derivative(r, 2), d3 = p.derivative(r, 3);
                return w * w * w * w + 4.0 * (w - ell / (4.0 * r * r)) * d1 * d1 + 0.75 * d2 * d2 +
                       0.5 * d1 * d3;
            },
            std::min({4 * ev, std::min(ev, cent) + 2 * (e - 1), 2 * e - 4}), name);
    }
    }
}

double mehler_closed(double k, double u)
{
    if (!(u > 0.0 && u < 1.0)) throw domain_error("mehler: u must lie in (0, 1)");
    if (!(k > 0.0)) throw domain_error("mehler: k must be positive");
    const double ratio = (1.0 + u) / (1.0 - u);
    return 0.25 * std::tgamma(k) / std::sqrt(1.0 - u * u) * (std::pow(ratio, k) - std::pow(ratio, -k));
}

MehlerResult mehler_check(double k, double u, int n_max)
{
    const double closed = mehler_closed(k, u);
    if (n_max < 1) throw domain_error("mehler: n_max must be at least 1");
    const double h = 1e-3;
    const Grid grid = Grid::uniform(h, std::sqrt(2.0 * (2 * n_max + 1) + 1.0) + 10.0);
    std::vector<double> f(grid.nodes);
    const double root_pi = std::sqrt(std::numbers::pi);

    double series = 0.0, last = 0.0, before = 0.0;
    double upow = u;
    for (int n = 0; n <= n_max; ++n, upow *= u * u) {
        const int m = 2 * n + 1;
        kernels::sample(
            f,
            [m, k](double r) {
                const double psi = specfun::hermite_function(m, r);
                return psi * psi * std::pow(r, 2.0 * k - 1.0);
            },
            grid.rho_min(), h);
        const double term = upow * root_pi * kernels::integrate_from_origin(f, h, 2.0 * k + 1.0).value;
        series += term;
        before = last;
        last = term;
    }
    const double r = (before != 0.0) ? last / before : 0.0;
    const double tail = (r < 1.0) ? std::fabs(last) * r / (1.0 - r) : INFINITY;
    if (!(tail <= 1e-10 * std::fabs(series)))
        throw convergence_error("mehler series not converged at n_max = " + std::to_string(n_max));
    return {series, closed};
}

} // namespace virial
