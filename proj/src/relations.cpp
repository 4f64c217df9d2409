#include "virial/relations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "virial/errors.hpp"
#include "virial/expectations.hpp"
#include "virial/kernels.hpp"

namespace virial {

namespace {

constexpr double delta_tol = 1e-12;

std::string number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

double falling(double j, int k)
{
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= (j - i);
    return out;
}

RelationReport relation(const Eigenstate& s, const ProbeFunction& f, std::string id)
{
    const DimensionConfig& dim = s.dim;
    const ScaledPotential& v = s.potential;
    const double K = dim.K();
    const double c = dim.centrifugal();
    const double q0 = boundary_exponent(dim);
    if (f.q < q0 - delta_tol)
        throw domain_error("probe exponent " + number(f.q) + " is below the threshold " + number(q0));
    const bool at_boundary = std::fabs(f.q - q0) < delta_tol;
    const double eps = s.eps;
    const double e = v.origin_exponent();

    std::vector<double> g(s.grid.nodes);
    double lead; // small-rho exponent of the bracket
    if (f.form == ProbeFunction::Form::Power) {
        const double j = f.j;
        double cent = (j - 1.0) * (2.0 * c - 0.5 * j * (j - 2.0));
        if (at_boundary || std::fabs(cent) < 1e-12) cent = 0.0;
        kernels::sample(
            g,
            [&](double r) {
                return 2.0 * v.derivative(r, 1) * std::pow(r, j) + 4.0 * (v(r) - eps) * j * std::pow(r, j - 1.0) +
                       cent * std::pow(r, j - 3.0);
            },
            s.grid.rho_min(), s.grid.h);
        lead = std::min(e - 1.0 + j, std::min(e, 0.0) + j - 1.0);
        if (j == 0.0) lead = e - 1.0;
        if (cent != 0.0) lead = std::min(lead, j - 3.0);
    } else {
        kernels::sample(
            g,
            [&](double r) {
                const double Q = 2.0 * (v(r) - eps) + c / (r * r);
                const double dQ = 2.0 * v.derivative(r, 1) - 2.0 * c / (r * r * r);
                return dQ * f.f(r) + 2.0 * Q * f.d1(r) - 0.5 * f.d3(r);
            },
            s.grid.rho_min(), s.grid.h);
        // The rho^{q-3} pieces cancel at the threshold.
        lead = std::min(at_boundary ? f.q - 2.0 : f.q - 3.0, e - 1.0 + f.q);
    }
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= s.R[i] * s.R[i];
    const auto quad = kernels::integrate_from_origin(g, s.grid.h, 2.0 * K + lead);
    const double rhs = at_boundary ? delta_n(dim, s.C2, f.b) : 0.0;
    return make_report(std::move(id), s, quad.value, rhs, quad.error, at_boundary);
}

void require_three_dimensions(const Eigenstate& s, const char* what)
{
    if (s.dim.N != 3) throw domain_error(std::string(what) + " is stated for N = 3");
}

} // namespace

ProbeFunction ProbeFunction::power(double j)
{
    ProbeFunction p;
    p.form = Form::Power;
    p.j = j;
    p.q = j;
    p.b = 1.0;
    p.name = "rho^" + number(j);
    return p;
}

ProbeFunction ProbeFunction::custom(std::function<double(double)> f, std::function<double(double)> d1,
                                    std::function<double(double)> d2, std::function<double(double)> d3,
                                    double q, double b, std::string name)
{
    if (!f || !d1 || !d2 || !d3) throw domain_error("custom probe needs f and three derivatives");
    ProbeFunction p;
    p.form = Form::Custom;
    p.f = std::move(f);
    p.d1 = std::move(d1);
    p.d2 = std::move(d2);
    p.d3 = std::move(d3);
    p.q = q;
    p.b = b;
    p.name = std::move(name);
    return p;
}

double ProbeFunction::derivative(double rho, int order) const
{
    if (order < 0 || order > 3) throw unsupported_order("probe derivatives are available up to order 3");
    if (form == Form::Power) return falling(j, order) * std::pow(rho, j - order);
    switch (order) {
    case 0: return f(rho);
    case 1: return d1(rho);
    case 2: return d2(rho);
    default: return d3(rho);
    }
}

RelationReport make_report(std::string id, const Eigenstate& s, double lhs, double rhs, double error,
                           bool boundary_active)
{
    RelationReport r;
    r.id = std::move(id);
    r.state = state_label(s);
    r.N = s.dim.N;
    r.n = s.n;
    r.l = s.dim.l1;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = lhs - rhs;
    r.relative_residual = r.residual / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    r.error = error;
    r.boundary_active = boundary_active;
    r.flagged = s.C2_warning && boundary_active;
    return r;
}

double boundary_exponent(const DimensionConfig& dim)
{
    return 2.0 - 2.0 * dim.K();
}

double delta_n(const DimensionConfig& dim, double C, double b)
{
    const double k = 2.0 * dim.l1 + dim.N - 2.0;
    return b * C * k * k;
}

double delta_n_closed_form(const DimensionConfig& dim, double C, double b)
{
    const double k = 2.0 * dim.l1 + dim.N - 2.0;
    return 0.5 * b * C * (2.0 * k * k - (2.0 * dim.N - 3.0) * (dim.N - 3.0));
}

RelationReport general_residual(const Eigenstate& s, const ProbeFunction& f)
{
    return relation(s, f, "GEN[" + f.name + "]");
}

RelationReport ndim_residual(const Eigenstate& s, const ProbeFunction& f)
{
    return relation(s, f, "NDIM[" + f.name + "]");
}

std::string to_string(SpecialCase c)
{
    switch (c) {
    case SpecialCase::J0: return "J0";
    case SpecialCase::J1_virial: return "J1";
    case SpecialCase::J2: return "J2";
    case SpecialCase::J3: return "J3";
    case SpecialCase::J2L2: return "J2L2";
    case SpecialCase::JNEG2L: return "JNEG2L";
    }
    return "?";
}

std::string to_string(PowerCase c)
{
    switch (c) {
    case PowerCase::P1: return "P1";
    case PowerCase::p1: return "p1";
    case PowerCase::P2: return "P2";
    case PowerCase::P3: return "P3";
    case PowerCase::P4: return "P4";
    case PowerCase::P5: return "P5";
    }
    return "?";
}

RelationReport special_case_residual(const Eigenstate& s, SpecialCase c)
{
    require_three_dimensions(s, to_string(c).c_str());
    const ScaledPotential& v = s.potential;
    const double eps = s.eps;
    const int l = s.dim.l1;
    const double ell = l * (l + 1.0);
    const double e = v.origin_exponent();
    const double ev = std::min(e, 0.0);
    auto dv = [&v](double r) { return v.derivative(r, 1); };
    auto weighted_dv = [&](double j) {
        return expect(s, [&, j](double r) { return std::pow(r, j) * dv(r); }, j + e - 1.0, "rho^j v'");
    };
    auto weighted_gap = [&](double j) {
        return expect(s, [&, j](double r) { return std::pow(r, j) * (eps - v(r)); }, j + ev, "rho^j (eps - v)");
    };
    const std::string id = to_string(c);

    switch (c) {
    case SpecialCase::J0: {
        const Moment a = expect(s, dv, e - 1.0, "v'");
        Moment b{};
        if (l > 0) b = expect_power(s, -3.0);
        const bool active = (l == 0);
        return make_report(id, s, a.value - ell * b.value, active ? 0.5 * s.C2 : 0.0, a.error + ell * b.error,
                           active);
    }
    case SpecialCase::J1_virial: {
        const Moment a = weighted_dv(1.0), b = weighted_gap(0.0);
        return make_report(id, s, a.value, 2.0 * b.value, a.error + 2.0 * b.error);
    }
    case SpecialCase::J2: {
        const Moment a = weighted_dv(2.0), b = weighted_gap(1.0);
        Moment d{};
        if (l > 0) d = expect_power(s, -1.0);
        return make_report(id, s, a.value, 4.0 * b.value - ell * d.value, a.error + 4.0 * b.error + ell * d.error);
    }
    case SpecialCase::J3: {
        const Moment a = weighted_dv(3.0), b = weighted_gap(2.0);
        return make_report(id, s, a.value, 6.0 * b.value - 0.5 * (2.0 * l - 1.0) * (2.0 * l + 3.0),
                           a.error + 6.0 * b.error);
    }
    case SpecialCase::J2L2: {
        const Moment a = weighted_dv(2.0 * l + 2.0), b = weighted_gap(2.0 * l + 1.0);
        return make_report(id, s, a.value, 4.0 * (l + 1.0) * b.value, a.error + 4.0 * (l + 1.0) * b.error);
    }
    case SpecialCase::JNEG2L: {
        const Moment a = weighted_gap(-2.0 * l - 1.0), b = weighted_dv(-2.0 * l);
        const double k = 2.0 * l + 1.0;
        return make_report(id, s, 8.0 * l * a.value + 2.0 * b.value, s.C2 * k * k, 8.0 * l * a.error + 2.0 * b.error,
                           true);
    }
    }
    throw domain_error("unknown special case");
}

bool power_case_applies(PowerCase c, int l, double m)
{
    switch (c) {
    case PowerCase::P1: return l == 0;
    case PowerCase::p1:
    case PowerCase::P4: return l >= 1;
    case PowerCase::P3: return l > m / 4.0;
    default: return true;
    }
}

RelationReport power_law_relation(const Eigenstate& s, const PowerLaw& p, PowerCase c)
{
    const std::string id = to_string(c);
    require_three_dimensions(s, id.c_str());
    if (!(p.A > 0.0) || !(p.m > 0.0))
        throw domain_error(id + " needs a confining power law (A > 0, m > 0); use the Coulomb chain instead");
    if (auto own = s.potential.as_power_law(); !own || own->A != p.A || own->m != p.m)
        throw domain_error(id + ": the state was not computed for this power law");
    const double A = p.A, m = p.m, eps = s.eps;
    const int l = s.dim.l1;
    const double ell = l * (l + 1.0);

    switch (c) {
    case PowerCase::P1: {
        if (l != 0) throw domain_error("P1 holds for l = 0");
        const Moment a = expect_power(s, m - 1.0);
        return make_report(id, s, A * a.value, s.C2 / m, A * a.error, true);
    }
    case PowerCase::p1: {
        if (l < 1) throw domain_error("p1 needs l > 0");
        const Moment a = expect_power(s, m - 1.0), b = expect_power(s, -3.0);
        return make_report(id, s, A * a.value, 2.0 / m * ell * b.value, A * a.error + 2.0 / m * ell * b.error);
    }
    case PowerCase::P2: {
        const Moment a = expect(s, [&s](double r) { return s.potential(r); }, m, "v");
        return make_report(id, s, a.value, 2.0 * eps / (2.0 + m), a.error);
    }
    case PowerCase::P3: {
        if (!(l > m / 4.0)) throw domain_error("P3 needs l > m/4");
        const Moment a = expect_power(s, -m / 2.0 - 1.0), b = expect_power(s, -m / 2.0 - 3.0);
        const double k = (m + 2.0) * (4.0 * l - m) * (4.0 * l + 4.0 + m) / (32.0 * m * eps);
        return make_report(id, s, a.value, k * b.value, a.error + std::fabs(k) * b.error);
    }
    case PowerCase::P4: {
        if (l < 1) throw domain_error("P4 needs l > 0");
        const Moment a = expect_power(s, -2.0 * l - 1.0), b = expect_power(s, m - 2.0 * l - 1.0);
        const double k = 2.0 * l + 1.0;
        return make_report(id, s, 8.0 * l * eps * a.value, (4.0 * l - m) * A * b.value + s.C2 * k * k,
                           8.0 * l * std::fabs(eps) * a.error + std::fabs(4.0 * l - m) * A * b.error, true);
    }
    case PowerCase::P5: {
        const Moment a = expect_power(s, 2.0 * l + 1.0 + m), b = expect_power(s, 2.0 * l + 1.0);
        const double k = 8.0 * (l + 1.0) * eps / (4.0 * l + m + 4.0);
        return make_report(id, s, A * a.value, k * b.value, A * a.error + std::fabs(k) * b.error);
    }
    }
    throw domain_error("unknown power-law case");
}

std::vector<ChainValue> oscillator_v_chain(double eps, int l, int k_max)
{
    std::vector<ChainValue> out;
    if (k_max < 0) return out;
    out.push_back({0.0, 1.0});
    if (k_max >= 1) out.push_back({1.0, 0.5 * eps});
    for (int k = 1; k < k_max; ++k) {
        const double next = (2.0 * k + 1.0) / (2.0 * k + 2.0) * eps * out[k].value -
                            k / (16.0 * (k + 1.0)) * (2.0 * l + 1.0 + 2.0 * k) * (2.0 * l + 1.0 - 2.0 * k) *
                                out[k - 1].value;
        out.push_back({k + 1.0, next});
    }
    return out;
}

std::vector<ChainValue> oscillator_odd_chain(const Eigenstate& s, int j_max)
{
    require_three_dimensions(s, "the oscillator chain");
    if (auto pl = s.potential.as_power_law(); !pl || pl->A != 1.0 || pl->m != 2.0)
        throw domain_error("the odd chain needs a state of v = rho^2/2");
    const int l = s.dim.l1;
    const double eps = s.eps;
    std::vector<ChainValue> out;
    if (l == 0) {
        // <rho> = I_nn / (sqrt(pi) 2^{2n} (2n+1)!), I_nn = ((2n+2)! / (n+1)!)^2 / 2
        const int n = s.n;
        const double ratio = std::tgamma(2.0 * n + 3.0) / std::tgamma(n + 2.0);
        const double seed =
            0.5 * ratio * ratio / (std::sqrt(std::numbers::pi) * std::pow(2.0, 2 * n) * std::tgamma(2.0 * n + 2.0));
        out.push_back({1.0, seed});
    } else {
        if (!(s.C2 > 0.0)) throw domain_error("the odd chain for l >= 1 needs C^2 from the state");
        const double low = expect_power(s, -2.0 * l - 1.0).value;
        const double k = 2.0 * l + 1.0;
        out.push_back({-2.0 * l - 1.0, low});
        out.push_back({1.0 - 2.0 * l, (8.0 * l * eps * low - s.C2 * k * k) / (4.0 * l - 2.0)});
    }
    // <rho^{j+1}> from <rho^{j-1}> and <rho^{j-3}>, j even
    for (double j = out.back().power + 1.0; j + 1.0 <= j_max; j += 2.0) {
        const double prev = out.back().value;
        const double prev2 = (out.size() >= 2) ? out[out.size() - 2].value : 0.0;
        const double next = 2.0 * j / (j + 1.0) * eps * prev -
                            (j - 1.0) / (4.0 * (j + 1.0)) * (2.0 * l + j) * (2.0 * l + 2.0 - j) * prev2;
        out.push_back({j + 1.0, next});
    }
    return out;
}

std::vector<ChainValue> linear_chain(double eps, int j_max)
{
    std::vector<ChainValue> out;
    if (j_max < 0) return out;
    out.push_back({0.0, 1.0});
    for (int j = 1; j <= j_max; ++j) {
        double next = 2.0 * j / (2.0 * j + 1.0) * eps * out[j - 1].value;
        if (j >= 3) next += j * (j - 1.0) * (j - 2.0) / (16.0 * (2.0 * j + 1.0)) * out[j - 3].value;
        out.push_back({double(j), next});
    }
    return out;
}

std::vector<ChainValue> coulomb_kramer_chain(double eps, int l, int j_max)
{
    if (!(eps < 0.0)) throw domain_error("Coulomb chain needs a bound-state energy eps < 0");
    std::vector<ChainValue> out;
    if (j_max < 1) return out;
    out.push_back({-1.0, -2.0 * eps});
    out.push_back({0.0, 1.0});
    // 2 j eps <rho^{j-1}> + (2j-1) <rho^{j-2}> - ((j-1)/4)(2l+j)(2l+2-j) <rho^{j-3}> = 0
    for (int j = 2; j <= j_max + 1; ++j) {
        const double r2 = out[j - 1].value; // <rho^{j-2}>
        const double r3 = out[j - 2].value; // <rho^{j-3}>
        const double next =
            (-(2.0 * j - 1.0) * r2 + (j - 1.0) / 4.0 * (2.0 * l + j) * (2.0 * l + 2.0 - j) * r3) / (2.0 * j * eps);
        out.push_back({j - 1.0, next});
    }
    return out;
}

double decay_width(double C2, double a, double M_V, double e_q, double alpha_e)
{
    constexpr double hbar = 1.054571817e-34; // J s
    constexpr double c = 299792458.0;        // m / s
    constexpr double GeV = 1.602176634e-10;  // J
    if (!(a > 0.0) || !(M_V > 0.0)) throw domain_error("decay_width needs a > 0 and M_V > 0");
    if (!(C2 >= 0.0)) throw domain_error("decay_width needs C^2 >= 0");
    const double k = hbar * alpha_e * e_q / (M_V * c * a);
    return 4.0 * (c * hbar / a) * k * k * C2 / GeV;
}

} // namespace virial
