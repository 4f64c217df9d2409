#include "virial/potentials.hpp"

#include <cmath>
#include <sstream>

#include "virial/errors.hpp"

namespace virial {

ScaledPotential ScaledPotential::power_law(double A, double m)
{
    if (!(A > 0.0))
        throw domain_error("power law: A must be positive");
    if (!(m > -2.0))
        throw domain_error("power law: m must exceed -2");
    std::ostringstream os;
    os << "power_law(A=" << A << ", m=" << m << ")";
    return ScaledPotential(PowerLaw{A, m}, os.str());
}

ScaledPotential ScaledPotential::coulomb(double strength)
{
    if (!(strength > 0.0))
        throw domain_error("coulomb: strength must be positive");
    std::ostringstream os;
    os << "coulomb(strength=" << strength << ")";
    return ScaledPotential(Coulomb{strength}, os.str());
}

ScaledPotential ScaledPotential::custom(Custom c, std::string description)
{
    if (!c.v || !c.dv || !c.d2v)
        throw domain_error("custom potential must supply v, v' and v''");
    return ScaledPotential(std::move(c), std::move(description));
}

namespace {

// d^k/drho^k of rho^m, i.e. m (m-1) ... (m-k+1) rho^(m-k)
double falling_power(double m, int k, double rho)
{
    double c = 1.0;
    for (int i = 0; i < k; ++i)
        c *= (m - i);
    if (c == 0.0)
        return 0.0;
    return c * std::pow(rho, m - k);
}

} // namespace

double ScaledPotential::derivative(double rho, int order) const
{
    if (order < 0 || order > 3)
        throw unsupported_order("potential derivative order must be in 0..3");
    if (!(rho > 0.0))
        throw domain_error("potential evaluated at rho <= 0");

    if (auto* pl = std::get_if<PowerLaw>(&kind_))
        return 0.5 * pl->A * falling_power(pl->m, order, rho);
    if (auto* c = std::get_if<Coulomb>(&kind_))
        return -c->strength * falling_power(-1.0, order, rho);

    const auto& cu = std::get<Custom>(kind_);
    switch (order) {
    case 0: return cu.v(rho);
    case 1: return cu.dv(rho);
    case 2: return cu.d2v(rho);
    default:
        if (!cu.d3v)
            throw domain_error("custom potential '" + description_ + "' has no third derivative");
        return cu.d3v(rho);
    }
}

bool ScaledPotential::has_derivative(int order) const
{
    if (order < 0 || order > 3)
        return false;
    if (auto* cu = std::get_if<Custom>(&kind_))
        return order < 3 || static_cast<bool>(cu->d3v);
    return true;
}

std::optional<PowerLaw> ScaledPotential::as_power_law() const
{
    if (auto* pl = std::get_if<PowerLaw>(&kind_))
        return *pl;
    return std::nullopt;
}

double ScaledPotential::origin_exponent() const
{
    if (auto* pl = std::get_if<PowerLaw>(&kind_))
        return pl->m;
    if (is_coulomb())
        return -1.0;
    return std::get<Custom>(kind_).origin_exponent;
}

bool ScaledPotential::confining() const
{
    if (auto* pl = std::get_if<PowerLaw>(&kind_))
        return pl->m > 0.0;
    if (is_coulomb())
        return false;
    return std::get<Custom>(kind_).confining;
}

ScaledPotential make_power_law(double A, double m) { return ScaledPotential::power_law(A, m); }

double eval_derivative(const ScaledPotential& p, double rho, int order)
{
    return p.derivative(rho, order);
}

} // namespace virial
