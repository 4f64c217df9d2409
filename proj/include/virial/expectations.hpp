#pragma once

#include <functional>
#include <string>

#include "virial/potentials.hpp"
#include "virial/radial.hpp"

namespace virial {

struct Moment {
    std::string state;      // e.g. "N3_n0_l1"
    std::string observable;
    double value = 0.0;
    double error = 0.0;     // |Simpson - trapezoid| on the same nodes
};

std::string state_label(const Eigenstate& s);

/// <g> = int P g d rho. q is the small-rho exponent of g (g ~ rho^q); the
/// integral must converge at the origin, i.e. q + 2K > -1.
Moment expect(const Eigenstate& s, const std::function<double(double)>& g, double q = 0.0,
              std::string observable = "g");

/// <rho^j>
Moment expect_power(const Eigenstate& s, double j);

/// <T^order>, order 1..4, assembled from potential moments of the state's
/// potential. Orders 3 and 4 hold for N = 3 only; order 4 needs v'''.
Moment kinetic_moment(const Eigenstate& s, int order);
Moment kinetic_moment(const Eigenstate& s, const ScaledPotential& p, int order);

struct MehlerResult {
    double series;
    double closed;
};

/// Hermite generating-function identity at power k:
///   sum_n u^{2n+1} / (2^{2n+1} (2n+1)!) int H_{2n+1}^2 e^{-rho^2} rho^{2k-1} d rho
/// against (1/4) Gamma(k) (1-u^2)^{-1/2} [((1+u)/(1-u))^k - ((1-u)/(1+u))^k].
/// The integrals are evaluated by quadrature. Throws convergence_error when
/// the truncated series has not settled.
MehlerResult mehler_check(double k, double u, int n_max);
double mehler_closed(double k, double u);

} // namespace virial
