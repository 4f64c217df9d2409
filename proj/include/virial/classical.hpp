#pragma once

#include <functional>
#include <utility>

#include "virial/potentials.hpp"
#include "virial/radial.hpp"
#include "virial/relations.hpp"

namespace virial {

/// Bound radial motion in V with energy E and squared angular momentum l2
/// (M = 1). T_r = E - V - l2 / (2 r^2).
struct ClassicalOrbit {
    ScaledPotential potential;
    double E = 0.0;
    double l2 = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    double period = 0.0; // radial period r_min -> r_max -> r_min
    bool circular = false;
    int nodes = 2048;

    double radial_kinetic(double r) const;
    /// dT_r/dr = -V' + l2 / r^3
    double radial_kinetic_derivative(double r) const;
};

/// Roots of T_r bracketing the minimum of the effective potential. r_min = 0
/// when l2 = 0. Throws no_orbit when E lies outside the well or the motion is unbound.
std::pair<double, double> find_turning_points(const ScaledPotential& p, double E, double l2);

ClassicalOrbit make_orbit(const ScaledPotential& p, double E, double l2, int nodes = 2048);

/// Time average over one radial period,
///   int g dr / sqrt(2 T_r) / int dr / sqrt(2 T_r).
/// Circular orbits reduce to g(r_c).
double period_average(const ClassicalOrbit& orbit, const std::function<double(double)>& g);

/// <2 f' T_r> against -<f T_r'>; the classical relation has no f''' term.
RelationReport classical_virial_residual(const ClassicalOrbit& orbit, const ProbeFunction& f);

struct GapReport {
    double quantum_lhs;   // <(1/f) d(f^2 T_r)/d rho> over P
    double classical_lhs; // the same expression as a time average
    double predicted_gap; // -<f'''>/4 over P, minus Delta/2 when the boundary term is active
    double residual;      // quantum_lhs - classical_lhs - predicted_gap
    double error;         // quadrature error estimate of the quantum side
};

/// Compares the quantum and classical relations for a state and the orbit
/// with E = eps and l2 = l(l+1).
GapReport quantum_classical_gap(const Eigenstate& s, const ClassicalOrbit& orbit, const ProbeFunction& f);

} // namespace virial
