#pragma once

#include <functional>
#include <string>
#include <vector>

#include "virial/potentials.hpp"
#include "virial/radial.hpp"

namespace virial {

/// Probe function f in the generalized relation. Near the origin f ~ b rho^q.
struct ProbeFunction {
    enum class Form { Power, Custom };

    Form form = Form::Power;
    double j = 0.0; // exponent of a Power probe
    std::function<double(double)> f, d1, d2, d3;
    double q = 0.0;
    double b = 1.0;
    std::string name;

    static ProbeFunction power(double j);
    static ProbeFunction custom(std::function<double(double)> f, std::function<double(double)> d1,
                                std::function<double(double)> d2, std::function<double(double)> d3,
                                double q, double b, std::string name);

    /// d^order f / d rho^order, order 0..3.
    double derivative(double rho, int order) const;
};

struct RelationReport {
    std::string id;
    std::string state;
    int N = 3, n = 0, l = 0;
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0;          // lhs - rhs
    double relative_residual = 0.0; // residual / max(1, |lhs|, |rhs|)
    double error = 0.0;             // quadrature error estimate
    bool boundary_active = false;
    bool flagged = false;           // origin fit of C^2 was poor
};

RelationReport make_report(std::string id, const Eigenstate& s, double lhs, double rhs, double error,
                           bool boundary_active = false);

/// Exponent q0 = 2 - 2K at which the boundary term switches on.
double boundary_exponent(const DimensionConfig& dim);

/// Delta_N = b C (2 l1 + N - 2)^2, the origin limit of
/// (f P'' - f' P' + f'' P - 4 Q_N f P) / 2 for f ~ b rho^{q0}, P ~ C rho^{2K}.
double delta_n(const DimensionConfig& dim, double C, double b);

/// The alternative closed form b C (2 (2 l1 + N - 2)^2 - (2N - 3)(N - 3)) / 2.
/// It agrees with delta_n at N = 3 only.
double delta_n_closed_form(const DimensionConfig& dim, double C, double b);

/// <(1/f) d(f^2 Q_N)/d rho> - <f'''>/2 against the boundary term. The
/// integrand is assembled before quadrature so that the singular pieces at
/// q = q0 cancel pointwise.
RelationReport general_residual(const Eigenstate& s, const ProbeFunction& f);

/// Same relation under the N-dimensional id; identical arithmetic.
RelationReport ndim_residual(const Eigenstate& s, const ProbeFunction& f);

enum class SpecialCase { J0, J1_virial, J2, J3, J2L2, JNEG2L };

/// Named consequences of the relation for N = 3, each side by quadrature.
RelationReport special_case_residual(const Eigenstate& s, SpecialCase c);

enum class PowerCase { P1, p1, P2, P3, P4, P5 };

/// Whether case c is stated for angular momentum l and exponent m.
bool power_case_applies(PowerCase c, int l, double m);

/// Identities specific to v = A rho^m / 2.
RelationReport power_law_relation(const Eigenstate& s, const PowerLaw& p, PowerCase c);

std::string to_string(SpecialCase c);
std::string to_string(PowerCase c);

struct ChainValue {
    double power;
    double value;
};

/// <v^k>, k = 0..k_max, for v = rho^2/2 from eps and l alone.
std::vector<ChainValue> oscillator_v_chain(double eps, int l, int k_max);

/// <rho^j> over odd j up to j_max for an oscillator state. l = 0 is seeded
/// with the closed form <rho>; l >= 1 with <rho^{-2l-1}> and C^2 from the state.
std::vector<ChainValue> oscillator_odd_chain(const Eigenstate& s, int j_max);

/// <v^j>, j = 0..j_max, for v = rho/2 and l = 0.
std::vector<ChainValue> linear_chain(double eps, int j_max);

/// <rho^p> for p = -1..j_max of a Coulomb state, from eps and l only.
/// Empty for j_max < 1.
std::vector<ChainValue> coulomb_kramer_chain(double eps, int l, int j_max);

/// Leptonic width 4 (c hbar / a) (hbar alpha e_q / (M_V c a))^2 C^2 in GeV.
/// a in metres, M_V in kilograms.
double decay_width(double C2, double a, double M_V, double e_q, double alpha_e);

} // namespace virial
