#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace virial {

// v(rho) = A rho^m / 2
struct PowerLaw {
    double A;
    double m;
};

// v(rho) = -strength / rho
struct Coulomb {
    double strength;
};

// User supplied potential. d3v may be left empty; operations that need v'''
// refuse such potentials instead of differentiating numerically.
struct Custom {
    std::function<double(double)> v, dv, d2v, d3v;
    double origin_exponent = 0.0; // v ~ rho^origin_exponent as rho -> 0 (0 for regular v)
    bool confining = true;        // v -> +inf as rho -> inf
};

/// Spherically symmetric potential in scaled units (hbar = M = a = 1).
///
/// Immutable after construction; evaluation is const and thread-safe
/// provided the callables of a Custom potential are.
class ScaledPotential {
public:
    using Kind = std::variant<PowerLaw, Coulomb, Custom>;

    static ScaledPotential power_law(double A, double m);
    static ScaledPotential coulomb(double strength = 1.0);
    static ScaledPotential custom(Custom c, std::string description = "custom");

    double operator()(double rho) const { return derivative(rho, 0); }

    /// d^order v / d rho^order for order in 0..3.
    double derivative(double rho, int order) const;

    bool has_derivative(int order) const;

    const Kind& kind() const { return kind_; }
    const std::string& description() const { return description_; }

    std::optional<PowerLaw> as_power_law() const;
    bool is_coulomb() const { return std::holds_alternative<Coulomb>(kind_); }

    // Leading small-rho exponent e of v ~ rho^e.
    double origin_exponent() const;
    bool confining() const;

private:
    ScaledPotential(Kind k, std::string description)
        : kind_(std::move(k)), description_(std::move(description)) {}

    Kind kind_;
    std::string description_;
};

ScaledPotential make_power_law(double A, double m);

double eval_derivative(const ScaledPotential& p, double rho, int order);

} // namespace virial
