#pragma once

#include <cstddef>
#include <functional>
#include <span>

// Grid kernels. Every data-parallel kernel has a *_serial twin that is the
// reference implementation used by the tests and the benchmark.
//
// Parallel reductions sum fixed-size blocks and then combine the block sums
// in order, so results do not depend on the number of OpenMP threads.
namespace virial::kernels {

inline constexpr std::size_t block_size = 4096;

/// Composite Simpson over uniformly spaced samples. An odd number of
/// intervals closes with a 3/8 panel; two samples fall back to a trapezoid.
double simpson(std::span<const double> f, double h);
double simpson_serial(std::span<const double> f, double h);

double trapezoid(std::span<const double> f, double h);
double trapezoid_serial(std::span<const double> f, double h);

/// out[i] = g(rho0 + i h)
void sample(std::span<double> out, const std::function<double(double)>& g, double rho0, double h);
void sample_serial(std::span<double> out, const std::function<double(double)>& g, double rho0,
                   double h);

struct Quadrature {
    double value;
    double error; // |Simpson - trapezoid| on the same nodes
};

/// Integral over [0, rho_max] of an integrand sampled at rho_i = (i + 1) h.
///
/// The integrand is assumed to behave as rho^s g(rho) near the origin with g
/// smooth. The first window of nodes is handled by product integration of a
/// least-squares polynomial for g; the remainder uses composite Simpson.
Quadrature integrate_from_origin(std::span<const double> f, double h, double s);
Quadrature integrate_from_origin_serial(std::span<const double> f, double h, double s);

} // namespace virial::kernels
