#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace virial::specfun {

/// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
double hermite(int n, double x);

/// Normalized Hermite function H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)).
/// Stable for large n where H_n itself overflows.
double hermite_function(int n, double x);

struct AiryValue {
    double ai;
    double dai;
};

/// Ai(x) and Ai'(x).
///
/// x >= 2 uses the exponentially scaled Laplace integral, -8 <= x < 2 the
/// Maclaurin series in extended precision, x < -8 the oscillatory asymptotic
/// expansion. Relative accuracy is about 1e-12 on |x| <= 20 (measured against
/// the envelope on the oscillatory side). Ai underflows to 0 for large x.
AiryValue airy(double x);

/// k-th zero of Ai (k = 1 is the zero closest to the origin). Converged to 1e-13.
double airy_zero(int k);

/// Generalized Laguerre polynomial L_n^(alpha)(x).
double laguerre(int n, double alpha, double x);

/// Gegenbauer polynomial C_l^(alpha)(z) for alpha > 0, |z| <= 1.
double gegenbauer(int l, double alpha, double z);

/// Associated Gegenbauer function
///   F_{l,m}^{(j)}(z) = (-1)^m (1-z^2)^{m/2} d^m/dz^m C_l^{(j/2)}(z),
/// evaluated with d/dz C_n^(a) = 2a C_{n-1}^(a+1). Returns 0 for m > l.
double assoc_gegenbauer(int l, int m, int j, double z);

/// Quantum numbers of an N-dimensional angular eigenfunction: l_1 ... l_{N-1}
/// with l_1 >= l_2 >= ... >= l_{N-2} >= |l_{N-1}|.
struct AngularIndexSet {
    int N = 3;
    std::vector<int> l;

    /// Throws domain_error if the chain is invalid.
    void validate() const;
};

/// Eigenvalue magnitude lambda = l_1 (l_1 + N - 2) of the angular operator.
double lambda_of(const AngularIndexSet& idx);

/// Angular eigenfunction
///   exp(i l_{N-1} theta_{N-1}) prod_{j=1}^{N-2} F^{(j)}_{l_{N-1-j}, l_{N-j}}(cos theta_{N-1-j}).
/// With normalize = true the result is divided by its norm on the unit (N-1)-sphere.
std::complex<double> omega(const AngularIndexSet& idx, std::span<const double> theta,
                           bool normalize = false);

/// <a|b> = int Omega_a conj(Omega_b) dS over the unit (N-1)-sphere, computed by
/// quadrature on each angle (exact for these trigonometric polynomials).
std::complex<double> omega_inner(const AngularIndexSet& a, const AngularIndexSet& b,
                                 bool normalized = false);

double omega_norm(const AngularIndexSet& idx);

/// x_1 = r cos t_1, x_2 = r sin t_1 cos t_2, ..., x_N = r sin t_1 ... sin t_{N-1}.
std::vector<double> spherical_to_cartesian(int N, double r, std::span<const double> theta);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

} // namespace virial::specfun
