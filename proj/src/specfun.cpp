#include "virial/specfun.hpp"

#include "virial/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace virial::specfun {

namespace {

constexpr double pi = std::numbers::pi;

// Ai(0) and -Ai'(0).
constexpr long double airy_c1 = 0.355028053887817239260063186004183176L;
constexpr long double airy_c2 = 0.258819403792806798405183560189203963L;

AiryValue airy_laplace(double x)
{
    const double sx = std::sqrt(x);
    const double zeta = 2.0 / 3.0 * x * sx;
    const double scale = std::exp(-zeta) / pi;
    if (scale == 0.0) return {0.0, -0.0};

    // Integrand is even and entire in t, so the trapezoid rule converges geometrically.
    const double t_end = std::sqrt(42.0 / sx);
    const int n = static_cast<int>(std::ceil(t_end / 0.05));
    const double dt = t_end / n;
    double i0 = 0.5, i2 = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double t = k * dt;
        const double w = std::exp(-sx * t * t) * std::cos(t * t * t / 3.0);
        i0 += w;
        i2 += t * t * w;
    }
    i0 *= dt;
    i2 *= dt;
    return {scale * i0, -sx * scale * i0 - scale * i2 / (2.0 * sx)};
}

AiryValue airy_series(double xd)
{
    const long double x = xd;
    const long double x3 = x * x * x;
    long double f = 1.0L, g = x, df = 0.0L, dg = 1.0L;
    long double t = 1.0L, u = x, dt = 1.0L, du = 1.0L;
    for (int k = 1; k < 200; ++k) {
        t *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
        u *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
        dt = (k == 1) ? x * x / 2.0L : dt * x3 / ((3.0L * k - 3.0L) * (3.0L * k - 1.0L));
        du *= x3 / ((3.0L * k) * (3.0L * k - 2.0L));
        f += t;
        g += u;
        df += dt;
        dg += du;
        const long double tiny = 1e-22L * (std::fabs(f) + std::fabs(g) + 1.0L);
        if (std::fabs(t) + std::fabs(u) + std::fabs(dt) + std::fabs(du) < tiny) break;
    }
    return {static_cast<double>(airy_c1 * f - airy_c2 * g),
            static_cast<double>(airy_c1 * df - airy_c2 * dg)};
}

// Oscillatory expansion for x < 0, truncated before the smallest term.
AiryValue airy_negative(double xneg)
{
    const double x = -xneg;
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double phase = zeta - pi / 4.0;

    double a_even = 0.0, a_odd = 0.0, b_even = 0.0, b_odd = 0.0;
    double u = 1.0, zpow = 1.0, prev = INFINITY;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / (216.0 * k * (2.0 * k - 1));
        const double v = (k == 0) ? 1.0 : -(6.0 * k + 1) / (6.0 * k - 1) * u;
        const double term = std::fabs(u * zpow);
        if (term > prev) break;
        prev = term;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            a_even += sign * u * zpow;
            b_even += sign * v * zpow;
        } else {
            a_odd += sign * u * zpow;
            b_odd += sign * v * zpow;
        }
        zpow /= zeta;
        if (term < 1e-17) break;
    }
    const double c = std::cos(phase), s = std::sin(phase);
    const double amp = 1.0 / std::sqrt(pi * std::sqrt(x));
    const double damp = std::sqrt(std::sqrt(x) / pi);
    return {amp * (c * a_even + s * a_odd), damp * (s * b_even - c * b_odd)};
}

double legendre_with_derivative(int n, double x, double& dp)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        dp = 0.0;
        return 1.0;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
}

// int_0^pi sin^p(t) A(cos t) B(cos t) dt for the j-th angular factor.
double factor_integral(int j, int la, int ma, int lb, int mb)
{
    const int p = j + ma + mb;
    if (p % 2 == 1) {
        // (1-z^2)^{(p-1)/2} times a polynomial in z: Gauss-Legendre is exact.
        const int degree = la + lb + j;
        auto [z, w] = gauss_legendre(degree / 2 + 4);
        double sum = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double s2 = 1.0 - z[k] * z[k];
            sum += w[k] * std::pow(s2, 0.5 * (j - 1)) * assoc_gegenbauer(la, ma, j, z[k]) *
                   assoc_gegenbauer(lb, mb, j, z[k]);
        }
        return sum;
    }
    // Even power of sin: a cosine polynomial in t, integrated exactly by the midpoint rule.
    const int m = la + lb + j + 8;
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        const double t = (k + 0.5) * pi / m;
        sum += std::pow(std::sin(t), j) * assoc_gegenbauer(la, ma, j, std::cos(t)) *
               assoc_gegenbauer(lb, mb, j, std::cos(t));
    }
    return sum * pi / m;
}

} // namespace

double hermite(int n, double x)
{
    if (n < 0) throw domain_error("hermite: negative order");
    double h0 = 1.0, h1 = 2.0 * x;
    if (n == 0) return h0;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

double hermite_function(int n, double x)
{
    if (n < 0) throw domain_error("hermite_function: negative order");
    // Normalized recurrence on an unweighted start; the Gaussian is applied at the end
    // so large |x| does not underflow midway.
    double log_scale = -0.5 * x * x - 0.25 * std::log(pi);
    double p0 = 1.0, p1 = std::sqrt(2.0) * x;
    if (n == 0) return std::exp(log_scale);
    for (int k = 1; k < n; ++k) {
        const double p2 = std::sqrt(2.0 / (k + 1)) * x * p1 - std::sqrt(double(k) / (k + 1)) * p0;
        p0 = p1;
        p1 = p2;
        if (std::fabs(p1) > 1e150) {
            p0 *= 1e-150;
            p1 *= 1e-150;
            log_scale += 150.0 * std::log(10.0);
        }
    }
    if (p1 == 0.0) return 0.0;
    return std::copysign(std::exp(std::log(std::fabs(p1)) + log_scale), p1);
}

AiryValue airy(double x)
{
    if (!std::isfinite(x)) throw domain_error("airy: non-finite argument");
    if (x >= 2.0) return airy_laplace(x);
    if (x >= -8.0) return airy_series(x);
    return airy_negative(x);
}

double airy_zero(int k)
{
    if (k < 1) throw domain_error("airy_zero: k must be positive");
    const double t = 3.0 * pi / 8.0 * (4.0 * k - 1.0);
    double z = -std::pow(t, 2.0 / 3.0) * (1.0 + 5.0 / 48.0 / (t * t) - 5.0 / 36.0 / std::pow(t, 4));
    for (int it = 0; it < 50; ++it) {
        const auto a = airy(z);
        const double step = a.ai / a.dai;
        z -= step;
        if (std::fabs(step) < 1e-15 * std::fabs(z)) break;
    }

    // Guard against Newton settling on a neighbouring zero: bisect in the
    // interval between the asymptotic midpoints if the sign pattern is off.
    auto mid = [](int kk) {
        const double tt = 3.0 * pi / 8.0 * (4.0 * kk - 1.0);
        return -std::pow(tt, 2.0 / 3.0);
    };
    const double hi = (k == 1) ? -1.0 : 0.5 * (mid(k - 1) + mid(k));
    const double lo = 0.5 * (mid(k) + mid(k + 1));
    if (z < lo || z > hi) {
        double a = lo, b = hi;
        double fa = airy(a).ai;
        while (b - a > 1e-14 * std::fabs(a)) {
            const double c = 0.5 * (a + b);
            const double fc = airy(c).ai;
            if ((fc < 0) == (fa < 0)) {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        z = 0.5 * (a + b);
    }
    return z;
}

double laguerre(int n, double alpha, double x)
{
    if (n < 0) throw domain_error("laguerre: negative order");
    double l0 = 1.0, l1 = 1.0 + alpha - x;
    if (n == 0) return l0;
    for (int k = 1; k < n; ++k) {
        const double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

double gegenbauer(int l, double alpha, double z)
{
    if (l < 0) throw domain_error("gegenbauer: negative degree");
    if (!(alpha > 0.0)) throw domain_error("gegenbauer: alpha must be positive");
    if (!(std::fabs(z) <= 1.0 + 1e-12)) throw domain_error("gegenbauer: |z| > 1");
    double c0 = 1.0, c1 = 2.0 * alpha * z;
    if (l == 0) return c0;
    for (int n = 1; n < l; ++n) {
        const double c2 = (2.0 * (n + alpha) * z * c1 - (n + 2.0 * alpha - 1.0) * c0) / (n + 1.0);
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

double assoc_gegenbauer(int l, int m, int j, double z)
{
    if (l < 0 || m < 0) throw domain_error("assoc_gegenbauer: negative index");
    if (j < 1) throw domain_error("assoc_gegenbauer: j must be positive");
    if (!(std::fabs(z) <= 1.0 + 1e-12)) throw domain_error("assoc_gegenbauer: |z| > 1");
    if (m > l) return 0.0;
    const double alpha = 0.5 * j;
    double factor = 1.0;
    for (int k = 0; k < m; ++k) factor *= 2.0 * (alpha + k);
    const double s2 = std::max(0.0, 1.0 - z * z);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(s2, 0.5 * m) * factor * gegenbauer(l - m, alpha + m, z);
}

void AngularIndexSet::validate() const
{
    if (N < 2) throw domain_error("angular index: N must be at least 2");
    if (static_cast<int>(l.size()) != N - 1)
        throw domain_error("angular index: expected " + std::to_string(N - 1) + " quantum numbers");
    for (int k = 0; k + 1 < N - 1; ++k) {
        if (l[k] < 0) throw domain_error("angular index: negative l");
        const int next = (k + 2 == N - 1) ? std::abs(l[k + 1]) : l[k + 1];
        if (next > l[k]) throw domain_error("angular index: chain must be non-increasing");
    }
}

double lambda_of(const AngularIndexSet& idx)
{
    idx.validate();
    const double l1 = std::abs(idx.l[0]);
    return l1 * (l1 + idx.N - 2);
}

std::complex<double> omega(const AngularIndexSet& idx, std::span<const double> theta, bool normalize)
{
    idx.validate();
    const int N = idx.N;
    if (static_cast<int>(theta.size()) != N - 1) throw domain_error("omega: expected N-1 angles");
    const auto& L = idx.l;
    double value = 1.0;
    for (int j = 1; j <= N - 2; ++j) {
        const int a = N - 2 - j;
        value *= assoc_gegenbauer(L[a], std::abs(L[a + 1]), j, std::cos(theta[a]));
    }
    std::complex<double> out = value * std::polar(1.0, L[N - 2] * theta[N - 2]);
    if (normalize) out /= omega_norm(idx);
    return out;
}

std::complex<double> omega_inner(const AngularIndexSet& a, const AngularIndexSet& b, bool normalized)
{
    a.validate();
    b.validate();
    if (a.N != b.N) throw domain_error("omega_inner: dimension mismatch");
    const int N = a.N;
    if (a.l[N - 2] != b.l[N - 2]) return {0.0, 0.0};
    double value = 2.0 * pi;
    for (int j = 1; j <= N - 2; ++j) {
        const int k = N - 2 - j;
        value *= factor_integral(j, a.l[k], std::abs(a.l[k + 1]), b.l[k], std::abs(b.l[k + 1]));
    }
    if (normalized) value /= omega_norm(a) * omega_norm(b);
    return {value, 0.0};
}

double omega_norm(const AngularIndexSet& idx)
{
    return std::sqrt(omega_inner(idx, idx).real());
}

std::vector<double> spherical_to_cartesian(int N, double r, std::span<const double> theta)
{
    if (N < 2) throw domain_error("spherical_to_cartesian: N must be at least 2");
    if (static_cast<int>(theta.size()) != N - 1)
        throw domain_error("spherical_to_cartesian: expected N-1 angles");
    std::vector<double> x(N);
    double sines = r;
    for (int k = 0; k < N - 1; ++k) {
        x[k] = sines * std::cos(theta[k]);
        sines *= std::sin(theta[k]);
    }
    x[N - 1] = sines;
    return x;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n)
{
    if (n < 1) throw domain_error("gauss_legendre: n must be positive");
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double p = legendre_with_derivative(n, z, dp);
            const double dz = p / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        legendre_with_derivative(n, z, dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

} // namespace virial::specfun
