#include "virial/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include <Eigen/Dense>

#include "virial/errors.hpp"

namespace virial::kernels {

namespace {

// Weight (in units of h) of sample i out of n for the Simpson rule above.
inline double simpson_weight(std::size_t i, std::size_t n)
{
    if (n < 2)
        return 0.0;
    if (n == 2)
        return 0.5;
    const std::size_t intervals = n - 1;
    if (intervals % 2 == 0) {
        if (i == 0 || i == n - 1)
            return 1.0 / 3.0;
        return (i % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    }
    if (n == 4) {
        static constexpr double w38[4] = {3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0};
        return w38[i];
    }
    // Simpson on [0, n-4], 3/8 on [n-4, n-1]
    const std::size_t split = n - 4;
    double w = 0.0;
    if (i <= split) {
        if (i == 0 || i == split)
            w += 1.0 / 3.0;
        else
            w += (i % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    }
    if (i >= split) {
        static constexpr double w38[4] = {3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0};
        w += w38[i - split];
    }
    return w;
}

inline double trapezoid_weight(std::size_t i, std::size_t n)
{
    if (n < 2)
        return 0.0;
    return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

template <class Weight>
double block_sum(std::span<const double> f, Weight weight, std::size_t b)
{
    const std::size_t n = f.size();
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(n, lo + block_size);
    const double* data = f.data();
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        s += weight(i, n) * data[i];
    return s;
}

template <class Weight>
double blocked_sum(std::span<const double> f, Weight weight)
{
    const std::size_t n = f.size();
    const std::size_t nblocks = (n + block_size - 1) / block_size;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        partial[static_cast<std::size_t>(b)] = block_sum(f, weight, static_cast<std::size_t>(b));
    }
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total;
}

template <class Weight>
double serial_sum(std::span<const double> f, Weight weight)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += weight(i, f.size()) * f[i];
    return s;
}

constexpr std::size_t window_nodes = 16; // product-integrated span [0, 16 h]
constexpr std::size_t fit_nodes = 24;
constexpr int fit_degree = 6;

// Integral over [0, window_nodes * h] of rho^s g(rho), g fitted on the first
// fit_nodes samples.
double origin_window(std::span<const double> f, double h, double s)
{
    const double width = static_cast<double>(window_nodes) * h;
    Eigen::MatrixXd A(fit_nodes, fit_degree + 1);
    Eigen::VectorXd b(fit_nodes);
    for (std::size_t i = 0; i < fit_nodes; ++i) {
        const double rho = static_cast<double>(i + 1) * h;
        const double t = rho / width;
        double tk = 1.0;
        for (int k = 0; k <= fit_degree; ++k) {
            A(static_cast<Eigen::Index>(i), k) = tk;
            tk *= t;
        }
        b(static_cast<Eigen::Index>(i)) = f[i] / std::pow(rho, s);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    double acc = 0.0;
    for (int k = 0; k <= fit_degree; ++k)
        acc += c(k) / (s + k + 1.0);
    return std::pow(width, s + 1.0) * acc;
}

Quadrature integrate_impl(std::span<const double> f, double h, double s, bool parallel)
{
    if (!(s > -1.0))
        throw domain_error("integrand exponent must exceed -1 for convergence at the origin");
    const std::size_t n = f.size();
    if (n < fit_nodes + 8) {
        // Short grids: leading-power tail plus Simpson.
        const double tail = h * f[0] / (s + 1.0);
        const double simp = serial_sum(f, simpson_weight) * h;
        const double trap = serial_sum(f, trapezoid_weight) * h;
        return {tail + simp, std::abs(simp - trap)};
    }
    const double head = origin_window(f, h, s);
    auto rest = f.subspan(window_nodes - 1);
    const double simp = parallel ? simpson(rest, h) : simpson_serial(rest, h);
    const double trap = parallel ? trapezoid(rest, h) : trapezoid_serial(rest, h);
    return {head + simp, std::abs(simp - trap)};
}

} // namespace

double simpson(std::span<const double> f, double h) { return h * blocked_sum(f, simpson_weight); }

double simpson_serial(std::span<const double> f, double h)
{
    return h * serial_sum(f, simpson_weight);
}

double trapezoid(std::span<const double> f, double h)
{
    return h * blocked_sum(f, trapezoid_weight);
}

double trapezoid_serial(std::span<const double> f, double h)
{
    return h * serial_sum(f, trapezoid_weight);
}

void sample(std::span<double> out, const std::function<double(double)>& g, double rho0, double h)
{
    // exceptions must not escape the parallel region; rethrow the first one
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = g(rho0 + static_cast<double>(i) * h);
        } catch (...) {
#pragma omp critical(virial_sample_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

void sample_serial(std::span<double> out, const std::function<double(double)>& g, double rho0,
                   double h)
{
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = g(rho0 + static_cast<double>(i) * h);
}

Quadrature integrate_from_origin(std::span<const double> f, double h, double s)
{
    return integrate_impl(f, h, s, true);
}

Quadrature integrate_from_origin_serial(std::span<const double> f, double h, double s)
{
    return integrate_impl(f, h, s, false);
}

} // namespace virial::kernels
