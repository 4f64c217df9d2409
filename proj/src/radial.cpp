#include "virial/radial.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "virial/errors.hpp"
#include "virial/kernels.hpp"
#include "virial/specfun.hpp"

namespace virial {

namespace {

constexpr int max_bisections = 400;

struct Shot {
    std::vector<double> y;
    int nodes = 0;
    double mismatch = 0.0; // outward minus inward log-derivative at the match point
};

class Shooter {
public:
    Shooter(const ScaledPotential& p, const DimensionConfig& dim, const Grid& grid)
        : p_(p), dim_(dim), grid_(grid), v_(grid.nodes), cent_(grid.nodes)
    {
        kernels::sample(v_, [&p](double r) { return p(r); }, grid.rho_min(), grid.h);
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            const double r = grid.rho(i);
            cent_[i] = dim.centrifugal() / (r * r);
        }
        // For half-integer K the Numerov error near rho = 0 is large (R has no
        // Taylor expansion), so the solution is started further out from a series.
        // K = 0 uses the same start to pin the even solution.
        const bool half_integer = std::fabs(std::fmod(2.0 * dim.K(), 2.0) - 1.0) < 1e-12;
        if (half_integer || dim.K() == 0.0) {
            fit_series_start(true);
        } else if (const auto pl = p.as_power_law(); p.is_coulomb() || (pl && pl->m == std::floor(pl->m))) {
            // rho v(rho) is a polynomial: the fitted series is exact, use it for the first two nodes.
            fit_series_start(false);
        }
    }

    double veff_min() const
    {
        double lo = INFINITY;
        for (std::size_t i = 0; i < v_.size(); ++i) lo = std::min(lo, v_[i] + 0.5 * cent_[i]);
        return lo;
    }

    double veff_end() const { return v_.back() + 0.5 * cent_.back(); }
    double potential_at(std::size_t i) const { return v_[i]; }

    Shot shoot(double eps) const;

private:
    void fit_series_start(bool far);
    // Values of the Frobenius series on nodes 0..series_end_.
    std::vector<double> series_values(double eps) const;

    // Leading terms of R = rho^K (1 + a1 rho + a2 rho^2).
    double frobenius(double eps, double rho) const;

    const ScaledPotential& p_;
    DimensionConfig dim_;
    Grid grid_;
    std::vector<double> v_, cent_;
    std::size_t series_end_ = 1;  // last node taken from the start values
    std::vector<double> rho_v_;  // Taylor coefficients of 2 rho v(rho)
};

double Shooter::frobenius(double eps, double rho) const
{
    const double h = grid_.h;
    const double K = dim_.K();
    // c(rho) = rho w(rho), w = 2(v - eps); extrapolate c(0) and c'(0).
    const double c1 = h * 2.0 * (v_[0] - eps);
    const double c2 = 2.0 * h * 2.0 * (v_[1] - eps);
    const double wm1 = 2.0 * c1 - c2;
    const double w0 = (c2 - c1) / h;
    double a1 = 0.0, a2 = 0.0;
    if (K > 0.0) {
        a1 = wm1 / (2.0 * K);
        a2 = (w0 + wm1 * a1) / (4.0 * K + 2.0);
    } else {
        a2 = 0.5 * w0;
    }
    return std::pow(rho, K) * (1.0 + a1 * rho + a2 * rho * rho);
}

void Shooter::fit_series_start(bool far)
{
    constexpr int degree = 8, samples = 24;
    const double span = std::min(0.5, 0.05 * grid_.rho_max());
    const std::size_t end = static_cast<std::size_t>(0.5 * span / grid_.h);
    if (end < 4) return;
    Eigen::MatrixXd A(samples, degree + 1);
    Eigen::VectorXd b(samples);
    for (int k = 0; k < samples; ++k) {
        const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * (k + 0.5) / samples));
        const double r = span * t;
        double pw = 1.0;
        for (int d = 0; d <= degree; ++d, pw *= t) A(k, d) = pw;
        b(k) = 2.0 * r * p_(r);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    rho_v_.resize(degree + 1);
    for (int d = 0; d <= degree; ++d) rho_v_[d] = c(d) / std::pow(span, d);
    series_end_ = far ? end : 1;
}

std::vector<double> Shooter::series_values(double eps) const
{
    constexpr int terms = 16;
    const double K = dim_.K();
    // w = 2(v - eps) = sum_{k >= -1} wk[k + 1] rho^k
    std::vector<double> wk(terms + 1, 0.0);
    for (std::size_t d = 0; d < rho_v_.size() && d <= terms; ++d) wk[d] = rho_v_[d];
    wk[1] -= 2.0 * eps;
    std::vector<double> a(terms, 0.0);
    a[0] = 1.0;
    for (int k = 1; k < terms; ++k) {
        double sum = 0.0;
        for (int j = 0; j < k; ++j) sum += a[j] * wk[k - 1 - j];
        const double denom = k * (2.0 * K + k - 1.0);
        a[k] = (denom == 0.0) ? 0.0 : sum / denom; // K = 0, k = 1: even solution
    }
    std::vector<double> y(series_end_ + 1);
    for (std::size_t i = 0; i <= series_end_; ++i) {
        const double r = grid_.rho(i);
        double acc = 0.0;
        for (int k = terms - 1; k >= 0; --k) acc = acc * r + a[k];
        y[i] = std::pow(r, K) * acc;
    }
    return y;
}

// Numerov in summed form: with t = h^2 Q / 12 and u = (1 - t) y,
//   u_{i+1} - 2 u_i + u_{i-1} = 12 t_i y_i.
// Carrying t and the first difference of u (instead of F = 1 - t) keeps the
// small h^2 Q term at full precision.
Shot Shooter::shoot(double eps) const
{
    const std::size_t n = grid_.nodes;
    const double h2 = grid_.h * grid_.h;
    std::vector<double> t(n);
    std::size_t match = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double Q = 2.0 * (v_[i] - eps) + cent_[i];
        t[i] = h2 * Q / 12.0;
        if (Q < 0.0) match = i;
    }
    match = std::clamp<std::size_t>(match, 4, n - 4);

    Shot s;
    s.y.assign(n, 0.0);
    auto& y = s.y;
    std::size_t start = 1;
    if (rho_v_.empty()) {
        y[0] = frobenius(eps, grid_.rho(0));
        y[1] = frobenius(eps, grid_.rho(1));
    } else {
        const auto head = series_values(eps);
        start = std::min(series_end_, match - 1);
        std::copy(head.begin(), head.begin() + start + 1, y.begin());
    }
    double u = (1.0 - t[start]) * y[start];
    double du = u - (1.0 - t[start - 1]) * y[start - 1];
    for (std::size_t i = start; i < match; ++i) {
        du += 12.0 * t[i] * y[i];
        u += du;
        y[i + 1] = u / (1.0 - t[i + 1]);
    }
    const double u_match = u;
    const double du_out = du + 12.0 * t[match] * y[match];
    const double y_match = y[match];

    // Inward from y = 0 at the box edge; du runs towards the origin.
    std::vector<double> in(n, 0.0);
    in[n - 2] = 1e-20;
    double ui = (1.0 - t[n - 2]) * in[n - 2];
    double dui = ui;
    for (std::size_t i = n - 2; i > match; --i) {
        dui += 12.0 * t[i] * in[i];
        ui += dui;
        in[i - 1] = ui / (1.0 - t[i - 1]);
        if (std::fabs(in[i - 1]) > 1e100) {
            for (std::size_t k = i - 1; k < n; ++k) in[k] *= 1e-100;
            ui *= 1e-100;
            dui *= 1e-100;
        }
    }
    const double scale = (in[match] != 0.0) ? y_match / in[match] : 0.0;
    for (std::size_t i = match + 1; i < n; ++i) y[i] = in[i] * scale;

    s.nodes = count_nodes(y);
    // u_{m+1} continued outward minus u_{m+1} of the inward branch; the inward
    // difference dui is u_m - u_{m+1}, so u_{m+1} = u_m - dui.
    const double u_next_in = u_match - dui * scale;
    const double u_next_out = u_match + du_out;
    s.mismatch = (y_match != 0.0) ? (u_next_out - u_next_in) / (grid_.h * u_match) : 0.0;
    return s;
}

// Derivative by five-point stencils, one-sided at the ends.
std::vector<double> differentiate(const std::vector<double>& y, double h)
{
    const std::size_t n = y.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) return d;
    const double c = 1.0 / (12.0 * h);
    d[0] = c * (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]);
    d[1] = c * (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]);
    d[n - 2] = c * (3 * y[n - 1] + 10 * y[n - 2] - 18 * y[n - 3] + 6 * y[n - 4] - y[n - 5]);
    d[n - 1] = c * (25 * y[n - 1] - 48 * y[n - 2] + 36 * y[n - 3] - 16 * y[n - 4] + 3 * y[n - 5]);
    return d;
}

double normalize(std::vector<double>& R, const Grid& grid, double K)
{
    std::vector<double> P(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) P[i] = R[i] * R[i];
    const double norm = kernels::integrate_from_origin(P, grid.h, 2.0 * K).value;
    if (!(norm > 0.0) || !std::isfinite(norm)) throw convergence_error("state cannot be normalized");
    const double scale = 1.0 / std::sqrt(norm);
    for (double& r : R) r *= scale;
    for (std::size_t i = 0; i < R.size(); ++i) P[i] = R[i] * R[i];
    return std::fabs(kernels::integrate_from_origin(P, grid.h, 2.0 * K).value - 1.0);
}

double factorial(int k)
{
    return std::tgamma(k + 1.0);
}

void check_grid(const Grid& grid)
{
    if (!(grid.h > 0.0) || grid.nodes < 64) throw domain_error("grid needs h > 0 and at least 64 nodes");
}


Eigenstate finish_state(const Shooter& shooter, const ScaledPotential& p, const DimensionConfig& dim, int n,
                        const Grid& grid, double eps)
{
    Shot s = shooter.shoot(eps);
    if (s.nodes != n) throw convergence_error("converged state has the wrong node count");

    Eigenstate st{p, dim, n, eps, grid, std::move(s.y), {}, 0.0, 0.0, false};
    const double K = dim.K();
    if (st.R[0] < 0.0) {
        for (double& r : st.R) r = -r;
    }
    st.norm_residual = normalize(st.R, grid, K);
    const OriginFit fit = fit_origin_coefficient(st.R, grid, K);
    st.C2 = fit.C2;
    st.C2_warning = fit.relative_residual > 1e-6;

    // Differentiate the smooth factor g = R / rho^K rather than R itself.
    std::vector<double> g(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) g[i] = st.R[i] / std::pow(grid.rho(i), K);
    const std::vector<double> dg = differentiate(g, grid.h);
    st.Rdot.resize(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        const double r = grid.rho(i);
        st.Rdot[i] = std::pow(r, K) * (dg[i] + K * g[i] / r);
    }
    return st;
}

// eps = int rho^{2K} g'^2 / 2 + v R^2 (- C / 4 when K = 1/2), g = R / rho^K.
// NaN when <v> diverges.
double rayleigh_quotient(const Eigenstate& st, const Shooter& shooter)
{
    const Grid& grid = st.grid;
    const double K = st.dim.K();
    std::vector<double> g(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) g[i] = st.R[i] / std::pow(grid.rho(i), K);
    const std::vector<double> dg = differentiate(g, grid.h);
    std::vector<double> kin(grid.nodes), pot(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        kin[i] = 0.5 * std::pow(grid.rho(i), 2.0 * K) * dg[i] * dg[i];
        pot[i] = shooter.potential_at(i) * st.R[i] * st.R[i];
    }
    const double ev = std::min(0.0, st.potential.origin_exponent());
    if (!(2.0 * K + ev > -1.0)) return NAN;
    double rq = kernels::integrate_from_origin(kin, grid.h, 2.0 * K).value +
                kernels::integrate_from_origin(pot, grid.h, 2.0 * K + ev).value;
    if (K == 0.5) rq -= 0.25 * st.C2;
    return rq;
}
} // namespace

void DimensionConfig::validate() const
{
    if (N < 1) throw domain_error("dimension N must be at least 1");
    if (l1 < 0) throw domain_error("l1 must be non-negative");
    if (N == 1 && l1 != 0) throw domain_error("N = 1 has no angular quantum number");
}

Grid Grid::uniform(double h, double rho_max)
{
    if (!(h > 0.0) || !(rho_max > h)) throw domain_error("grid needs 0 < h < rho_max");
    Grid g;
    g.h = h;
    g.nodes = static_cast<std::size_t>(std::llround(rho_max / h));
    return g;
}

double build_Q(const ScaledPotential& p, const DimensionConfig& dim, double eps, double rho)
{
    if (!(rho > 0.0)) throw domain_error("build_Q: rho must be positive");
    return 2.0 * (p(rho) - eps) + dim.centrifugal() / (rho * rho);
}

int count_nodes(const std::vector<double>& R)
{
    int count = 0;
    double last = 0.0;
    for (double r : R) {
        if (r == 0.0) continue;
        if (last != 0.0 && (r < 0.0) != (last < 0.0)) ++count;
        last = r;
    }
    return count;
}

Grid default_grid(const ScaledPotential& p, const DimensionConfig& dim, int n, double h, double margin)
{
    dim.validate();
    if (n < 0) throw domain_error("node count must be non-negative");
    if (auto pl = p.as_power_law(); pl && pl->m <= 0.0)
        throw no_bound_state("repulsive power law has no bound states");
    if (p.is_coulomb()) {
        const double strength = -p(1.0);
        if (!(strength > 0.0)) throw no_bound_state("repulsive Coulomb potential has no bound states");
        return Grid::uniform(h, std::max(20.0, 40.0 * (n + dim.K()) / strength));
    }
    if (!p.confining()) return Grid::uniform(h, std::max(20.0, 40.0 * (n + dim.K())));

    // Coarse solve in a growing box to locate the outer turning point.
    double box = 10.0;
    for (int attempt = 0; attempt < 12; ++attempt, box *= 2.0) {
        const Grid coarse = Grid::uniform(0.01, box);
        const Eigenstate s = solve_eigenstate(p, dim, n, coarse, 1e-7);
        double turning = coarse.rho_min();
        for (std::size_t i = 0; i < coarse.nodes; ++i) {
            if (build_Q(p, dim, s.eps, coarse.rho(i)) < 0.0) turning = coarse.rho(i);
        }
        if (turning + margin <= box) return Grid::uniform(h, turning + margin);
    }
    throw no_bound_state("outer turning point not found");
}

Eigenstate solve_eigenstate(const ScaledPotential& p, const DimensionConfig& dim, int n, const Grid& grid,
                            double tol)
{
    dim.validate();
    check_grid(grid);
    if (n < 0) throw domain_error("node count must be non-negative");
    if (!(tol > 0.0)) throw domain_error("tolerance must be positive");

    const Shooter shooter(p, dim, grid);
    double lo = shooter.veff_min();
    double hi;
    if (p.confining() && !p.is_coulomb()) {
        double width = 1.0;
        hi = lo + width;
        int guard = 0;
        while (shooter.shoot(hi).nodes <= n) {
            width *= 2.0;
            hi = lo + width;
            if (++guard > 80) throw no_bound_state("energy window exhausted for n = " + std::to_string(n));
        }
    } else {
        hi = std::min(0.0, shooter.veff_end());
        if (!(hi > lo) || shooter.shoot(hi).nodes <= n)
            throw no_bound_state("no bound state with " + std::to_string(n) + " nodes in the box");
    }

    int iter = 0;
    while (hi - lo > tol) {
        if (++iter > max_bisections) throw convergence_error("eigenvalue bisection did not converge");
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const Shot s = shooter.shoot(mid);
        if (s.nodes > n)
            hi = mid;
        else if (s.nodes < n)
            lo = mid;
        else if (s.mismatch > 0.0)
            lo = mid;
        else
            hi = mid;
    }

    // The bisection stops at the round-off floor of the matching condition
    // (~1e-15 / h), and the state glued at that energy carries a matching
    // kink of the same order. The Rayleigh quotient is stationary in R, so
    // re-shooting at it removes most of the kink; two passes suffice.
    double eps = 0.5 * (lo + hi);
    Eigenstate st = finish_state(shooter, p, dim, n, grid, eps);
    for (int pass = 0; pass < 2; ++pass) {
        const double rq = rayleigh_quotient(st, shooter);
        if (!std::isfinite(rq) || std::fabs(rq - eps) > 1e-6 * std::max(1.0, std::fabs(eps))) break;
        if (rq == eps) break;
        eps = rq;
        st = finish_state(shooter, p, dim, n, grid, eps);
    }
    return st;
}

OriginFit fit_origin_coefficient(const std::vector<double>& R, const Grid& grid, double K)
{
    constexpr int points = 16, degree = 5;
    if (R.size() < static_cast<std::size_t>(points)) throw domain_error("grid too short for origin fit");
    Eigen::MatrixXd A(points, degree + 1);
    Eigen::VectorXd b(points);
    for (int i = 0; i < points; ++i) {
        const double r = grid.rho(i);
        const double t = r / grid.rho(points - 1);
        double pw = 1.0;
        for (int k = 0; k <= degree; ++k, pw *= t) A(i, k) = pw;
        b(i) = R[i] / std::pow(r, K);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    const double rms = (A * c - b).norm() / std::sqrt(double(points));
    const double scale = std::max(std::fabs(c(0)), 1e-300);
    return {c(0) * c(0), rms / scale};
}

double origin_coefficient(const Eigenstate& s)
{
    return fit_origin_coefficient(s.R, s.grid, s.dim.K()).C2;
}

Eigenstate exact_oscillator_l0(int n, const Grid& grid)
{
    if (n < 0) throw domain_error("oscillator: n must be non-negative");
    check_grid(grid);
    const int k = 2 * n + 1;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    Eigenstate st{ScaledPotential::power_law(1.0, 2.0), {3, 0}, n, 0.5 * (4 * n + 3), grid,
                  std::vector<double>(grid.nodes), std::vector<double>(grid.nodes), 0.0, 0.0, false};
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        const double r = grid.rho(i);
        st.R[i] = sign * std::sqrt(2.0) * specfun::hermite_function(k, r);
        // psi_k' = sqrt(k/2) psi_{k-1} - sqrt((k+1)/2) psi_{k+1}
        st.Rdot[i] = sign * std::sqrt(2.0) *
                     (std::sqrt(0.5 * k) * specfun::hermite_function(k - 1, r) -
                      std::sqrt(0.5 * (k + 1)) * specfun::hermite_function(k + 1, r));
    }
    const double ratio = factorial(2 * n + 2) / factorial(n + 1);
    st.C2 = ratio * ratio / (std::sqrt(std::numbers::pi) * std::pow(2.0, 2 * n) * factorial(2 * n + 1));
    std::vector<double> P(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) P[i] = st.R[i] * st.R[i];
    st.norm_residual = std::fabs(kernels::integrate_from_origin(P, grid.h, 2.0).value - 1.0);
    return st;
}

Eigenstate exact_linear_l0(int n, const Grid& grid)
{
    if (n < 1) throw domain_error("linear: n must be at least 1");
    check_grid(grid);
    const double Z = specfun::airy_zero(n);
    const double slope = specfun::airy(Z).dai;
    Eigenstate st{ScaledPotential::power_law(1.0, 1.0), {3, 0}, n - 1, -0.5 * Z, grid,
                  std::vector<double>(grid.nodes), std::vector<double>(grid.nodes), 1.0, 0.0, false};
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        const auto a = specfun::airy(grid.rho(i) + Z);
        st.R[i] = a.ai / slope;
        st.Rdot[i] = a.dai / slope;
    }
    std::vector<double> P(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) P[i] = st.R[i] * st.R[i];
    st.norm_residual = std::fabs(kernels::integrate_from_origin(P, grid.h, 2.0).value - 1.0);
    return st;
}

Eigenstate exact_coulomb(int n_princ, int l, const Grid& grid)
{
    if (n_princ < 1 || l < 0 || l >= n_princ) throw domain_error("coulomb: need 0 <= l < n");
    check_grid(grid);
    const int k = n_princ - l - 1;
    const double alpha = 2.0 * l + 1.0;
    const double nn = n_princ;
    const double norm = std::sqrt(factorial(k) / (nn * nn * factorial(n_princ + l)));
    Eigenstate st{ScaledPotential::coulomb(1.0), {3, l}, k, -0.5 / (nn * nn), grid,
                  std::vector<double>(grid.nodes), std::vector<double>(grid.nodes), 0.0, 0.0, false};
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        const double x = 2.0 * grid.rho(i) / nn;
        const double L = specfun::laguerre(k, alpha, x);
        const double dL = (k > 0) ? -specfun::laguerre(k - 1, alpha + 1.0, x) : 0.0;
        const double e = std::exp(-0.5 * x);
        const double xl = std::pow(x, l);
        st.R[i] = norm * xl * x * e * L;
        const double du_dx = norm * e * xl * ((l + 1.0) * L - 0.5 * x * L + x * dL);
        st.Rdot[i] = 2.0 / nn * du_dx;
    }
    const double lead = norm * std::pow(2.0 / nn, l + 1) * specfun::laguerre(k, alpha, 0.0);
    st.C2 = lead * lead;
    std::vector<double> P(grid.nodes);
    for (std::size_t i = 0; i < grid.nodes; ++i) P[i] = st.R[i] * st.R[i];
    st.norm_residual = std::fabs(kernels::integrate_from_origin(P, grid.h, 2.0 * l + 2.0).value - 1.0);
    return st;
}

std::vector<Eigenstate> solve_batch_serial(const std::vector<SolveRequest>& requests)
{
    std::vector<Eigenstate> out;
    out.reserve(requests.size());
    for (const auto& r : requests) out.push_back(solve_eigenstate(r.potential, r.dim, r.n, r.grid, r.tol));
    return out;
}

std::vector<Eigenstate> solve_batch(const std::vector<SolveRequest>& requests)
{
    const long count = static_cast<long>(requests.size());
    std::vector<std::optional<Eigenstate>> slots(requests.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        try {
            const auto& r = requests[i];
            slots[i].emplace(solve_eigenstate(r.potential, r.dim, r.n, r.grid, r.tol));
        } catch (...) {
#pragma omp critical(virial_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<Eigenstate> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace virial
