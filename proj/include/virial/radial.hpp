#pragma once

#include <cstddef>
#include <vector>

#include "virial/potentials.hpp"

namespace virial {

/// Space dimension and leading angular quantum number.
struct DimensionConfig {
    int N = 3;
    int l1 = 0;

    /// K = l1 + (N-1)/2, so that R ~ rho^K at the origin.
    double K() const { return l1 + 0.5 * (N - 1); }
    /// K(K-1), the coefficient of 1/rho^2 in Q_N.
    double centrifugal() const { return K() * (K() - 1.0); }

    void validate() const;
};

/// Uniform grid rho_i = (i + 1) h, i = 0 .. nodes-1. The origin itself is not a node.
struct Grid {
    double h = 1e-3;
    std::size_t nodes = 0;

    double rho(std::size_t i) const { return static_cast<double>(i + 1) * h; }
    double rho_min() const { return h; }
    double rho_max() const { return rho(nodes - 1); }

    static Grid uniform(double h, double rho_max);
};

struct Eigenstate {
    ScaledPotential potential;
    DimensionConfig dim;
    int n = 0;          // radial node count
    double eps = 0.0;   // scaled energy
    Grid grid;
    std::vector<double> R;
    std::vector<double> Rdot;
    double C2 = 0.0;    // lim P / rho^{2K}
    double norm_residual = 0.0;
    bool C2_warning = false;

    double rho(std::size_t i) const { return grid.rho(i); }
    int l() const { return dim.l1; }
};

/// Q_N = 2(v - eps) + K(K-1)/rho^2.
double build_Q(const ScaledPotential& p, const DimensionConfig& dim, double eps, double rho);

/// Grid for state n: h as given, extent the outer classical turning point plus
/// margin for confining potentials, 40 (n + K) / strength for Coulomb.
Grid default_grid(const ScaledPotential& p, const DimensionConfig& dim, int n, double h = 1e-3,
                  double margin = 10.0);

/// Bound state with n radial nodes by Numerov shooting, matched at the outer
/// turning point. tol is the final width of the energy bracket.
Eigenstate solve_eigenstate(const ScaledPotential& p, const DimensionConfig& dim, int n,
                            const Grid& grid, double tol = 1e-10);

/// Number of sign changes of R over the grid.
int count_nodes(const std::vector<double>& R);

struct OriginFit {
    double C2;
    double relative_residual;
};

/// C^2 from a quintic least-squares fit of R / rho^K over the first 16 nodes,
/// evaluated at rho = 0.
OriginFit fit_origin_coefficient(const std::vector<double>& R, const Grid& grid, double K);

/// Refits C^2 from the stored samples (the stored value uses the same fit).
double origin_coefficient(const Eigenstate& s);

/// Closed-form states. The potential is v = rho^2/2, rho/2 and -1/rho respectively (N = 3).
Eigenstate exact_oscillator_l0(int n, const Grid& grid);
Eigenstate exact_linear_l0(int n, const Grid& grid);
Eigenstate exact_coulomb(int n_princ, int l, const Grid& grid);

struct SolveRequest {
    ScaledPotential potential;
    DimensionConfig dim;
    int n = 0;
    Grid grid;
    double tol = 1e-10;
};

/// Independent solves distributed over OpenMP threads; results keep request order.
std::vector<Eigenstate> solve_batch(const std::vector<SolveRequest>& requests);
std::vector<Eigenstate> solve_batch_serial(const std::vector<SolveRequest>& requests);

} // namespace virial
