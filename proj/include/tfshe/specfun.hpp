#pragma once

// Mittag-Leffler function, the one-sided stable subordinator density and
// rotationally symmetric stable densities.

namespace tfshe::specfun {

// Surface area of the unit sphere in R^d.
double sphere_area(int d);

// Constant c with  F[|x|^{-gamma}](xi) = c |xi|^{gamma-d},  0 < gamma < d.
double riesz_constant(int d, double gamma);

struct MLValue {
    double value;
    double lower; // 1 / (1 + Gamma(1-beta) x)
    double upper; // 1 / (1 + x / Gamma(1+beta))
};

// E_beta(-x) for 0 < beta <= 1, x >= 0, with the two-sided rational envelope.
MLValue mittag_leffler_neg(double beta, double x);

// Value only, same domain as mittag_leffler_neg.
double ml_neg(double beta, double x);

// The two large-x routes used by ml_neg, exposed for cross-checks: the real
// branch-cut integral, and the algebraic expansion sum_k (-1)^{k+1} x^{-k}/Gamma(1-beta k)
// (NaN when it does not reach 1e-17 before diverging).
double ml_neg_integral(double beta, double x);
double ml_neg_asymptotic(double beta, double x);

// Power series sum_k z^k / Gamma(1 + beta k); only meaningful for moderate |z|.
double ml_series(double beta, double z);

// log E_rho(z) for 0 < rho <= 1, z >= 0. Stays finite when E_rho(z) overflows.
double ml_log_pos(double rho, double z);

enum class SubordinatorBranch { Series, Integral };

struct SubordinatorEval {
    double value;
    SubordinatorBranch branch;
    bool underflow; // value below the smallest normal double
};

// Density of the one-sided beta-stable law with Laplace transform exp(-s^beta).
SubordinatorEval subordinator_density_eval(double beta, double u);
double subordinator_density(double beta, double u);

// Crossover between the integral and the series representations.
double subordinator_crossover(double beta);

// Both representations, exposed for cross-checks.
double subordinator_density_series(double beta, double u);
double subordinator_density_integral(double beta, double u);

// Density of the inverse stable subordinator E_t at x: t/beta x^{-1-1/beta} g_beta(t x^{-1/beta}).
double first_passage_density(double beta, double t, double x);

// Rotationally symmetric alpha-stable density with characteristic function
// exp(-nu t |xi|^alpha) in R^d, evaluated at |x| = r.
double stable_density(double alpha, double nu, int d, double t, double r);

// Alternative routes: Gaussian mixture over the alpha/2 subordinator, and
// direct Fourier inversion.
double stable_density_mixture(double alpha, double nu, int d, double t, double r);
double stable_density_fourier(double alpha, double nu, int d, double t, double r);

// Upper tail P(X > x) of the one-dimensional law, x >= 0.
double stable_tail(double alpha, double nu, double t, double x);

// P(a < X < b) of the one-dimensional law, accurate when the interval is far out.
double stable_interval_mass(double alpha, double nu, double t, double a, double b);

} // namespace tfshe::specfun
