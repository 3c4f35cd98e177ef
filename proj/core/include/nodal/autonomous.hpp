// autonomous.hpp — constant-weight semilinear branches: eigenvalue
// thresholds, phase-portrait critical points, amplitude branches located by
// monotone period bisection, branch sweeps over a lambda grid, and the
// a-priori amplitude lower-bound curve.
//
// Setting: u'' + lambda u + mu |u|^{p-1} u = 0 on [0, L] (identity h,
// constant weight mu > 0), Dirichlet at both ends.  The solution with
// u'(0) > 0 and n-1 interior nodes corresponds to the orbit through
// (x_plus, 0) whose period satisfies T(x_plus) = 2L/n, and exists exactly
// when lambda < sigma_n = (n pi / L)^2.

#pragma once

#include <optional>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

// (n pi / L)^2, the n-th Dirichlet eigenvalue of -u'' on [0, L].
double sigma_n(int n, double L);

// The lambda < 0 phase-portrait constants for F(x) = lambda x^2/2
// + mu |x|^{p+1}/(p+1):
//   omega_plus: the positive zero of F' (equilibrium abscissa),
//   x_star:     the positive zero of F itself,
//   c_star:     the critical energy F(omega_plus) (negative for p > 1,
//               positive for p < 1).
struct CriticalPoints {
    double x_star = 0.0;
    double omega_plus = 0.0;
    double c_star = 0.0;
};
CriticalPoints critical_points(double lambda, double mu, double p);

// One point of the bifurcation branch: the amplitude of the solution with
// u'(0) > 0 and n-1 interior nodes at this lambda.  For odd nonlinearities
// M_plus = x_plus.  When the amplitude leaves the resolvable range
// [1e-12, 1e12] the point is reported at the range edge with `saturated`
// set instead of being dropped.
struct BranchPoint {
    double lambda = 0.0;
    int n = 1;
    double M_plus = 0.0;
    double x_plus = 0.0;
    int slope_sign = +1;           // branch representative has u'(0) > 0
    bool saturated = false;
    double period_residual = 0.0;  // |T(x_plus) - 2L/n|
};

// The unique branch point at this lambda, or nullopt when lambda >= sigma_n.
std::optional<BranchPoint> branch_point(int n, double lambda, double mu,
                                        double p, double L,
                                        double tol = 1e-10);

// One branch point per admissible grid entry (ascending grid required),
// seeded by continuation from the previous point, with the Prop-2.1
// monotonicity verdict over the non-saturated points.
struct BranchSweep {
    std::vector<BranchPoint> points;
    bool expect_decreasing = false;  // true for p > 1 (M_plus falls with lambda)
    bool monotone = false;
};
BranchSweep branch_sweep(int n, const std::vector<double>& lambda_grid,
                         double mu, double p, double L, double tol = 1e-10);

// The amplitude lower bound (-lambda / ||a||_inf)^{1/(p-1)} valid for every
// nodal solution at lambda < 0.
double apriori_curve(double lambda, double a_sup_norm, double p);

}  // namespace nodal
