// quadrature.hpp — period maps and transition times by singular quadrature.
//
// On hump i the closed orbit at level c of Ham_i = H(y) + F_i(x) crosses the
// axes at x_-(c) < 0 < x_+(c) and y_-(c) < 0 < y_+(c).  The four quarter-lap
// times are integrals of the form  int dx / (h . Hinv_{+,-})(c - F_i(x))
// whose integrands blow up like an inverse square root at the x-intercepts;
// every such integral here runs through the sine substitution of
// gauss_kronrod.hpp.  The gap (weight = 0) transit times come in three
// regimes by the sign of lambda: hyperbolic sweeps and loops (lambda < 0),
// exact shift quotients (lambda = 0), and center crossings (lambda > 0).

#pragma once

#include "nodal/model.hpp"

namespace nodal {

// --------------------------------------------------------------------------
// Level crossings (regular intersections of F_i with a level c).

enum class Side { plus, minus };

struct LevelCrossing {
    double c = 0.0;
    double x_plus = 0.0;   // F_i(x_plus) = c, F_i' > 0 there
    double x_minus = 0.0;  // F_i(x_minus) = c, F_i' < 0 there
    double y_plus = 0.0;   // H(y_plus) = c, y_plus > 0
    double y_minus = 0.0;  // H(y_minus) = c, y_minus < 0
    double dF_plus = 0.0;  // F_i'(x_plus)
    double dF_minus = 0.0; // F_i'(x_minus)
};

// Root of F_i(x) = c nearest 0 on the requested side, found by geometric
// bracket expansion from |x| = 1e-8 (cap 2^60 expansions) plus Brent
// refinement to 1e-12 relative.  Throws NoBracketError when F never meets c
// on that side and DegenerateLevelError when F_i' ~ 0 at the root.
double solve_level_abscissa(const ProblemSpec& pb, int hump, double c, Side side);

// Both abscissas plus the y-intercepts; requires 0 < c < H*.
LevelCrossing level_crossing(const ProblemSpec& pb, int hump, double c);

// --------------------------------------------------------------------------
// Quarter-lap times and periods.

struct QuarterTimes {
    double t_I = 0.0;    // (0, y_+) -> (x_+, 0)
    double t_II = 0.0;   // (x_-, 0) -> (0, y_+)
    double t_III = 0.0;  // (0, y_-) -> (x_-, 0)
    double t_IV = 0.0;   // (x_+, 0) -> (0, y_-)
    double error_est = 0.0;
    double period() const { return t_I + t_II + t_III + t_IV; }
};

QuarterTimes quarter_times(const ProblemSpec& pb, int hump, double c,
                           double tol = 1e-10);

double period(const ProblemSpec& pb, int hump, double c, double tol = 1e-10);

// Period of the semilinear oscillator x'' + lambda x + mu |x|^{p-1} x = 0
// through amplitude x_plus, as the single integral
//   T = 4 int_0^1 ds / sqrt(lambda (1-s^2) + (2 mu/(p+1)) x_plus^{p-1} (1-s^{p+1})).
double period_semilinear_amp(double lambda, double mu, double p, double x_plus,
                             double tol = 1e-10);

// Quarter period T/4 at lambda = 0 in closed form:
//   T/4 = mu^{-1/(p+1)} c^{(1-p)/(2(p+1))} C(p),
//   C(p) = B(1/(p+1), 1/2) / (sqrt(2) (p+1)^{p/(p+1)}).
double period_scaling_lambda0(double p, double mu, double c);
double period_constant_C(double p);

// Normalized quarter period for lambda < 0 as a function of theta = x_+/x_*:
//   T1(theta) = int_0^1 ds / sqrt(-(1-s^2) + theta^{p-1} (1-s^{p+1})),
// with T1(theta(x_+(c))) = (T(x_+(c))/4) sqrt(|lambda|).
// Domain: theta > 1 for p > 1; 0 < theta < ((p+1)/2)^{1/(1-p)} for p < 1.
double script_T1(double theta, double p, double tol = 1e-10);

// Sweep-length bounds for the lambda < 0 gap crossing between amplitude
// ratios theta1 < theta2:
//   Lambda1 = arcsinh(theta2 / (theta1 sqrt(theta1^{p-1} - 1))),
//   Lambda2 = arccosh(theta2 / theta1),
//   Lambda_star = (2/sqrt(|lambda|)) max{Lambda1, Lambda2}.
struct LambdaBounds {
    double Lambda1 = 0.0;
    double Lambda2 = 0.0;
    double Lambda_star = 0.0;
};
LambdaBounds lambda_bounds(double theta1, double theta2, double p, double lambda);

// --------------------------------------------------------------------------
// Linear (gap) transit primitives.  E denotes the conserved energy
// H(y) + lambda x^2 / 2 along the crossing orbit.

// lambda <= 0 sweep along the upper branch from x = ell to x = r of the
// orbit through (0, y) with H(y) = E; time is positive for ell < r.
double linear_time_upper(const ProblemSpec& pb, double ell, double r, double E);

// Mirror sweep along the lower branch from x = r leftward to x = ell.
double linear_time_lower(const ProblemSpec& pb, double ell, double r, double E);

// lambda < 0 loop around the right turning point (x_turn, 0), x_turn > 0:
// enters across x = r1 on the lower branch, leaves across x = r2 on the
// upper branch; r1, r2 > x_turn.
double linear_time_right_loop(const ProblemSpec& pb, double r1, double r2,
                              double x_turn);

// lambda < 0 loop around the left turning point (x_turn, 0), x_turn < 0:
// enters across x = l1 on the upper branch, leaves across x = l2 on the
// lower branch; l1, l2 < x_turn.
double linear_time_left_loop(const ProblemSpec& pb, double l1, double l2,
                             double x_turn);

// lambda > 0 crossing at center energy c along the upper branch from
// x = ell to x = r (requires |x| <= sqrt(2c/lambda), endpoints may touch
// the apex where the integrand is singular).
double linear_time_pos_upper(const ProblemSpec& pb, double ell, double r, double c);

// Same along the lower branch, traversed right to left.
double linear_time_pos_lower(const ProblemSpec& pb, double ell, double r, double c);

// lambda > 0 quadrant times of the center orbit at energy c (time from axis
// to axis, e.g. quadrant I = (0, y_+) to (sqrt(2c/lambda), 0)).
struct PosQuadrantTimes {
    double S_I = 0.0, S_II = 0.0, S_III = 0.0, S_IV = 0.0;
};
PosQuadrantTimes pos_quadrant_times(const ProblemSpec& pb, double c);

// Two-piece passage around the left apex (-sqrt(2c/lambda), 0): from the
// vertical line x = x_from (lower branch) to x = x_to (upper branch).
double pos_apex_passage_left(const ProblemSpec& pb, double c, double x_from,
                             double x_to);
// Mirror around the right apex: x_from on the upper branch, x_to on the
// lower branch.
double pos_apex_passage_right(const ProblemSpec& pb, double c, double x_from,
                              double x_to);

// --------------------------------------------------------------------------
// Composite annulus-to-annulus gap times.  Worst-case (slowest) channel
// times for the gap between hump i and hump i+1, built from the annulus
// levels [c1_i, c2_i] and [c1_n, c2_n] (n = i+1).  Valid for lambda <= 0;
// the diagonal loop channels exist only for lambda < 0 (NaN at lambda = 0).

struct GapChannelTimes {
    double y_plus_level = 0.0;   // min of the two upper y-intercepts at c1
    double y_minus_level = 0.0;  // max (closest to 0) of the lower ones
    double x_ell = 0.0;          // left strip line of the II->I sweep
    double x_r = 0.0;            // right strip line of the II->I sweep
    double S_II_I = 0.0;
    double S_IV_III = 0.0;
    double x_plus_turn = 0.0;    // right-loop turning abscissa (lambda < 0)
    double x_minus_turn = 0.0;   // left-loop turning abscissa (lambda < 0)
    double S_IV_I = 0.0;         // diagonal channels, NaN when lambda = 0
    double S_II_III = 0.0;
};

GapChannelTimes gap_channel_times(const ProblemSpec& pb, int gap,
                                  double c1_i, double c2_i,
                                  double c1_n, double c2_n);

// lambda > 0 crossing times between hump level lines at gap energy c:
// from the line x_{ell, lev_i} = Ginv_-((lev_i - c)/mu_i) to the line
// x_{r, lev_n} = Ginv_+((lev_n - c)/mu_{i+1}) along the upper branch
// (II -> I), or its lower-branch mirror (IV -> III).  lev may equal c, in
// which case the line passes through the apex ordinate x = 0... (the line
// degenerates to x = 0).
double pos_gap_S_II_I(const ProblemSpec& pb, int gap, double lev_i,
                      double lev_n, double c);
double pos_gap_S_IV_III(const ProblemSpec& pb, int gap, double lev_i,
                        double lev_n, double c);

// From the line x_{ell, lev_i} up to the right apex (sqrt(2c/lambda), 0)
// along the upper branch; for identity h this equals pi/(2 sqrt(lambda))
// when lev_i = c.
double pos_gap_S_II_I_to_apex(const ProblemSpec& pb, int gap, double lev_i,
                              double c);
double pos_gap_S_IV_III_to_apex(const ProblemSpec& pb, int gap, double lev_i,
                                double c);

// Wrong-channel passage times at gap energy c: III -> I runs through the
// left apex from the line x_{ell, lev_i} (lower branch) to the line
// x_{r, lev_n} (upper branch); I -> III mirrors through the right apex.
double pos_S_III_I(const ProblemSpec& pb, int gap, double lev_i, double lev_n,
                   double c);
double pos_S_I_III(const ProblemSpec& pb, int gap, double lev_i, double lev_n,
                   double c);

// --------------------------------------------------------------------------
// Dispatcher covering every linear transit case by tag.

enum class TransitKind {
    neg_upper,          // a=ell, b=r, level=E
    neg_lower,          // a=ell, b=r, level=E
    neg_right_loop,     // a=r1, b=r2, level=x_turn
    neg_left_loop,      // a=l1, b=l2, level=x_turn
    zero_upper,         // a=ell, b=r, level=E: (r-ell)/h(Hinv_+(E))
    zero_lower,         // a=ell, b=r, level=E: (r-ell)/(-h(Hinv_-(E)))
    pos_upper,          // a=ell, b=r, level=c
    pos_lower,          // a=ell, b=r, level=c
    pos_apex_left,      // a=x_from, b=x_to, level=c
    pos_apex_right      // a=x_from, b=x_to, level=c
};

struct TransitRequest {
    TransitKind kind = TransitKind::zero_upper;
    double a = 0.0;
    double b = 0.0;
    double level = 0.0;
};

double transit_linear(const ProblemSpec& pb, const TransitRequest& req);

}  // namespace nodal
