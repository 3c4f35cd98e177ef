// model.hpp — problem data: the increasing homeomorphism h, the nonlinearity
// g, the stepwise weight, potentials and energies.
//
// The planar system under study is
//     x' = h(y),   y' = -lambda*x - a(t)*g(x),
// where a(t) is a step function equal to mu_i on the humps [t_i, s_i] and to
// 0 on the gaps (s_i, t_{i+1}).  On hump i the flow preserves
//     Ham_i(x, y) = H(y) + F_i(x),    F_i(x) = lambda*x^2/2 + mu_i*G(x),
// and on gaps it preserves the energy  E(x, y) = H(y) + lambda*x^2/2,
// with the primitives H(y) = int_0^y h  and  G(x) = int_0^x g.

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
};

// ---------------------------------------------------------------------------
// h: increasing homeomorphism of (rho_minus, rho_plus) onto an interval
// around 0 with h(0) = 0.

enum class HomeoKind {
    identity,              // h(y) = y on R
    power_q,               // h(y) = |y|^q sgn(y) on R, q > 0
    minkowski_inverse,     // h(y) = y / sqrt(1 - y^2) on (-1, 1)
    relativistic_inverse,  // h(y) = y / sqrt(1 + y^2) on R
    rational_cubic,        // h(y) = y^3 / (1 + y^2) on R
    log_barrier            // h(y) = log(rho_plus / (rho_plus - y)) on (-inf, rho_plus)
};

struct HomeoSpec {
    HomeoKind kind = HomeoKind::identity;
    double q = 1.0;         // exponent of power_q
    double rho_minus = -kInf;
    double rho_plus = kInf;

    static HomeoSpec identity();
    static HomeoSpec power(double q);
    static HomeoSpec minkowski();
    static HomeoSpec relativistic();
    static HomeoSpec rational_cubic();
    static HomeoSpec log_barrier(double rho_plus);

    // Recompute rho_{-,+} from the kind (after config-file field assignment).
    void finalize_domain();
    bool odd() const;  // true for every built-in kind except log_barrier
};

// Width of the guard band next to finite domain endpoints:
// 1e-9 * (domain width when finite, else 1).
double eps_dom(const HomeoSpec& spec);

// h(y); raises DomainViolation outside (rho_minus + eps, rho_plus - eps).
double eval_h(const HomeoSpec& spec, double y);

// eval_h without the guard band: y must lie strictly inside the open domain.
// Quadrature integrands use this so that speeds arbitrarily close to a finite
// endpoint evaluate instead of tripping the trajectory guard.
double eval_h_core(const HomeoSpec& spec, double y);

// Like eval_h_core but maps points at or beyond a finite endpoint to +-inf
// instead of throwing (so 1/h cleanly becomes 0 there).
double eval_h_inf(const HomeoSpec& spec, double y);

// Primitive H(y) = int_0^y h(s) ds, exact closed form for every built-in
// kind.  Accepts the full open domain (no guard band) plus the finite
// endpoints themselves (limit value).
double eval_H(const HomeoSpec& spec, double y);

// Positive/negative branch inverses of H: eval_H_inv_pos(u) is the y >= 0
// with H(y) = u, eval_H_inv_neg(u) the y <= 0 with H(y) = u.  Requires
// 0 <= u < H(rho_plus) (resp. H(rho_minus)).
double eval_H_inv_pos(const HomeoSpec& spec, double u);
double eval_H_inv_neg(const HomeoSpec& spec, double u);

// H* = min{ H(rho_minus), H(rho_plus) }; +inf when H diverges at both ends.
double h_star(const HomeoSpec& spec);

// ---------------------------------------------------------------------------
// g: continuous, g(0) = 0, g(s)s > 0 for s != 0.

enum class NonlinKind {
    power_p,       // g(x) = |x|^{p-1} x, p > 0, p != 1
    exp_minus_one  // g(x) = e^x - 1
};

struct NonlinSpec {
    NonlinKind kind = NonlinKind::power_p;
    double p = 3.0;

    static NonlinSpec power(double p);
    static NonlinSpec exp_minus_one();
};

double eval_g(const NonlinSpec& spec, double x);
double eval_G(const NonlinSpec& spec, double x);  // G(x) = int_0^x g, closed form

// Branch inverses of G: the x >= 0 solution of G(x) = u (pos) and the x <= 0
// one (neg).  u must be >= 0; both return 0 at u = 0.  Closed form for the
// power kind, bracketed root otherwise.
double eval_G_inv_pos(const NonlinSpec& spec, double u);
double eval_G_inv_neg(const NonlinSpec& spec, double u);

// ---------------------------------------------------------------------------
// Stepwise weight: partition 0 = t_0 < s_0 < t_1 < ... < t_m < s_m = L with
// heights mu_0..mu_m on the humps [t_i, s_i].

struct StepWeight {
    // Flattened breakpoints [t_0, s_0, t_1, s_1, ..., t_m, s_m].
    std::vector<double> breakpoints;
    std::vector<double> heights;

    int m() const { return static_cast<int>(heights.size()) - 1; }
    double L() const { return breakpoints.back(); }
    double t(int i) const { return breakpoints[2 * static_cast<std::size_t>(i)]; }
    double s(int i) const { return breakpoints[2 * static_cast<std::size_t>(i) + 1]; }
    double mu(int i) const { return heights[static_cast<std::size_t>(i)]; }
    double tau(int i) const { return s(i) - t(i); }      // hump length
    double sigma(int i) const { return t(i + 1) - s(i); } // gap length

    // 2m+1 consecutive intervals: even index 2i = hump i, odd index 2i+1 =
    // gap i.  Interval k spans [edge(k), edge(k+1)].
    int interval_count() const { return 2 * m() + 1; }
    double edge(int k) const { return breakpoints[static_cast<std::size_t>(k)]; }
    bool interval_is_hump(int k) const { return k % 2 == 0; }
    int interval_hump(int k) const { return k / 2; }  // hump or gap ordinal
    double interval_mu(int k) const { return interval_is_hump(k) ? mu(k / 2) : 0.0; }

    // Interval containing time t; ties at interior breakpoints resolve to the
    // incoming (left) interval.  t must lie in [0, L].
    int locate(double t) const;
};

// ---------------------------------------------------------------------------
// Boundary arcs for the shooting problem.

enum class ArcKind {
    positive_y_axis,
    negative_y_axis,
    positive_x_axis,
    negative_x_axis,
    ray,         // straight ray from the origin at a fixed clockwise angle
    param_curve  // sampled polyline, interpolated linearly
};

struct BoundaryArc {
    ArcKind kind = ArcKind::positive_y_axis;
    double angle = 0.0;  // ray only; clockwise from the positive y-axis
    std::vector<PhasePoint> samples;  // param_curve only
    int quadrant_hint = 0;  // optional, 1..4 per clockwise order; 0 = unset

    static BoundaryArc axis(ArcKind kind);
    static BoundaryArc from_ray(double angle);
    static BoundaryArc from_samples(std::vector<PhasePoint> pts);

    // Clockwise angle (from the positive y-axis) of the arc direction at the
    // origin; param curves use their first sample.
    double direction_angle() const;
};

// ---------------------------------------------------------------------------
// Full problem instance.

struct ProblemSpec {
    HomeoSpec h;
    NonlinSpec g;
    double lambda = 0.0;
    StepWeight weight;
    BoundaryArc r0;
    BoundaryArc rL;
};

// F_i(x) = lambda*x^2/2 + mu_i*G(x) and its derivative
// f_i(x) = lambda*x + mu_i*g(x) on hump i.
double eval_F(const ProblemSpec& pb, int hump, double x);
double eval_f(const ProblemSpec& pb, int hump, double x);

double hamiltonian(const ProblemSpec& pb, int hump, double x, double y);
double linear_energy(const ProblemSpec& pb, double x, double y);

struct Potentials {
    double G = 0.0;       // G(x)
    double H = 0.0;       // H(y)
    double F = 0.0;       // F_i(x)
    double ham = 0.0;     // H(y) + F_i(x)
    double energy = 0.0;  // H(y) + lambda*x^2/2
};
Potentials eval_potentials(const ProblemSpec& pb, int hump, double x, double y);

// ---------------------------------------------------------------------------
// Validation: hard structural violations throw ConfigError; soft issues are
// returned as warnings.

struct ValidationReport {
    std::vector<std::string> warnings;
};

ValidationReport validate(const ProblemSpec& pb);

}  // namespace nodal
