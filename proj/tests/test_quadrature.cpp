// Tests for the quadrature layer: level crossings, quarter-lap times and
// periods, the lambda = 0 scaling law, normalized lambda < 0 quarter periods
// and sweep bounds, and the gap transit primitives in all three lambda
// regimes.  Everything with dynamical content is cross-checked against an
// independent dense-output Runge-Kutta integration of the planar system with
// bisected event times, or against hand closed forms where they exist.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "nodal/model.hpp"
#include "nodal/quadrature.hpp"

using namespace nodal;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec one_hump(HomeoSpec h, NonlinSpec g, double lambda, double mu) {
    ProblemSpec pb;
    pb.h = h;
    pb.g = g;
    pb.lambda = lambda;
    pb.weight.breakpoints = {0.0, 1.0};
    pb.weight.heights = {mu};
    return pb;
}

ProblemSpec two_humps(HomeoSpec h, NonlinSpec g, double lambda, double mu0,
                      double mu1) {
    ProblemSpec pb;
    pb.h = h;
    pb.g = g;
    pb.lambda = lambda;
    pb.weight.breakpoints = {0.0, 1.0, 2.0, 3.0};
    pb.weight.heights = {mu0, mu1};
    return pb;
}

// ---------------------------------------------------------------------------
// Independent ODE oracle: dense-output Dormand-Prince 5(4) on
//   x' = h(y),  y' = -lambda x - mu g(x),
// with event times located by bisection on the dense interpolant.  The
// quadrature module never integrates the ODE, so agreement here is a genuine
// dual-route check.

using State = std::array<double, 2>;

struct PlanarRhs {
    const ProblemSpec* pb;
    double mu;
    void operator()(const State& z, State& dz, double) const {
        double hx = eval_h_inf(pb->h, z[1]);
        if (!std::isfinite(hx)) hx = (hx > 0.0) ? 1e12 : -1e12;
        dz[0] = hx;
        dz[1] = -pb->lambda * z[0] - mu * eval_g(pb->g, z[0]);
    }
};

inline auto make_walker_stepper() {
    return boost::numeric::odeint::make_dense_output(
        1e-13, 1e-13, boost::numeric::odeint::runge_kutta_dopri5<State>());
}

class OrbitWalker {
  public:
    OrbitWalker(const ProblemSpec& pb, double mu, State z0) : rhs_{&pb, mu} {
        stepper_.initialize(z0, 0.0, 1e-6);
        t_ = 0.0;
        z_ = z0;
    }

    double time() const { return t_; }
    const State& state() const { return z_; }

    // Advance to the next time > time() at which z[comp] crosses the given
    // target value, and return that time.
    double advance_to_value(int comp, double target) {
        const double t_start = t_ + 1e-8;
        while (stepper_.current_time() < t_start) stepper_.do_step(rhs_);
        double t_lo = t_start;
        double f_lo = comp_at(t_lo, comp) - target;
        for (long guard = 0; guard < 4000000; ++guard) {
            const double t_hi = stepper_.current_time();
            if (t_hi > t_lo) {
                const double f_hi = comp_at(t_hi, comp) - target;
                if ((f_lo < 0.0) != (f_hi < 0.0)) {
                    double a = t_lo, b = t_hi, fa = f_lo;
                    for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + b);
                         ++it) {
                        const double m = 0.5 * (a + b);
                        const double fm = comp_at(m, comp) - target;
                        if (fm == 0.0) {
                            a = b = m;
                            break;
                        }
                        if ((fm < 0.0) == (fa < 0.0)) {
                            a = m;
                            fa = fm;
                        } else {
                            b = m;
                        }
                    }
                    t_ = 0.5 * (a + b);
                    stepper_.calc_state(t_, z_);
                    return t_;
                }
                t_lo = t_hi;
                f_lo = f_hi;
            }
            stepper_.do_step(rhs_);
        }
        throw std::runtime_error("OrbitWalker: no crossing found");
    }

  private:
    double comp_at(double t, int comp) {
        State z;
        stepper_.calc_state(t, z);
        return z[comp];
    }

    PlanarRhs rhs_;
    decltype(make_walker_stepper()) stepper_ = make_walker_stepper();
    double t_ = 0.0;
    State z_{};
};

// Event times of the four axis crossings of the hump orbit started at
// (0, y_+(c)), mapped to the quarter labels.  Temporal order of the clockwise
// lap is quadrant I, IV, III, II.
struct OdeQuarters {
    double t_I, t_IV, t_III, t_II;
    double x_plus, x_minus;
    double period() const { return t_I + t_IV + t_III + t_II; }
};

OdeQuarters ode_quarter_times(const ProblemSpec& pb, int hump, double c) {
    const double y0 = eval_H_inv_pos(pb.h, c);
    OrbitWalker w(pb, pb.weight.mu(hump), {0.0, y0});
    const double e1 = w.advance_to_value(1, 0.0);
    const double xp = w.state()[0];
    const double e2 = w.advance_to_value(0, 0.0);
    const double e3 = w.advance_to_value(1, 0.0);
    const double xm = w.state()[0];
    const double e4 = w.advance_to_value(0, 0.0);
    return {e1, e2 - e1, e3 - e2, e4 - e3, xp, xm};
}

void check_quarters_against_ode(const ProblemSpec& pb, double c, double tol) {
    const QuarterTimes qt = quarter_times(pb, 0, c);
    const OdeQuarters oq = ode_quarter_times(pb, 0, c);
    CHECK(qt.t_I == doctest::Approx(oq.t_I).epsilon(tol));
    CHECK(qt.t_II == doctest::Approx(oq.t_II).epsilon(tol));
    CHECK(qt.t_III == doctest::Approx(oq.t_III).epsilon(tol));
    CHECK(qt.t_IV == doctest::Approx(oq.t_IV).epsilon(tol));
    CHECK(qt.period() == doctest::Approx(oq.period()).epsilon(tol));
    const LevelCrossing lc = level_crossing(pb, 0, c);
    CHECK(lc.x_plus == doctest::Approx(oq.x_plus).epsilon(1e-7));
    CHECK(lc.x_minus == doctest::Approx(oq.x_minus).epsilon(1e-7));
}

}  // namespace

// ---------------------------------------------------------------------------
// Level crossings.

TEST_CASE("level_crossing reproduces the quartic-potential intersections") {
    // lambda = 1, mu = 20, g = |x|^2 x: F(x) = x^2/2 + 5 x^4.
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0);

    const LevelCrossing lc1 = level_crossing(pb, 0, 1.0);
    CHECK(lc1.x_plus * lc1.x_plus == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(lc1.x_minus == doctest::Approx(-lc1.x_plus).epsilon(1e-12));
    CHECK(lc1.y_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lc1.y_minus == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lc1.dF_plus > 0.0);
    CHECK(lc1.dF_minus < 0.0);
    CHECK(eval_F(pb, 0, lc1.x_plus) == doctest::Approx(1.0).epsilon(1e-12));

    const LevelCrossing lc2 = level_crossing(pb, 0, 5.0);
    const double exact = (std::sqrt(401.0) - 1.0) / 20.0;
    CHECK(lc2.x_plus * lc2.x_plus == doctest::Approx(exact).epsilon(1e-10));
    CHECK(lc2.x_plus * lc2.x_plus ==
          doctest::Approx(0.9512492197250393).epsilon(1e-10));

    // Second instance: mu = 130, c = 0.8 and c = 20.
    const ProblemSpec pb2 =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 130.0);
    const LevelCrossing ld1 = level_crossing(pb2, 0, 0.8);
    const LevelCrossing ld2 = level_crossing(pb2, 0, 20.0);
    CHECK(ld1.x_plus * ld1.x_plus ==
          doctest::Approx(0.1493890604358626).epsilon(1e-10));
    CHECK(ld2.x_plus * ld2.x_plus ==
          doctest::Approx(0.7768099465952428).epsilon(1e-10));
}

TEST_CASE("level_crossing rejects levels outside (0, H*)") {
    const ProblemSpec pb =
        one_hump(HomeoSpec::minkowski(), NonlinSpec::power(3.0), 1.0, 5.0);
    CHECK_THROWS_AS(level_crossing(pb, 0, 0.0), DomainViolation);
    CHECK_THROWS_AS(level_crossing(pb, 0, -1.0), DomainViolation);
    CHECK_THROWS_AS(level_crossing(pb, 0, 1.0), DomainViolation);  // H* = 1
    CHECK_THROWS_AS(level_crossing(pb, 0, 1.5), DomainViolation);
    CHECK_THROWS_AS(level_crossing(pb, -1, 0.5), ConfigError);
    CHECK_THROWS_AS(level_crossing(pb, 1, 0.5), ConfigError);
    CHECK(level_crossing(pb, 0, 0.5).x_plus > 0.0);
}

TEST_CASE("solve_level_abscissa separates degenerate and unreachable levels") {
    // lambda = -1, g = |x|^{-1/2} x, mu = 0.4096: F'(x) = -x + mu sqrt(x)
    // vanishes at x_c = mu^2 with hump maximum F(x_c) > 0.
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(0.5), -1.0, 0.4096);
    const double x_c = 0.4096 * 0.4096;
    const double c_top =
        -0.5 * x_c * x_c + 0.4096 * std::pow(x_c, 1.5) / 1.5;
    REQUIRE(c_top > 0.0);

    // Tangent level: the level line grazes the hump of F.
    CHECK_THROWS_AS(solve_level_abscissa(pb, 0, c_top, Side::plus),
                    DegenerateLevelError);
    // Barely above the maximum: grazing, still degenerate rather than a
    // bald no-intersection report.
    CHECK_THROWS_AS(solve_level_abscissa(pb, 0, c_top + 1e-12, Side::plus),
                    DegenerateLevelError);
    // Far above the maximum: plain no-bracket.
    CHECK_THROWS_AS(solve_level_abscissa(pb, 0, 2.0 * c_top, Side::plus),
                    NoBracketError);
    // Halfway down: a regular transversal root.
    const double x = solve_level_abscissa(pb, 0, 0.5 * c_top, Side::plus);
    CHECK(eval_F(pb, 0, x) == doctest::Approx(0.5 * c_top).epsilon(1e-11));
    CHECK(x < x_c);  // the root nearest the origin
    CHECK(std::fabs(eval_f(pb, 0, x)) > 0.0);

    // Same shape with mu = 1: maximum 1/6 at x_c = 1.
    const ProblemSpec pb1 =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(0.5), -1.0, 1.0);
    CHECK_THROWS_AS(solve_level_abscissa(pb1, 0, 0.5, Side::plus),
                    NoBracketError);
}

// ---------------------------------------------------------------------------
// Quarter-lap times against the ODE oracle, across every h kind.

TEST_CASE("quarter times match the ODE oracle for every homeomorphism kind") {
    struct Instance {
        HomeoSpec h;
        NonlinSpec g;
        double lambda, mu, c;
    };
    const std::vector<Instance> battery = {
        {HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0, 1.0},
        {HomeoSpec::identity(), NonlinSpec::power(3.0), 0.0, 20.0, 5.0},
        {HomeoSpec::identity(), NonlinSpec::power(3.0), -1.0, 1.0, 0.8},
        {HomeoSpec::identity(), NonlinSpec::power(0.5), -1.0, 1.0, 0.1},
        {HomeoSpec::identity(), NonlinSpec::exp_minus_one(), 1.0, 2.0, 1.5},
        {HomeoSpec::identity(), NonlinSpec::exp_minus_one(), 0.0, 1.0, 0.7},
        {HomeoSpec::identity(), NonlinSpec::exp_minus_one(), -0.2, 1.0, 0.5},
        {HomeoSpec::power(2.0), NonlinSpec::power(3.0), 1.0, 1.0, 2.0},
        {HomeoSpec::power(2.0), NonlinSpec::power(3.0), -0.5, 1.0, 1.0},
        {HomeoSpec::power(2.0), NonlinSpec::power(0.5), 0.0, 1.0, 0.3},
        {HomeoSpec::power(0.5), NonlinSpec::power(3.0), 1.0, 1.0, 2.0},
        {HomeoSpec::power(0.5), NonlinSpec::power(3.0), 0.0, 2.0, 1.0},
        {HomeoSpec::minkowski(), NonlinSpec::power(3.0), 1.0, 5.0, 0.5},
        {HomeoSpec::minkowski(), NonlinSpec::power(2.0), 0.0, 1.0, 0.5},
        {HomeoSpec::minkowski(), NonlinSpec::power(3.0), -1.0, 2.0, 0.6},
        {HomeoSpec::relativistic(), NonlinSpec::power(3.0), 1.0, 1.0, 3.0},
        {HomeoSpec::relativistic(), NonlinSpec::power(3.0), 0.0, 1.0, 1.0},
        {HomeoSpec::relativistic(), NonlinSpec::power(0.5), -0.5, 1.0, 0.5},
        {HomeoSpec::rational_cubic(), NonlinSpec::power(3.0), 1.0, 1.0, 2.0},
        {HomeoSpec::rational_cubic(), NonlinSpec::power(3.0), 0.0, 1.0, 1.0},
        {HomeoSpec::log_barrier(2.0), NonlinSpec::power(3.0), 1.0, 1.0, 1.5},
        {HomeoSpec::log_barrier(2.0), NonlinSpec::power(2.0), 0.0, 1.0, 0.9},
        {HomeoSpec::log_barrier(2.0), NonlinSpec::power(3.0), -0.5, 1.0, 1.0},
    };
    for (std::size_t i = 0; i < battery.size(); ++i) {
        const auto& in = battery[i];
        CAPTURE(i);
        CAPTURE(in.lambda);
        CAPTURE(in.c);
        const ProblemSpec pb = one_hump(in.h, in.g, in.lambda, in.mu);
        check_quarters_against_ode(pb, in.c, 1e-6);
    }
}

TEST_CASE("random semilinear instances: period quadrature vs ODE first return") {
    std::mt19937 rng(20240915u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double ps[3] = {0.5, 2.0, 3.0};
    int done = 0;
    while (done < 40) {
        const double p = ps[rng() % 3];
        const double lambda = -2.0 + 4.0 * u01(rng);
        const double mu = std::exp(std::log(0.1) + std::log(500.0) * u01(rng));
        double c;
        if (p < 1.0 && lambda < 0.0) {
            // Orbits around the origin exist below the hump maximum of F.
            const double x_c = std::pow(mu / -lambda, 1.0 / (1.0 - p));
            const double f_max = 0.5 * lambda * x_c * x_c +
                                 mu * std::pow(x_c, p + 1.0) / (p + 1.0);
            c = (0.2 + 0.5 * u01(rng)) * f_max;
        } else {
            c = std::exp(std::log(0.05) + std::log(100.0) * u01(rng));
        }
        CAPTURE(p);
        CAPTURE(lambda);
        CAPTURE(mu);
        CAPTURE(c);
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(p), lambda, mu);
        const double t_quad = period(pb, 0, c);
        const OdeQuarters oq = ode_quarter_times(pb, 0, c);
        CHECK(t_quad == doctest::Approx(oq.period()).epsilon(1e-5));
        ++done;
    }
}

TEST_CASE("odd h and odd g make all four quarter times equal") {
    const std::vector<HomeoSpec> odd_h = {
        HomeoSpec::identity(), HomeoSpec::power(2.0), HomeoSpec::minkowski(),
        HomeoSpec::relativistic(), HomeoSpec::rational_cubic()};
    for (const auto& h : odd_h) {
        CAPTURE(static_cast<int>(h.kind));
        const ProblemSpec pb = one_hump(h, NonlinSpec::power(3.0), 0.7, 2.0);
        const QuarterTimes qt = quarter_times(pb, 0, 0.5);
        CHECK(qt.t_I == doctest::Approx(qt.t_II).epsilon(1e-9));
        CHECK(qt.t_I == doctest::Approx(qt.t_III).epsilon(1e-9));
        CHECK(qt.t_I == doctest::Approx(qt.t_IV).epsilon(1e-9));
    }
    // A non-odd h breaks the symmetry (sanity that the check above has teeth).
    const ProblemSpec pb =
        one_hump(HomeoSpec::log_barrier(2.0), NonlinSpec::power(3.0), 0.7, 2.0);
    const QuarterTimes qt = quarter_times(pb, 0, 0.5);
    CHECK(std::fabs(qt.t_I - qt.t_IV) > 1e-4);
    CHECK(qt.error_est < 1e-8);
}

// ---------------------------------------------------------------------------
// Closed forms: the lambda = 0 scaling law and the semilinear amplitude form.

TEST_CASE("lambda = 0 periods follow the closed-form scaling law") {
    CHECK(period_constant_C(1.0) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK(period_constant_C(3.0) ==
          doctest::Approx(1.3110287771460598).epsilon(1e-12));
    CHECK(period_constant_C(0.5) ==
          doctest::Approx(1.5980955289972253).epsilon(1e-12));
    CHECK(period_constant_C(2.0) ==
          doctest::Approx(1.4299795962251248).epsilon(1e-12));

    const double grid[4] = {0.2, 1.0, 5.0, 40.0};
    for (double p : {0.5, 2.0, 3.0}) {
        for (double mu : {1.0, 20.0}) {
            const ProblemSpec pb =
                one_hump(HomeoSpec::identity(), NonlinSpec::power(p), 0.0, mu);
            for (double c : grid) {
                CAPTURE(p);
                CAPTURE(mu);
                CAPTURE(c);
                CHECK(period(pb, 0, c) ==
                      doctest::Approx(4.0 * period_scaling_lambda0(p, mu, c))
                          .epsilon(1e-8));
            }
        }
    }
    CHECK_THROWS_AS(period_scaling_lambda0(-1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(period_scaling_lambda0(3.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("amplitude-form period agrees with the level-form period") {
    // Example-scale instance: lambda = 1, mu = 20, p = 3.
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0);
    const double T1 = period(pb, 0, 1.0);
    const double T2 = period(pb, 0, 5.0);
    CHECK(T1 == doctest::Approx(2.4128899939821180).epsilon(1e-9));
    CHECK(T2 == doctest::Approx(1.6388907221450726).epsilon(1e-9));
    const LevelCrossing lc1 = level_crossing(pb, 0, 1.0);
    const LevelCrossing lc2 = level_crossing(pb, 0, 5.0);
    CHECK(period_semilinear_amp(1.0, 20.0, 3.0, lc1.x_plus) ==
          doctest::Approx(T1).epsilon(1e-9));
    CHECK(period_semilinear_amp(1.0, 20.0, 3.0, lc2.x_plus) ==
          doctest::Approx(T2).epsilon(1e-9));

    const ProblemSpec pb2 =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 130.0);
    const double U1 = period(pb2, 0, 0.8);
    const double U2 = period(pb2, 0, 20.0);
    CHECK(U1 == doctest::Approx(1.6232826123079206).epsilon(1e-9));
    CHECK(U2 == doctest::Approx(0.7327395155539357).epsilon(1e-9));

    // Ordering facts used downstream: the first instance has T(c1) > T(c2)
    // but not T(c1) > 2 T(c2); the second has U(c1) > 2 U(c2).
    CHECK(T1 > T2);
    CHECK_FALSE(T1 > 2.0 * T2);
    CHECK(U1 > 2.0 * U2);

    // lambda < 0: the amplitude form rejects amplitudes inside or on the
    // homoclinic loop and agrees with the level form outside it.
    CHECK_THROWS_AS(period_semilinear_amp(-1.0, 1.0, 3.0, 1.2),
                    DomainViolation);
    CHECK_THROWS_AS(
        period_semilinear_amp(-1.0, 1.0, 3.0, std::sqrt(2.0) * (1.0 - 1e-12)),
                    DomainViolation);
    const ProblemSpec pbn =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), -1.0, 1.0);
    const double c_15 = eval_F(pbn, 0, 1.5);
    REQUIRE(c_15 > 0.0);
    CHECK(period_semilinear_amp(-1.0, 1.0, 3.0, 1.5) ==
          doctest::Approx(period(pbn, 0, c_15)).epsilon(1e-9));
}

// ---------------------------------------------------------------------------
// Normalized lambda < 0 quarter period and the sweep-length bounds.

TEST_CASE("normalized quarter period: frozen values, identity, divergence") {
    CHECK(script_T1(1.5, 3.0) ==
          doctest::Approx(1.0683916623815797).epsilon(1e-9));
    CHECK(script_T1(14.0, 3.0) ==
          doctest::Approx(0.0938194530346667).epsilon(1e-9));

    // Identity with the period map: for lambda = -1, mu = 1, p = 3 the orbit
    // through x_+ = theta x_* (x_* = 1) has period 4 T1(theta).
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), -1.0, 1.0);
    const double c = 5.0;
    const double x_plus = solve_level_abscissa(pb, 0, c, Side::plus);
    // x_* = ((p+1)|lambda|/(2 mu))^{1/(p-1)} = sqrt(2) here.
    const double theta = x_plus / std::sqrt(2.0);
    CHECK(script_T1(theta, 3.0) ==
          doctest::Approx(period(pb, 0, c) / 4.0).epsilon(1e-6));

    // Divergence toward theta = 1 is logarithmic: successive decades of
    // theta - 1 add a near-constant increment.
    const double v2 = script_T1(1.0 + 1e-2, 3.0);
    const double v3 = script_T1(1.0 + 1e-3, 3.0);
    const double v4 = script_T1(1.0 + 1e-4, 3.0);
    CHECK(v2 == doctest::Approx(3.3052526295117458).epsilon(1e-8));
    CHECK(v3 == doctest::Approx(4.4881171629492628).epsilon(1e-8));
    CHECK(v4 == doctest::Approx(5.6441693472330095).epsilon(1e-8));
    CHECK(v2 < v3);
    CHECK(v3 < v4);
    const double ratio = (v4 - v3) / (v3 - v2);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);

    // Domain boundaries.
    CHECK_THROWS_AS(script_T1(1.0, 3.0), DomainViolation);
    CHECK_THROWS_AS(script_T1(0.8, 3.0), DomainViolation);
    const double theta_star = std::pow(0.75, 1.0 / 0.5);  // ((p+1)/2)^{1/(1-p)}
    CHECK(theta_star == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(script_T1(0.5, 0.5) > 0.0);
    CHECK_THROWS_AS(script_T1(0.6, 0.5), DomainViolation);
    CHECK_THROWS_AS(script_T1(0.5, 1.0), ConfigError);
}

TEST_CASE("sweep-length bounds: frozen values and quadrature duals") {
    const LambdaBounds b = lambda_bounds(1.5, 14.0, 3.0, -1.0);
    CHECK(b.Lambda1 == doctest::Approx(2.8187358474521437).epsilon(1e-12));
    CHECK(b.Lambda2 == doctest::Approx(2.9238570702466176).epsilon(1e-12));
    CHECK(b.Lambda_star ==
          doctest::Approx(5.8477141404932352).epsilon(1e-12));
    CHECK(b.Lambda_star == doctest::Approx(5.85).epsilon(5e-3 / 5.85));

    // Scaling in lambda only affects Lambda_star.
    const LambdaBounds b4 = lambda_bounds(1.5, 14.0, 3.0, -4.0);
    CHECK(b4.Lambda1 == doctest::Approx(b.Lambda1).epsilon(1e-15));
    CHECK(b4.Lambda_star ==
          doctest::Approx(0.5 * b.Lambda_star).epsilon(1e-15));

    // Dual route through the gap primitives at lambda = -1 with identity h:
    // Lambda1 is the time from x = 0 to x = theta2 along the energy level
    // whose y-axis speed matches theta1's turning ratio, and Lambda2 is half
    // the loop time entering and leaving across x = theta2 around x = theta1.
    const double theta1 = 2.0, theta2 = 4.0, p = 3.0;
    const LambdaBounds d = lambda_bounds(theta1, theta2, p, -1.0);
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(p), -1.0, 1.0);
    const double E =
        0.5 * theta1 * theta1 * (std::pow(theta1, p - 1.0) - 1.0);
    CHECK(d.Lambda1 ==
          doctest::Approx(linear_time_upper(pb, 0.0, theta2, E)).epsilon(1e-10));
    CHECK(d.Lambda2 ==
          doctest::Approx(0.5 * linear_time_right_loop(pb, theta2, theta2,
                                                       theta1))
              .epsilon(1e-10));

    CHECK_THROWS_AS(lambda_bounds(1.5, 14.0, 3.0, 1.0), DomainViolation);
    CHECK_THROWS_AS(lambda_bounds(0.9, 14.0, 3.0, -1.0), DomainViolation);
    CHECK_THROWS_AS(lambda_bounds(-1.0, 14.0, 3.0, -1.0), ConfigError);
    CHECK_THROWS_AS(lambda_bounds(3.0, 2.0, 3.0, -1.0), ConfigError);
}

// ---------------------------------------------------------------------------
// Gap transits, lambda < 0 and lambda = 0.

TEST_CASE("hyperbolic sweeps and loops match closed forms and the ODE") {
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), -1.0, 1.0);

    SUBCASE("upper-branch sweep") {
        const double ell = -1.2, r = 1.5, E = 0.9;
        const double t = linear_time_upper(pb, ell, r, E);
        const double s = std::sqrt(2.0 * E);
        CHECK(t == doctest::Approx(std::asinh(r / s) - std::asinh(ell / s))
                       .epsilon(1e-10));
        OrbitWalker w(pb, 0.0,
                      {ell, std::sqrt(2.0 * E + ell * ell)});
        CHECK(w.advance_to_value(0, r) == doctest::Approx(t).epsilon(1e-8));
        // Lower branch mirrors by symmetry of the identity instance.
        CHECK(linear_time_lower(pb, ell, r, E) ==
              doctest::Approx(t).epsilon(1e-12));
        // Swapped endpoints flip the sign.
        CHECK(linear_time_upper(pb, r, ell, E) ==
              doctest::Approx(-t).epsilon(1e-12));
        CHECK_THROWS_AS(linear_time_upper(pb, ell, r, 0.0), DomainViolation);
    }

    SUBCASE("right loop around a positive turning point") {
        const double r1 = 3.0, r2 = 2.5, xt = 2.0;
        const double t = linear_time_right_loop(pb, r1, r2, xt);
        CHECK(t == doctest::Approx(std::acosh(r1 / xt) + std::acosh(r2 / xt))
                       .epsilon(1e-9));
        // The walker's second crossing of x = r2 (lower branch in, upper
        // branch out) happens exactly loop(r1, r2) after the start at r1.
        OrbitWalker w(pb, 0.0,
                      {r1, -std::sqrt(r1 * r1 - xt * xt)});
        w.advance_to_value(0, r2);
        const double t_ode = w.advance_to_value(0, r2);
        CHECK(t_ode == doctest::Approx(t).epsilon(1e-8));
        // Mirror loop on the left.
        CHECK(linear_time_left_loop(pb, -r1, -r2, -xt) ==
              doctest::Approx(t).epsilon(1e-12));
        CHECK_THROWS_AS(linear_time_right_loop(pb, r1, r2, 0.0),
                        DomainViolation);
        CHECK_THROWS_AS(linear_time_right_loop(pb, 1.5, r2, xt),
                        IncompatibleGeometryError);
    }

    SUBCASE("lambda = 0 transits are exact quotients") {
        const ProblemSpec pz =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 0.0, 1.0);
        TransitRequest req;
        req.kind = TransitKind::zero_upper;
        req.a = -1.0;
        req.b = 2.0;
        req.level = 0.5;  // y_+ = 1, h = 1
        CHECK(transit_linear(pz, req) == doctest::Approx(3.0).epsilon(1e-14));
        req.b = 1.0;
        CHECK(transit_linear(pz, req) == doctest::Approx(2.0).epsilon(1e-14));
        req.kind = TransitKind::zero_lower;
        req.a = -1.0;
        req.b = 2.0;
        CHECK(transit_linear(pz, req) == doctest::Approx(3.0).epsilon(1e-14));

        const ProblemSpec pm =
            one_hump(HomeoSpec::minkowski(), NonlinSpec::power(3.0), 0.0, 1.0);
        req.kind = TransitKind::zero_upper;
        req.level = 0.5;  // y_+ = sqrt(3)/2, h = sqrt(3)
        CHECK(transit_linear(pm, req) ==
              doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
        OrbitWalker w(pm, 0.0, {-1.0, std::sqrt(3.0) / 2.0});
        CHECK(w.advance_to_value(0, 2.0) ==
              doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
        req.level = 1.5;  // beyond H* = 1
        CHECK_THROWS_AS(transit_linear(pm, req), DomainViolation);

        req.level = 0.5;
        CHECK_THROWS_AS(transit_linear(pb, req), DomainViolation);
        req.kind = TransitKind::neg_upper;
        const ProblemSpec pp =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 1.0);
        CHECK_THROWS_AS(transit_linear(pp, req), DomainViolation);
    }
}

// ---------------------------------------------------------------------------
// Gap transits, lambda > 0.

TEST_CASE("center-orbit quadrants and apex passages, lambda > 0") {
    const ProblemSpec pb =
        one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0);

    SUBCASE("identity quadrant times are pi / (2 sqrt(lambda))") {
        const PosQuadrantTimes q = pos_quadrant_times(pb, 1.0);
        CHECK(q.S_I == doctest::Approx(kPi / 2.0).epsilon(1e-10));
        CHECK(q.S_II == doctest::Approx(kPi / 2.0).epsilon(1e-10));
        CHECK(q.S_III == doctest::Approx(kPi / 2.0).epsilon(1e-10));
        CHECK(q.S_IV == doctest::Approx(kPi / 2.0).epsilon(1e-10));
        const ProblemSpec pb4 =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 4.0, 1.0);
        CHECK(pos_quadrant_times(pb4, 2.0).S_I ==
              doctest::Approx(kPi / 4.0).epsilon(1e-10));
    }

    SUBCASE("apex passage matches the trigonometric closed form and the ODE") {
        const double c = 1.0, x_from = 0.3, x_to = -0.2;
        const double X = std::sqrt(2.0 * c);
        const double t = pos_apex_passage_right(pb, c, x_from, x_to);
        const double exact =
            (kPi / 2.0 - std::asin(x_from / X)) + std::acos(x_to / X);
        CHECK(t == doctest::Approx(exact).epsilon(1e-9));
        OrbitWalker w(pb, 0.0,
                      {x_from, std::sqrt(2.0 * c - x_from * x_from)});
        w.advance_to_value(1, 0.0);  // apex
        const double t_ode = w.advance_to_value(0, x_to);
        CHECK(t_ode == doctest::Approx(t).epsilon(1e-8));
        // Mirror passage through the left apex.
        CHECK(pos_apex_passage_left(pb, c, -x_from, -x_to) ==
              doctest::Approx(t).epsilon(1e-10));
        // Lines beyond the apex are geometric violations.
        CHECK_THROWS_AS(linear_time_pos_upper(pb, -2.0 * X, 0.0, c),
                        IncompatibleGeometryError);
    }

    SUBCASE("non-identity h quadrant against the ODE") {
        const ProblemSpec pm =
            one_hump(HomeoSpec::minkowski(), NonlinSpec::power(3.0), 1.0, 1.0);
        const double c = 0.4;
        const double X = std::sqrt(2.0 * c);
        const double t = pos_quadrant_times(pm, c).S_I;
        OrbitWalker w(pm, 0.0, {0.0, eval_H_inv_pos(pm.h, c)});
        CHECK(w.advance_to_value(1, 0.0) == doctest::Approx(t).epsilon(1e-7));
        CHECK(w.state()[0] == doctest::Approx(X).epsilon(1e-7));
    }
}

TEST_CASE("level-line gap crossings, lambda > 0") {
    const ProblemSpec pb =
        two_humps(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0,
                  20.0);
    const double c1 = 1.0, c2 = 5.0;

    // Lines at level c2 over gap energy c1: mu G(x) = c2 - c1 exactly.
    const double x_com = std::pow(4.0 * (c2 - c1) / 20.0, 0.25);
    CHECK(x_com == doctest::Approx(0.9457416090031758).epsilon(1e-12));

    const double t = pos_gap_S_II_I(pb, 0, c2, c2, c1);
    CHECK(t == doctest::Approx(1.4650264152455581).epsilon(1e-9));
    CHECK(t == doctest::Approx(2.0 * std::asin(x_com / std::sqrt(2.0)))
                   .epsilon(1e-10));
    CHECK(pos_gap_S_IV_III(pb, 0, c2, c2, c1) ==
          doctest::Approx(t).epsilon(1e-12));

    OrbitWalker w(pb, 0.0,
                  {-x_com, std::sqrt(2.0 * c1 - x_com * x_com)});
    CHECK(w.advance_to_value(0, x_com) == doctest::Approx(t).epsilon(1e-8));

    // A line at the gap energy itself passes through x = 0, so the run to
    // the apex is a quarter turn.
    CHECK(pos_gap_S_II_I_to_apex(pb, 0, c1, c1) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-10));
    CHECK(pos_gap_S_IV_III_to_apex(pb, 0, c1, c1) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-10));

    // Wrong-channel passages go around an apex: III -> I from the left line
    // to the right line through the left apex.  Start and end are antipodal
    // points of the center orbit, so the passage is half a turn exactly.
    const double t_wrong = pos_S_III_I(pb, 0, c2, c2, c1);
    CHECK(t_wrong == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(pos_S_I_III(pb, 0, c2, c2, c1) ==
          doctest::Approx(t_wrong).epsilon(1e-10));

    // Levels below the gap energy or lines beyond the apex are incompatible.
    CHECK_THROWS_AS(pos_gap_S_II_I(pb, 0, 0.5 * c1, c2, c1),
                    IncompatibleGeometryError);
    CHECK_THROWS_AS(pos_gap_S_II_I(pb, 0, c2, c2, 0.05),
                    IncompatibleGeometryError);
}

// ---------------------------------------------------------------------------
// Composite channel times between annuli.

TEST_CASE("gap channel times: boundary geometry and ODE cross-check") {
    const ProblemSpec pb = two_humps(HomeoSpec::identity(),
                                     NonlinSpec::power(3.0), -1.0, 1.0, 2.0);
    const double c1_i = 0.5, c2_i = 1.5, c1_n = 0.6, c2_n = 2.0;
    const GapChannelTimes g = gap_channel_times(pb, 0, c1_i, c2_i, c1_n, c2_n);
    const double E = 0.5;

    CHECK(g.y_plus_level == doctest::Approx(std::sqrt(2.0 * E)).epsilon(1e-12));
    CHECK(g.y_minus_level ==
          doctest::Approx(-std::sqrt(2.0 * E)).epsilon(1e-12));

    // The strip lines sit on the hump outer boundaries at the gap energy E:
    // the hump Hamiltonian at the line equals the outer level.
    auto y_up = [&](double x) {
        return eval_H_inv_pos(pb.h, E + 0.5 * x * x);
    };
    CHECK(hamiltonian(pb, 0, g.x_ell, y_up(g.x_ell)) ==
          doctest::Approx(c2_i).epsilon(1e-10));
    CHECK(hamiltonian(pb, 1, g.x_r, y_up(g.x_r)) ==
          doctest::Approx(c2_n).epsilon(1e-10));
    CHECK(g.x_ell < 0.0);
    CHECK(g.x_r > 0.0);
    CHECK(g.S_II_I ==
          doctest::Approx(linear_time_upper(pb, g.x_ell, g.x_r, E))
              .epsilon(1e-12));
    OrbitWalker w(pb, 0.0, {g.x_ell, y_up(g.x_ell)});
    CHECK(w.advance_to_value(0, g.x_r) ==
          doctest::Approx(g.S_II_I).epsilon(1e-8));

    // Loop channels: the slowest loop turns at the innermost inner-boundary
    // intercept, and its entry lines sit on the outer boundaries.
    const double xp_i = solve_level_abscissa(pb, 0, c1_i, Side::plus);
    const double xp_n = solve_level_abscissa(pb, 1, c1_n, Side::plus);
    CHECK(g.x_plus_turn == doctest::Approx(std::min(xp_i, xp_n)).epsilon(1e-12));
    const double Ur = 0.5 * g.x_plus_turn * g.x_plus_turn;
    const double r1 = eval_G_inv_pos(pb.g, (c2_i + Ur) / 1.0);
    const double r2 = eval_G_inv_pos(pb.g, (c2_n + Ur) / 2.0);
    CHECK(g.S_IV_I ==
          doctest::Approx(linear_time_right_loop(pb, r1, r2, g.x_plus_turn))
              .epsilon(1e-12));
    // Entry point lies on hump 0's outer boundary with loop energy.
    const double y_r1 = -eval_H_inv_pos(pb.h, 0.5 * (r1 * r1 - Ur * 2.0));
    CHECK(hamiltonian(pb, 0, r1, y_r1) == doctest::Approx(c2_i).epsilon(1e-10));
    CHECK(g.x_minus_turn < 0.0);
    CHECK(g.S_II_III > 0.0);

    // lambda = 0 variant: sweeps are quotients and loops are absent.
    const ProblemSpec pz = two_humps(HomeoSpec::identity(),
                                     NonlinSpec::power(3.0), 0.0, 1.0, 2.0);
    const GapChannelTimes gz = gap_channel_times(pz, 0, c1_i, c2_i, c1_n, c2_n);
    const double y_E = std::sqrt(2.0 * E);
    CHECK(gz.S_II_I ==
          doctest::Approx((gz.x_r - gz.x_ell) / y_E).epsilon(1e-10));
    CHECK(std::isnan(gz.S_IV_I));
    CHECK(std::isnan(gz.S_II_III));

    CHECK_THROWS_AS(gap_channel_times(pb, 1, c1_i, c2_i, c1_n, c2_n),
                    ConfigError);
    CHECK_THROWS_AS(gap_channel_times(pb, 0, 1.5, 0.5, c1_n, c2_n),
                    ConfigError);
    const ProblemSpec pp = two_humps(HomeoSpec::identity(),
                                     NonlinSpec::power(3.0), 1.0, 1.0, 2.0);
    CHECK_THROWS_AS(gap_channel_times(pp, 0, c1_i, c2_i, c1_n, c2_n),
                    DomainViolation);
}

// ---------------------------------------------------------------------------
// Monotonicity of the period map per regime.

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, double(i) / double(n - 1));
    return g;
}

bool strictly_monotone(const ProblemSpec& pb, const std::vector<double>& cs,
                       bool increasing) {
    double prev = period(pb, 0, cs.front());
    for (std::size_t i = 1; i < cs.size(); ++i) {
        const double cur = period(pb, 0, cs[i]);
        if (increasing ? (cur <= prev) : (cur >= prev)) return false;
        prev = cur;
    }
    return true;
}

}  // namespace

TEST_CASE("period map monotonicity per (p, lambda) regime") {
    SUBCASE("p > 1, lambda > 0: decreasing from 2 pi / sqrt(lambda) to 0") {
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 1.0);
        CHECK(strictly_monotone(pb, log_grid(1e-3, 1e3, 32), false));
        CHECK(period(pb, 0, 1e-8) == doctest::Approx(2.0 * kPi).epsilon(1e-3));
        CHECK(period(pb, 0, 1e8) < 0.06);
    }
    SUBCASE("p > 1, lambda = 0: decreasing") {
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 0.0, 1.0);
        CHECK(strictly_monotone(pb, log_grid(1e-3, 1e3, 32), false));
    }
    SUBCASE("p > 1, lambda < 0: decreasing from the homoclinic blow-up") {
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), -1.0, 1.0);
        CHECK(strictly_monotone(pb, log_grid(1e-4, 1e3, 32), false));
        CHECK(period(pb, 0, 1e-6) > 2.0 * period(pb, 0, 1.0));
    }
    SUBCASE("p < 1, lambda > 0: increasing toward 2 pi / sqrt(lambda)") {
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(0.5), 1.0, 1.0);
        CHECK(strictly_monotone(pb, log_grid(1e-3, 1e3, 32), true));
        CHECK(period(pb, 0, 1e8) == doctest::Approx(2.0 * kPi).epsilon(0.05));
    }
    SUBCASE("p < 1, lambda = 0: increasing") {
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(0.5), 0.0, 1.0);
        CHECK(strictly_monotone(pb, log_grid(1e-3, 1e3, 32), true));
    }
    SUBCASE("p < 1, lambda < 0: increasing toward the heteroclinic level") {
        const ProblemSpec pb =
            one_hump(HomeoSpec::identity(), NonlinSpec::power(0.5), -1.0, 1.0);
        const double f_max = 1.0 / 6.0;  // hump maximum of F at x = 1
        CHECK(strictly_monotone(pb, log_grid(0.01 * f_max, 0.95 * f_max, 24),
                                true));
        CHECK(period(pb, 0, 0.999 * f_max) > 1.5 * period(pb, 0, 0.5 * f_max));
    }
}
