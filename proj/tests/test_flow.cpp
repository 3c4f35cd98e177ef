// Tests for trajectory integration: event detection, Poincare maps, winding
// angles, zero counts, conservation, and the blow-up / origin guards.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nodal/flow.hpp"
#include "nodal/model.hpp"
#include "nodal/quadrature.hpp"

using namespace nodal;

namespace {

constexpr double pi = 3.14159265358979323846;

// One hump [0, 1].
ProblemSpec one_hump(HomeoSpec h, NonlinSpec g, double lambda, double mu) {
    ProblemSpec pb;
    pb.h = h;
    pb.g = g;
    pb.lambda = lambda;
    pb.weight = StepWeight{{0.0, 1.0}, {mu}};
    return pb;
}

// Humps [0, 1] and [1 + gap, 2 + gap] around one gap of the given length.
ProblemSpec with_gap(HomeoSpec h, NonlinSpec g, double lambda, double mu,
                     double gap) {
    ProblemSpec pb;
    pb.h = h;
    pb.g = g;
    pb.lambda = lambda;
    pb.weight = StepWeight{{0.0, 1.0, 1.0 + gap, 2.0 + gap}, {mu, mu}};
    return pb;
}

// One hump stretched over [0, len] (for windows that need room).
ProblemSpec long_hump(HomeoSpec h, NonlinSpec g, double lambda, double mu,
                      double len) {
    ProblemSpec pb;
    pb.h = h;
    pb.g = g;
    pb.lambda = lambda;
    pb.weight = StepWeight{{0.0, len}, {mu}};
    return pb;
}

}  // namespace

TEST_CASE("gap rotation at lambda = 1 is the clockwise unit circle") {
    // Gap (1, 1 + 8) hosts a pure linear system x' = y, y' = -x.
    ProblemSpec pb = with_gap(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              1.0, 1.0, 8.0);
    const double a = 1.0;

    SUBCASE("quarter turn maps (1,0) to (0,-1)") {
        Trajectory tr = integrate(pb, {1.0, 0.0}, a, a + 0.5 * pi);
        CHECK(tr.z_end().x == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::fabs(tr.z_end().x) < 1e-9);
        CHECK(tr.z_end().y == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK_FALSE(tr.blew_up);
    }

    SUBCASE("full turn winds by exactly 2 pi") {
        Trajectory tr = integrate(pb, {1.0, 0.0}, a, a + 2.0 * pi);
        CHECK(winding(tr) == doctest::Approx(2.0 * pi).epsilon(1e-8));
        CHECK(tr.z_end().x == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::fabs(tr.z_end().y) < 1e-8);
    }

    SUBCASE("zero counts over one turn from (0,1)") {
        Trajectory tr = integrate(pb, {0.0, 1.0}, a, a + 2.0 * pi);
        // x(t) = sin(t - a): open window sees only the interior zero at a+pi.
        CHECK(count_zeros(tr, Component::x, WindowKind::open) == 1);
        CHECK(count_zeros(tr, Component::x, WindowKind::closed) == 3);
        // y(t) = cos(t - a): two interior zeros, no endpoint zeros.
        CHECK(count_zeros(tr, Component::y, WindowKind::open) == 2);
        CHECK(count_zeros(tr, Component::y, WindowKind::closed) == 2);
        // Sub-window straddling just the first x zero.
        CHECK(count_zeros(tr, Component::x, a + 0.5, a + 4.0,
                          WindowKind::open) == 1);
    }

    SUBCASE("theta starts in [0, 2 pi) and never jumps") {
        Trajectory tr = integrate(pb, {-1.0, -1.0}, a, a + 7.0);
        CHECK(tr.theta.front() >= 0.0);
        CHECK(tr.theta.front() < 2.0 * pi);
        // (-1,-1) sits at clockwise angle 5 pi / 4 from the +y axis.
        CHECK(tr.theta.front() == doctest::Approx(1.25 * pi).epsilon(1e-12));
        for (std::size_t i = 1; i < tr.theta.size(); ++i)
            CHECK(std::fabs(tr.theta[i] - tr.theta[i - 1]) < pi);
        CHECK(winding(tr) == doctest::Approx(7.0).epsilon(1e-8));
    }

    SUBCASE("x zero events sit on the axis to scale tolerance") {
        Trajectory tr = integrate(pb, {0.3, 1.1}, a, a + 2.0 * pi);
        int n_x = 0;
        for (const Event& ev : tr.events) {
            if (ev.kind == EventKind::x_zero) {
                ++n_x;
                CHECK(std::fabs(ev.z.x) <= 1e-9 * 1.2);
                CHECK(std::fabs(ev.z.y) > 0.5);  // transversal
            }
        }
        CHECK(n_x == 2);
    }
}

TEST_CASE("invalid windows and invalid initial points are rejected") {
    ProblemSpec pb = one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              1.0, 1.0);
    CHECK_THROWS_AS(integrate(pb, {0.1, 0.0}, 0.3, 0.3), InvalidWindowError);
    CHECK_THROWS_AS(integrate(pb, {0.1, 0.0}, 0.0, 1.5), InvalidWindowError);
    CHECK_THROWS_AS(integrate(pb, {0.1, 0.0}, -0.5, 1.0), InvalidWindowError);

    ProblemSpec pm = one_hump(HomeoSpec::minkowski(), NonlinSpec::power(3.0),
                              0.0, 1.0);
    CHECK_THROWS_AS(integrate(pm, {0.1, 1.0 - 1e-12}, 0.0, 1.0),
                    DomainViolation);
}

TEST_CASE("hump switch events mark every interior breakpoint") {
    ProblemSpec pb = with_gap(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              1.0, 1.0, 1.0);  // humps [0,1],[2,3], gap (1,2)
    Trajectory tr = integrate(pb, {0.4, 0.2}, 0.0, 3.0);
    std::vector<const Event*> switches;
    for (const Event& ev : tr.events)
        if (ev.kind == EventKind::hump_switch) switches.push_back(&ev);
    REQUIRE(switches.size() == 2);
    CHECK(switches[0]->t == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(switches[0]->direction == 1);  // entering the gap
    CHECK(switches[1]->t == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(switches[1]->direction == -1);  // entering a hump

    // Events are strictly time ordered.
    for (std::size_t i = 1; i < tr.events.size(); ++i)
        CHECK(tr.events[i].t > tr.events[i - 1].t);

    // The full map equals the hand composition of the interval maps.
    PhasePoint z{0.4, 0.2};
    PhasePoint manual = poincare_phi(pb, 1, poincare_psi(pb, 0, poincare_phi(pb, 0, z)));
    PhasePoint full = poincare_full(pb, z);
    CHECK(manual.x == doctest::Approx(full.x).epsilon(1e-9));
    CHECK(manual.y == doctest::Approx(full.y).epsilon(1e-9));

    CHECK_THROWS_AS(poincare_phi(pb, 2, z), ConfigError);
    CHECK_THROWS_AS(poincare_psi(pb, 1, z), ConfigError);
    CHECK_THROWS_AS(poincare_psi(pb, -1, z), ConfigError);
}

TEST_CASE("conservation and reversibility on a mixed run") {
    ProblemSpec pb = with_gap(HomeoSpec::relativistic(), NonlinSpec::power(3.0),
                              -0.5, 2.0, 1.0);
    const PhasePoint z0{0.9, 0.3};
    Trajectory fwd = integrate(pb, z0, 0.0, 3.0);
    REQUIRE_FALSE(fwd.blew_up);
    CHECK(max_conservation_drift(pb, fwd) < 1e-7);

    Trajectory bwd = integrate(pb, fwd.z_end(), 3.0, 0.0);
    REQUIRE_FALSE(bwd.blew_up);
    CHECK(bwd.z_end().x == doctest::Approx(z0.x).epsilon(1e-8));
    CHECK(bwd.z_end().y == doctest::Approx(z0.y).epsilon(1e-8));
}

TEST_CASE("hump orbit: axis crossing times match the quadrature quarters") {
    ProblemSpec pb = long_hump(HomeoSpec::identity(), NonlinSpec::power(3.0),
                               1.0, 1.0, 10.0);
    const double c = 0.8;
    const LevelCrossing lc = level_crossing(pb, 0, c);
    const QuarterTimes qt = quarter_times(pb, 0, c);
    REQUIRE(qt.period() < 10.0);  // fits inside the hump

    // Clockwise from (0, y_plus): quarters I (to +x axis), IV (to -y axis),
    // III (to -x axis), II (back to +y axis).
    Trajectory tr = integrate(pb, {0.0, lc.y_plus}, 0.0, qt.period(), 1e-12);
    REQUIRE_FALSE(tr.blew_up);

    std::vector<double> y_zero_t, x_zero_t;
    for (const Event& ev : tr.events) {
        if (ev.kind == EventKind::y_zero) y_zero_t.push_back(ev.t);
        if (ev.kind == EventKind::x_zero) x_zero_t.push_back(ev.t);
    }
    REQUIRE(y_zero_t.size() == 2);
    REQUIRE(x_zero_t.size() == 1);
    CHECK(y_zero_t[0] == doctest::Approx(qt.t_I).epsilon(1e-6));
    CHECK(x_zero_t[0] == doctest::Approx(qt.t_I + qt.t_IV).epsilon(1e-6));
    CHECK(y_zero_t[1] == doctest::Approx(qt.t_I + qt.t_IV + qt.t_III).epsilon(1e-6));

    // Closing the loop: endpoint back at (0, y_plus) and winding 2 pi.
    CHECK(tr.z_end().x == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::fabs(tr.z_end().x) < 1e-6);
    CHECK(tr.z_end().y == doctest::Approx(lc.y_plus).epsilon(1e-6));
    CHECK(winding(tr) == doctest::Approx(2.0 * pi).epsilon(1e-6));
    CHECK(max_conservation_drift(pb, tr) < 1e-7);
}

TEST_CASE("poincare_phi over one full period is the identity") {
    // Hump [0, T] where T is the quadrature period of the starting level.
    ProblemSpec probe = one_hump(HomeoSpec::power(2.0), NonlinSpec::power(3.0),
                                 1.0, 2.0);
    const double c = 1.3;
    const double T = period(probe, 0, c);
    ProblemSpec pb = long_hump(HomeoSpec::power(2.0), NonlinSpec::power(3.0),
                               1.0, 2.0, T);
    const LevelCrossing lc = level_crossing(pb, 0, c);

    PhasePoint back = poincare_phi(pb, 0, {lc.x_plus, 0.0}, 1e-12);
    CHECK(back.x == doctest::Approx(lc.x_plus).epsilon(1e-6));
    CHECK(std::fabs(back.y) < 1e-6);
}

TEST_CASE("k periods give 2k x-zeros and winding 2 pi k") {
    ProblemSpec probe = one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0),
                                 0.5, 1.5);
    const double c = 1.1;
    const double T = period(probe, 0, c);
    const int k = 3;
    ProblemSpec pb = long_hump(HomeoSpec::identity(), NonlinSpec::power(3.0),
                               0.5, 1.5, k * T);
    const LevelCrossing lc = level_crossing(pb, 0, c);

    Trajectory tr = integrate(pb, {lc.x_plus, 0.0}, 0.0, k * T, 1e-12);
    REQUIRE_FALSE(tr.blew_up);
    CHECK(count_zeros(tr, Component::x, WindowKind::open) == 2 * k);
    CHECK(count_zeros(tr, Component::x, WindowKind::closed) == 2 * k);
    // y starts and ends on the axis: 2k - 1 interior zeros plus both ends.
    CHECK(count_zeros(tr, Component::y, WindowKind::open) == 2 * k - 1);
    CHECK(count_zeros(tr, Component::y, WindowKind::closed) == 2 * k + 1);
    CHECK(winding(tr) == doctest::Approx(2.0 * pi * k).epsilon(1e-6));

    // Winding/zero consistency: x = 0 on the rays theta = 0 and pi (mod
    // 2 pi), so the open-window x zeros equal the number of multiples of pi
    // the unwrapped angle sweeps through.  The run starts and ends on the
    // x-axis (theta = pi/2 mod 2 pi), safely off that grid.
    const int half_turns_x =
        static_cast<int>(std::floor(tr.theta.back() / pi) -
                         std::floor(tr.theta.front() / pi));
    CHECK(count_zeros(tr, Component::x, WindowKind::open) == half_turns_x);
}

TEST_CASE("lambda = 0 gaps freeze the x-axis") {
    ProblemSpec pb = with_gap(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              0.0, 1.0, 2.0);
    PhasePoint out = poincare_psi(pb, 0, {0.7, 0.0});
    CHECK(out.x == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(out.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lambda < 0 gap: stable manifold contracts along its ray") {
    // identity h, lambda = -1: gap system x' = y, y' = -(-1)x = x, stable
    // direction y = -x.
    ProblemSpec pb = with_gap(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              -1.0, 1.0, 2.0);
    PhasePoint out = poincare_psi(pb, 0, {1.0, -1.0});
    const double shrink = std::exp(-2.0);
    CHECK(out.x == doctest::Approx(shrink).epsilon(1e-8));
    CHECK(out.y == doctest::Approx(-shrink).epsilon(1e-8));
}

TEST_CASE("lambda < 0 gap: first-quadrant starts wind less than pi/2") {
    ProblemSpec pb = with_gap(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              -1.0, 1.0, 12.0);
    for (PhasePoint z0 : {PhasePoint{2.0, 1.0}, PhasePoint{1.0, 2.0},
                          PhasePoint{0.5, 0.1}, PhasePoint{0.1, 3.0}}) {
        for (double len : {0.5, 2.0, 6.0, 11.5}) {
            Trajectory tr = integrate(pb, z0, 1.0, 1.0 + len);
            CHECK(winding(tr) < 0.5 * pi);
        }
    }
}

TEST_CASE("blow-up: y hits the finite h-domain edge and the run stops") {
    // minkowski h on (-1, 1), lambda = 0, strong hump, start far out: y' is
    // large and negative, so y reaches -1 well before the hump ends.
    ProblemSpec pb = one_hump(HomeoSpec::minkowski(), NonlinSpec::power(3.0),
                              0.0, 50.0);
    Trajectory tr = integrate(pb, {2.0, 0.0}, 0.0, 1.0);
    REQUIRE(tr.blew_up);
    REQUIRE_FALSE(tr.events.empty());
    const Event& last = tr.events.back();
    CHECK(last.kind == EventKind::blow_up);
    CHECK(last.direction == -1);
    CHECK(last.z.y == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(tr.t_end() < 1.0);
    CHECK(tr.t_end() == doctest::Approx(last.t).epsilon(1e-12));

    // Mirror start blows up through the upper edge.
    Trajectory up = integrate(pb, {-2.0, 0.0}, 0.0, 1.0);
    REQUIRE(up.blew_up);
    CHECK(up.events.back().direction == 1);

    // The Poincare map is undefined there.
    CHECK_THROWS_AS(poincare_phi(pb, 0, PhasePoint{2.0, 0.0}), BlowUpError);
}

TEST_CASE("winding guards the origin") {
    ProblemSpec pb = one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0),
                              1.0, 1.0);
    Trajectory tr = integrate(pb, {0.0, 0.0}, 0.0, 1.0);
    CHECK_THROWS_AS(winding(tr), OriginCrossingError);
}

TEST_CASE("sign-preserving touch raises TangentialZeroError") {
    // Assembled directly: a parabolic dip of y to 1e-12 against a component
    // scale of ~0.5, with no crossing event anywhere near it.
    Trajectory tr;
    for (int i = 0; i <= 40; ++i) {
        const double t = 0.05 * i;
        const double d = t - 1.0;
        tr.samples.push_back({t, PhasePoint{1.0 + t, 0.5 * d * d + 1e-12}});
        tr.theta.push_back(0.0);
    }
    CHECK_THROWS_AS(count_zeros(tr, Component::y, WindowKind::open),
                    TangentialZeroError);
    // The x component never comes near zero on the same trajectory.
    CHECK(count_zeros(tr, Component::x, WindowKind::open) == 0);
    // Excluding the touch from the window defuses it.
    CHECK(count_zeros(tr, Component::y, 1.2, 2.0, WindowKind::open) == 0);
}

TEST_CASE("slow near-saddle passage still counts crossings transversally") {
    // lambda < 0, p = 3 hump: F = -x^2/2 + x^4/4 has its saddle level at
    // F = 0 through x = 0.  At c = 1e-4 the orbit creeps past the saddle
    // with |y| ~ 0.014 — slow, but every axis crossing stays transversal.
    ProblemSpec pb = long_hump(HomeoSpec::identity(), NonlinSpec::power(3.0),
                               -1.0, 1.0, 30.0);
    const double c = 1e-4;
    const LevelCrossing lc = level_crossing(pb, 0, c);
    REQUIRE(lc.x_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-2));

    Trajectory tr = integrate(pb, {lc.x_plus, 0.0}, 0.0, 30.0, 1e-12);
    REQUIRE_FALSE(tr.blew_up);
    const double T = period(pb, 0, c);
    const int laps = static_cast<int>(30.0 / T);
    CHECK(count_zeros(tr, Component::x, WindowKind::open) >= 2 * laps);
    CHECK(max_conservation_drift(pb, tr) < 1e-7);
}
