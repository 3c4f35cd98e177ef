// Tests for the problem-data layer: homeomorphisms and their primitives,
// nonlinearities, stepwise weights, potentials, and validation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "nodal/gauss_kronrod.hpp"
#include "nodal/model.hpp"

using namespace nodal;

namespace {

std::vector<HomeoSpec> all_homeos() {
    return {HomeoSpec::identity(),       HomeoSpec::power(0.5),
            HomeoSpec::power(3.0),       HomeoSpec::minkowski(),
            HomeoSpec::relativistic(),   HomeoSpec::rational_cubic(),
            HomeoSpec::log_barrier(4.0)};
}

// A y-range safely inside the domain of h (90% of each finite side).
std::pair<double, double> safe_range(const HomeoSpec& h) {
    const double lo = std::isfinite(h.rho_minus) ? 0.9 * h.rho_minus : -3.0;
    const double hi = std::isfinite(h.rho_plus) ? 0.9 * h.rho_plus : 3.0;
    return {lo, hi};
}

ProblemSpec one_hump(HomeoSpec h, NonlinSpec g, double lambda, double mu) {
    ProblemSpec pb;
    pb.h = h;
    pb.g = g;
    pb.lambda = lambda;
    pb.weight.breakpoints = {0.0, 1.0};
    pb.weight.heights = {mu};
    return pb;
}

}  // namespace

TEST_CASE("eval_h spot values") {
    CHECK(eval_h(HomeoSpec::identity(), 1.25) == doctest::Approx(1.25));
    CHECK(eval_h(HomeoSpec::power(3.0), -2.0) == doctest::Approx(-8.0));
    CHECK(eval_h(HomeoSpec::power(0.5), 4.0) == doctest::Approx(2.0));
    CHECK(eval_h(HomeoSpec::minkowski(), 0.6) == doctest::Approx(0.75));
    CHECK(eval_h(HomeoSpec::relativistic(), 1.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(eval_h(HomeoSpec::rational_cubic(), 2.0) == doctest::Approx(1.6));
    CHECK(eval_h(HomeoSpec::log_barrier(4.0), 2.0) ==
          doctest::Approx(std::log(2.0)));
    CHECK(eval_h(HomeoSpec::log_barrier(4.0), 0.0) == 0.0);
}

TEST_CASE("eval_h strict monotonicity on a sample grid") {
    for (const auto& h : all_homeos()) {
        const auto [lo, hi] = safe_range(h);
        double prev = eval_h(h, lo);
        for (int i = 1; i <= 256; ++i) {
            const double y = lo + (hi - lo) * i / 256.0;
            const double v = eval_h(h, y);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("eval_h guard band and domain errors") {
    const auto mink = HomeoSpec::minkowski();
    CHECK_THROWS_AS((void)eval_h(mink, 1.0), DomainViolation);
    CHECK_THROWS_AS((void)eval_h(mink, -1.0), DomainViolation);
    CHECK_THROWS_AS((void)eval_h(mink, 1.0 - 1e-12), DomainViolation);
    CHECK_NOTHROW((void)eval_h(mink, 1.0 - 1e-6));
    const auto barrier = HomeoSpec::log_barrier(2.0);
    CHECK_THROWS_AS((void)eval_h(barrier, 2.0), DomainViolation);
    CHECK_NOTHROW((void)eval_h(barrier, -1e9));
    CHECK_THROWS_AS((void)eval_h(HomeoSpec::identity(), kInf), DomainViolation);
    CHECK_THROWS_AS((void)eval_h(HomeoSpec::identity(),
                                 std::nan("")), DomainViolation);
}

TEST_CASE("eval_H matches direct quadrature of h") {
    for (const auto& h : all_homeos()) {
        const auto [lo, hi] = safe_range(h);
        for (double frac : {-1.0, -0.6, -0.2, 0.3, 0.7, 1.0}) {
            const double y = frac > 0 ? frac * hi : -frac * lo;
            const auto q = gk_adaptive([&](double s) { return eval_h_core(h, s); },
                                       std::min(0.0, y), std::max(0.0, y),
                                       1e-13, 1e-13);
            const double ref = y >= 0 ? q.value : -q.value;
            CHECK(eval_H(h, y) ==
                  doctest::Approx(ref).epsilon(1e-11).scale(std::fabs(ref) + 1.0));
        }
    }
}

TEST_CASE("dH/dy equals h at random points") {
    std::mt19937 rng(20240915u);
    for (const auto& h : all_homeos()) {
        const auto [lo, hi] = safe_range(h);
        std::uniform_real_distribution<double> dist(lo, hi);
        for (int i = 0; i < 100; ++i) {
            const double y = dist(rng);
            const double step = 1e-6 * std::max(1.0, std::fabs(y));
            const double fd = (eval_H(h, y + step) - eval_H(h, y - step)) / (2.0 * step);
            const double hv = eval_h_core(h, y);
            CHECK(fd == doctest::Approx(hv).epsilon(1e-6).scale(
                            std::max(1.0, std::fabs(hv))));
        }
    }
}

TEST_CASE("small-argument H avoids cancellation") {
    // rational_cubic: H(y) = (y^2 - log(1+y^2))/2 ~ y^4/4 for small y.
    const auto h = HomeoSpec::rational_cubic();
    for (double y : {1e-3, 1e-4, 1e-5}) {
        const double ref = 0.25 * std::pow(y, 4.0) - std::pow(y, 6.0) / 6.0;
        CHECK(eval_H(h, y) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("H inverse roundtrips on both branches") {
    for (const auto& h : all_homeos()) {
        const double cap = h_star(h);
        for (double f : {1e-6, 1e-3, 0.1, 0.5, 0.9}) {
            const double u = std::isfinite(cap) ? f * cap : f * 4.0;
            const double yp = eval_H_inv_pos(h, u);
            const double ym = eval_H_inv_neg(h, u);
            CHECK(yp >= 0.0);
            CHECK(ym <= 0.0);
            CHECK(eval_H(h, yp) == doctest::Approx(u).epsilon(1e-10));
            CHECK(eval_H(h, ym) == doctest::Approx(u).epsilon(1e-10));
        }
        CHECK(eval_H_inv_pos(h, 0.0) == 0.0);
        CHECK(eval_H_inv_neg(h, 0.0) == 0.0);
    }
}

TEST_CASE("H inverse rejects levels beyond the branch range") {
    CHECK_THROWS_AS((void)eval_H_inv_pos(HomeoSpec::minkowski(), 1.0),
                    DomainViolation);
    CHECK_THROWS_AS((void)eval_H_inv_pos(HomeoSpec::minkowski(), 1.5),
                    DomainViolation);
    CHECK_THROWS_AS((void)eval_H_inv_pos(HomeoSpec::log_barrier(4.0), 4.0),
                    DomainViolation);
    CHECK_NOTHROW((void)eval_H_inv_neg(HomeoSpec::log_barrier(4.0), 25.0));
    CHECK_THROWS_AS((void)eval_H_inv_pos(HomeoSpec::identity(), -0.5),
                    DomainViolation);
}

TEST_CASE("h_star per kind") {
    CHECK(h_star(HomeoSpec::identity()) == kInf);
    CHECK(h_star(HomeoSpec::power(0.5)) == kInf);
    CHECK(h_star(HomeoSpec::relativistic()) == kInf);
    CHECK(h_star(HomeoSpec::rational_cubic()) == kInf);
    CHECK(h_star(HomeoSpec::minkowski()) == doctest::Approx(1.0));
    CHECK(h_star(HomeoSpec::log_barrier(4.0)) == doctest::Approx(4.0));
}

TEST_CASE("oddness flag") {
    for (const auto& h : all_homeos()) {
        if (h.kind == HomeoKind::log_barrier) {
            CHECK_FALSE(h.odd());
        } else {
            CHECK(h.odd());
            const auto [lo, hi] = safe_range(h);
            (void)lo;
            for (double y : {0.25 * hi, 0.75 * hi})
                CHECK(eval_h_core(h, -y) == doctest::Approx(-eval_h_core(h, y)));
        }
    }
}

TEST_CASE("nonlinearity values and primitives") {
    const auto cubic = NonlinSpec::power(3.0);
    CHECK(eval_g(cubic, -2.0) == doctest::Approx(-8.0));
    CHECK(eval_G(cubic, -2.0) == doctest::Approx(4.0));
    const auto sqrtish = NonlinSpec::power(0.5);
    CHECK(eval_g(sqrtish, 4.0) == doctest::Approx(2.0));
    CHECK(eval_g(sqrtish, -4.0) == doctest::Approx(-2.0));
    CHECK(eval_g(sqrtish, 0.0) == 0.0);  // no 0 * inf trap at x = 0
    CHECK(eval_G(sqrtish, 4.0) == doctest::Approx(std::pow(4.0, 1.5) / 1.5));
    const auto em1 = NonlinSpec::exp_minus_one();
    CHECK(eval_g(em1, 1.0) == doctest::Approx(std::expm1(1.0)));
    CHECK(eval_G(em1, 1.0) == doctest::Approx(std::exp(1.0) - 2.0));
    CHECK(eval_G(em1, -1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("G inverse roundtrips") {
    for (const auto& g : {NonlinSpec::power(3.0), NonlinSpec::power(0.5),
                          NonlinSpec::exp_minus_one()}) {
        for (double u : {1e-8, 1e-3, 0.5, 2.0, 50.0}) {
            const double xp = eval_G_inv_pos(g, u);
            const double xm = eval_G_inv_neg(g, u);
            CHECK(xp > 0.0);
            CHECK(xm < 0.0);
            CHECK(eval_G(g, xp) == doctest::Approx(u).epsilon(1e-10));
            CHECK(eval_G(g, xm) == doctest::Approx(u).epsilon(1e-10));
        }
        CHECK(eval_G_inv_pos(g, 0.0) == 0.0);
        CHECK_THROWS_AS((void)eval_G_inv_pos(g, -1.0), DomainViolation);
    }
}

TEST_CASE("potentials and energies combine as expected") {
    // lambda = 1, mu = 20, p = 3: at x^2 = 0.4, y = 0 the hump Hamiltonian
    // equals x^2/2 + 20 x^4/4 = 0.2 + 0.8 = 1 exactly.
    auto pb = one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0);
    const double x = std::sqrt(0.4);
    const auto pot = eval_potentials(pb, 0, x, 0.0);
    CHECK(pot.ham == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pot.F == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pot.H == 0.0);
    CHECK(pot.energy == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(hamiltonian(pb, 0, x, 0.0) == doctest::Approx(1.0));
    CHECK(linear_energy(pb, x, 0.0) == doctest::Approx(0.2));

    const auto pot2 = eval_potentials(pb, 0, 0.5, 1.5);
    CHECK(pot2.ham == doctest::Approx(pot2.H + pot2.F));
    CHECK(pot2.H == doctest::Approx(0.5 * 1.5 * 1.5));
    CHECK(pot2.G == doctest::Approx(std::pow(0.5, 4.0) / 4.0));
}

TEST_CASE("eval_F derivative consistency") {
    auto pb = one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), -1.0, 2.0);
    for (double x : {-1.5, -0.3, 0.4, 2.0}) {
        const double step = 1e-6;
        const double fd = (eval_F(pb, 0, x + step) - eval_F(pb, 0, x - step)) / (2.0 * step);
        CHECK(fd == doctest::Approx(eval_f(pb, 0, x)).epsilon(1e-7));
    }
}

TEST_CASE("step weight bookkeeping") {
    StepWeight w;
    w.breakpoints = {0.0, 1.0, 2.5, 3.0, 4.0, 6.0};
    w.heights = {2.0, 5.0, 7.0};
    CHECK(w.m() == 2);
    CHECK(w.L() == 6.0);
    CHECK(w.t(0) == 0.0);
    CHECK(w.s(0) == 1.0);
    CHECK(w.t(1) == 2.5);
    CHECK(w.tau(1) == doctest::Approx(0.5));
    CHECK(w.sigma(0) == doctest::Approx(1.5));
    CHECK(w.sigma(1) == doctest::Approx(1.0));
    CHECK(w.interval_count() == 5);
    CHECK(w.interval_is_hump(0));
    CHECK_FALSE(w.interval_is_hump(1));
    CHECK(w.interval_mu(2) == 5.0);
    CHECK(w.interval_mu(3) == 0.0);

    CHECK(w.locate(0.0) == 0);
    CHECK(w.locate(0.5) == 0);
    CHECK(w.locate(1.0) == 0);   // tie resolves to the incoming interval
    CHECK(w.locate(1.5) == 1);
    CHECK(w.locate(2.5) == 1);
    CHECK(w.locate(2.7) == 2);
    CHECK(w.locate(6.0) == 4);
    CHECK_THROWS_AS((void)w.locate(-0.1), NumericalFailure);
    CHECK_THROWS_AS((void)w.locate(6.1), NumericalFailure);
}

TEST_CASE("boundary arcs") {
    const auto up = BoundaryArc::axis(ArcKind::positive_y_axis);
    CHECK(up.direction_angle() == doctest::Approx(0.0));
    const auto right = BoundaryArc::axis(ArcKind::positive_x_axis);
    CHECK(right.direction_angle() == doctest::Approx(std::acos(-1.0) / 2.0));
    const auto ray = BoundaryArc::from_ray(0.75);
    CHECK(ray.direction_angle() == doctest::Approx(0.75));
    const auto curve = BoundaryArc::from_samples({{0.0, 0.0}, {1.0, 1.0}, {3.0, 1.5}});
    CHECK(curve.direction_angle() == doctest::Approx(std::acos(-1.0) / 4.0));
}

TEST_CASE("validate accepts a sane problem and reports no warnings") {
    auto pb = one_hump(HomeoSpec::minkowski(), NonlinSpec::power(3.0), 1.0, 20.0);
    const auto rep = validate(pb);
    CHECK(rep.warnings.empty());
}

TEST_CASE("validate rejects structural violations") {
    auto pb = one_hump(HomeoSpec::identity(), NonlinSpec::power(3.0), 1.0, 20.0);

    SUBCASE("nonpositive power exponent") {
        pb.g.p = -1.0;
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("power exponent equal to one") {
        pb.g.p = 1.0;
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("weight must start at zero") {
        pb.weight.breakpoints = {0.5, 1.0};
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("breakpoints must increase strictly") {
        pb.weight.breakpoints = {0.0, 1.0, 1.0, 2.0};
        pb.weight.heights = {1.0, 1.0};
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("heights must match hump count") {
        pb.weight.breakpoints = {0.0, 1.0, 2.0, 3.0};
        pb.weight.heights = {1.0};
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("heights must be positive") {
        pb.weight.heights = {0.0};
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("nonpositive homeomorphism exponent") {
        pb.h = HomeoSpec::power(0.0);
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("log barrier needs a positive finite endpoint") {
        pb.h = HomeoSpec::log_barrier(-2.0);
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("ray arc needs a finite angle") {
        pb.r0 = BoundaryArc::from_ray(std::nan(""));
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
    SUBCASE("param curve needs at least two samples") {
        pb.rL = BoundaryArc::from_samples({{0.0, 0.0}});
        CHECK_THROWS_AS((void)validate(pb), ConfigError);
    }
}

TEST_CASE("validate warns about slow-homeomorphism uniqueness risk") {
    auto pb = one_hump(HomeoSpec::power(0.5), NonlinSpec::power(3.0), -1.0, 20.0);
    const auto rep = validate(pb);
    REQUIRE_FALSE(rep.warnings.empty());
    // Same spec with lambda >= 0 stays quiet.
    pb.lambda = 0.0;
    CHECK(validate(pb).warnings.empty());
}
