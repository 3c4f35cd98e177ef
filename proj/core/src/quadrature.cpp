#include "nodal/quadrature.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "nodal/gauss_kronrod.hpp"
#include "nodal/log.hpp"
#include "nodal/roots.hpp"

namespace nodal {

namespace {

// Order of the integrable blowup of 1/h(Hinv(u)) as u -> 0+: with h(y) ~ y^q
// near 0 one gets H(y) ~ y^{q+1}/(q+1), so 1/h(Hinv(u)) ~ u^{-q/(q+1)}.
double sing_alpha(const HomeoSpec& h) {
    switch (h.kind) {
        case HomeoKind::power_q:
            return h.q / (h.q + 1.0);
        case HomeoKind::rational_cubic:
            return 0.75;
        default:
            return 0.5;
    }
}

// Supremum of H on the positive (resp. negative) branch of the domain.
double H_sup_pos(const HomeoSpec& h) {
    return std::isfinite(h.rho_plus) ? eval_H(h, h.rho_plus) : kInf;
}

double H_sup_neg(const HomeoSpec& h) {
    return std::isfinite(h.rho_minus) ? eval_H(h, h.rho_minus) : kInf;
}

// Inverse speeds 1/x' on the two branches at kinetic level u = H(y).
// Nonpositive u only occurs as a roundoff sliver past a turning point, where
// the substituted integrand carries a vanishing Jacobian; returning 0 there
// keeps the product finite.
double inv_speed_up(const HomeoSpec& h, double u) {
    if (u <= 0.0) return 0.0;
    const double s = eval_h_inf(h, eval_H_inv_pos(h, u));
    return (s > 0.0 && std::isfinite(s)) ? 1.0 / s : 0.0;
}

double inv_speed_down(const HomeoSpec& h, double u) {
    if (u <= 0.0) return 0.0;
    const double s = -eval_h_inf(h, eval_H_inv_neg(h, u));
    return (s > 0.0 && std::isfinite(s)) ? 1.0 / s : 0.0;
}

void check_branch_levels(const HomeoSpec& h, double umax, bool upper,
                         const char* who) {
    const double sup = upper ? H_sup_pos(h) : H_sup_neg(h);
    if (umax >= sup)
        throw DomainViolation(std::string(who) +
                              ": energy reaches the range limit of H on the " +
                              (upper ? "upper" : "lower") + " branch");
}

struct AbscissaResult {
    double x = 0.0;
    double dF = 0.0;
};

AbscissaResult finish_abscissa(const ProblemSpec& pb, int hump, double c,
                               double x_lo, double x_hi, double f_lo,
                               double f_hi) {
    auto f = [&](double x) { return eval_F(pb, hump, x) - c; };
    RootOptions opt;
    opt.rel_tol = 1e-12;
    AbscissaResult out;
    if (x_lo <= x_hi)
        out.x = brent_root(f, x_lo, x_hi, f_lo, f_hi, opt);
    else
        out.x = brent_root(f, x_hi, x_lo, f_hi, f_lo, opt);
    out.dF = eval_f(pb, hump, out.x);
    // Near a tangency the two terms of F' cancel; their magnitude sum is the
    // natural scale for "effectively zero slope".
    const double scale =
        std::fabs(pb.lambda * out.x) +
        pb.weight.mu(hump) * std::fabs(eval_g(pb.g, out.x));
    if (std::fabs(out.dF) <= 1e-6 * std::max(1e-300, scale))
        throw DegenerateLevelError(
            "solve_level_abscissa: tangential crossing, orbit not regular");
    return out;
}

AbscissaResult find_abscissa(const ProblemSpec& pb, int hump, double c, Side side) {
    const double dir = (side == Side::plus) ? 1.0 : -1.0;
    auto f = [&](double x) { return eval_F(pb, hump, x) - c; };

    std::vector<double> xs, fv;
    xs.reserve(64);
    fv.reserve(64);
    double x_prev = 0.0;
    double f_prev = -c;  // F(0) = 0
    double step = 1e-8;
    double best_af = std::fabs(c);
    for (int k = 0; k <= 60; ++k, step *= 2.0) {
        const double x_cur = dir * step;
        const double f_cur = f(x_cur);
        if (!std::isfinite(f_cur))
            throw NumericalFailure("solve_level_abscissa: non-finite potential");
        best_af = std::min(best_af, std::fabs(f_cur));
        if ((f_prev < 0.0 && f_cur >= 0.0) || (f_prev > 0.0 && f_cur <= 0.0))
            return finish_abscissa(pb, hump, c, x_prev, x_cur, f_prev, f_cur);
        xs.push_back(x_cur);
        fv.push_back(f_cur);
        x_prev = x_cur;
        f_prev = f_cur;
    }

    // No sign change among the probes.  A level just below a local maximum
    // of F meets it in a window narrower than the geometric probe spacing,
    // so refine the largest probed value before giving up: F has at most one
    // interior critical point per side for the supported nonlinearities.
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (fv[i] > fv[best]) best = i;
    if (!xs.empty() && fv[best] > -std::fabs(c) && best + 1 < xs.size()) {
        const double nb_lo = best == 0 ? 0.0 : xs[best - 1];
        const double nb_hi = xs[best + 1];
        auto neg_F = [&](double x) { return -eval_F(pb, hump, x); };
        const auto top = boost::math::tools::brent_find_minima(
            neg_F, std::min(nb_lo, nb_hi), std::max(nb_lo, nb_hi), 30);
        const double x_c = top.first;
        const double f_c = -top.second - c;
        if (std::fabs(f_c) <= 1e-9 * std::max(1.0, std::fabs(c)))
            throw DegenerateLevelError(
                "solve_level_abscissa: level grazes the potential without a "
                "transversal crossing");
        if (f_c > 0.0) {
            // Transversal crossing between the inner neighbour probe and the
            // refined hump top; F is monotone there, and this is the root
            // nearest the origin on this side.
            const double x_in = best == 0 ? 0.0 : xs[best - 1];
            const double f_in = best == 0 ? -c : fv[best - 1];
            return finish_abscissa(pb, hump, c, x_in, x_c, f_in, f_c);
        }
    }
    if (best_af <= 1e-9 * std::max(1.0, std::fabs(c)))
        throw DegenerateLevelError(
            "solve_level_abscissa: level grazes the potential without a "
            "transversal crossing");
    throw NoBracketError(
        "solve_level_abscissa: potential never meets the level on this side");
}

void check_hump_index(const ProblemSpec& pb, int hump, const char* who) {
    if (hump < 0 || hump > pb.weight.m())
        throw ConfigError(std::string(who) + ": hump index out of range");
}

void check_gap_index(const ProblemSpec& pb, int gap, const char* who) {
    if (gap < 0 || gap >= pb.weight.m())
        throw ConfigError(std::string(who) + ": gap index out of range");
}

}  // namespace

// ---------------------------------------------------------------------------
// Level crossings.

double solve_level_abscissa(const ProblemSpec& pb, int hump, double c, Side side) {
    check_hump_index(pb, hump, "solve_level_abscissa");
    return find_abscissa(pb, hump, c, side).x;
}

LevelCrossing level_crossing(const ProblemSpec& pb, int hump, double c) {
    check_hump_index(pb, hump, "level_crossing");
    if (!(c > 0.0))
        throw DomainViolation("level_crossing: level must be positive");
    if (c >= h_star(pb.h))
        throw DomainViolation("level_crossing: level at or above H*");

    LevelCrossing lc;
    lc.c = c;
    const AbscissaResult ap = find_abscissa(pb, hump, c, Side::plus);
    const AbscissaResult am = find_abscissa(pb, hump, c, Side::minus);
    lc.x_plus = ap.x;
    lc.dF_plus = ap.dF;
    lc.x_minus = am.x;
    lc.dF_minus = am.dF;
    lc.y_plus = eval_H_inv_pos(pb.h, c);
    lc.y_minus = eval_H_inv_neg(pb.h, c);
    return lc;
}

// ---------------------------------------------------------------------------
// Quarter-lap times.

QuarterTimes quarter_times(const ProblemSpec& pb, int hump, double c, double tol) {
    const LevelCrossing lc = level_crossing(pb, hump, c);
    const double alpha = sing_alpha(pb.h);

    // Within ~1e-8 of the crossing abscissa the difference c - F(x) has lost
    // half its digits to cancellation (and all of them within ~1e-13), which
    // the steeper substitutions for alpha > 1/2 integrate over a visible
    // parameter range.  The crossing is transversal, so the tangent-line
    // value through the exact offset delta = x_end - x is accurate there.
    auto u_toward = [&](double x_end, double dF_end) {
        const double close = 1e-8 * std::max(1.0, std::fabs(x_end));
        return [&pb, hump, c, x_end, dF_end, close](double delta) {
            if (std::fabs(delta) <= close) return std::max(0.0, dF_end * delta);
            return c - eval_F(pb, hump, x_end - delta);
        };
    };
    const auto u_plus = u_toward(lc.x_plus, lc.dF_plus);
    const auto u_minus = u_toward(lc.x_minus, lc.dF_minus);
    auto up_p = [&](double d) { return inv_speed_up(pb.h, u_plus(d)); };
    auto up_m = [&](double d) { return inv_speed_up(pb.h, u_minus(d)); };
    auto dn_p = [&](double d) { return inv_speed_down(pb.h, u_plus(d)); };
    auto dn_m = [&](double d) { return inv_speed_down(pb.h, u_minus(d)); };

    const QuadResult rI = gk_singular_offset(up_p, 0.0, lc.x_plus, alpha, tol, tol);
    const QuadResult rII = gk_singular_offset(up_m, 0.0, lc.x_minus, alpha, tol, tol);
    const QuadResult rIII = gk_singular_offset(dn_m, 0.0, lc.x_minus, alpha, tol, tol);
    const QuadResult rIV = gk_singular_offset(dn_p, 0.0, lc.x_plus, alpha, tol, tol);

    QuarterTimes qt;
    qt.t_I = rI.value;
    qt.t_II = rII.value;
    qt.t_III = rIII.value;
    qt.t_IV = rIV.value;
    qt.error_est = rI.error + rII.error + rIII.error + rIV.error;
    if (!(rI.converged && rII.converged && rIII.converged && rIV.converged))
        NODAL_LOG_WARN("quarter_times: error estimate %.3e above target %.3e at c=%.9g",
                       qt.error_est, tol, c);
    return qt;
}

double period(const ProblemSpec& pb, int hump, double c, double tol) {
    return quarter_times(pb, hump, c, tol).period();
}

// ---------------------------------------------------------------------------
// Semilinear closed forms.

namespace {

// 1 - s^e written through delta = 1 - s in [0, 1]; exact into s -> 1 where
// the direct form loses every digit.
double one_minus_pow(double delta, double e) {
    if (delta >= 1.0) return 1.0;
    if (delta > 0.5) return 1.0 - std::pow(1.0 - delta, e);
    return -std::expm1(e * std::log1p(-delta));
}

}  // namespace

double period_semilinear_amp(double lambda, double mu, double p, double x_plus,
                             double tol) {
    if (!(mu > 0.0) || !(p > 0.0) || !(x_plus > 0.0))
        throw ConfigError("period_semilinear_amp: need mu, p, x_plus > 0");
    const double k = (2.0 * mu / (p + 1.0)) * std::pow(x_plus, p - 1.0);
    if (!(lambda + k > 0.0))
        throw DomainViolation(
            "period_semilinear_amp: amplitude inside the homoclinic loop, "
            "orbit not closed");
    if (!(2.0 * lambda + k * (p + 1.0) > 0.0))
        throw DomainViolation(
            "period_semilinear_amp: level tangential at the amplitude");
    auto f = [&](double delta) {
        const double den = lambda * delta * (2.0 - delta) +
                           k * one_minus_pow(delta, p + 1.0);
        return den > 0.0 ? 1.0 / std::sqrt(den) : 0.0;
    };
    const QuadResult r = gk_singular_offset(f, 0.0, 1.0, 0.5, tol, tol);
    return 4.0 * r.value;
}

double period_constant_C(double p) {
    if (!(p > 0.0)) throw ConfigError("period_constant_C: need p > 0");
    return std::beta(1.0 / (p + 1.0), 0.5) /
           (std::sqrt(2.0) * std::pow(p + 1.0, p / (p + 1.0)));
}

double period_scaling_lambda0(double p, double mu, double c) {
    if (!(p > 0.0) || !(mu > 0.0) || !(c > 0.0))
        throw ConfigError("period_scaling_lambda0: need p, mu, c > 0");
    return std::pow(mu, -1.0 / (p + 1.0)) *
           std::pow(c, (1.0 - p) / (2.0 * (p + 1.0))) * period_constant_C(p);
}

double script_T1(double theta, double p, double tol) {
    if (!(p > 0.0) || p == 1.0)
        throw ConfigError("script_T1: need p > 0, p != 1");
    if (p > 1.0) {
        if (!(theta > 1.0))
            throw DomainViolation("script_T1: need theta > 1 for p > 1");
    } else {
        const double theta_star = std::pow((p + 1.0) / 2.0, 1.0 / (1.0 - p));
        if (!(theta > 0.0 && theta < theta_star))
            throw DomainViolation(
                "script_T1: need 0 < theta < ((p+1)/2)^{1/(1-p)} for p < 1");
    }
    const double tp = std::pow(theta, p - 1.0);
    auto f = [&](double delta) {
        const double psi =
            -delta * (2.0 - delta) + tp * one_minus_pow(delta, p + 1.0);
        return psi > 0.0 ? 1.0 / std::sqrt(psi) : 0.0;
    };
    return gk_singular_offset(f, 0.0, 1.0, 0.5, tol, tol).value;
}

LambdaBounds lambda_bounds(double theta1, double theta2, double p, double lambda) {
    if (!(lambda < 0.0))
        throw DomainViolation("lambda_bounds: defined for lambda < 0");
    if (!(theta1 > 0.0) || !(theta2 >= theta1))
        throw ConfigError("lambda_bounds: need 0 < theta1 <= theta2");
    const double tp = std::pow(theta1, p - 1.0);
    if (!(tp > 1.0))
        throw DomainViolation(
            "lambda_bounds: theta1 does not clear the turning ratio");
    LambdaBounds b;
    b.Lambda1 = std::asinh(theta2 / (theta1 * std::sqrt(tp - 1.0)));
    b.Lambda2 = std::acosh(theta2 / theta1);
    b.Lambda_star =
        (2.0 / std::sqrt(-lambda)) * std::max(b.Lambda1, b.Lambda2);
    return b;
}

// ---------------------------------------------------------------------------
// Linear (gap) transit primitives, lambda <= 0.

double linear_time_upper(const ProblemSpec& pb, double ell, double r, double E) {
    if (ell == r) return 0.0;
    if (ell > r) return -linear_time_upper(pb, r, ell, E);
    if (!(E > 0.0))
        throw DomainViolation("linear_time_upper: need energy E > 0");
    const double lam = pb.lambda;
    auto u_of = [&](double x) { return E - 0.5 * lam * x * x; };
    double umin = std::min(u_of(ell), u_of(r));
    double umax = std::max(u_of(ell), u_of(r));
    if (ell < 0.0 && r > 0.0) {
        umin = std::min(umin, E);
        umax = std::max(umax, E);
    }
    if (!(umin > 0.0))
        throw DomainViolation(
            "linear_time_upper: turning point inside the sweep, use a loop or "
            "apex transit");
    check_branch_levels(pb.h, umax, true, "linear_time_upper");
    auto f = [&](double x) { return inv_speed_up(pb.h, u_of(x)); };
    return gk_adaptive(f, ell, r).value;
}

double linear_time_lower(const ProblemSpec& pb, double ell, double r, double E) {
    if (ell == r) return 0.0;
    if (ell > r) return -linear_time_lower(pb, r, ell, E);
    if (!(E > 0.0))
        throw DomainViolation("linear_time_lower: need energy E > 0");
    const double lam = pb.lambda;
    auto u_of = [&](double x) { return E - 0.5 * lam * x * x; };
    double umin = std::min(u_of(ell), u_of(r));
    double umax = std::max(u_of(ell), u_of(r));
    if (ell < 0.0 && r > 0.0) {
        umin = std::min(umin, E);
        umax = std::max(umax, E);
    }
    if (!(umin > 0.0))
        throw DomainViolation(
            "linear_time_lower: turning point inside the sweep, use a loop or "
            "apex transit");
    check_branch_levels(pb.h, umax, false, "linear_time_lower");
    auto f = [&](double x) { return inv_speed_down(pb.h, u_of(x)); };
    return gk_adaptive(f, ell, r).value;
}

double linear_time_right_loop(const ProblemSpec& pb, double r1, double r2,
                              double x_turn) {
    if (!(pb.lambda < 0.0))
        throw DomainViolation("linear_time_right_loop: defined for lambda < 0");
    if (!(x_turn > 0.0))
        throw DomainViolation(
            "linear_time_right_loop: turning abscissa must be positive "
            "(x_turn = 0 is the saddle separatrix)");
    if (!(r1 > x_turn) || !(r2 > x_turn))
        throw IncompatibleGeometryError(
            "linear_time_right_loop: entry or exit line inside the turning "
            "circle");
    const double lam = pb.lambda;
    // Factored form stays fully accurate next to the turning point.
    auto u_of = [&](double x) {
        return 0.5 * (-lam) * (x - x_turn) * (x + x_turn);
    };
    check_branch_levels(pb.h, u_of(r1), false, "linear_time_right_loop");
    check_branch_levels(pb.h, u_of(r2), true, "linear_time_right_loop");
    const double alpha = sing_alpha(pb.h);
    // x = x_turn - delta, so (x - x_turn)(x + x_turn) = -delta (2 x_turn - delta).
    auto u_d = [&](double delta) {
        return 0.5 * lam * delta * (2.0 * x_turn - delta);
    };
    auto f_dn = [&](double d) { return inv_speed_down(pb.h, u_d(d)); };
    auto f_up = [&](double d) { return inv_speed_up(pb.h, u_d(d)); };
    return gk_singular_offset(f_dn, r1, x_turn, alpha).value +
           gk_singular_offset(f_up, r2, x_turn, alpha).value;
}

double linear_time_left_loop(const ProblemSpec& pb, double l1, double l2,
                             double x_turn) {
    if (!(pb.lambda < 0.0))
        throw DomainViolation("linear_time_left_loop: defined for lambda < 0");
    if (!(x_turn < 0.0))
        throw DomainViolation(
            "linear_time_left_loop: turning abscissa must be negative "
            "(x_turn = 0 is the saddle separatrix)");
    if (!(l1 < x_turn) || !(l2 < x_turn))
        throw IncompatibleGeometryError(
            "linear_time_left_loop: entry or exit line inside the turning "
            "circle");
    const double lam = pb.lambda;
    // Factored form stays fully accurate next to the turning point.
    auto u_of = [&](double x) {
        return 0.5 * (-lam) * (x - x_turn) * (x + x_turn);
    };
    check_branch_levels(pb.h, u_of(l1), true, "linear_time_left_loop");
    check_branch_levels(pb.h, u_of(l2), false, "linear_time_left_loop");
    const double alpha = sing_alpha(pb.h);
    // x = x_turn - delta, so (x - x_turn)(x + x_turn) = -delta (2 x_turn - delta).
    auto u_d = [&](double delta) {
        return 0.5 * lam * delta * (2.0 * x_turn - delta);
    };
    auto f_up = [&](double d) { return inv_speed_up(pb.h, u_d(d)); };
    auto f_dn = [&](double d) { return inv_speed_down(pb.h, u_d(d)); };
    return gk_singular_offset(f_up, l1, x_turn, alpha).value +
           gk_singular_offset(f_dn, l2, x_turn, alpha).value;
}

// ---------------------------------------------------------------------------
// lambda > 0 center crossings.

namespace {

double pos_apex_abscissa(const ProblemSpec& pb, double c, const char* who) {
    if (!(pb.lambda > 0.0))
        throw DomainViolation(std::string(who) + ": defined for lambda > 0");
    if (!(c > 0.0))
        throw DomainViolation(std::string(who) + ": need gap energy c > 0");
    return std::sqrt(2.0 * c / pb.lambda);
}

// Time along one branch of the lambda > 0 center orbit at energy c between
// abscissas ell <= r.  Endpoints within 1e-9 of +-X snap onto the apex and go
// through the singular-endpoint substitution; interior endpoints use the
// plain adaptive rule.
double pos_branch_time(const ProblemSpec& pb, double ell, double r, double c,
                       bool lower, const char* who) {
    if (ell == r) return 0.0;
    if (ell > r) return -pos_branch_time(pb, r, ell, c, lower, who);
    const double X = pos_apex_abscissa(pb, c, who);
    const double snap = 1e-9 * std::max(1.0, X);
    if (ell < -X - snap || r > X + snap)
        throw IncompatibleGeometryError(
            std::string(who) + ": line beyond the apex of the center orbit");
    const bool sing_left = ell < -X + snap;
    const bool sing_right = r > X - snap;
    const double a = sing_left ? -X : ell;
    const double b = sing_right ? X : r;

    const double lam = pb.lambda;
    // X*X reproduces 2c/lambda to one ulp, and the factored form is
    // cancellation-free at the apexes where the integrand is singular.
    auto u_of = [&](double x) { return 0.5 * lam * (X - x) * (X + x); };
    // Peak energy over the sweep sits at the abscissa closest to 0.
    const double xin = (a <= 0.0 && b >= 0.0) ? 0.0
                       : (std::fabs(a) < std::fabs(b) ? a : b);
    check_branch_levels(pb.h, u_of(xin), !lower, who);

    auto f = [&](double x) {
        return lower ? inv_speed_down(pb.h, u_of(x)) : inv_speed_up(pb.h, u_of(x));
    };
    // Offset forms at the apexes: x = X - d gives (X - x)(X + x) = d (2X - d),
    // and x = -X - d gives -d (2X + d), both exact arbitrarily close in.
    auto speed = [&](double u) {
        return lower ? inv_speed_down(pb.h, u) : inv_speed_up(pb.h, u);
    };
    auto f_right = [&](double d) { return speed(0.5 * lam * d * (2.0 * X - d)); };
    auto f_left = [&](double d) { return speed(-0.5 * lam * d * (2.0 * X + d)); };
    const double alpha = sing_alpha(pb.h);
    if (sing_left && sing_right) {
        return gk_singular_offset(f_left, 0.0, -X, alpha).value +
               gk_singular_offset(f_right, 0.0, X, alpha).value;
    }
    if (sing_right) return gk_singular_offset(f_right, a, X, alpha).value;
    if (sing_left) return gk_singular_offset(f_left, b, -X, alpha).value;
    return gk_adaptive(f, a, b, 1e-10, 1e-10, 16384).value;
}

}  // namespace

double linear_time_pos_upper(const ProblemSpec& pb, double ell, double r, double c) {
    return pos_branch_time(pb, ell, r, c, false, "linear_time_pos_upper");
}

double linear_time_pos_lower(const ProblemSpec& pb, double ell, double r, double c) {
    return pos_branch_time(pb, ell, r, c, true, "linear_time_pos_lower");
}

PosQuadrantTimes pos_quadrant_times(const ProblemSpec& pb, double c) {
    const double X = pos_apex_abscissa(pb, c, "pos_quadrant_times");
    PosQuadrantTimes t;
    t.S_I = pos_branch_time(pb, 0.0, X, c, false, "pos_quadrant_times");
    t.S_II = pos_branch_time(pb, -X, 0.0, c, false, "pos_quadrant_times");
    t.S_III = pos_branch_time(pb, -X, 0.0, c, true, "pos_quadrant_times");
    t.S_IV = pos_branch_time(pb, 0.0, X, c, true, "pos_quadrant_times");
    return t;
}

double pos_apex_passage_left(const ProblemSpec& pb, double c, double x_from,
                             double x_to) {
    const double X = pos_apex_abscissa(pb, c, "pos_apex_passage_left");
    return pos_branch_time(pb, -X, x_from, c, true, "pos_apex_passage_left") +
           pos_branch_time(pb, -X, x_to, c, false, "pos_apex_passage_left");
}

double pos_apex_passage_right(const ProblemSpec& pb, double c, double x_from,
                              double x_to) {
    const double X = pos_apex_abscissa(pb, c, "pos_apex_passage_right");
    return pos_branch_time(pb, x_from, X, c, false, "pos_apex_passage_right") +
           pos_branch_time(pb, x_to, X, c, true, "pos_apex_passage_right");
}

// ---------------------------------------------------------------------------
// Composite annulus-to-annulus gap times, lambda <= 0.

GapChannelTimes gap_channel_times(const ProblemSpec& pb, int gap,
                                  double c1_i, double c2_i,
                                  double c1_n, double c2_n) {
    check_gap_index(pb, gap, "gap_channel_times");
    if (!(pb.lambda <= 0.0))
        throw DomainViolation("gap_channel_times: defined for lambda <= 0");
    if (!(0.0 < c1_i && c1_i < c2_i) || !(0.0 < c1_n && c1_n < c2_n))
        throw ConfigError("gap_channel_times: need 0 < c1 < c2 on both humps");

    const double E = std::min(c1_i, c1_n);
    if (E >= h_star(pb.h))
        throw DomainViolation("gap_channel_times: level at or above H*");
    const double mu_i = pb.weight.mu(gap);
    const double mu_n = pb.weight.mu(gap + 1);

    GapChannelTimes out;
    out.y_plus_level = eval_H_inv_pos(pb.h, E);
    out.y_minus_level = eval_H_inv_neg(pb.h, E);

    // Horizontal sweeps between the outer-boundary lines: the slowest gap
    // orbit has the smallest energy E = min(c1); its crossing of the hump
    // outer boundary Ham_i = c2 satisfies mu_i G(x) = c2 - E (the quadratic
    // part cancels in the difference of the two conserved quantities).
    out.x_ell = eval_G_inv_neg(pb.g, (c2_i - E) / mu_i);
    out.x_r = eval_G_inv_pos(pb.g, (c2_n - E) / mu_n);
    out.S_II_I = linear_time_upper(pb, out.x_ell, out.x_r, E);

    const double x_r_entry = eval_G_inv_pos(pb.g, (c2_i - E) / mu_i);
    const double x_ell_exit = eval_G_inv_neg(pb.g, (c2_n - E) / mu_n);
    out.S_IV_III = linear_time_lower(pb, x_ell_exit, x_r_entry, E);

    if (pb.lambda < 0.0) {
        // Diagonal loop channels around the gap turning points: the slowest
        // loop turns at the innermost inner-boundary intercept.
        const double xp_i = solve_level_abscissa(pb, gap, c1_i, Side::plus);
        const double xp_n = solve_level_abscissa(pb, gap + 1, c1_n, Side::plus);
        out.x_plus_turn = std::min(xp_i, xp_n);
        const double lam = pb.lambda;
        const double Ur = -0.5 * lam * out.x_plus_turn * out.x_plus_turn;
        const double r1 = eval_G_inv_pos(pb.g, (c2_i + Ur) / mu_i);
        const double r2 = eval_G_inv_pos(pb.g, (c2_n + Ur) / mu_n);
        out.S_IV_I = linear_time_right_loop(pb, r1, r2, out.x_plus_turn);

        const double xm_i = solve_level_abscissa(pb, gap, c1_i, Side::minus);
        const double xm_n = solve_level_abscissa(pb, gap + 1, c1_n, Side::minus);
        out.x_minus_turn = std::max(xm_i, xm_n);
        const double Ul = -0.5 * lam * out.x_minus_turn * out.x_minus_turn;
        const double l1 = eval_G_inv_neg(pb.g, (c2_i + Ul) / mu_i);
        const double l2 = eval_G_inv_neg(pb.g, (c2_n + Ul) / mu_n);
        out.S_II_III = linear_time_left_loop(pb, l1, l2, out.x_minus_turn);
    } else {
        out.x_plus_turn = std::numeric_limits<double>::quiet_NaN();
        out.x_minus_turn = out.x_plus_turn;
        out.S_IV_I = out.x_plus_turn;
        out.S_II_III = out.x_plus_turn;
    }
    return out;
}

// ---------------------------------------------------------------------------
// lambda > 0 gap crossings between hump level lines.

namespace {

double pos_line_neg(const ProblemSpec& pb, int hump, double lev, double c,
                    const char* who) {
    if (lev < c)
        throw IncompatibleGeometryError(
            std::string(who) + ": hump level below the gap energy");
    return eval_G_inv_neg(pb.g, (lev - c) / pb.weight.mu(hump));
}

double pos_line_pos(const ProblemSpec& pb, int hump, double lev, double c,
                    const char* who) {
    if (lev < c)
        throw IncompatibleGeometryError(
            std::string(who) + ": hump level below the gap energy");
    return eval_G_inv_pos(pb.g, (lev - c) / pb.weight.mu(hump));
}

}  // namespace

double pos_gap_S_II_I(const ProblemSpec& pb, int gap, double lev_i,
                      double lev_n, double c) {
    check_gap_index(pb, gap, "pos_gap_S_II_I");
    const double x_ell = pos_line_neg(pb, gap, lev_i, c, "pos_gap_S_II_I");
    const double x_r = pos_line_pos(pb, gap + 1, lev_n, c, "pos_gap_S_II_I");
    return linear_time_pos_upper(pb, x_ell, x_r, c);
}

double pos_gap_S_IV_III(const ProblemSpec& pb, int gap, double lev_i,
                        double lev_n, double c) {
    check_gap_index(pb, gap, "pos_gap_S_IV_III");
    const double x_r = pos_line_pos(pb, gap, lev_i, c, "pos_gap_S_IV_III");
    const double x_ell = pos_line_neg(pb, gap + 1, lev_n, c, "pos_gap_S_IV_III");
    return linear_time_pos_lower(pb, x_ell, x_r, c);
}

double pos_gap_S_II_I_to_apex(const ProblemSpec& pb, int gap, double lev_i,
                              double c) {
    check_gap_index(pb, gap, "pos_gap_S_II_I_to_apex");
    const double X = pos_apex_abscissa(pb, c, "pos_gap_S_II_I_to_apex");
    const double x_ell = pos_line_neg(pb, gap, lev_i, c, "pos_gap_S_II_I_to_apex");
    return linear_time_pos_upper(pb, x_ell, X, c);
}

double pos_gap_S_IV_III_to_apex(const ProblemSpec& pb, int gap, double lev_i,
                                double c) {
    check_gap_index(pb, gap, "pos_gap_S_IV_III_to_apex");
    const double X = pos_apex_abscissa(pb, c, "pos_gap_S_IV_III_to_apex");
    const double x_r = pos_line_pos(pb, gap, lev_i, c, "pos_gap_S_IV_III_to_apex");
    return linear_time_pos_lower(pb, -X, x_r, c);
}

double pos_S_III_I(const ProblemSpec& pb, int gap, double lev_i, double lev_n,
                   double c) {
    check_gap_index(pb, gap, "pos_S_III_I");
    const double x_from = pos_line_neg(pb, gap, lev_i, c, "pos_S_III_I");
    const double x_to = pos_line_pos(pb, gap + 1, lev_n, c, "pos_S_III_I");
    return pos_apex_passage_left(pb, c, x_from, x_to);
}

double pos_S_I_III(const ProblemSpec& pb, int gap, double lev_i, double lev_n,
                   double c) {
    check_gap_index(pb, gap, "pos_S_I_III");
    const double x_from = pos_line_pos(pb, gap, lev_i, c, "pos_S_I_III");
    const double x_to = pos_line_neg(pb, gap + 1, lev_n, c, "pos_S_I_III");
    return pos_apex_passage_right(pb, c, x_from, x_to);
}

// ---------------------------------------------------------------------------
// Dispatcher.

double transit_linear(const ProblemSpec& pb, const TransitRequest& req) {
    const double lam = pb.lambda;
    switch (req.kind) {
        case TransitKind::neg_upper:
            if (lam > 0.0)
                throw DomainViolation("transit_linear: neg_upper needs lambda <= 0");
            return linear_time_upper(pb, req.a, req.b, req.level);
        case TransitKind::neg_lower:
            if (lam > 0.0)
                throw DomainViolation("transit_linear: neg_lower needs lambda <= 0");
            return linear_time_lower(pb, req.a, req.b, req.level);
        case TransitKind::neg_right_loop:
            return linear_time_right_loop(pb, req.a, req.b, req.level);
        case TransitKind::neg_left_loop:
            return linear_time_left_loop(pb, req.a, req.b, req.level);
        case TransitKind::zero_upper: {
            if (lam != 0.0)
                throw DomainViolation("transit_linear: zero_upper needs lambda = 0");
            if (!(req.level > 0.0))
                throw DomainViolation("transit_linear: need energy E > 0");
            check_branch_levels(pb.h, req.level, true, "transit_linear");
            const double s = eval_h_core(pb.h, eval_H_inv_pos(pb.h, req.level));
            return (req.b - req.a) / s;
        }
        case TransitKind::zero_lower: {
            if (lam != 0.0)
                throw DomainViolation("transit_linear: zero_lower needs lambda = 0");
            if (!(req.level > 0.0))
                throw DomainViolation("transit_linear: need energy E > 0");
            check_branch_levels(pb.h, req.level, false, "transit_linear");
            const double s = -eval_h_core(pb.h, eval_H_inv_neg(pb.h, req.level));
            return (req.b - req.a) / s;
        }
        case TransitKind::pos_upper:
            return linear_time_pos_upper(pb, req.a, req.b, req.level);
        case TransitKind::pos_lower:
            return linear_time_pos_lower(pb, req.a, req.b, req.level);
        case TransitKind::pos_apex_left:
            return pos_apex_passage_left(pb, req.level, req.a, req.b);
        case TransitKind::pos_apex_right:
            return pos_apex_passage_right(pb, req.level, req.a, req.b);
    }
    throw NumericalFailure("transit_linear: unknown kind");
}

}  // namespace nodal
