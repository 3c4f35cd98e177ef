// roots.hpp — bracketed scalar root finding.
//
// Strategy used throughout the library: locate a sign change by geometric
// bracket expansion, then refine with a Brent-style hybrid (bisection +
// inverse quadratic interpolation) to a relative tolerance.  Pure bisection
// is the fallback inside Brent, so a valid bracket always converges.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "nodal/errors.hpp"

namespace nodal {

struct RootOptions {
    double rel_tol = 1e-12;  // relative x tolerance of the refined root
    double abs_tol = 0.0;    // additive absolute x tolerance
    int max_iter = 200;
};

// Brent's method on [a, b] with f(a), f(b) of opposite sign (either may be 0).
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  const RootOptions& opt = RootOptions{}) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoBracketError("brent_root: endpoints do not bracket a sign change");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * (opt.rel_tol * std::fabs(b) + opt.abs_tol);
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // Inverse quadratic interpolation (secant when a == c).
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            const double min2 = std::fabs(e * q);
            if (2.0 * p < (min1 < min2 ? min1 : min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::fabs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? std::fabs(tol1) : -std::fabs(tol1));
        fb = f(b);
    }
    throw NumericalFailure("brent_root: iteration limit reached");
}

template <typename F>
double brent_root(F&& f, double a, double b, const RootOptions& opt = RootOptions{}) {
    const double fa = f(a);
    const double fb = f(b);
    return brent_root(std::forward<F>(f), a, b, fa, fb, opt);
}

struct Bracket {
    double lo = 0.0, hi = 0.0;
    double f_lo = 0.0, f_hi = 0.0;
};

// Expand geometrically from x0 in direction dir (+1 or -1): probes
// x0 + dir*step with step starting at first_step and multiplying by growth,
// until f changes sign against f(x0) or |step| exceeds max_step.
template <typename F>
std::optional<Bracket> expand_bracket(F&& f, double x0, double f0, int dir,
                                      double first_step, double growth,
                                      double max_step) {
    double step = first_step;
    double prev_x = x0, prev_f = f0;
    while (step <= max_step) {
        const double x = x0 + dir * step;
        const double fx = f(x);
        if (fx == 0.0 || (fx > 0.0) != (prev_f > 0.0)) {
            Bracket b;
            if (dir > 0) {
                b.lo = prev_x; b.hi = x; b.f_lo = prev_f; b.f_hi = fx;
            } else {
                b.lo = x; b.hi = prev_x; b.f_lo = fx; b.f_hi = prev_f;
            }
            return b;
        }
        prev_x = x;
        prev_f = fx;
        step *= growth;
    }
    return std::nullopt;
}

}  // namespace nodal
