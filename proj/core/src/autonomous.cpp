// autonomous.cpp — constant-weight branch construction by monotone period
// bisection, with continuation-seeded sweeps over a lambda grid.

#include "nodal/autonomous.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/quadrature.hpp"
#include "nodal/roots.hpp"

namespace nodal {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAmpFloor = 1e-12;
constexpr double kAmpCap = 1e12;

void validate_power(double mu, double p, const char* who) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ConfigError(std::string(who) + ": mu must be positive");
    if (!(p > 0.0) || p == 1.0 || !std::isfinite(p))
        throw ConfigError(std::string(who) + ": need p > 0, p != 1");
}

// Admissible amplitude range per the phase portrait: orbits meeting the
// y-axis are x_plus > x_star for lambda < 0, p > 1 (outside the double
// homoclinic loop) and x_plus < omega_plus for lambda < 0, p < 1 (inside
// the heteroclinic box); any positive amplitude otherwise.
struct AmpRange {
    double lo = kAmpFloor;
    double hi = kAmpCap;
};

AmpRange amp_range(double lambda, double mu, double p) {
    AmpRange r;
    if (lambda < 0.0) {
        const CriticalPoints cp = critical_points(lambda, mu, p);
        if (p > 1.0)
            r.lo = std::max(kAmpFloor, cp.x_star * (1.0 + 1e-9));
        else
            r.hi = std::min(kAmpCap, cp.omega_plus * (1.0 - 1e-9));
    }
    return r;
}

std::optional<BranchPoint> locate(int n, double lambda, double mu, double p,
                                  double L, double tol, double seed) {
    if (n < 1) throw ConfigError("branch_point: n must be >= 1");
    if (!(L > 0.0) || !std::isfinite(L))
        throw ConfigError("branch_point: L must be positive");
    validate_power(mu, p, "branch_point");
    if (lambda >= sigma_n(n, L)) return std::nullopt;

    const double target = 2.0 * L / n;
    const AmpRange range = amp_range(lambda, mu, p);
    auto f = [&](double x) {
        return period_semilinear_amp(lambda, mu, p, x, tol) - target;
    };

    // The period is strictly monotone in the amplitude (decreasing for
    // p > 1, increasing for p < 1), so march geometrically from the seed
    // toward the root and bisect.
    const bool decreasing = p > 1.0;
    double a = std::clamp(seed, range.lo, range.hi);
    double fa = f(a);

    BranchPoint bp;
    bp.lambda = lambda;
    bp.n = n;
    if (fa == 0.0) {
        bp.x_plus = bp.M_plus = a;
        return bp;
    }

    const bool go_up = (fa > 0.0) == decreasing;
    double b = a, fb = fa;
    bool bracketed = false;
    for (int k = 0; !bracketed && k < 200; ++k) {
        a = b;
        fa = fb;
        b = go_up ? std::min(2.0 * b, range.hi) : std::max(0.5 * b, range.lo);
        if (b == a) {
            // Pinned against the resolvable range: report the edge.
            bp.saturated = true;
            bp.x_plus = bp.M_plus = b;
            bp.period_residual = std::fabs(fb);
            return bp;
        }
        fb = f(b);
        bracketed = fb == 0.0 || (fa > 0.0) != (fb > 0.0);
    }
    if (!bracketed)
        throw NumericalFailure("branch_point: period bracket did not close");

    RootOptions opt;
    opt.rel_tol = 1e-14;
    const double x = brent_root(f, std::min(a, b), std::max(a, b),
                                go_up ? fa : fb, go_up ? fb : fa, opt);
    bp.x_plus = bp.M_plus = x;
    bp.period_residual = std::fabs(f(x));
    return bp;
}

}  // namespace

double sigma_n(int n, double L) {
    if (n < 1) throw ConfigError("sigma_n: n must be >= 1");
    if (!(L > 0.0) || !std::isfinite(L))
        throw ConfigError("sigma_n: L must be positive");
    const double w = n * kPi / L;
    return w * w;
}

CriticalPoints critical_points(double lambda, double mu, double p) {
    validate_power(mu, p, "critical_points");
    if (!(lambda < 0.0))
        throw ConfigError("critical_points: requires lambda < 0");
    CriticalPoints cp;
    cp.omega_plus = std::pow(-lambda / mu, 1.0 / (p - 1.0));
    cp.x_star = std::pow(-lambda * (p + 1.0) / (2.0 * mu), 1.0 / (p - 1.0));
    // F(omega_plus) with mu omega^{p-1} = -lambda collapses to
    // lambda omega^2 (p-1) / (2(p+1)).
    cp.c_star = lambda * cp.omega_plus * cp.omega_plus * (p - 1.0) /
                (2.0 * (p + 1.0));
    return cp;
}

std::optional<BranchPoint> branch_point(int n, double lambda, double mu,
                                        double p, double L, double tol) {
    return locate(n, lambda, mu, p, L, tol, 1.0);
}

BranchSweep branch_sweep(int n, const std::vector<double>& lambda_grid,
                         double mu, double p, double L, double tol) {
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] > lambda_grid[i - 1]))
            throw ConfigError("branch_sweep: grid must be strictly ascending");

    BranchSweep sweep;
    sweep.expect_decreasing = p > 1.0;
    double seed = 1.0;
    for (double lambda : lambda_grid) {
        auto bp = locate(n, lambda, mu, p, L, tol, seed);
        if (!bp) continue;
        if (!bp->saturated) seed = bp->x_plus;
        sweep.points.push_back(*bp);
    }

    sweep.monotone = true;
    const BranchPoint* prev = nullptr;
    for (const BranchPoint& bp : sweep.points) {
        if (bp.saturated) continue;
        if (prev) {
            const bool ok = sweep.expect_decreasing ? bp.M_plus < prev->M_plus
                                                    : bp.M_plus > prev->M_plus;
            if (!ok) sweep.monotone = false;
        }
        prev = &bp;
    }
    return sweep;
}

double apriori_curve(double lambda, double a_sup_norm, double p) {
    if (!(lambda < 0.0))
        throw ConfigError("apriori_curve: requires lambda < 0");
    if (!(a_sup_norm > 0.0))
        throw ConfigError("apriori_curve: requires a positive sup-norm");
    if (!(p > 0.0) || p == 1.0)
        throw ConfigError("apriori_curve: need p > 0, p != 1");
    return std::pow(-lambda / a_sup_norm, 1.0 / (p - 1.0));
}

}  // namespace nodal
