#include "nodal/model.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/roots.hpp"

namespace nodal {

namespace {

bool finite(double v) { return std::isfinite(v); }

[[noreturn]] void domain_fail(const char* what, double v) {
    throw DomainViolation(std::string(what) + " at value " + std::to_string(v));
}

// y^2 - log(1 + y^2) via its series 2*sum_{k>=2} (-1)^k y^{2k}/k for small y,
// avoiding the cancellation of the direct form.
double rational_cubic_H(double y) {
    const double y2 = y * y;
    if (y2 <= 0.01) {
        double term = y2 * y2;  // y^4
        double sum = 0.0;
        for (int k = 2; k <= 9; ++k) {
            sum += (k % 2 == 0 ? 1.0 : -1.0) * term / k;
            term *= y2;
        }
        return 0.5 * sum;
    }
    return 0.5 * (y2 - std::log1p(y2));
}

double log_barrier_H(double rho, double y) {
    // H(y) = y + (rho - y) log((rho - y)/rho); limit rho at y -> rho^-.
    if (y == rho) return rho;
    const double d = rho - y;
    return y + d * std::log(d / rho);
}

}  // namespace

// --------------------------------------------------------------------------
// HomeoSpec

HomeoSpec HomeoSpec::identity() { return HomeoSpec{}; }

HomeoSpec HomeoSpec::power(double q) {
    HomeoSpec s;
    s.kind = HomeoKind::power_q;
    s.q = q;
    return s;
}

HomeoSpec HomeoSpec::minkowski() {
    HomeoSpec s;
    s.kind = HomeoKind::minkowski_inverse;
    s.rho_minus = -1.0;
    s.rho_plus = 1.0;
    return s;
}

HomeoSpec HomeoSpec::relativistic() {
    HomeoSpec s;
    s.kind = HomeoKind::relativistic_inverse;
    return s;
}

HomeoSpec HomeoSpec::rational_cubic() {
    HomeoSpec s;
    s.kind = HomeoKind::rational_cubic;
    return s;
}

HomeoSpec HomeoSpec::log_barrier(double rho_plus) {
    HomeoSpec s;
    s.kind = HomeoKind::log_barrier;
    s.rho_plus = rho_plus;
    s.rho_minus = -kInf;
    return s;
}

void HomeoSpec::finalize_domain() {
    switch (kind) {
        case HomeoKind::minkowski_inverse:
            rho_minus = -1.0;
            rho_plus = 1.0;
            break;
        case HomeoKind::log_barrier:
            rho_minus = -kInf;
            break;
        default:
            rho_minus = -kInf;
            rho_plus = kInf;
            break;
    }
}

bool HomeoSpec::odd() const { return kind != HomeoKind::log_barrier; }

double eps_dom(const HomeoSpec& spec) {
    const double width = spec.rho_plus - spec.rho_minus;
    return 1e-9 * (finite(width) ? width : 1.0);
}

double eval_h(const HomeoSpec& spec, double y) {
    if (!finite(y)) domain_fail("eval_h: non-finite argument", y);
    const double eps = eps_dom(spec);
    if (finite(spec.rho_plus) && y > spec.rho_plus - eps)
        domain_fail("eval_h: argument in upper guard band", y);
    if (finite(spec.rho_minus) && y < spec.rho_minus + eps)
        domain_fail("eval_h: argument in lower guard band", y);
    return eval_h_core(spec, y);
}

double eval_h_core(const HomeoSpec& spec, double y) {
    switch (spec.kind) {
        case HomeoKind::identity:
            return y;
        case HomeoKind::power_q:
            return std::copysign(std::pow(std::fabs(y), spec.q), y);
        case HomeoKind::minkowski_inverse:
            return y / std::sqrt((1.0 - y) * (1.0 + y));
        case HomeoKind::relativistic_inverse:
            return y / std::sqrt(1.0 + y * y);
        case HomeoKind::rational_cubic:
            return y * y * y / (1.0 + y * y);
        case HomeoKind::log_barrier:
            return std::log(spec.rho_plus / (spec.rho_plus - y));
    }
    throw NumericalFailure("eval_h: unknown kind");
}

double eval_h_inf(const HomeoSpec& spec, double y) {
    if (finite(spec.rho_plus) && y >= spec.rho_plus) return kInf;
    if (finite(spec.rho_minus) && y <= spec.rho_minus) return -kInf;
    return eval_h_core(spec, y);
}

double eval_H(const HomeoSpec& spec, double y) {
    if (std::isnan(y)) domain_fail("eval_H: non-finite argument", y);
    if (y > spec.rho_plus || y < spec.rho_minus)
        domain_fail("eval_H: argument outside closure of domain", y);
    switch (spec.kind) {
        case HomeoKind::identity:
            return 0.5 * y * y;
        case HomeoKind::power_q:
            return std::pow(std::fabs(y), spec.q + 1.0) / (spec.q + 1.0);
        case HomeoKind::minkowski_inverse:
            // 1 - sqrt(1 - y^2), written cancellation-free.
            return y * y / (1.0 + std::sqrt((1.0 - y) * (1.0 + y)));
        case HomeoKind::relativistic_inverse:
            return y * y / (1.0 + std::sqrt(1.0 + y * y));
        case HomeoKind::rational_cubic:
            return rational_cubic_H(y);
        case HomeoKind::log_barrier:
            if (y == -kInf) return kInf;
            return log_barrier_H(spec.rho_plus, y);
    }
    throw NumericalFailure("eval_H: unknown kind");
}

namespace {

// Monotone numeric inverse of eval_H on one side of 0 for the kinds without
// a closed-form inverse.
double numeric_H_inv(const HomeoSpec& spec, double u, int sign) {
    const auto f = [&](double y) { return eval_H(spec, y) - u; };
    // Bracket by geometric expansion away from 0.
    double hi_limit = sign > 0 ? spec.rho_plus : -spec.rho_minus;
    double first = 1e-8;
    double prev = 0.0, fprev = -u;
    double step = first;
    for (int iter = 0; iter < 2200; ++iter) {
        double cand = sign > 0 ? step : -step;
        if (finite(hi_limit) && step >= hi_limit)
            cand = sign > 0 ? spec.rho_plus : spec.rho_minus;
        const double fc = f(cand);
        if (fc == 0.0) return cand;
        if ((fc > 0.0) != (fprev > 0.0)) {
            const double lo = std::min(prev, cand), hi = std::max(prev, cand);
            const double flo = lo == prev ? fprev : fc;
            const double fhi = lo == prev ? fc : fprev;
            return brent_root(f, lo, hi, flo, fhi, RootOptions{1e-14, 0.0, 300});
        }
        if (finite(hi_limit) && step >= hi_limit) break;
        prev = cand;
        fprev = fc;
        // Near a finite endpoint approach it geometrically instead of
        // overshooting past it.
        if (finite(hi_limit) && step * 2.0 >= hi_limit)
            step = 0.5 * (step + hi_limit);
        else
            step *= 2.0;
        if (step > 1e300) break;
    }
    domain_fail("H inverse: level outside range of H on this side", u);
}

}  // namespace

double eval_H_inv_pos(const HomeoSpec& spec, double u) {
    if (!(u >= 0.0)) domain_fail("eval_H_inv_pos: negative level", u);
    if (u == 0.0) return 0.0;
    switch (spec.kind) {
        case HomeoKind::identity:
            return std::sqrt(2.0 * u);
        case HomeoKind::power_q:
            return std::pow((spec.q + 1.0) * u, 1.0 / (spec.q + 1.0));
        case HomeoKind::minkowski_inverse:
            if (u >= 1.0)
                domain_fail("eval_H_inv_pos: level at or above H(rho_plus)", u);
            return std::sqrt(u * (2.0 - u));
        case HomeoKind::relativistic_inverse:
            return std::sqrt(u * (u + 2.0));
        case HomeoKind::rational_cubic:
        case HomeoKind::log_barrier: {
            const double top = std::isfinite(spec.rho_plus)
                                   ? eval_H(spec, spec.rho_plus)
                                   : kInf;
            if (u >= top)
                domain_fail("eval_H_inv_pos: level at or above H(rho_plus)", u);
            return numeric_H_inv(spec, u, +1);
        }
    }
    throw NumericalFailure("eval_H_inv_pos: unknown kind");
}

double eval_H_inv_neg(const HomeoSpec& spec, double u) {
    if (!(u >= 0.0)) domain_fail("eval_H_inv_neg: negative level", u);
    if (u == 0.0) return 0.0;
    if (spec.odd()) return -eval_H_inv_pos(spec, u);
    const double bottom = std::isfinite(spec.rho_minus)
                              ? eval_H(spec, spec.rho_minus)
                              : kInf;
    if (u >= bottom)
        domain_fail("eval_H_inv_neg: level at or above H(rho_minus)", u);
    return numeric_H_inv(spec, u, -1);
}

double h_star(const HomeoSpec& spec) {
    const double lo =
        std::isfinite(spec.rho_minus) ? eval_H(spec, spec.rho_minus) : kInf;
    const double hi =
        std::isfinite(spec.rho_plus) ? eval_H(spec, spec.rho_plus) : kInf;
    return std::min(lo, hi);
}

// --------------------------------------------------------------------------
// NonlinSpec

NonlinSpec NonlinSpec::power(double p) {
    NonlinSpec s;
    s.kind = NonlinKind::power_p;
    s.p = p;
    return s;
}

NonlinSpec NonlinSpec::exp_minus_one() {
    NonlinSpec s;
    s.kind = NonlinKind::exp_minus_one;
    return s;
}

double eval_g(const NonlinSpec& spec, double x) {
    switch (spec.kind) {
        case NonlinKind::power_p:
            return std::copysign(std::pow(std::fabs(x), spec.p), x);
        case NonlinKind::exp_minus_one:
            return std::expm1(x);
    }
    throw NumericalFailure("eval_g: unknown kind");
}

double eval_G(const NonlinSpec& spec, double x) {
    switch (spec.kind) {
        case NonlinKind::power_p:
            return std::pow(std::fabs(x), spec.p + 1.0) / (spec.p + 1.0);
        case NonlinKind::exp_minus_one:
            return std::expm1(x) - x;
    }
    throw NumericalFailure("eval_G: unknown kind");
}

namespace {

// Solve G(x) = u on one branch by geometric bracket growth plus Brent.
double numeric_G_inv(const NonlinSpec& spec, double u, int dir) {
    const auto f = [&](double x) { return eval_G(spec, x) - u; };
    auto br = expand_bracket(f, 0.0, -u, dir, 1e-4, 2.0, 1e30);
    if (!br)
        throw NoBracketError("eval_G_inv: potential level not attained");
    RootOptions opt;
    opt.rel_tol = 1e-14;
    return brent_root(f, br->lo, br->hi, br->f_lo, br->f_hi, opt);
}

}  // namespace

double eval_G_inv_pos(const NonlinSpec& spec, double u) {
    if (!(u >= 0.0))
        throw DomainViolation("eval_G_inv_pos: negative potential level");
    if (u == 0.0) return 0.0;
    if (spec.kind == NonlinKind::power_p)
        return std::pow((spec.p + 1.0) * u, 1.0 / (spec.p + 1.0));
    return numeric_G_inv(spec, u, +1);
}

double eval_G_inv_neg(const NonlinSpec& spec, double u) {
    if (!(u >= 0.0))
        throw DomainViolation("eval_G_inv_neg: negative potential level");
    if (u == 0.0) return 0.0;
    if (spec.kind == NonlinKind::power_p)
        return -std::pow((spec.p + 1.0) * u, 1.0 / (spec.p + 1.0));
    return numeric_G_inv(spec, u, -1);
}

// --------------------------------------------------------------------------
// StepWeight

int StepWeight::locate(double t) const {
    if (t < 0.0 || t > L())
        throw NumericalFailure("StepWeight::locate: time outside [0, L]");
    if (t <= breakpoints.front()) return 0;
    const auto it = std::lower_bound(breakpoints.begin() + 1, breakpoints.end(), t);
    return static_cast<int>(it - breakpoints.begin()) - 1;
}

// --------------------------------------------------------------------------
// BoundaryArc

BoundaryArc BoundaryArc::axis(ArcKind kind) {
    BoundaryArc a;
    a.kind = kind;
    return a;
}

BoundaryArc BoundaryArc::from_ray(double angle) {
    BoundaryArc a;
    a.kind = ArcKind::ray;
    a.angle = angle;
    return a;
}

BoundaryArc BoundaryArc::from_samples(std::vector<PhasePoint> pts) {
    BoundaryArc a;
    a.kind = ArcKind::param_curve;
    a.samples = std::move(pts);
    return a;
}

double BoundaryArc::direction_angle() const {
    constexpr double pi = 3.14159265358979323846;
    switch (kind) {
        case ArcKind::positive_y_axis: return 0.0;
        case ArcKind::positive_x_axis: return 0.5 * pi;
        case ArcKind::negative_y_axis: return pi;
        case ArcKind::negative_x_axis: return 1.5 * pi;
        case ArcKind::ray: return angle;
        case ArcKind::param_curve: {
            // Curves are anchored at the origin; the direction lives in the
            // first sample with nonzero radius.
            for (const PhasePoint& pt : samples) {
                if (pt.x == 0.0 && pt.y == 0.0) continue;
                double a = std::atan2(pt.x, pt.y);
                if (a < 0.0) a += 2.0 * pi;
                return a;
            }
            return 0.0;
        }
    }
    return 0.0;
}

// --------------------------------------------------------------------------
// Problem-level evaluation

double eval_F(const ProblemSpec& pb, int hump, double x) {
    return 0.5 * pb.lambda * x * x + pb.weight.mu(hump) * eval_G(pb.g, x);
}

double eval_f(const ProblemSpec& pb, int hump, double x) {
    return pb.lambda * x + pb.weight.mu(hump) * eval_g(pb.g, x);
}

double hamiltonian(const ProblemSpec& pb, int hump, double x, double y) {
    return eval_H(pb.h, y) + eval_F(pb, hump, x);
}

double linear_energy(const ProblemSpec& pb, double x, double y) {
    return eval_H(pb.h, y) + 0.5 * pb.lambda * x * x;
}

Potentials eval_potentials(const ProblemSpec& pb, int hump, double x, double y) {
    Potentials out;
    out.G = eval_G(pb.g, x);
    out.H = eval_H(pb.h, y);
    out.F = 0.5 * pb.lambda * x * x + pb.weight.mu(hump) * out.G;
    out.ham = out.H + out.F;
    out.energy = out.H + 0.5 * pb.lambda * x * x;
    return out;
}

// --------------------------------------------------------------------------
// Validation

namespace {

constexpr int kGridPoints = 1024;

void validate_homeo(const HomeoSpec& h) {
    if (h.kind == HomeoKind::power_q && !(h.q > 0.0))
        throw ConfigError("h power-q requires exponent q > 0");
    if (h.kind == HomeoKind::log_barrier &&
        !(finite(h.rho_plus) && h.rho_plus > 0.0))
        throw ConfigError("h log-barrier requires finite rho_plus > 0");
    if (!(h.rho_minus < 0.0 && h.rho_plus > 0.0))
        throw ConfigError("h domain must contain 0 in its interior");

    const double eps = eps_dom(h);
    const double lo = finite(h.rho_minus) ? h.rho_minus + 2.0 * eps : -16.0;
    const double hi = finite(h.rho_plus) ? h.rho_plus - 2.0 * eps : 16.0;
    double prev = eval_h(h, lo);
    for (int i = 1; i < kGridPoints; ++i) {
        const double y = lo + (hi - lo) * i / (kGridPoints - 1);
        const double cur = eval_h(h, y);
        if (!(cur > prev))
            throw ConfigError("h fails sampled strict monotonicity");
        prev = cur;
    }
    if (std::fabs(eval_h(h, 0.0)) != 0.0)
        throw ConfigError("h(0) must equal 0");
}

void validate_nonlin(const NonlinSpec& g) {
    if (g.kind == NonlinKind::power_p) {
        if (!(g.p > 0.0)) throw ConfigError("g power-p requires p > 0");
        if (g.p == 1.0)
            throw ConfigError("g power-p requires p != 1 (p = 1 is the linear case)");
    }
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = -16.0 + 32.0 * i / (kGridPoints - 1);
        if (x == 0.0) continue;
        if (!(eval_g(g, x) * x > 0.0))
            throw ConfigError("g fails sampled sign condition g(s)s > 0");
    }
}

void validate_weight(const StepWeight& w) {
    if (w.breakpoints.size() < 2 || w.breakpoints.size() % 2 != 0)
        throw ConfigError("weight breakpoints must list t_0,s_0,...,t_m,s_m");
    if (w.heights.size() != w.breakpoints.size() / 2)
        throw ConfigError("weight heights must have one entry per hump");
    if (w.breakpoints.front() != 0.0)
        throw ConfigError("weight must start at t_0 = 0");
    for (std::size_t i = 1; i < w.breakpoints.size(); ++i)
        if (!(w.breakpoints[i] > w.breakpoints[i - 1]))
            throw ConfigError("weight breakpoints must be strictly increasing");
    for (double mu : w.heights)
        if (!(mu > 0.0)) throw ConfigError("weight heights must be positive");
}

void validate_arc(const BoundaryArc& arc) {
    if (arc.kind == ArcKind::ray && !finite(arc.angle))
        throw ConfigError("ray arc requires a finite angle");
    if (arc.kind == ArcKind::param_curve && arc.samples.size() < 2)
        throw ConfigError("param-curve arc requires at least two samples");
}

}  // namespace

ValidationReport validate(const ProblemSpec& pb) {
    validate_homeo(pb.h);
    validate_nonlin(pb.g);
    validate_weight(pb.weight);
    validate_arc(pb.r0);
    validate_arc(pb.rL);

    ValidationReport report;
    if (pb.h.kind == HomeoKind::power_q && pb.h.q < 1.0 && pb.lambda < 0.0) {
        report.warnings.push_back(
            "uniqueness risk: h = |y|^q sgn(y) with q < 1 together with "
            "lambda < 0 admits solutions reaching the origin in finite time; "
            "shooting results near the origin may be non-unique");
    }
    return report;
}

}  // namespace nodal
