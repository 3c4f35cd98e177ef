// certify.cpp — twist/compatibility/window certification, itinerary
// enumeration, and solution-count lower bounds.

#include "nodal/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nodal/flow.hpp"
#include "nodal/roots.hpp"

namespace nodal {

namespace {

constexpr double kPi = 3.14159265358979323846;

long long checked_mul(long long a, long long b, const char* who) {
    long long r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw NumericalFailure(std::string(who) + ": count bound overflows 64-bit");
    return r;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Annulus.

Annulus make_annulus(const ProblemSpec& pb, int hump, double c1, double c2) {
    if (hump < 0 || hump > pb.weight.m())
        throw ConfigError("make_annulus: hump index out of range");
    if (!(c1 > 0.0) || !(c2 > c1))
        throw ConfigError("make_annulus: need 0 < c1 < c2");
    const double hs = h_star(pb.h);
    if (!(c2 < hs))
        throw ConfigError("make_annulus: c2 must stay below H* = " + fmt(hs));
    // Both boundary orbits must be regular closed loops.
    level_crossing(pb, hump, c1);
    level_crossing(pb, hump, c2);
    return Annulus{hump, c1, c2};
}

// ---------------------------------------------------------------------------
// Margins.

const char* to_string(CertStatus s) {
    switch (s) {
        case CertStatus::satisfied: return "satisfied";
        case CertStatus::violated: return "violated";
        default: return "indeterminate";
    }
}

CertStatus margin_status(const Margin& m) {
    const double thr = 10.0 * m.err;
    if (m.slack > thr) return CertStatus::satisfied;
    if (m.slack < -thr) return CertStatus::violated;
    return CertStatus::indeterminate;
}

CertStatus combine_margins(const std::vector<Margin>& margins) {
    bool borderline = false;
    for (const Margin& m : margins) {
        switch (margin_status(m)) {
            case CertStatus::violated: return CertStatus::violated;
            case CertStatus::indeterminate: borderline = true; break;
            default: break;
        }
    }
    return borderline ? CertStatus::indeterminate : CertStatus::satisfied;
}

namespace {

// Floor the reported error so closed-form rows still honour the borderline
// band around equality.
double err_floor(double quad_err, double scale) {
    return std::max(quad_err, 1e-13 * std::max(1.0, std::fabs(scale)));
}

// Margin for "lhs > rhs" (greater = true) or "lhs < rhs".
Margin make_margin(std::string label, double lhs, double rhs, bool greater,
                   double quad_err) {
    Margin m;
    m.label = std::move(label);
    m.lhs = lhs;
    m.rhs = rhs;
    m.slack = greater ? lhs - rhs : rhs - lhs;
    m.err = err_floor(quad_err, std::max(std::fabs(lhs), std::fabs(rhs)));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Twist certificates.

const char* to_string(TwistVariant v) {
    switch (v) {
        case TwistVariant::standard_iv1: return "standard-iv1";
        case TwistVariant::strong_iv6: return "strong-iv6";
        case TwistVariant::positive_vi9: return "positive-vi9";
        case TwistVariant::lambda0_vii5_interior: return "lambda0-vii5-interior";
        case TwistVariant::lambda0_vii5_endpoint: return "lambda0-vii5-endpoint";
        case TwistVariant::positive_vii18: return "positive-vii18";
        case TwistVariant::positive_vii19: return "positive-vii19";
        default: return "sublinear-remark73";
    }
}

TwistVariant twist_variant_from_string(const std::string& s) {
    for (TwistVariant v : {TwistVariant::standard_iv1, TwistVariant::strong_iv6,
                           TwistVariant::positive_vi9, TwistVariant::lambda0_vii5_interior,
                           TwistVariant::lambda0_vii5_endpoint, TwistVariant::positive_vii18,
                           TwistVariant::positive_vii19, TwistVariant::sublinear_remark73})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown twist variant '" + s + "'");
}

namespace {

// Clockwise quadrant cycle I -> IV -> III -> II -> I.
constexpr int kQuadI = 0, kQuadII = 1, kQuadIII = 2, kQuadIV = 3;

int quad_next_cw(int q) { return (q + 3) % 4; }

const char* quad_name(int q) {
    switch (q) {
        case kQuadI: return "I";
        case kQuadII: return "II";
        case kQuadIII: return "III";
        default: return "IV";
    }
}

double quad_time(const QuarterTimes& qt, int q) {
    switch (q) {
        case kQuadI: return qt.t_I;
        case kQuadII: return qt.t_II;
        case kQuadIII: return qt.t_III;
        default: return qt.t_IV;
    }
}

bool sublinear_nonlin(const NonlinSpec& g) {
    return g.kind == NonlinKind::power_p && g.p < 1.0;
}

std::string coeff_term(double coeff, const char* role) {
    std::ostringstream os;
    os << coeff << "*T(" << role << ")";
    return os.str();
}

}  // namespace

TwistCertificate check_twist(const ProblemSpec& pb, const Annulus& an, double tau,
                             int alpha, int beta, TwistVariant variant, double tol) {
    if (alpha < 0 || beta <= alpha)
        throw ConfigError("check_twist: need 0 <= alpha < beta");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ConfigError("check_twist: need tau > 0");
    make_annulus(pb, an.hump, an.c1, an.c2);  // re-validate

    TwistCertificate cert;
    cert.hump = an.hump;
    cert.alpha = alpha;
    cert.beta = beta;
    cert.variant = variant;
    cert.tau = tau;

    const bool swap_roles =
        variant == TwistVariant::sublinear_remark73 || sublinear_nonlin(pb.g);
    cert.d_level = swap_roles ? an.c2 : an.c1;
    cert.e_level = swap_roles ? an.c1 : an.c2;

    const QuarterTimes qt_d = quarter_times(pb, an.hump, cert.d_level, tol);
    const QuarterTimes qt_e = quarter_times(pb, an.hump, cert.e_level, tol);
    const double T_d = qt_d.period();
    const double T_e = qt_e.period();
    const double err_d = qt_d.error_est;
    const double err_e = qt_e.error_est;
    const double a = static_cast<double>(alpha);
    const double b = static_cast<double>(beta);

    auto quadrant_rows = [&](bool two_legs_lower, bool full_cycle) {
        const int kappas_all[4] = {kQuadIV, kQuadIII, kQuadII, kQuadI};
        const int kappas_odd[2] = {kQuadI, kQuadIII};
        const int* kappas = full_cycle ? kappas_all : kappas_odd;
        const int n = full_cycle ? 4 : 2;
        for (int j = 0; j < n; ++j) {
            const int k = kappas[j];
            const int k1 = quad_next_cw(k);
            const int k2 = quad_next_cw(k1);
            // Lower rows: quadrant legs of the slow level beat tau.
            {
                std::ostringstream os;
                os << "k=" << quad_name(k) << ": T_" << quad_name(k1) << "(d)";
                double lhs = quad_time(qt_d, k1);
                if (two_legs_lower) {
                    os << "+T_" << quad_name(k2) << "(d)";
                    lhs += quad_time(qt_d, k2);
                }
                os << "+" << coeff_term(a, "d") << " > tau";
                lhs += a * T_d;
                cert.margins.push_back(
                    make_margin(os.str(), lhs, tau, true, (a + 1.0) * err_d));
            }
            // Upper rows: fast-level legs stay under tau.
            if (variant != TwistVariant::positive_vi9) {
                std::ostringstream os;
                os << "k=" << quad_name(k) << ": T_" << quad_name(k) << "(e)+T_"
                   << quad_name(k1) << "(e)+" << coeff_term(b, "e") << " < tau";
                const double lhs =
                    quad_time(qt_e, k) + quad_time(qt_e, k1) + b * T_e;
                cert.margins.push_back(
                    make_margin(os.str(), lhs, tau, false, (b + 1.0) * err_e));
            }
        }
        if (variant == TwistVariant::positive_vi9) {
            cert.margins.push_back(make_margin(coeff_term(b, "e") + " < tau",
                                               b * T_e, tau, false,
                                               (b + 1.0) * err_e));
        }
    };

    auto period_rows = [&](double lo_shift, double hi_shift) {
        cert.margins.push_back(make_margin(coeff_term(a + lo_shift, "d") + " > tau",
                                           (a + lo_shift) * T_d, tau, true,
                                           (a + 1.0) * err_d));
        cert.margins.push_back(make_margin(coeff_term(b + hi_shift, "e") + " < tau",
                                           (b + hi_shift) * T_e, tau, false,
                                           (b + 1.0) * err_e));
    };

    switch (variant) {
        case TwistVariant::standard_iv1:
            quadrant_rows(/*two_legs_lower=*/true, /*full_cycle=*/true);
            break;
        case TwistVariant::strong_iv6:
            quadrant_rows(/*two_legs_lower=*/false, /*full_cycle=*/true);
            break;
        case TwistVariant::positive_vi9:
            quadrant_rows(/*two_legs_lower=*/false, /*full_cycle=*/false);
            break;
        case TwistVariant::lambda0_vii5_interior:
        case TwistVariant::positive_vii18:
            period_rows(0.5, 0.5);
            break;
        case TwistVariant::lambda0_vii5_endpoint:
        case TwistVariant::positive_vii19:
        case TwistVariant::sublinear_remark73:
            period_rows(0.25, 0.5);
            break;
    }

    cert.status = combine_margins(cert.margins);
    if (cert.status == CertStatus::violated) {
        for (const Margin& m : cert.margins)
            if (margin_status(m) == CertStatus::violated) {
                cert.first_violation = m.label;
                cert.deficit = -m.slack;
                break;
            }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Compatibility.

CompatReport check_compat(const ProblemSpec& pb, const Annulus& a, const Annulus& b,
                          double c) {
    if (!(pb.lambda > 0.0))
        throw ConfigError("check_compat: defined for lambda > 0");
    if (!(c > 0.0) || !std::isfinite(c))
        throw ConfigError("check_compat: need gap energy c > 0");

    CompatReport rep;
    rep.c = c;
    rep.x_max = std::sqrt(2.0 * c / pb.lambda);
    for (const Annulus* ann : {&a, &b}) {
        const double u = (ann->c2 - c) / pb.weight.mu(ann->hump);
        if (u <= 0.0) continue;
        rep.x_com = std::max(rep.x_com, eval_G_inv_pos(pb.g, u));
        rep.x_com = std::max(rep.x_com, -eval_G_inv_neg(pb.g, u));
    }
    rep.slack = rep.x_max - rep.x_com;
    rep.c_headroom = std::min(a.c1, b.c1) - c;

    const double thr_x = 1e-9 * std::max(1.0, rep.x_max);
    const double thr_c = 1e-9 * std::max(1.0, c);
    if (rep.slack > thr_x && rep.c_headroom > -thr_c) {
        rep.status = CertStatus::satisfied;
    } else if (rep.slack < -thr_x || rep.c_headroom < -thr_c) {
        rep.status = CertStatus::violated;
    } else {
        rep.status = CertStatus::indeterminate;
    }
    rep.satisfied = rep.status == CertStatus::satisfied;
    return rep;
}

// ---------------------------------------------------------------------------
// Linear windows.

const char* to_string(WindowVariant v) {
    switch (v) {
        case WindowVariant::neg_horizontal: return "neg-horizontal";
        case WindowVariant::neg_diagonal: return "neg-diagonal";
        case WindowVariant::pos_band: return "pos-band";
        case WindowVariant::pos_band_winding: return "pos-band-winding";
        case WindowVariant::pos_apex: return "pos-apex";
        case WindowVariant::pos_isochronous: return "pos-isochronous";
        case WindowVariant::zero_closed_form: return "zero-closed-form";
        default: return "neg-sweep-bound";
    }
}

WindowVariant window_variant_from_string(const std::string& s) {
    for (WindowVariant v :
         {WindowVariant::neg_horizontal, WindowVariant::neg_diagonal,
          WindowVariant::pos_band, WindowVariant::pos_band_winding,
          WindowVariant::pos_apex, WindowVariant::pos_isochronous,
          WindowVariant::zero_closed_form, WindowVariant::neg_sweep_bound})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown window variant '" + s + "'");
}

namespace {

// Error proxy for transit times computed at the library's quadrature
// tolerances (the transit routines do not export per-call estimates).
double transit_err(double value) { return 1e-9 * std::max(1.0, std::fabs(value)); }

double pos_gap_period(const ProblemSpec& pb, double c) {
    const PosQuadrantTimes q = pos_quadrant_times(pb, c);
    return q.S_I + q.S_II + q.S_III + q.S_IV;
}

void require_compat(const ProblemSpec& pb, int gap, const WindowParams& p,
                    double c, const char* who) {
    const Annulus left{gap, p.c1_i, p.c2_i};
    const Annulus right{gap + 1, p.c1_next, p.c2_next};
    const CompatReport rep = check_compat(pb, left, right, c);
    if (!rep.satisfied)
        throw IncompatibleGeometryError(
            std::string(who) + ": level E=" + fmt(c) +
            " does not clear both annuli (x_com=" + fmt(rep.x_com) +
            ", apex=" + fmt(rep.x_max) + ", headroom=" + fmt(rep.c_headroom) + ")");
}

// Empirical angular-order probe of the gap flow: 64 rays sample the inner
// boundary Ham_gap = c1 of the left annulus, points with gap energy above
// c_lim are dropped, the rest are pushed through the gap window and their
// unwrapped exit angles must keep the entry order without a full-turn
// overtake.
bool gap_angle_order_sample(const ProblemSpec& pb, int gap, double c1,
                            double c_lim) {
    const double t0 = pb.weight.s(gap);
    const double t1 = pb.weight.t(gap + 1);
    std::vector<double> ends;
    ends.reserve(64);
    for (int k = 0; k < 64; ++k) {
        const double phi = 2.0 * kPi * (static_cast<double>(k) + 0.5) / 64.0;
        const double ux = std::sin(phi);
        const double uy = std::cos(phi);
        auto level_gap = [&](double r) -> double {
            try {
                return hamiltonian(pb, gap, r * ux, r * uy) - c1;
            } catch (const DomainViolation&) {
                return 1e300;  // past the h-domain: already above the level
            }
        };
        double hi = 1e-4;
        int guard = 0;
        while (level_gap(hi) < 0.0 && ++guard < 200) hi *= 2.0;
        if (guard >= 200) return false;
        const double r = brent_root(level_gap, 0.0, hi, -c1, level_gap(hi));
        const PhasePoint z0{r * ux, r * uy};
        if (linear_energy(pb, z0.x, z0.y) > c_lim * (1.0 + 1e-12) + 1e-15) continue;
        Trajectory traj;
        try {
            traj = integrate(pb, z0, t0, t1, 1e-8);
        } catch (const NodalError&) {
            return false;
        }
        if (traj.blew_up) return false;
        ends.push_back(traj.theta_end());
    }
    if (ends.size() < 8) return false;
    for (std::size_t j = 1; j < ends.size(); ++j)
        if (!(ends[j] > ends[j - 1])) return false;
    return ends.back() - ends.front() < 2.0 * kPi;
}

}  // namespace

WindowReport check_linear_window(const ProblemSpec& pb, int gap, WindowVariant variant,
                                 const WindowParams& params, double tol) {
    (void)tol;
    if (gap < 0 || gap >= pb.weight.m())
        throw ConfigError("check_linear_window: gap index out of range");
    const double sigma = pb.weight.sigma(gap);

    WindowReport rep;
    rep.gap = gap;
    rep.variant = variant;

    auto leq_row = [&](std::string label, double S) {
        rep.margins.push_back(make_margin(std::move(label), S, sigma, false,
                                          transit_err(S)));
    };
    auto geq_row = [&](std::string label, double S) {
        rep.margins.push_back(make_margin(std::move(label), S, sigma, true,
                                          transit_err(S)));
    };

    switch (variant) {
        case WindowVariant::neg_horizontal: {
            if (pb.lambda > 0.0)
                throw ConfigError("neg-horizontal window: needs lambda <= 0");
            const GapChannelTimes g = gap_channel_times(
                pb, gap, params.c1_i, params.c2_i, params.c1_next, params.c2_next);
            leq_row("S_II->I <= sigma", g.S_II_I);
            leq_row("S_IV->III <= sigma", g.S_IV_III);
            break;
        }
        case WindowVariant::neg_diagonal: {
            if (!(pb.lambda < 0.0))
                throw ConfigError("neg-diagonal window: needs lambda < 0");
            const GapChannelTimes g = gap_channel_times(
                pb, gap, params.c1_i, params.c2_i, params.c1_next, params.c2_next);
            leq_row("S_IV->I <= sigma", g.S_IV_I);
            leq_row("S_II->III <= sigma", g.S_II_III);
            break;
        }
        case WindowVariant::pos_band:
        case WindowVariant::pos_band_winding: {
            if (!(pb.lambda > 0.0))
                throw ConfigError("pos-band window: needs lambda > 0");
            if (!(params.d_hat > 0.0) || !(params.e_hat > 0.0) ||
                params.d_hat == params.e_hat)
                throw ConfigError("pos-band window: need distinct d_hat, e_hat > 0");
            const bool winding = variant == WindowVariant::pos_band_winding;
            int xi = 0, zeta = 0;
            if (winding) {
                xi = params.xi;
                zeta = params.zeta;
                if (zeta < 0 || xi < zeta)
                    throw ConfigError("pos-band-winding: need 0 <= zeta <= xi");
            }
            require_compat(pb, gap, params, std::min(params.d_hat, params.e_hat),
                           "pos-band window");
            require_compat(pb, gap, params, std::max(params.d_hat, params.e_hat),
                           "pos-band window");
            const double Te = winding ? pos_gap_period(pb, params.e_hat) : 0.0;
            const double Td = winding ? pos_gap_period(pb, params.d_hat) : 0.0;
            const double xiTe = static_cast<double>(xi) * Te;
            const double zTd = static_cast<double>(zeta) * Td;
            leq_row("k=I: S_outer(e_hat)+xi*T(e_hat) <= sigma",
                    pos_gap_S_II_I(pb, gap, params.c2_i, params.c2_next,
                                   params.e_hat) + xiTe);
            geq_row("k=I: S_inner(d_hat)+zeta*T(d_hat) >= sigma",
                    pos_gap_S_II_I(pb, gap, params.c1_i, params.c1_next,
                                   params.d_hat) + zTd);
            leq_row("k=III: S_outer(e_hat)+xi*T(e_hat) <= sigma",
                    pos_gap_S_IV_III(pb, gap, params.c2_i, params.c2_next,
                                     params.e_hat) + xiTe);
            geq_row("k=III: S_inner(d_hat)+zeta*T(d_hat) >= sigma",
                    pos_gap_S_IV_III(pb, gap, params.c1_i, params.c1_next,
                                     params.d_hat) + zTd);
            rep.multiplier = winding ? xi - zeta + 1 : 1;
            break;
        }
        case WindowVariant::pos_apex: {
            if (!(pb.lambda > 0.0))
                throw ConfigError("pos-apex window: needs lambda > 0");
            const double c = params.c;
            if (!(c > 0.0))
                throw ConfigError("pos-apex window: need gap energy c > 0");
            require_compat(pb, gap, params, c, "pos-apex window");
            leq_row("k=I: S_outer(c) < sigma",
                    pos_gap_S_II_I(pb, gap, params.c2_i, params.c2_next, c));
            geq_row("k=I: S_inner_to_apex(c) > sigma",
                    pos_gap_S_II_I_to_apex(pb, gap, params.c1_i, c));
            geq_row("k=I: S_wrong(III->I) > sigma",
                    pos_S_III_I(pb, gap, params.c2_i, params.c1_next, c));
            leq_row("k=III: S_outer(c) < sigma",
                    pos_gap_S_IV_III(pb, gap, params.c2_i, params.c2_next, c));
            geq_row("k=III: S_inner_to_apex(c) > sigma",
                    pos_gap_S_IV_III_to_apex(pb, gap, params.c1_i, c));
            geq_row("k=III: S_wrong(I->III) > sigma",
                    pos_S_I_III(pb, gap, params.c2_i, params.c1_next, c));
            break;
        }
        case WindowVariant::pos_isochronous: {
            if (!(pb.lambda > 0.0))
                throw ConfigError("pos-isochronous window: needs lambda > 0");
            const double c =
                params.c > 0.0 ? params.c : std::min(params.c1_i, params.c1_next);
            if (!(c > 0.0))
                throw ConfigError("pos-isochronous window: need annulus levels or c");
            if (params.xi < 0)
                throw ConfigError("pos-isochronous window: need xi >= 0");
            require_compat(pb, gap, params, c, "pos-isochronous window");
            const double T = pos_gap_period(pb, c);
            const double shift = static_cast<double>(params.xi) * T;
            leq_row("k=I: S_com(c)+xi*T <= sigma",
                    pos_gap_S_II_I(pb, gap, params.c2_i, params.c2_next, c) + shift);
            geq_row("k=I: S_to_apex(c)+xi*T >= sigma",
                    pos_gap_S_II_I_to_apex(pb, gap, params.c1_i, c) + shift);
            leq_row("k=III: S_com(c)+xi*T <= sigma",
                    pos_gap_S_IV_III(pb, gap, params.c2_i, params.c2_next, c) + shift);
            geq_row("k=III: S_to_apex(c)+xi*T >= sigma",
                    pos_gap_S_IV_III_to_apex(pb, gap, params.c1_i, c) + shift);
            break;
        }
        case WindowVariant::zero_closed_form: {
            if (pb.lambda != 0.0)
                throw ConfigError("zero-closed-form window: needs lambda = 0");
            const LevelCrossing out_i = level_crossing(pb, gap, params.c2_i);
            const LevelCrossing out_n = level_crossing(pb, gap + 1, params.c2_next);
            const LevelCrossing in_i = level_crossing(pb, gap, params.c1_i);
            const LevelCrossing in_n = level_crossing(pb, gap + 1, params.c1_next);
            const double y_min = std::min(in_i.y_plus, in_n.y_plus);
            const double bound =
                (out_i.x_plus + out_n.x_plus) / eval_h_core(pb.h, y_min);
            rep.margins.push_back(make_margin(
                "(x_+(c2_i)+x_+(c2_next))/h(y_+(c1_min)) <= sigma", bound, sigma,
                false, 1e-11 * std::max(1.0, bound)));
            break;
        }
        case WindowVariant::neg_sweep_bound: {
            if (!(pb.lambda < 0.0))
                throw ConfigError("neg-sweep-bound window: needs lambda < 0");
            if (pb.g.kind != NonlinKind::power_p)
                throw ConfigError("neg-sweep-bound window: needs a power nonlinearity");
            if (!(params.theta1 > 0.0) || !(params.theta2 > params.theta1))
                throw ConfigError("neg-sweep-bound window: need 0 < theta1 < theta2");
            const LambdaBounds lb =
                lambda_bounds(params.theta1, params.theta2, pb.g.p, pb.lambda);
            rep.margins.push_back(make_margin("Lambda_star <= sigma", lb.Lambda_star,
                                              sigma, false,
                                              1e-12 * std::max(1.0, lb.Lambda_star)));
            break;
        }
    }

    rep.status = combine_margins(rep.margins);

    if (variant == WindowVariant::pos_apex ||
        variant == WindowVariant::pos_isochronous) {
        if (pb.h.kind == HomeoKind::identity) {
            rep.angle_order_certified = true;
        } else {
            const double c =
                params.c > 0.0 ? params.c : std::min(params.c1_i, params.c1_next);
            rep.angle_order_empirical =
                gap_angle_order_sample(pb, gap, params.c1_i, c);
            if (!rep.angle_order_empirical &&
                rep.status == CertStatus::satisfied)
                rep.status = CertStatus::indeterminate;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Itineraries.

const char* to_string(Kappa k) { return k == Kappa::I ? "I" : "III"; }

std::vector<Kappa> Itinerary::sequence() const {
    std::vector<Kappa> seq;
    seq.reserve(steps.size() + 1);
    seq.push_back(kappa0);
    for (const ItineraryStep& st : steps) seq.push_back(st.to);
    return seq;
}

std::string Itinerary::text() const {
    std::string out = to_string(kappa0);
    for (const ItineraryStep& st : steps) {
        out += st.channel == GapChannel::sweep ? " -s- " : " -l- ";
        out += to_string(st.to);
    }
    return out;
}

std::vector<Itinerary> enumerate_itineraries(int m, int lambda_sign, Kappa kappa0) {
    if (m < 0) throw ConfigError("enumerate_itineraries: need m >= 0");
    const int choices = lambda_sign < 0 ? 4 : 2;
    if (m > 0 && std::pow(static_cast<double>(choices), m) > 4194304.0)
        throw ConfigError("enumerate_itineraries: more than 2^22 paths requested");

    std::vector<Itinerary> out;
    Itinerary cur;
    cur.kappa0 = kappa0;
    cur.steps.reserve(static_cast<std::size_t>(m));

    auto flip = [](Kappa k) { return k == Kappa::I ? Kappa::III : Kappa::I; };
    auto rec = [&](auto&& self, int depth, Kappa at) -> void {
        if (depth == m) {
            out.push_back(cur);
            return;
        }
        for (StepTarget target : {StepTarget::horizontal, StepTarget::diagonal}) {
            const Kappa to = target == StepTarget::horizontal ? at : flip(at);
            for (GapChannel ch : {GapChannel::sweep, GapChannel::loop}) {
                if (ch == GapChannel::loop && lambda_sign >= 0) continue;
                cur.steps.push_back(ItineraryStep{to, target, ch});
                self(self, depth + 1, to);
                cur.steps.pop_back();
            }
        }
    };
    rec(rec, 0, kappa0);
    return out;
}

// ---------------------------------------------------------------------------
// Count bounds.

CountBound lower_bound(const std::vector<TwistCertificate>& certs,
                       const std::vector<WindowReport>& windows,
                       int lambda_sign, BoundaryMode mode, Kappa kappa0) {
    if (certs.empty())
        throw MissingCertificateError("lower_bound: no twist certificates supplied");
    const int m = static_cast<int>(certs.size()) - 1;
    for (int i = 0; i <= m; ++i) {
        const TwistCertificate& c = certs[static_cast<std::size_t>(i)];
        if (!c.ok())
            throw MissingCertificateError(
                "lower_bound: hump " + std::to_string(i) + " certificate is " +
                to_string(c.status));
    }
    if (!windows.empty() && static_cast<int>(windows.size()) != m)
        throw MissingCertificateError(
            "lower_bound: need one window report per gap (" + std::to_string(m) +
            "), got " + std::to_string(windows.size()));

    long long per_path = mode == BoundaryMode::dirichlet_axes ? 4 : 1;
    for (const TwistCertificate& c : certs)
        per_path = checked_mul(per_path, c.beta - c.alpha, "lower_bound");
    for (const WindowReport& w : windows) {
        if (!w.ok())
            throw MissingCertificateError(
                "lower_bound: gap " + std::to_string(w.gap) + " window is " +
                to_string(w.status));
        per_path = checked_mul(per_path, w.multiplier, "lower_bound");
    }

    CountBound cb;
    std::vector<Itinerary> its = enumerate_itineraries(m, lambda_sign, kappa0);
    cb.breakdown.reserve(its.size());
    for (Itinerary& it : its) {
        cb.total += per_path;
        cb.breakdown.emplace_back(std::move(it), per_path);
    }
    return cb;
}

long long closed_form_bound(const std::vector<int>& beta_minus_alpha,
                            const std::vector<int>& gap_multipliers,
                            int lambda_sign, BoundaryMode mode) {
    if (beta_minus_alpha.empty())
        throw ConfigError("closed_form_bound: need at least one hump factor");
    const int m = static_cast<int>(beta_minus_alpha.size()) - 1;
    if (!gap_multipliers.empty() && static_cast<int>(gap_multipliers.size()) != m)
        throw ConfigError("closed_form_bound: need one gap multiplier per gap");
    long long total = mode == BoundaryMode::dirichlet_axes ? 4 : 1;
    const long long channels = lambda_sign < 0 ? 4 : 2;
    for (int i = 0; i < m; ++i) total = checked_mul(total, channels, "closed_form_bound");
    for (int f : beta_minus_alpha) {
        if (f < 1) throw ConfigError("closed_form_bound: factors must be >= 1");
        total = checked_mul(total, f, "closed_form_bound");
    }
    for (int g : gap_multipliers) {
        if (g < 1) throw ConfigError("closed_form_bound: multipliers must be >= 1");
        total = checked_mul(total, g, "closed_form_bound");
    }
    return total;
}

}  // namespace nodal
