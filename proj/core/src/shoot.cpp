// shoot.cpp — arc parametrization, dense endpoint scans, bracket refinement
// against the terminal arc, and nodal classification of the found solutions.

#include "nodal/shoot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nodal/log.hpp"

namespace nodal {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Dir {
    double ux = 0.0;
    double uy = 0.0;
};

Dir arc_direction(const BoundaryArc& arc) {
    switch (arc.kind) {
        case ArcKind::positive_y_axis: return {0.0, 1.0};
        case ArcKind::negative_y_axis: return {0.0, -1.0};
        case ArcKind::positive_x_axis: return {1.0, 0.0};
        case ArcKind::negative_x_axis: return {-1.0, 0.0};
        case ArcKind::ray: return {std::sin(arc.angle), std::cos(arc.angle)};
        default:
            throw ConfigError("arc_direction: sampled polylines have no ray form");
    }
}

// Largest arclength along direction (ux, uy) that keeps y inside the open
// h-domain (just inside the guard band).
double domain_cap(const HomeoSpec& h, double uy) {
    if (uy > 0.0 && std::isfinite(h.rho_plus))
        return h.rho_plus * (1.0 - 4e-9) / uy;
    if (uy < 0.0 && std::isfinite(h.rho_minus))
        return h.rho_minus * (1.0 - 4e-9) / uy;
    return std::numeric_limits<double>::infinity();
}

double polyline_length(const std::vector<PhasePoint>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        len += std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    return len;
}

// Signed residual of an endpoint against the terminal arc: wrapped angle
// offset for axis arcs, signed normal distance (with a half-line validity
// flag) for rays.
struct Resid {
    double val = 0.0;
    bool valid = false;
    bool angular = false;
};

double axis_angle(ArcKind kind) {
    switch (kind) {
        case ArcKind::positive_y_axis: return 0.0;
        case ArcKind::positive_x_axis: return 0.5 * kPi;
        case ArcKind::negative_y_axis: return kPi;
        default: return 1.5 * kPi;  // negative_x_axis
    }
}

double wrap_pi(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w > kPi) w -= kTwoPi;
    if (w <= -kPi) w += kTwoPi;
    return w;
}

Resid terminal_offset(const BoundaryArc& rL, double theta_L, const PhasePoint& zL) {
    Resid r;
    switch (rL.kind) {
        case ArcKind::positive_y_axis:
        case ArcKind::negative_y_axis:
        case ArcKind::positive_x_axis:
        case ArcKind::negative_x_axis:
            r.val = wrap_pi(theta_L - axis_angle(rL.kind));
            r.valid = true;
            r.angular = true;
            return r;
        case ArcKind::ray: {
            const Dir d = arc_direction(rL);
            const double along = zL.x * d.ux + zL.y * d.uy;
            r.val = zL.x * d.uy - zL.y * d.ux;
            r.valid = along > 0.0;
            return r;
        }
        default:
            throw ConfigError("find_solutions: rL must be an axis or ray arc");
    }
}

// Unsigned point distance from z to the terminal half-line.
double arc_distance(const BoundaryArc& rL, const PhasePoint& z) {
    const Dir d = arc_direction(rL);
    const double along = z.x * d.ux + z.y * d.uy;
    const double normal = z.x * d.uy - z.y * d.ux;
    return along >= 0.0 ? std::fabs(normal) : std::hypot(z.x, z.y);
}

double theta_at(const Trajectory& traj, double t) {
    const auto& ss = traj.samples;
    if (t <= ss.front().t) return traj.theta.front();
    if (t >= ss.back().t) return traj.theta.back();
    std::size_t lo = 0, hi = ss.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (ss[mid].t <= t ? lo : hi) = mid;
    }
    const double span = ss[hi].t - ss[lo].t;
    const double w = span > 0.0 ? (t - ss[lo].t) / span : 0.0;
    return traj.theta[lo] + w * (traj.theta[hi] - traj.theta[lo]);
}

ArcSample run_sample(const ProblemSpec& pb, const BoundaryArc& r0, double s,
                     double tol) {
    ArcSample out;
    out.s = s;
    out.z0 = arc_point(pb, r0, s);
    try {
        const Trajectory traj = integrate(pb, out.z0, 0.0, pb.weight.L(), tol);
        out.zL = traj.z_end();
        out.theta0 = traj.theta_begin();
        out.theta_L = traj.theta_end();
        out.winding = out.theta_L - out.theta0;
        out.blew_up = traj.blew_up;
    } catch (const NodalError&) {
        // Starting point unusable (e.g. inside the domain guard band).
        out.zL = out.z0;
        out.blew_up = true;
    }
    return out;
}

bool bracket_between(const BoundaryArc& rL, const ArcSample& a,
                     const ArcSample& b, double max_winding) {
    if (a.blew_up || b.blew_up) return false;
    if (a.winding > max_winding || b.winding > max_winding) return false;
    const Resid ra = terminal_offset(rL, a.theta_L, a.zL);
    const Resid rb = terminal_offset(rL, b.theta_L, b.zL);
    if (!ra.valid || !rb.valid) return false;
    if (ra.val == 0.0) return true;
    if ((ra.val > 0.0) == (rb.val > 0.0)) return false;
    // Angular residuals also flip sign across the branch cut at +-pi; a true
    // crossing passes through zero, so the two offsets stay within half a
    // turn of each other.
    if (ra.angular && std::fabs(ra.val) + std::fabs(rb.val) >= kPi) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Arc parametrization.

PhasePoint arc_point(const ProblemSpec& pb, const BoundaryArc& arc, double s) {
    (void)pb;
    if (!(s >= 0.0) || !std::isfinite(s))
        throw ConfigError("arc_point: parameter must be finite and >= 0");
    if (arc.kind == ArcKind::param_curve) {
        const auto& pts = arc.samples;
        if (pts.empty())
            throw ConfigError("arc_point: empty polyline arc");
        if (pts.size() == 1 || s >= 1.0) return pts.back();
        const double total = polyline_length(pts);
        if (total == 0.0) return pts.front();
        double want = s * total;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double seg =
                std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
            if (want <= seg) {
                const double w = seg > 0.0 ? want / seg : 0.0;
                return PhasePoint{pts[i - 1].x + w * (pts[i].x - pts[i - 1].x),
                                  pts[i - 1].y + w * (pts[i].y - pts[i - 1].y)};
            }
            want -= seg;
        }
        return pts.back();
    }
    const Dir d = arc_direction(arc);
    return PhasePoint{s * d.ux, s * d.uy};
}

ArcSpan default_span(const ProblemSpec& pb, const BoundaryArc& arc,
                     double max_winding, double tol) {
    if (!(max_winding > 0.0))
        throw ConfigError("default_span: max_winding must be positive");
    if (arc.kind == ArcKind::param_curve) return ArcSpan{0.0, 1.0};

    const Dir d = arc_direction(arc);
    const double cap = std::min(domain_cap(pb.h, d.uy), 1e9);
    double s = std::min(1.0, 0.5 * cap);
    for (int k = 0; k < 60; ++k) {
        const ArcSample probe = run_sample(pb, arc, s, tol);
        if (probe.blew_up || probe.winding >= max_winding) break;
        if (s >= 0.999 * cap) break;
        s = std::min(2.0 * s, cap);
    }
    return ArcSpan{1e-9 * s, s};
}

// ---------------------------------------------------------------------------
// Scanning.

std::vector<ArcSample> scan_arc(const ProblemSpec& pb, const BoundaryArc& r0,
                                int n_samples, ArcSpan span, double tol) {
    // A one-point polyline is a degenerate arc: a single sample.
    if (r0.kind == ArcKind::param_curve && r0.samples.size() == 1)
        return {run_sample(pb, r0, 0.0, tol)};
    if (n_samples < 2)
        throw ConfigError("scan_arc: need at least 2 samples");
    if (span.empty())
        span = default_span(pb, r0, kTwoPi * (pb.weight.m() + 4), tol);

    std::vector<ArcSample> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double s =
            span.lo + (span.hi - span.lo) * j / static_cast<double>(n_samples - 1);
        out.push_back(run_sample(pb, r0, s, tol));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Itinerary inference and classification.

Itinerary infer_itinerary(const ProblemSpec& pb, const Trajectory& traj) {
    const StepWeight& w = pb.weight;
    const int m = w.m();
    auto half_plane = [&](double t) {
        double a = std::fmod(theta_at(traj, t), kTwoPi);
        if (a < 0.0) a += kTwoPi;
        return a < kPi ? Kappa::I : Kappa::III;
    };

    Itinerary it;
    it.kappa0 = half_plane(w.t(0));
    Kappa prev = it.kappa0;
    for (int i = 0; i < m; ++i) {
        const Kappa next = half_plane(w.t(i + 1));
        ItineraryStep st;
        st.to = next;
        st.target =
            next == prev ? StepTarget::horizontal : StepTarget::diagonal;
        if (pb.lambda < 0.0) {
            const int crossings =
                count_zeros(traj, Component::x, w.s(i), w.t(i + 1), WindowKind::open);
            st.channel = crossings % 2 == 1 ? GapChannel::sweep : GapChannel::loop;
        } else {
            st.channel = GapChannel::sweep;
        }
        it.steps.push_back(st);
        prev = next;
    }
    return it;
}

NodalSignature classify_nodal(const NodalSolution& sol, const ProblemSpec& pb) {
    const Trajectory& traj = sol.trajectory;
    const StepWeight& w = pb.weight;
    const int m = w.m();

    // A boundary condition pinning x(0) or x(L) to zero is met only to the
    // terminal-residual tolerance, so the matching crossing event lands a
    // hair inside [0, L].  Crossings within this edge band belong to the
    // boundary, not the interior, and excluding them keeps the counts stable
    // under re-integration at other tolerances.
    const double edge = 1e-6 * w.L();

    NodalSignature sig;
    for (int i = 0; i <= m; ++i) {
        const double lo = i == 0 ? w.t(0) + edge : w.t(i);
        const double hi = i == m ? w.s(m) - edge : w.s(i);
        sig.hump_x.push_back(
            count_zeros(traj, Component::x, lo, hi, WindowKind::open));
        sig.hump_y.push_back(
            count_zeros(traj, Component::y, w.t(i), w.s(i), WindowKind::closed));
        sig.winding_index.push_back((sig.hump_x.back() + 1) / 2);
    }
    for (int i = 0; i < m; ++i) {
        sig.gap_x.push_back(
            count_zeros(traj, Component::x, w.s(i), w.t(i + 1), WindowKind::open));
        sig.gap_y.push_back(
            count_zeros(traj, Component::y, w.s(i), w.t(i + 1), WindowKind::open));
    }
    sig.total_interior_x =
        count_zeros(traj, Component::x, edge, w.L() - edge, WindowKind::open);

    // Simplicity of the x-zeros: the crossing speed is h(y), so |y| must
    // clear a band relative to the trajectory amplitude.
    double scale = 0.0;
    for (const Sample& smp : traj.samples)
        scale = std::max({scale, std::fabs(smp.z.x), std::fabs(smp.z.y)});
    for (const Event& ev : traj.events)
        if (ev.kind == EventKind::x_zero && std::fabs(ev.z.y) <= 1e-8 * scale)
            sig.zeros_simple = false;

    // Coherence with the recorded itinerary.
    const std::vector<Kappa> seq = sol.itinerary.sequence();
    std::ostringstream why;
    if (static_cast<int>(seq.size()) != m + 1) {
        why << "itinerary lists " << seq.size() - 1 << " gaps, weight has " << m;
    } else {
        for (int i = 0; i < m && why.str().empty(); ++i) {
            const int between = sig.hump_x[static_cast<std::size_t>(i)] +
                                sig.gap_x[static_cast<std::size_t>(i)];
            const bool flips = between % 2 == 1;
            const bool expect = seq[static_cast<std::size_t>(i + 1)] !=
                                seq[static_cast<std::size_t>(i)];
            const ItineraryStep& st = sol.itinerary.steps[static_cast<std::size_t>(i)];
            const int gap_x = sig.gap_x[static_cast<std::size_t>(i)];
            if (flips != expect)
                why << "half-plane flip across gap " << i
                    << " disagrees with the crossing parity (" << between << ")";
            else if (pb.lambda < 0.0 &&
                     (gap_x % 2 == 1) != (st.channel == GapChannel::sweep))
                why << "gap " << i << " channel "
                    << (st.channel == GapChannel::sweep ? "sweep" : "loop")
                    << " disagrees with " << gap_x << " crossings";
            else if (pb.lambda <= 0.0 && gap_x > 1)
                why << "gap " << i << " has " << gap_x
                    << " crossings; at most 1 expected without winding";
            else if (pb.lambda > 0.0 && gap_x % 2 == 0)
                why << "gap " << i << " has an even crossing count " << gap_x
                    << "; an odd-quadrant handoff needs an odd one";
        }
    }
    sig.detail = why.str();
    sig.consistent = sig.detail.empty();
    return sig;
}

// ---------------------------------------------------------------------------
// The search.

std::vector<NodalSolution> find_solutions(const ProblemSpec& pb,
                                          const BoundaryArc& r0,
                                          const BoundaryArc& rL,
                                          double max_winding,
                                          const ShootOptions& opts) {
    if (!(max_winding > 0.0))
        throw ConfigError("find_solutions: max_winding must be positive");
    if (rL.kind == ArcKind::param_curve)
        throw ConfigError("find_solutions: rL must be an axis or ray arc");
    if (opts.samples_per_turn < 2)
        throw ConfigError("find_solutions: need samples_per_turn >= 2");

    ArcSpan span = opts.span;
    if (span.empty()) span = default_span(pb, r0, max_winding, opts.tol);
    if (span.empty()) {
        log_msg(LogLevel::info, "find_solutions: empty scan span, no search");
        return {};
    }

    const int turns =
        std::max(1, static_cast<int>(std::ceil(max_winding / kTwoPi)));
    long long n = static_cast<long long>(opts.samples_per_turn) * turns + 1;
    n = std::min<long long>(n, 1 << 20);

    // Dense tabulation, doubled until the bracket count stabilizes twice.
    std::vector<ArcSample> grid =
        scan_arc(pb, r0, static_cast<int>(n), span, opts.tol);
    auto count_brackets = [&](const std::vector<ArcSample>& g) {
        int c = 0;
        for (std::size_t j = 1; j < g.size(); ++j)
            if (bracket_between(rL, g[j - 1], g[j], max_winding)) ++c;
        return c;
    };
    int stable = 0;
    int brackets = count_brackets(grid);
    for (int round = 0; round < opts.max_doublings && stable < 2; ++round) {
        std::vector<ArcSample> finer;
        finer.reserve(2 * grid.size() - 1);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            finer.push_back(grid[j]);
            if (j + 1 < grid.size())
                finer.push_back(run_sample(
                    pb, r0, 0.5 * (grid[j].s + grid[j + 1].s), opts.tol));
        }
        grid.swap(finer);
        const int now = count_brackets(grid);
        stable = now == brackets ? stable + 1 : 0;
        brackets = now;
    }

    const double s_tol = opts.param_tol * (span.hi - span.lo);
    std::vector<NodalSolution> found;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        if (!bracket_between(rL, grid[j - 1], grid[j], max_winding)) continue;
        double sa = grid[j - 1].s, sb = grid[j].s;
        double va = terminal_offset(rL, grid[j - 1].theta_L, grid[j - 1].zL).val;
        bool dead = false;
        while (sb - sa > s_tol) {
            const double sm = 0.5 * (sa + sb);
            const ArcSample mid = run_sample(pb, r0, sm, opts.tol);
            const Resid rm = terminal_offset(rL, mid.theta_L, mid.zL);
            if (mid.blew_up || !rm.valid) {
                log_msg(LogLevel::info,
                        "find_solutions: bracket at s=%.17g lost to blow-up", sm);
                dead = true;
                break;
            }
            if ((rm.val > 0.0) == (va > 0.0)) {
                sa = sm;
                va = rm.val;
            } else {
                sb = sm;
            }
        }
        if (dead) continue;

        NodalSolution sol;
        sol.s = 0.5 * (sa + sb);
        sol.z0 = arc_point(pb, r0, sol.s);
        try {
            sol.trajectory = integrate(pb, sol.z0, 0.0, pb.weight.L(), opts.tol);
        } catch (const NodalError& e) {
            log_msg(LogLevel::info, "find_solutions: s=%.17g discarded: %s",
                    sol.s, e.what());
            continue;
        }
        if (sol.trajectory.blew_up) {
            log_msg(LogLevel::info,
                    "find_solutions: s=%.17g discarded: trajectory blow-up",
                    sol.s);
            continue;
        }
        sol.theta_L = sol.trajectory.theta_end();
        if (sol.theta_L - sol.trajectory.theta_begin() > max_winding) continue;
        sol.terminal_residual = arc_distance(rL, sol.trajectory.z_end());
        try {
            sol.itinerary = infer_itinerary(pb, sol.trajectory);
            sol.signature = classify_nodal(sol, pb);
        } catch (const TangentialZeroError& e) {
            log_msg(LogLevel::info,
                    "find_solutions: s=%.17g discarded: %s", sol.s, e.what());
            continue;
        }
        if (!sol.signature.zeros_simple) {
            log_msg(LogLevel::info,
                    "find_solutions: s=%.17g discarded: non-simple x-zero",
                    sol.s);
            continue;
        }

        bool dup = false;
        for (const NodalSolution& kept : found) {
            const double d = std::hypot(kept.z0.x - sol.z0.x, kept.z0.y - sol.z0.y);
            const double ref =
                std::max(1.0, std::hypot(sol.z0.x, sol.z0.y));
            if (d <= opts.dedup_tol * ref) {
                dup = true;
                break;
            }
        }
        if (!dup) found.push_back(std::move(sol));
    }
    return found;
}

}  // namespace nodal
