// flow.cpp — switched-system trajectories: integration, events, winding,
// zero counts, Poincare maps.

#include "nodal/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace nodal {

namespace {

using State = std::array<double, 2>;

// Velocities are clamped so the right-hand side stays finite even if a step
// probes past a finite h-domain endpoint; the blow-up guard truncates the
// trajectory before such values can matter.
constexpr double kSpeedClamp = 1e12;

struct SwitchedRhs {
    const ProblemSpec* pb;
    double mu;  // active weight height (0 on gap intervals)

    void operator()(const State& s, State& d, double) const {
        double v = eval_h_inf(pb->h, s[1]);
        if (!std::isfinite(v)) v = s[1] > 0.0 ? kSpeedClamp : -kSpeedClamp;
        d[0] = std::clamp(v, -kSpeedClamp, kSpeedClamp);
        d[1] = -pb->lambda * s[0] - mu * eval_g(pb->g, s[0]);
    }
};

auto make_stepper(double tol) {
    using namespace boost::numeric::odeint;
    return make_dense_output(tol, tol, runge_kutta_dopri5<State>());
}
using DenseStepper = decltype(make_stepper(1e-10));

double raw_angle(const State& s) { return std::atan2(s[0], s[1]); }

PhasePoint to_point(const State& s) { return PhasePoint{s[0], s[1]}; }

// Traversal-ordered node on the dense output of the current step.
struct Node {
    double t;
    State z;
};

struct GuardBand {
    bool upper_finite = false, lower_finite = false;
    double upper = 0.0, lower = 0.0;  // y values of the band edges

    explicit GuardBand(const HomeoSpec& h) {
        const double eps = eps_dom(h);
        if (std::isfinite(h.rho_plus)) {
            upper_finite = true;
            upper = h.rho_plus - eps;
        }
        if (std::isfinite(h.rho_minus)) {
            lower_finite = true;
            lower = h.rho_minus + eps;
        }
    }
    // Positive strictly inside, crosses zero at the band edge.
    double clearance(double y) const {
        double c = kInf;
        if (upper_finite) c = std::min(c, upper - y);
        if (lower_finite) c = std::min(c, y - lower);
        return c;
    }
};

struct FlowBuilder {
    const ProblemSpec* pb;
    double t_tol;
    int dir;  // +1 forward in time, -1 backward
    Trajectory traj;

    double along(double t) const { return dir * t; }

    void push_sample(double t, const State& z) {
        if (!traj.samples.empty()) {
            const double prev = traj.samples.back().t;
            if (along(t) <= along(prev) + 0.25 * t_tol) return;
        }
        traj.samples.push_back({t, to_point(z)});
    }

    void push_event(EventKind k, double t, const State& z, int direction) {
        for (auto it = traj.events.rbegin(); it != traj.events.rend(); ++it) {
            if (std::fabs(it->t - t) > 8.0 * t_tol) break;
            if (it->kind == k) return;  // duplicate from an adjacent scan
        }
        traj.events.push_back({k, t, to_point(z), direction});
    }
};

// Subdivide the dense span so consecutive nodes never differ by more than
// ~0.45 rad in angle; this keeps the sampled angle unwrappable and thickens
// the event scan grid exactly where the motion turns fastest.
void refine_nodes(DenseStepper& st, const FlowBuilder& fb, std::vector<Node>& out,
                  const Node& a, const Node& b, int depth) {
    const double da = raw_angle(a.z), db = raw_angle(b.z);
    double gap = std::fabs(db - da);
    if (gap > 3.14159265358979323846) gap = 2.0 * 3.14159265358979323846 - gap;
    if (gap > 0.45 && depth < 26 &&
        std::fabs(b.t - a.t) > 4.0 * fb.t_tol) {
        Node mid;
        mid.t = 0.5 * (a.t + b.t);
        st.calc_state(mid.t, mid.z);
        refine_nodes(st, fb, out, a, mid, depth + 1);
        refine_nodes(st, fb, out, mid, b, depth + 1);
        return;
    }
    out.push_back(b);
}

// Bisect a sign change of value() between traversal-adjacent nodes on the
// dense output.  Signs at both ends are strict and opposite.
template <typename ValueFn>
Node bisect_on_dense(DenseStepper& st, ValueFn&& value, Node lo, Node hi,
                     double t_tol) {
    double flo = value(lo.z);
    for (int iter = 0; iter < 200 && std::fabs(hi.t - lo.t) > t_tol; ++iter) {
        Node mid;
        mid.t = 0.5 * (lo.t + hi.t);
        st.calc_state(mid.t, mid.z);
        const double fm = value(mid.z);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Node best;
    best.t = 0.5 * (lo.t + hi.t);
    st.calc_state(best.t, best.z);
    return best;
}

struct PendingEvent {
    EventKind kind;
    Node at;
    int direction;
};

// Scan one dense span (traversal order a -> b) for axis crossings and guard
// entries; refined nodes become samples, crossings become events.  Returns
// true when a blow-up truncated the trajectory.
bool scan_span(DenseStepper& st, FlowBuilder& fb, const SwitchedRhs& rhs,
               const GuardBand& band, const Node& a, const Node& b) {
    std::vector<Node> nodes;
    nodes.push_back(a);
    {
        // Base subdivision: two same-component crossings inside one cell
        // would need the component's own nullcline crossing squeezed in as
        // well, so a modest floor plus the angle refinement is enough.
        constexpr int kBaseCells = 6;
        Node prev = a;
        for (int j = 1; j <= kBaseCells; ++j) {
            Node nj;
            nj.t = a.t + (b.t - a.t) * (static_cast<double>(j) / kBaseCells);
            if (j == kBaseCells)
                nj = b;
            else
                st.calc_state(nj.t, nj.z);
            refine_nodes(st, fb, nodes, prev, nj, 0);
            prev = nj;
        }
    }

    std::vector<PendingEvent> found;
    auto x_of = [](const State& z) { return z[0]; };
    auto y_of = [](const State& z) { return z[1]; };
    auto clearance_of = [&band](const State& z) { return band.clearance(z[1]); };

    auto scan_component = [&](auto&& value, EventKind kind) {
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double va = value(nodes[i].z);
            const double vb = value(nodes[i + 1].z);
            Node hit;
            if (va == 0.0) {
                if (fb.traj.samples.size() <= 1 && i == 0)
                    continue;  // the window's own start point, not a crossing
                hit = nodes[i];
            } else if (va * vb < 0.0) {
                hit = bisect_on_dense(st, value, nodes[i], nodes[i + 1], fb.t_tol);
            } else {
                continue;
            }
            State deriv;
            rhs(hit.z, deriv, hit.t);
            int direction = 0;
            if (kind == EventKind::x_zero)
                direction = deriv[0] > 0.0 ? 1 : -1;
            else if (kind == EventKind::y_zero)
                direction = deriv[1] > 0.0 ? 1 : -1;
            else
                direction = hit.z[1] > 0.0 ? 1 : -1;  // blow-up side
            found.push_back({kind, hit, direction});
        }
    };
    scan_component(x_of, EventKind::x_zero);
    scan_component(y_of, EventKind::y_zero);
    if (band.upper_finite || band.lower_finite)
        scan_component(clearance_of, EventKind::blow_up);

    std::sort(found.begin(), found.end(),
              [&](const PendingEvent& l, const PendingEvent& r) {
                  return fb.along(l.at.t) < fb.along(r.at.t);
              });

    // Merge nodes and events into the sample stream in traversal order.
    std::size_t next_node = 1;  // nodes[0] is already the last pushed sample
    for (const PendingEvent& ev : found) {
        while (next_node < nodes.size() &&
               fb.along(nodes[next_node].t) < fb.along(ev.at.t)) {
            fb.push_sample(nodes[next_node].t, nodes[next_node].z);
            ++next_node;
        }
        fb.push_sample(ev.at.t, ev.at.z);
        if (ev.kind == EventKind::blow_up) {
            fb.push_event(EventKind::blow_up, ev.at.t, ev.at.z, ev.direction);
            fb.traj.blew_up = true;
            return true;
        }
        fb.push_event(ev.kind, ev.at.t, ev.at.z, ev.direction);
    }
    while (next_node < nodes.size()) {
        fb.push_sample(nodes[next_node].t, nodes[next_node].z);
        ++next_node;
    }
    return false;
}

// Integrate one weight interval (traversal window a -> b, constant mu).
// Returns true when a blow-up truncated the trajectory.
bool run_segment(FlowBuilder& fb, const GuardBand& band, double mu, double a,
                 double b, State& z, double tol) {
    SwitchedRhs rhs{fb.pb, mu};
    DenseStepper st = make_stepper(tol);
    const double span = b - a;
    st.initialize(z, a, span / 16.0);

    while (fb.along(st.current_time()) < fb.along(b) - 0.25 * fb.t_tol) {
        Node prev{st.current_time(), st.current_state()};
        st.do_step(rhs);
        Node cur{st.current_time(), st.current_state()};
        if (fb.along(cur.t) > fb.along(b)) {
            cur.t = b;
            st.calc_state(b, cur.z);
        }
        if (scan_span(st, fb, rhs, band, prev, cur)) return true;
        if (cur.t == b) break;
    }
    // Land exactly on the interval edge.
    State zb;
    st.calc_state(b, zb);
    fb.push_sample(b, zb);
    z = zb;
    return false;
}

void unwrap_theta(Trajectory& traj) {
    constexpr double pi = 3.14159265358979323846;
    traj.theta.clear();
    traj.theta.reserve(traj.samples.size());
    double prev_raw = std::atan2(traj.samples.front().z.x, traj.samples.front().z.y);
    double theta = prev_raw < 0.0 ? prev_raw + 2.0 * pi : prev_raw;
    traj.theta.push_back(theta);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const double raw = std::atan2(traj.samples[i].z.x, traj.samples[i].z.y);
        double d = raw - prev_raw;
        if (d > pi) d -= 2.0 * pi;
        if (d <= -pi) d += 2.0 * pi;
        theta += d;
        traj.theta.push_back(theta);
        prev_raw = raw;
    }
}

}  // namespace

Trajectory integrate(const ProblemSpec& pb, PhasePoint z0, double t0,
                     double t1, double tol) {
    const double L = pb.weight.L();
    const double t_tol = 1e-12 * std::max(1.0, L);
    if (!(std::isfinite(t0) && std::isfinite(t1)) || t0 == t1)
        throw InvalidWindowError("integrate: empty or non-finite window");
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    if (lo < -t_tol || hi > L + t_tol)
        throw InvalidWindowError("integrate: window outside the weight span");
    if (!(std::isfinite(z0.x) && std::isfinite(z0.y)))
        throw DomainViolation("integrate: non-finite initial point");
    const GuardBand band(pb.h);
    if (band.clearance(z0.y) <= 0.0)
        throw DomainViolation("integrate: initial y inside the h-domain guard band");

    FlowBuilder fb;
    fb.pb = &pb;
    fb.t_tol = t_tol;
    fb.dir = t1 > t0 ? 1 : -1;
    fb.traj.t_tol = t_tol;

    // Interval edges strictly between t0 and t1, in traversal order.
    std::vector<double> cuts;
    const StepWeight& w = pb.weight;
    for (int k = 0; k < w.interval_count() + 1; ++k) {
        const double e = w.edge(k);
        if (e > lo + t_tol && e < hi - t_tol) cuts.push_back(e);
    }
    if (fb.dir < 0) std::reverse(cuts.begin(), cuts.end());
    cuts.push_back(t1);

    State z{z0.x, z0.y};
    fb.push_sample(t0, z);
    double a = t0;
    for (std::size_t ci = 0; ci < cuts.size(); ++ci) {
        const double b = cuts[ci];
        const int k = w.locate(0.5 * (a + b));
        if (ci > 0) {
            // Crossing an interior breakpoint: the state is already exact
            // there, record which kind of interval the motion enters.
            fb.push_event(EventKind::hump_switch, a, z,
                          w.interval_is_hump(k) ? -1 : 1);
        }
        if (run_segment(fb, band, w.interval_mu(k), a, b, z, tol)) break;
        a = b;
    }

    unwrap_theta(fb.traj);
    return std::move(fb.traj);
}

PhasePoint poincare_phi(const ProblemSpec& pb, int i, PhasePoint z0, double tol) {
    if (i < 0 || i > pb.weight.m())
        throw ConfigError("poincare_phi: hump index out of range");
    Trajectory tr = integrate(pb, z0, pb.weight.t(i), pb.weight.s(i), tol);
    if (tr.blew_up)
        throw BlowUpError("poincare_phi: trajectory blew up inside the hump");
    return tr.z_end();
}

PhasePoint poincare_psi(const ProblemSpec& pb, int i, PhasePoint z0, double tol) {
    if (i < 0 || i > pb.weight.m() - 1)
        throw ConfigError("poincare_psi: gap index out of range");
    Trajectory tr = integrate(pb, z0, pb.weight.s(i), pb.weight.t(i + 1), tol);
    if (tr.blew_up)
        throw BlowUpError("poincare_psi: trajectory blew up inside the gap");
    return tr.z_end();
}

PhasePoint poincare_full(const ProblemSpec& pb, PhasePoint z0, double tol) {
    Trajectory tr = integrate(pb, z0, 0.0, pb.weight.L(), tol);
    if (tr.blew_up)
        throw BlowUpError("poincare_full: trajectory blew up inside [0, L]");
    return tr.z_end();
}

double winding(const Trajectory& traj) {
    double rmax = 0.0, rmin = kInf;
    for (const Sample& s : traj.samples) {
        const double r = std::hypot(s.z.x, s.z.y);
        rmax = std::max(rmax, r);
        rmin = std::min(rmin, r);
    }
    if (!(rmin > 1e-9 * rmax))
        throw OriginCrossingError(
            "winding: trajectory passes too close to the origin");
    return traj.theta.back() - traj.theta.front();
}

namespace {

double component_of(const PhasePoint& z, Component c) {
    return c == Component::x ? z.x : z.y;
}

EventKind kind_of(Component c) {
    return c == Component::x ? EventKind::x_zero : EventKind::y_zero;
}

// Linear interpolation of the component at time t from the sample list
// (samples are traversal-ordered; the pair bracketing t is found by scan).
double value_at(const Trajectory& traj, Component c, double t) {
    const auto& ss = traj.samples;
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
        const double ta = ss[i].t, tb = ss[i + 1].t;
        if ((t - ta) * (t - tb) <= 0.0) {
            const double va = component_of(ss[i].z, c);
            const double vb = component_of(ss[i + 1].z, c);
            if (ta == tb) return va;
            return va + (vb - va) * (t - ta) / (tb - ta);
        }
    }
    const double d_front = std::fabs(t - ss.front().t);
    const double d_back = std::fabs(t - ss.back().t);
    return component_of((d_front <= d_back ? ss.front() : ss.back()).z, c);
}

}  // namespace

int count_zeros(const Trajectory& traj, Component comp, double a, double b,
                WindowKind wk) {
    if (traj.samples.empty()) return 0;
    const double wa = std::min(a, b), wb = std::max(a, b);
    const double tt = 8.0 * traj.t_tol;

    double scale = 0.0;
    for (const Sample& s : traj.samples)
        scale = std::max(scale, std::fabs(component_of(s.z, comp)));
    const double touch_tol = 1e-9 * std::max(scale, 1e-30);

    const EventKind want = kind_of(comp);
    int interior = 0;
    bool at_lo = false, at_hi = false;
    for (const Event& ev : traj.events) {
        if (ev.kind != want) continue;
        if (ev.t > wa + tt && ev.t < wb - tt)
            ++interior;
        else if (std::fabs(ev.t - wa) <= tt)
            at_lo = true;
        else if (std::fabs(ev.t - wb) <= tt)
            at_hi = true;
    }

    // Consistency guard: a sign change between samples must have an event.
    const auto& ss = traj.samples;
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
        const double va = component_of(ss[i].z, comp);
        const double vb = component_of(ss[i + 1].z, comp);
        if (va * vb >= 0.0) continue;
        const double tlo = std::min(ss[i].t, ss[i + 1].t) - tt;
        const double thi = std::max(ss[i].t, ss[i + 1].t) + tt;
        bool matched = false;
        for (const Event& ev : traj.events)
            if (ev.kind == want && ev.t >= tlo && ev.t <= thi) matched = true;
        if (!matched)
            throw NumericalFailure(
                "count_zeros: sampled sign change without a located event");
    }

    // Tangential touches: a strict local minimum of |component| dipping below
    // the touch tolerance between same-signed neighbors, with no crossing
    // event nearby, is a sign-preserving zero the transversal count cannot
    // absorb.  (A monotone decay toward a window end is not a touch.)
    for (std::size_t i = 1; i + 1 < ss.size(); ++i) {
        const double v = std::fabs(component_of(ss[i].z, comp));
        if (v >= touch_tol) continue;
        const double prev = component_of(ss[i - 1].z, comp);
        const double next = component_of(ss[i + 1].z, comp);
        if (!(std::fabs(prev) > v && std::fabs(next) > v)) continue;
        if (prev * next < 0.0) continue;  // transversal, handled above
        const double t = ss[i].t;
        if (t < wa + tt || t > wb - tt) continue;
        if (std::fabs(t - traj.t_begin()) <= tt ||
            std::fabs(t - traj.t_end()) <= tt)
            continue;
        bool near_event = false;
        for (const Event& ev : traj.events)
            if (ev.kind == want && std::fabs(ev.t - t) <= 16.0 * traj.t_tol)
                near_event = true;
        if (!near_event)
            throw TangentialZeroError(
                "count_zeros: component touches zero without a sign change");
    }

    if (wk == WindowKind::open) return interior;
    const bool lo_zero = at_lo || std::fabs(value_at(traj, comp, wa)) <= touch_tol;
    const bool hi_zero = at_hi || std::fabs(value_at(traj, comp, wb)) <= touch_tol;
    return interior + (lo_zero ? 1 : 0) + (hi_zero ? 1 : 0);
}

int count_zeros(const Trajectory& traj, Component comp, WindowKind wk) {
    return count_zeros(traj, comp, traj.t_begin(), traj.t_end(), wk);
}

double max_conservation_drift(const ProblemSpec& pb, const Trajectory& traj) {
    const auto& ss = traj.samples;
    if (ss.size() < 2) return 0.0;
    auto energy = [&](const PhasePoint& z, int k) {
        return pb.weight.interval_is_hump(k)
                   ? hamiltonian(pb, k / 2, z.x, z.y)
                   : linear_energy(pb, z.x, z.y);
    };
    double worst = 0.0;
    int cur = -1;
    double ref = 0.0, denom = 1.0;
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
        const int k = pb.weight.locate(0.5 * (ss[i].t + ss[i + 1].t));
        if (k != cur) {
            cur = k;
            ref = energy(ss[i].z, k);
            denom = std::max(std::fabs(ref), 1e-12);
        }
        const double e = energy(ss[i + 1].z, k);
        worst = std::max(worst, std::fabs(e - ref) / denom);
    }
    return worst;
}

}  // namespace nodal
