// flow.hpp — trajectories of the switched planar system with event records.
//
// integrate() advances x' = h(y), y' = -lambda x - a(t) g(x) across the
// weight's hump/gap intervals, restarting exactly at every breakpoint,
// locating axis crossings on the integrator's dense output, and stopping
// with a blow-up event when y enters the guard band of a finite h-domain
// endpoint.  The interval Poincare maps and their full composition wrap
// integrate(); winding angles and component zero counts read the sampled
// angle and event records of a finished trajectory.

#pragma once

#include <vector>

#include "nodal/errors.hpp"
#include "nodal/model.hpp"

namespace nodal {

enum class EventKind { x_zero, y_zero, hump_switch, blow_up };

struct Event {
    EventKind kind = EventKind::x_zero;
    double t = 0.0;
    PhasePoint z;
    // x_zero / y_zero: sign of the crossing component's time derivative at
    // the event (+1 rising, -1 falling).  hump_switch: +1 when the switch
    // enters a gap interval, -1 when it enters a hump.  blow_up: +1 at the
    // upper domain endpoint, -1 at the lower.
    int direction = 0;
};

struct Sample {
    double t = 0.0;
    PhasePoint z;
};

// A finished trajectory.  Samples follow traversal order (increasing t for a
// forward window, decreasing for a reversed one) and are dense enough that
// consecutive angles differ by well under pi.  theta is the continuous
// clockwise angle from the positive y-axis, unwrapped along traversal with
// theta[0] in [0, 2 pi); it is aligned index-for-index with samples.
struct Trajectory {
    std::vector<Sample> samples;
    std::vector<double> theta;
    std::vector<Event> events;
    bool blew_up = false;
    double t_tol = 1e-12;  // event-time resolution the run was located at

    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
    const PhasePoint& z_begin() const { return samples.front().z; }
    const PhasePoint& z_end() const { return samples.back().z; }
    double theta_begin() const { return theta.front(); }
    double theta_end() const { return theta.back(); }
};

// Advance z0 over the window from t0 to t1 with local error tol.  Both ends
// must lie in the weight's [0, L] span; a reversed window (t0 > t1)
// integrates backward in time, which is what "integrate forward, then feed
// the endpoint back in with the window flipped" needs for reversibility
// checks.  Event times are refined to 1e-12 * max(1, L); an axis crossing
// that lands exactly on a breakpoint is attributed to the incoming interval.
// Entering the h-domain guard band stops integration with a blow_up event
// (reported in the trajectory, not thrown).
Trajectory integrate(const ProblemSpec& pb, PhasePoint z0, double t0,
                     double t1, double tol = 1e-10);

// Poincare map of hump i (window [t_i, s_i]).  0 <= i <= m.
PhasePoint poincare_phi(const ProblemSpec& pb, int i, PhasePoint z0,
                        double tol = 1e-10);
// Poincare map of gap i (window [s_i, t_{i+1}]).  0 <= i <= m - 1.
PhasePoint poincare_psi(const ProblemSpec& pb, int i, PhasePoint z0,
                        double tol = 1e-10);
// Full composition over [0, L]: Phi_m . Psi_{m-1} . ... . Psi_0 . Phi_0.
PhasePoint poincare_full(const ProblemSpec& pb, PhasePoint z0,
                         double tol = 1e-10);

// Total clockwise angle swept, theta(end) - theta(begin).  Requires the
// trajectory to keep min radius > 1e-9 * (max radius); otherwise the angle
// is meaningless and OriginCrossingError is thrown.
double winding(const Trajectory& traj);

enum class Component { x, y };
enum class WindowKind { open, closed };

// Number of simple sign changes of the chosen component strictly inside
// (a, b), plus the endpoint zeros when the window is closed.  A
// sign-preserving touch of zero (|component| below 1e-9 of its max with no
// crossing event nearby) raises TangentialZeroError instead of guessing.
int count_zeros(const Trajectory& traj, Component comp, double a, double b,
                WindowKind wk);
// Same over the trajectory's whole window.
int count_zeros(const Trajectory& traj, Component comp, WindowKind wk);

// Largest relative drift of the conserved quantity across the trajectory:
// the hump Hamiltonian H(y) + lambda x^2/2 + mu_i G(x) on hump intervals,
// the linear energy H(y) + lambda x^2/2 on gaps, each measured against its
// value where the trajectory enters the interval.
double max_conservation_drift(const ProblemSpec& pb, const Trajectory& traj);

}  // namespace nodal
