// shoot.hpp — locating and classifying actual boundary-value solutions by
// shooting along a boundary arc.
//
// The search parametrizes the starting arc r0, integrates the switched flow
// over [0, L] on a dense grid of starting points, brackets the parameters
// where the endpoint meets the terminal arc rL (a scalar signed residual:
// wrapped angle offset for axis arcs, signed normal distance for rays), and
// refines each bracket by bisection.  Every accepted solution carries its
// full trajectory, the inferred hump-quadrant itinerary, and per-interval
// nodal counts.  The result is a list of found solutions — a lower bound
// witness, with no completeness claim.

#pragma once

#include <string>
#include <vector>

#include "nodal/certify.hpp"
#include "nodal/flow.hpp"
#include "nodal/model.hpp"

namespace nodal {

// ---------------------------------------------------------------------------
// Arc parametrization.

// Parameter range of a boundary arc.  Axis and ray arcs use arclength from
// the origin; sampled polylines use normalized arclength in [0, 1].
struct ArcSpan {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(hi > lo); }
};

// Point of the arc at parameter s (s >= 0; s <= 1 for polylines).
PhasePoint arc_point(const ProblemSpec& pb, const BoundaryArc& arc, double s);

// Parameter range worth scanning: polylines get [0, 1]; axis and ray arcs
// grow geometrically from 1 until the full-span winding of the trajectory
// reaches max_winding, the trajectory blows up, or the arc leaves the
// h-domain, then set lo = 1e-9 * hi.
ArcSpan default_span(const ProblemSpec& pb, const BoundaryArc& arc,
                     double max_winding, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Dense endpoint tabulation along the arc.

struct ArcSample {
    double s = 0.0;        // arc parameter
    PhasePoint z0;         // starting point
    PhasePoint zL;         // endpoint of the [0, L] trajectory
    double theta0 = 0.0;   // starting clockwise angle in [0, 2 pi)
    double theta_L = 0.0;  // unwrapped final clockwise angle
    double winding = 0.0;  // theta_L - theta0
    bool blew_up = false;  // trajectory hit the h-domain guard band
};

// Endpoint angle/position of the full composition along n_samples equally
// spaced parameters.  An empty span derives default_span with the cap
// 2 pi (m + 4).  Blown-up samples are flagged, not dropped, so the
// tabulation stays dense; their theta_L/zL hold the state at the stop time.
std::vector<ArcSample> scan_arc(const ProblemSpec& pb, const BoundaryArc& r0,
                                int n_samples, ArcSpan span = {},
                                double tol = 1e-10);

// ---------------------------------------------------------------------------
// Nodal classification.

// Per-interval zero counts of a solution trajectory and their coherence
// with the recorded itinerary.  x-zeros are counted on open intervals
// (simple interior sign changes); y-zeros on closed hump windows and open
// gap windows.
struct NodalSignature {
    std::vector<int> hump_x;         // open (t_i, s_i)
    std::vector<int> gap_x;          // open (s_i, t_{i+1})
    std::vector<int> hump_y;         // closed [t_i, s_i]
    std::vector<int> gap_y;          // open (s_i, t_{i+1})
    std::vector<int> winding_index;  // ceil(hump_x/2): full turns inside the hump
    int total_interior_x = 0;        // open (0, L)
    bool zeros_simple = true;        // every x-zero has |y| > 1e-8 * scale
    bool consistent = false;         // counts match the itinerary's pattern
    std::string detail;              // first inconsistency, empty when none
};

// ---------------------------------------------------------------------------
// Found solutions.

struct NodalSolution {
    double s = 0.0;                  // arc parameter of the initial point
    PhasePoint z0;                   // initial point on r0
    Itinerary itinerary;             // inferred hump quadrants / gap channels
    double theta_L = 0.0;            // unwrapped final clockwise angle
    double terminal_residual = 0.0;  // distance from z(L) to the rL set
    Trajectory trajectory;           // full record over [0, L]
    NodalSignature signature;
};

// Hump-start half-planes and gap channels read off a full trajectory:
// kappa_i = I when theta(t_i) mod 2 pi lies in [0, pi), III otherwise; a gap
// step is a sweep when it crosses x = 0 an odd number of times, a loop when
// even (lambda >= 0 gaps are always sweeps).
Itinerary infer_itinerary(const ProblemSpec& pb, const Trajectory& traj);

// Per-interval signature of a found solution; throws TangentialZeroError
// when a zero count is ill-defined (sign-preserving touch).  The
// consistency verdict checks the half-plane bookkeeping (kappa flips exactly
// with the parity of crossings between hump starts), the lambda <= 0 gap
// counts implied by the channel (sweep = odd, loop = even, and at most one
// crossing without winding), and odd crossing counts in lambda > 0 gaps.
NodalSignature classify_nodal(const NodalSolution& sol, const ProblemSpec& pb);

// ---------------------------------------------------------------------------
// The shooting search.

struct ShootOptions {
    int samples_per_turn = 4096;  // initial scan density per winding turn
    int max_doublings = 6;        // refinement rounds for bracket stability
    double tol = 1e-10;           // ODE tolerance of scan and refinement runs
    double param_tol = 1e-12;     // bisection tolerance, relative to the span
    double dedup_tol = 1e-9;      // initial-point dedup distance (relative)
    ArcSpan span;                 // empty = default_span(pb, r0, max_winding)
};

// All matches of the terminal condition found along r0 with winding at most
// max_winding, classified and deduplicated, ordered by arc parameter.  The
// scan density doubles until the bracket count stabilizes twice in a row.
// Solutions that blow up, whose x-zeros are not simple, or whose zero counts
// are ill-defined are discarded with a logged reason.  An empty result is a
// valid outcome.  rL must be an axis or ray arc (ConfigError otherwise).
std::vector<NodalSolution> find_solutions(const ProblemSpec& pb,
                                          const BoundaryArc& r0,
                                          const BoundaryArc& rL,
                                          double max_winding,
                                          const ShootOptions& opts = {});

}  // namespace nodal
