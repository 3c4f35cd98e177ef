// certify.hpp — hypothesis checking for the multiplicity machinery: twist
// certificates on annuli, gap-crossing compatibility for lambda > 0,
// linear-window conditions on the gap lengths, admissible itinerary
// enumeration, and guaranteed solution-count lower bounds.
//
// Every check is a pure evaluation of quadrature-module times.  Strict
// inequalities are certified only when the slack exceeds 10x the quadrature
// error estimate; anything closer to the boundary is reported as
// 'indeterminate' rather than as a true/false verdict, because numerics
// cannot distinguish an equality from a hair's-width strict inequality.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nodal/model.hpp"
#include "nodal/quadrature.hpp"

namespace nodal {

// ---------------------------------------------------------------------------
// Annulus: c1 <= Ham_i(x, y) <= c2 around the hump-i center.

struct Annulus {
    int hump = 0;
    double c1 = 0.0;
    double c2 = 0.0;
};

// Validates 0 < c1 < c2 < H* and that both boundary levels cross the
// potential transversally (regular closed orbits); throws ConfigError for
// ordering violations and propagates level-crossing errors otherwise.
Annulus make_annulus(const ProblemSpec& pb, int hump, double c1, double c2);

// ---------------------------------------------------------------------------
// Certification outcome shared by twist and window checks.

enum class CertStatus { satisfied, violated, indeterminate };

const char* to_string(CertStatus s);

// One evaluated inequality, written as "lhs > rhs" or "lhs < rhs".  slack is
// the signed amount by which it holds (positive = holds as written); err is
// the quadrature error estimate underlying the compared quantities.  The
// overall verdict treats |slack| <= 10*err as indeterminate.
struct Margin {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double err = 0.0;
};

CertStatus margin_status(const Margin& m);

// Aggregate verdict over a list of margins: 'violated' as soon as one row is
// confidently violated, else 'indeterminate' if any row is borderline, else
// 'satisfied'.
CertStatus combine_margins(const std::vector<Margin>& margins);

// ---------------------------------------------------------------------------
// Twist certificates.

// Which inequality set the certificate evaluates.  The first three compare
// per-quadrant lap times against tau; the rest compare half- or
// quarter-shifted multiples of the full period.
//   standard_iv1          T_{k+1}(d) + T_{k+2}(d) + a*T(d) > tau,
//                         T_k(e) + T_{k+1}(e) + b*T(e) < tau, all four k.
//   strong_iv6            T_{k+1}(d) + a*T(d) > tau, same upper rows.
//   positive_vi9          T_{k+1}(d) + a*T(d) > tau for k in {I, III};
//                         b*T(e) < tau.
//   lambda0_vii5_interior (a + 1/2) T(d) > tau > (b + 1/2) T(e).
//   lambda0_vii5_endpoint (a + 1/4) T(d) > tau > (b + 1/2) T(e).
//   positive_vii18        same rows as lambda0_vii5_interior.
//   positive_vii19        same rows as lambda0_vii5_endpoint.
//   sublinear_remark73    (a + 1/4) T(d) > tau > (b + 1/2) T(e) with the
//                         slow/fast roles forced to d = c2, e = c1 (small
//                         orbits are the fast ones for sublinear g).
enum class TwistVariant {
    standard_iv1,
    strong_iv6,
    positive_vi9,
    lambda0_vii5_interior,
    lambda0_vii5_endpoint,
    positive_vii18,
    positive_vii19,
    sublinear_remark73,
};

const char* to_string(TwistVariant v);
TwistVariant twist_variant_from_string(const std::string& s);

struct TwistCertificate {
    int hump = 0;
    int alpha = 0;
    int beta = 1;
    TwistVariant variant = TwistVariant::standard_iv1;
    double d_level = 0.0;  // slow boundary level (drives the lower winding bound)
    double e_level = 0.0;  // fast boundary level (drives the upper winding bound)
    double tau = 0.0;
    CertStatus status = CertStatus::indeterminate;
    std::vector<Margin> margins;
    std::string first_violation;  // label of the first confidently violated row
    double deficit = 0.0;         // its |slack|
    bool ok() const { return status == CertStatus::satisfied; }
};

// Evaluates the variant's inequalities for annulus an against a hump of
// length tau.  The slow/fast roles d, e in {c1, c2} are assigned from the
// nonlinearity regime: superlinear g (power p > 1, exp) takes d = c1,
// e = c2; sublinear power g (p < 1) swaps them.  Requires 0 <= alpha < beta.
TwistCertificate check_twist(const ProblemSpec& pb, const Annulus& an, double tau,
                             int alpha, int beta, TwistVariant variant,
                             double tol = 1e-10);

// ---------------------------------------------------------------------------
// lambda > 0 gap-crossing compatibility: the linear-energy level E = c must
// clear the outer boundaries of both annuli before reaching its apexes.

struct CompatReport {
    bool satisfied = false;
    CertStatus status = CertStatus::indeterminate;
    double c = 0.0;
    double x_com = 0.0;       // widest |x| where E = c meets an outer boundary line
    double x_max = 0.0;       // apex abscissa sqrt(2c/lambda)
    double slack = 0.0;       // x_max - x_com
    double c_headroom = 0.0;  // min{c1_i, c1_next} - c (level must stay below both)
};

// Requires lambda > 0 (ConfigError otherwise).  Degenerate annuli with
// c2 <= c give x_com = 0 and hold trivially.
CompatReport check_compat(const ProblemSpec& pb, const Annulus& a, const Annulus& b,
                          double c);

// ---------------------------------------------------------------------------
// Linear-window conditions on a gap length sigma_i = t_{i+1} - s_i.

// Which transit-time inequality chain the gap must satisfy.
//   neg_horizontal   lambda <= 0 sweep channels: S_{II->I} <= sigma and
//                    S_{IV->III} <= sigma.
//   neg_diagonal     lambda < 0 turning-point loops: S_{IV->I} <= sigma and
//                    S_{II->III} <= sigma.
//   pos_band         lambda > 0: S_outer(e_hat) <= sigma <= S_inner(d_hat)
//                    between the annulus boundary lines, both kappa sides.
//   pos_band_winding pos_band with xi (left) and zeta (right) extra full
//                    gap-orbit turns; yields multiplier = xi - zeta + 1.
//   pos_apex         lambda > 0 at a single energy c: S_outer(c) < sigma <
//                    S_inner_to_apex(c), and the wrong-way passage around the
//                    far apex stays slower than sigma.  Also needs the gap
//                    rotation to preserve angular order (see report flags).
//   pos_isochronous  closed window [S_com + xi*T(c), T_quarter + xi*T(c)]
//                    at c = min{c1_i, c1_next}: the identity-h gap center
//                    makes every orbit take the same time per turn.
//   zero_closed_form lambda = 0 sufficient bound: sigma >=
//                    (x_+(c2_i) + x_+(c2_next)) / h(y_+(min c1)).
//   neg_sweep_bound  lambda < 0 closed-form sweep bound: sigma >=
//                    Lambda_star(theta1, theta2).
enum class WindowVariant {
    neg_horizontal,
    neg_diagonal,
    pos_band,
    pos_band_winding,
    pos_apex,
    pos_isochronous,
    zero_closed_form,
    neg_sweep_bound,
};

const char* to_string(WindowVariant v);
WindowVariant window_variant_from_string(const std::string& s);

struct WindowParams {
    // Annulus boundary levels left (hump i) and right (hump i+1) of the gap.
    double c1_i = 0.0, c2_i = 0.0, c1_next = 0.0, c2_next = 0.0;
    // pos_band / pos_band_winding: gap energies of the slow and fast rails.
    double d_hat = 0.0, e_hat = 0.0;
    // pos_band_winding / pos_isochronous extra full turns (0 <= zeta <= xi).
    int xi = 0, zeta = 0;
    // pos_apex / pos_isochronous gap energy; 0 means min{c1_i, c1_next}.
    double c = 0.0;
    // neg_sweep_bound amplitude ratios, 0 < theta1 < theta2.
    double theta1 = 0.0, theta2 = 0.0;
};

struct WindowReport {
    int gap = 0;
    WindowVariant variant = WindowVariant::neg_horizontal;
    CertStatus status = CertStatus::indeterminate;
    std::vector<Margin> margins;
    int multiplier = 1;  // distinct winding classes through the gap
    // Angular-order preservation of the gap flow (needed by pos_apex and
    // pos_isochronous): proven for identity h, sampled otherwise.
    bool angle_order_certified = false;
    bool angle_order_empirical = false;
    bool ok() const { return status == CertStatus::satisfied; }
};

// Evaluates the window condition for gap index 'gap' (between humps gap and
// gap+1) against sigma = weight.sigma(gap).  Throws ConfigError when the
// variant is inconsistent with the sign of lambda and
// IncompatibleGeometryError when a lambda > 0 variant fails check_compat.
WindowReport check_linear_window(const ProblemSpec& pb, int gap, WindowVariant variant,
                                 const WindowParams& params, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Admissible itineraries through the transition diagram.

// Odd quadrants hosting the start of each hump passage.
enum class Kappa { I, III };

const char* to_string(Kappa k);

// Whether a gap step keeps the quadrant (horizontal) or flips it (diagonal),
// and which of the two lambda < 0 transit channels realizes it: the straight
// strip sweep or the loop around a turning point.  For lambda >= 0 only the
// sweep channel exists.
enum class StepTarget { horizontal, diagonal };
enum class GapChannel { sweep, loop };

struct ItineraryStep {
    Kappa to = Kappa::I;
    StepTarget target = StepTarget::horizontal;
    GapChannel channel = GapChannel::sweep;
};

struct Itinerary {
    Kappa kappa0 = Kappa::I;
    std::vector<ItineraryStep> steps;

    // kappa_0, ..., kappa_m.
    std::vector<Kappa> sequence() const;
    // e.g. "I -s- I -l- III": s = sweep channel, l = loop channel.
    std::string text() const;
};

// All admissible quadrant sequences from kappa0 across m gaps: 2^m for
// lambda_sign >= 0 (sweep channels only), 4^m channel-paths for
// lambda_sign < 0.  Throws ConfigError when m < 0 or the enumeration would
// exceed 2^22 paths.
std::vector<Itinerary> enumerate_itineraries(int m, int lambda_sign, Kappa kappa0);

// ---------------------------------------------------------------------------
// Guaranteed solution-count lower bounds.

// How the boundary arcs enter the count: confined each to one quadrant
// (count as-is), or the full axis lines of the Dirichlet problem, whose four
// half-axis sign choices quadruple the count.
enum class BoundaryMode { fixed_quadrants, dirichlet_axes };

struct CountBound {
    long long total = 0;
    std::vector<std::pair<Itinerary, long long>> breakdown;
};

// Combines one satisfied twist certificate per hump (certs.size() = m+1)
// with optional per-gap window reports (windows.size() = m or empty; empty
// means multiplier 1 everywhere).  Throws MissingCertificateError when a
// certificate or window is absent or not satisfied.
CountBound lower_bound(const std::vector<TwistCertificate>& certs,
                       const std::vector<WindowReport>& windows,
                       int lambda_sign, BoundaryMode mode,
                       Kappa kappa0 = Kappa::I);

// Closed-form total for equal data: channels^m * prod(beta_i - alpha_i)
// (channels = 2 for lambda >= 0, 4 otherwise), times gap multipliers, times
// 4 for dirichlet_axes.
long long closed_form_bound(const std::vector<int>& beta_minus_alpha,
                            const std::vector<int>& gap_multipliers,
                            int lambda_sign, BoundaryMode mode);

}  // namespace nodal
