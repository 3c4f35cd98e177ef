// errors.hpp — exception hierarchy shared by all nodal-atlas modules.
//
// Every failure mode that a caller may want to branch on gets its own type;
// all of them derive from NodalError so a CLI can map the family to a single
// process exit code.

#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

// Root of the library's exception hierarchy.
struct NodalError : std::runtime_error {
    explicit NodalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A value fell outside the open domain (rho_minus, rho_plus) of h, or inside
// the guard band next to a finite endpoint.
struct DomainViolation : NodalError {
    explicit DomainViolation(const std::string& msg) : NodalError(msg) {}
};

// Geometric bracket expansion exhausted its range without a sign change.
struct NoBracketError : NodalError {
    explicit NoBracketError(const std::string& msg) : NodalError(msg) {}
};

// A level set touches the potential graph tangentially: F'(x) ~ 0 at the
// crossing, so the orbit through it is not a regular closed loop.
struct DegenerateLevelError : NodalError {
    explicit DegenerateLevelError(const std::string& msg) : NodalError(msg) {}
};

// A component of a trajectory touches zero without a sign change, so a
// transversal zero count is not well defined at the requested tolerance.
struct TangentialZeroError : NodalError {
    explicit TangentialZeroError(const std::string& msg) : NodalError(msg) {}
};

// A requested transit cannot happen for the given geometry, e.g. a lambda > 0
// crossing whose target line lies beyond the apex of the center orbit.
struct IncompatibleGeometryError : NodalError {
    explicit IncompatibleGeometryError(const std::string& msg) : NodalError(msg) {}
};

// A trajectory reached the guard band of a finite h-domain endpoint, so a
// Poincare map is undefined at the requested initial point.  (Plain
// integrate() reports the same situation as a blow-up event, not an error.)
struct BlowUpError : NodalError {
    explicit BlowUpError(const std::string& msg) : NodalError(msg) {}
};

// A trajectory passed too close to the origin for its winding angle to be
// meaningful.
struct OriginCrossingError : NodalError {
    explicit OriginCrossingError(const std::string& msg) : NodalError(msg) {}
};

// A count bound was requested from an incomplete or unconfirmed set of
// certificates (hump without a certificate, or a certificate/window whose
// status is not 'satisfied').
struct MissingCertificateError : NodalError {
    explicit MissingCertificateError(const std::string& msg) : NodalError(msg) {}
};

// An integration window is empty or falls outside the weight's [0, L] span.
struct InvalidWindowError : NodalError {
    explicit InvalidWindowError(const std::string& msg) : NodalError(msg) {}
};

// Catch-all for iteration limits, non-finite intermediate values, and other
// numerical breakdowns that are not one of the structured cases above.
struct NumericalFailure : NodalError {
    explicit NumericalFailure(const std::string& msg) : NodalError(msg) {}
};

// Malformed configuration input (bad key, bad value, violated invariant).
struct ConfigError : NodalError {
    explicit ConfigError(const std::string& msg) : NodalError(msg) {}
};

}  // namespace nodal
