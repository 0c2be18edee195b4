#pragma once

#include <stdexcept>
#include <string>

namespace pmc {

// Error taxonomy. Everything here maps to CLI exit code 2 (configuration /
// applicability errors); a failed numerical check is exit code 1 instead.

// Bad run configuration: unknown surface, out-of-range parameter, malformed
// grid or step sequence, conflicting options.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite-difference stencil would leave the chart domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chart point violates the flat-model constraint, or the parametrization is
// degenerate (dependent coordinate tangents, non-positive metric).
struct DegenerateChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A quantity dividing by |H|^2 was requested on a (numerically) minimal
// surface.  Callers that can fall back (e.g. to the intrinsic curvature)
// catch this; the CLI treats it as a configuration error.
struct MinimalSurfaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A check that needs isothermal coordinates was requested on a chart that
// does not provide them (either unclaimed or failing the numeric validation).
struct NotIsothermalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tolerances shared across modules.
inline constexpr double kModelTol = 1e-12;        // flat-model constraint, absolute
inline constexpr double kEpsH = 1e-8;             // minimal / non-minimal split on |H|
inline constexpr double kGramTol = 1e-10;         // chart tangent independence
inline constexpr double kNearDependentTol = 1e-6; // skip threshold in normal completion
inline constexpr double kIsothermalTol = 0.10;    // relative |E-G|, |F| vs E
inline constexpr double kDefaultStep = 1e-4;      // default finite-difference step

}  // namespace pmc
