#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "pmc/common.hpp"

namespace pmc {

using Vec = Eigen::VectorXd;

enum class SpaceFormKind { Spherical, Hyperbolic, Euclidean };

// The factor M^n(c) realized as a flat embedded model:
//   c > 0: round sphere <p,p> = 1/c in Euclidean (n+1)-space,
//   c < 0: upper hyperboloid <p,p>_L = 1/c in Lorentz (n+1)-space,
//          signature (-,+,...,+), first coordinate positive,
//   c = 0: flat R^n itself.
// The ambient product M^n(c) x R appends one Euclidean height coordinate.
struct SpaceFormModel {
    double c = 1.0;
    int n = 2;

    SpaceFormModel() = default;
    SpaceFormModel(double curvature, int dim) : c(curvature), n(dim) {
        if (n < 2) throw ConfigError("space form dimension must be >= 2");
    }

    SpaceFormKind kind() const {
        if (c > 0.0) return SpaceFormKind::Spherical;
        if (c < 0.0) return SpaceFormKind::Hyperbolic;
        return SpaceFormKind::Euclidean;
    }

    bool lorentz() const { return c < 0.0; }

    // Flat coordinates carried by the M factor (n+1 for the curved models).
    int m_dim() const { return c != 0.0 ? n + 1 : n; }
    // Full flat dimension of the product, height coordinate included.
    int flat_dim() const { return m_dim() + 1; }

    // Signature-aware inner product on the M-factor coordinates.
    double mdot(const Vec& a, const Vec& b) const {
        double d = a.dot(b);
        if (lorentz()) d -= 2.0 * a(0) * b(0);
        return d;
    }

    // Product inner product on stacked coordinates (M part + height last).
    double sdot(const Vec& a, const Vec& b) const {
        const int m = m_dim();
        double d = a.head(m).dot(b.head(m));
        if (lorentz()) d -= 2.0 * a(0) * b(0);
        return d + a(m) * b(m);
    }

    // Projection of an M-factor direction onto the model tangent space at p.
    // Flat derivative + this projection realizes the Levi-Civita connection.
    Vec project_m(const Vec& p, const Vec& w) const {
        if (c == 0.0) return w;
        return w - c * mdot(w, p) * p;
    }
};

// A point of M^n(c) x R: flat coordinates of the M-factor point plus height.
struct AmbientPoint {
    Vec p;
    double t = 0.0;
};

// A tangent vector of the product at a basepoint, split into the M-factor
// part and the R-factor part.  The distinguished vertical unit xi has
// v = 0, s = 1.
struct AmbientVector {
    Vec v;
    double s = 0.0;
    AmbientPoint base;
};

inline void validate_point(const SpaceFormModel& model, const AmbientPoint& at) {
    if (at.p.size() != model.m_dim())
        throw DegenerateChartError("ambient point has wrong coordinate count");
    if (model.c == 0.0) return;
    const double q = model.mdot(at.p, at.p);
    if (std::abs(q - 1.0 / model.c) > kModelTol)
        throw DegenerateChartError("point violates the flat-model constraint");
    if (model.lorentz() && (at.p(0) <= 0.0 || q >= 0.0))
        throw DegenerateChartError("hyperbolic basepoint off the upper hyperboloid");
}

inline bool same_basepoint(const AmbientPoint& a, const AmbientPoint& b) {
    return a.p.size() == b.p.size() && (a.p - b.p).lpNorm<Eigen::Infinity>() <= kModelTol &&
           std::abs(a.t - b.t) <= kModelTol;
}

// <X,Y> of the product metric.  Positive definite on tangent vectors of the
// product, including the hyperbolic model.
inline double product_metric(const SpaceFormModel& model, const AmbientVector& X,
                             const AmbientVector& Y) {
    if (!same_basepoint(X.base, Y.base))
        throw std::invalid_argument("product_metric: mismatched basepoints");
    validate_point(model, X.base);
    return model.mdot(X.v, Y.v) + X.s * Y.s;
}

// Tangent projection of an arbitrary flat direction (w_m | w_s) at a point.
// Kills the radial model direction; the R part passes through unchanged.
inline AmbientVector project_tangent(const SpaceFormModel& model, const AmbientPoint& at,
                                     const Vec& w_m, double w_s) {
    validate_point(model, at);
    return AmbientVector{model.project_m(at.p, w_m), w_s, at};
}

// Curvature tensor of the product: R(X,Y)Z = c(<Y_h,Z_h>X_h - <X_h,Z_h>Y_h)
// with h the M-factor (horizontal) part.  Vanishes whenever an argument is
// vertical; for horizontal orthonormal X,Y it gives R(X,Y)Y = cX.
inline AmbientVector ambient_curvature(const SpaceFormModel& model, const AmbientVector& X,
                                       const AmbientVector& Y, const AmbientVector& Z) {
    if (!same_basepoint(X.base, Y.base) || !same_basepoint(X.base, Z.base))
        throw std::invalid_argument("ambient_curvature: mismatched basepoints");
    validate_point(model, X.base);
    Vec r = model.c * (model.mdot(Y.v, Z.v) * X.v - model.mdot(X.v, Z.v) * Y.v);
    return AmbientVector{std::move(r), 0.0, X.base};
}

// The unit vertical direction at a basepoint.
inline AmbientVector vertical_unit(const SpaceFormModel& model, const AmbientPoint& at) {
    return AmbientVector{Vec::Zero(model.m_dim()), 1.0, at};
}

}  // namespace pmc
