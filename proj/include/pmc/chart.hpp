#pragma once

#include <functional>
#include <string>
#include <utility>

#include "pmc/spaceform.hpp"

namespace pmc {

struct Domain {
    double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;

    bool contains(double u, double v, double margin = 0.0) const {
        return u >= u0 + margin && u <= u1 - margin && v >= v0 + margin && v <= v1 - margin;
    }
};

// Second-order jet of the embedding, in stacked flat coordinates
// (M-factor coordinates first, height last).
struct ChartJet {
    Vec x, xu, xv, xuu, xuv, xvv;
};

enum class JetMode { Analytic, FiniteDifference };

// A parametrized surface patch in M^n(c) x R.  `map` is always available;
// `jet` carries exact derivatives for charts that have them in closed form.
struct SurfaceChart {
    SpaceFormModel model;
    Domain domain;
    std::string name;
    std::function<Vec(double, double)> map;        // stacked coordinates
    std::function<ChartJet(double, double)> jet;   // optional analytic jets
    bool isothermal_claim = false;

    bool has_analytic_jets() const { return static_cast<bool>(jet); }
};

// Jet of the embedding at (u,v): exact when the chart supplies one and
// analytic mode is requested, otherwise O(h^2) central differences.
inline ChartJet chart_jet(const SurfaceChart& chart, double u, double v, JetMode mode,
                          double h) {
    if (mode == JetMode::Analytic) {
        if (!chart.has_analytic_jets())
            throw ConfigError("chart '" + chart.name + "' provides no analytic jets");
        if (!chart.domain.contains(u, v))
            throw DomainError("chart evaluation outside the domain");
        return chart.jet(u, v);
    }
    if (!(h > 0.0)) throw ConfigError("finite-difference mode needs a positive step");
    if (!chart.domain.contains(u, v, h))
        throw DomainError("finite-difference stencil exits the chart domain");

    const Vec xc = chart.map(u, v);
    const Vec xe = chart.map(u + h, v), xw = chart.map(u - h, v);
    const Vec xn = chart.map(u, v + h), xs = chart.map(u, v - h);
    const Vec xne = chart.map(u + h, v + h), xnw = chart.map(u - h, v + h);
    const Vec xse = chart.map(u + h, v - h), xsw = chart.map(u - h, v - h);

    ChartJet J;
    J.x = xc;
    J.xu = (xe - xw) / (2.0 * h);
    J.xv = (xn - xs) / (2.0 * h);
    J.xuu = (xe - 2.0 * xc + xw) / (h * h);
    J.xvv = (xn - 2.0 * xc + xs) / (h * h);
    J.xuv = (xne - xnw - xse + xsw) / (4.0 * h * h);
    return J;
}

inline AmbientPoint chart_point(const SurfaceChart& chart, double u, double v) {
    const Vec x = chart.map(u, v);
    const int m = chart.model.m_dim();
    return AmbientPoint{x.head(m), x(m)};
}

}  // namespace pmc
