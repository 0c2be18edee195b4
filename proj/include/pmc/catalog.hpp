#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pmc/immersion.hpp"
#include "pmc/invariants.hpp"

namespace pmc {

// Closed-form expectations of a witness surface.  theorem_item names which
// branch of the classification the surface realizes (0 = none).
struct GroundTruth {
    bool has_values = true;
    double Hnorm = 0.0;
    double Tnorm = 0.0;
    double s_norm2 = 0.0;
    double K = 0.0;
    bool pmc = true;
    int theorem_item = 0;
    std::string notes;
};

struct CatalogEntry {
    std::string name;
    SurfaceChart chart;
    std::map<std::string, double> params;
    GroundTruth truth;
    // Closed-form frame summary: |S|^2 recomputed from these via the operator
    // definition must match truth.s_norm2 to round-off.
    Eigen::Matrix2d a_H = Eigen::Matrix2d::Zero();
    Eigen::Vector2d t = Eigen::Vector2d::Zero();
    // Negative-control calibration (graph_control only).
    double probe_u = 0.0, probe_v = 0.0;
    double min_pmc_residual = 0.0;
};

namespace detail {

struct Jet3 {
    double x[3], xu[3], xv[3], xuu[3], xuv[3], xvv[3];
};

// Stereographic chart of the unit sphere S^2, conformal.
inline Jet3 stereo_sphere(double u, double v) {
    const double s = 1.0 + u * u + v * v;
    const double s2 = s * s, s3 = s2 * s;
    Jet3 j;
    j.x[0] = 2.0 * u / s;
    j.x[1] = 2.0 * v / s;
    j.x[2] = (2.0 - s) / s;
    j.xu[0] = 2.0 / s - 4.0 * u * u / s2;
    j.xu[1] = -4.0 * u * v / s2;
    j.xu[2] = -4.0 * u / s2;
    j.xv[0] = -4.0 * u * v / s2;
    j.xv[1] = 2.0 / s - 4.0 * v * v / s2;
    j.xv[2] = -4.0 * v / s2;
    j.xuu[0] = -12.0 * u / s2 + 16.0 * u * u * u / s3;
    j.xuu[1] = -4.0 * v / s2 + 16.0 * u * u * v / s3;
    j.xuu[2] = -4.0 / s2 + 16.0 * u * u / s3;
    j.xuv[0] = -4.0 * v / s2 + 16.0 * u * u * v / s3;
    j.xuv[1] = -4.0 * u / s2 + 16.0 * u * v * v / s3;
    j.xuv[2] = 16.0 * u * v / s3;
    j.xvv[0] = -4.0 * u / s2 + 16.0 * u * v * v / s3;
    j.xvv[1] = -12.0 * v / s2 + 16.0 * v * v * v / s3;
    j.xvv[2] = -4.0 / s2 + 16.0 * v * v / s3;
    return j;
}

// Poincare-disk chart of the unit hyperboloid H^2 (Lorentz model), conformal.
inline Jet3 poincare_hyperboloid(double u, double v) {
    const double d = 1.0 - u * u - v * v;
    if (!(d > 0.0)) throw DomainError("point outside the Poincare disk");
    const double d2 = d * d, d3 = d2 * d;
    Jet3 j;
    j.x[0] = (2.0 - d) / d;
    j.x[1] = 2.0 * u / d;
    j.x[2] = 2.0 * v / d;
    j.xu[0] = 4.0 * u / d2;
    j.xu[1] = 2.0 / d + 4.0 * u * u / d2;
    j.xu[2] = 4.0 * u * v / d2;
    j.xv[0] = 4.0 * v / d2;
    j.xv[1] = 4.0 * u * v / d2;
    j.xv[2] = 2.0 / d + 4.0 * v * v / d2;
    j.xuu[0] = 4.0 / d2 + 16.0 * u * u / d3;
    j.xuu[1] = 12.0 * u / d2 + 16.0 * u * u * u / d3;
    j.xuu[2] = 4.0 * v / d2 + 16.0 * u * u * v / d3;
    j.xuv[0] = 16.0 * u * v / d3;
    j.xuv[1] = 4.0 * v / d2 + 16.0 * u * u * v / d3;
    j.xuv[2] = 4.0 * u / d2 + 16.0 * u * v * v / d3;
    j.xvv[0] = 4.0 / d2 + 16.0 * v * v / d3;
    j.xvv[1] = 4.0 * u / d2 + 16.0 * u * v * v / d3;
    j.xvv[2] = 12.0 * v / d2 + 16.0 * v * v * v / d3;
    return j;
}

inline double get_param(const std::map<std::string, double>& p, const std::string& key,
                        double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline void check_known_params(const std::map<std::string, double>& p,
                               std::initializer_list<const char*> known,
                               const std::string& surface) {
    for (const auto& [k, val] : p) {
        (void)val;
        bool ok = false;
        for (const char* name : known)
            if (k == name) ok = true;
        if (!ok)
            throw ConfigError("surface '" + surface + "' has no parameter '" + k + "'");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Witness surfaces.
// ---------------------------------------------------------------------------

// (a) slice: the horizontal leaf M^2(c) x {0}.  Totally geodesic, minimal.
inline CatalogEntry make_slice(const std::map<std::string, double>& params) {
    detail::check_known_params(params, {"c"}, "slice");
    const double c = detail::get_param(params, "c", 1.0);
    CatalogEntry e;
    e.name = "slice";
    e.params = {{"c", c}};
    e.chart.model = SpaceFormModel(c, 2);
    e.chart.name = "slice";
    e.chart.domain = {-0.5, 0.5, -0.5, 0.5};
    e.chart.isothermal_claim = true;
    if (c > 0.0) {
        const double R = 1.0 / std::sqrt(c);
        e.chart.map = [R](double u, double v) {
            const auto j = detail::stereo_sphere(u, v);
            Vec x(4);
            x << R * j.x[0], R * j.x[1], R * j.x[2], 0.0;
            return x;
        };
        e.chart.jet = [R](double u, double v) {
            const auto j = detail::stereo_sphere(u, v);
            ChartJet J;
            for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(4);
            for (int i = 0; i < 3; ++i) {
                J.x(i) = R * j.x[i];
                J.xu(i) = R * j.xu[i];
                J.xv(i) = R * j.xv[i];
                J.xuu(i) = R * j.xuu[i];
                J.xuv(i) = R * j.xuv[i];
                J.xvv(i) = R * j.xvv[i];
            }
            return J;
        };
    } else if (c < 0.0) {
        const double R = 1.0 / std::sqrt(-c);
        e.chart.map = [R](double u, double v) {
            const auto j = detail::poincare_hyperboloid(u, v);
            Vec x(4);
            x << R * j.x[0], R * j.x[1], R * j.x[2], 0.0;
            return x;
        };
        e.chart.jet = [R](double u, double v) {
            const auto j = detail::poincare_hyperboloid(u, v);
            ChartJet J;
            for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(4);
            for (int i = 0; i < 3; ++i) {
                J.x(i) = R * j.x[i];
                J.xu(i) = R * j.xu[i];
                J.xv(i) = R * j.xv[i];
                J.xuu(i) = R * j.xuu[i];
                J.xuv(i) = R * j.xuv[i];
                J.xvv(i) = R * j.xvv[i];
            }
            return J;
        };
    } else {
        e.chart.map = [](double u, double v) {
            Vec x(3);
            x << u, v, 0.0;
            return x;
        };
        e.chart.jet = [](double u, double v) {
            ChartJet J;
            for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(3);
            J.x << u, v, 0.0;
            J.xu(0) = 1.0;
            J.xv(1) = 1.0;
            return J;
        };
    }
    e.truth = GroundTruth{true, 0.0, 0.0, 0.0, c, true, 0, "totally geodesic slice"};
    return e;
}

// (b) cyl_s2: circle of colatitude theta0 in S^2 times the vertical line,
// arclength x height chart (flat, isothermal).  |H| = cot(theta0)/2, |T| = 1.
inline CatalogEntry make_cyl_s2(const std::map<std::string, double>& params,
                                bool stretched = false) {
    const char* nm = stretched ? "cyl_s2_stretch" : "cyl_s2";
    detail::check_known_params(params, {"theta0"}, nm);
    const double theta0 = detail::get_param(params, "theta0", M_PI / 4.0);
    if (!(theta0 > 0.0 && theta0 < M_PI / 2.0))
        throw ConfigError("cyl_s2: theta0 must lie in (0, pi/2)");
    const double a = std::sin(theta0), b = std::cos(theta0);
    CatalogEntry e;
    e.name = nm;
    e.params = {{"theta0", theta0}};
    e.chart.model = SpaceFormModel(1.0, 2);
    e.chart.name = nm;
    e.chart.domain = {0.0, 2.0, -1.0, 1.0};
    e.chart.isothermal_claim = !stretched;
    // v-reparametrization for the non-isothermal variant; identity otherwise
    auto psi = [stretched](double v) { return stretched ? v + 0.25 * std::sin(v) : v; };
    auto dpsi = [stretched](double v) { return stretched ? 1.0 + 0.25 * std::cos(v) : 1.0; };
    auto ddpsi = [stretched](double v) { return stretched ? -0.25 * std::sin(v) : 0.0; };
    e.chart.map = [a, b, psi](double u, double v) {
        Vec x(4);
        x << a * std::cos(u / a), a * std::sin(u / a), b, psi(v);
        return x;
    };
    e.chart.jet = [a, b, psi, dpsi, ddpsi](double u, double v) {
        const double cp = std::cos(u / a), sp = std::sin(u / a);
        ChartJet J;
        for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(4);
        J.x << a * cp, a * sp, b, psi(v);
        J.xu << -sp, cp, 0.0, 0.0;
        J.xv(3) = dpsi(v);
        J.xuu << -cp / a, -sp / a, 0.0, 0.0;
        J.xvv(3) = ddpsi(v);
        return J;
    };
    const double Hn = 0.5 * b / a;  // cot(theta0)/2
    const double s11 = 2.0 * Hn * Hn + 0.5;
    e.truth = GroundTruth{true, Hn, 1.0, 2.0 * s11 * s11, 0.0, true, 1,
                          "flat vertical cylinder over a cmc circle in S^2"};
    e.a_H << 2.0 * Hn * Hn, 0.0, 0.0, 0.0;
    e.t << 0.0, 1.0;
    return e;
}

// (c) cyl_h2: geodesic circle of radius rho in H^2 times the vertical line,
// arclength x height chart.  |H| = coth(rho)/2, |T| = 1, flat.
inline CatalogEntry make_cyl_h2(const std::map<std::string, double>& params) {
    detail::check_known_params(params, {"rho"}, "cyl_h2");
    const double rho = detail::get_param(params, "rho", std::atanh(0.5));  // coth = 2
    if (!(rho > 0.0)) throw ConfigError("cyl_h2: rho must be positive");
    const double sh = std::sinh(rho), ch = std::cosh(rho);
    CatalogEntry e;
    e.name = "cyl_h2";
    e.params = {{"rho", rho}};
    e.chart.model = SpaceFormModel(-1.0, 2);
    e.chart.name = "cyl_h2";
    e.chart.domain = {0.0, 2.0, -1.0, 1.0};
    e.chart.isothermal_claim = true;
    e.chart.map = [sh, ch](double u, double v) {
        Vec x(4);
        x << ch, sh * std::cos(u / sh), sh * std::sin(u / sh), v;
        return x;
    };
    e.chart.jet = [sh, ch](double u, double v) {
        const double cp = std::cos(u / sh), sp = std::sin(u / sh);
        ChartJet J;
        for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(4);
        J.x << ch, sh * cp, sh * sp, v;
        J.xu << 0.0, -sp, cp, 0.0;
        J.xv(3) = 1.0;
        J.xuu << 0.0, -cp / sh, -sp / sh, 0.0;
        return J;
    };
    const double Hn = 0.5 * ch / sh;  // coth(rho)/2
    const double s11 = 2.0 * Hn * Hn - 0.5;
    e.truth = GroundTruth{true, Hn, 1.0, 2.0 * s11 * s11, 0.0, true, 1,
                          "flat vertical cylinder over a cmc circle in H^2"};
    e.a_H << 2.0 * Hn * Hn, 0.0, 0.0, 0.0;
    e.t << 0.0, 1.0;
    return e;
}

// (d) sphere_s3: geodesic sphere of radius theta0 in S^3 x {0}, stereographic
// (conformal) chart.  Umbilical: |H| = cot(theta0), T = 0, S = 0.
inline CatalogEntry make_sphere_s3(const std::map<std::string, double>& params) {
    detail::check_known_params(params, {"theta0"}, "sphere_s3");
    const double theta0 = detail::get_param(params, "theta0", M_PI / 4.0);
    if (!(theta0 > 0.0 && theta0 < M_PI / 2.0))
        throw ConfigError("sphere_s3: theta0 must lie in (0, pi/2)");
    const double ct = std::cos(theta0), st = std::sin(theta0);
    CatalogEntry e;
    e.name = "sphere_s3";
    e.params = {{"theta0", theta0}};
    e.chart.model = SpaceFormModel(1.0, 3);
    e.chart.name = "sphere_s3";
    e.chart.domain = {-0.8, 0.8, -0.8, 0.8};
    e.chart.isothermal_claim = true;
    e.chart.map = [ct, st](double u, double v) {
        const auto j = detail::stereo_sphere(u, v);
        Vec x(5);
        x << ct, st * j.x[0], st * j.x[1], st * j.x[2], 0.0;
        return x;
    };
    e.chart.jet = [ct, st](double u, double v) {
        const auto j = detail::stereo_sphere(u, v);
        ChartJet J;
        for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(5);
        J.x(0) = ct;
        for (int i = 0; i < 3; ++i) {
            J.x(i + 1) = st * j.x[i];
            J.xu(i + 1) = st * j.xu[i];
            J.xv(i + 1) = st * j.xv[i];
            J.xuu(i + 1) = st * j.xuu[i];
            J.xuv(i + 1) = st * j.xuv[i];
            J.xvv(i + 1) = st * j.xvv[i];
        }
        return J;
    };
    const double Hn = ct / st;
    e.truth = GroundTruth{true, Hn, 0.0, 0.0, 1.0 + Hn * Hn, true, 3,
                          "umbilical geodesic sphere in a horizontal S^3"};
    e.a_H << Hn * Hn, 0.0, 0.0, Hn * Hn;
    return e;
}

// (e) clifford_small_s3: minimal Clifford torus inside the small hypersphere
// S^3(sin theta) of S^4, at height 0.  Non-minimal pmc with |H| = cot(theta),
// T = 0, flat; exercises the trace-free normal directions (det A_alpha <= 0).
inline CatalogEntry make_clifford(const std::map<std::string, double>& params) {
    detail::check_known_params(params, {"theta"}, "clifford_small_s3");
    const double theta = detail::get_param(params, "theta", M_PI / 4.0);
    if (!(theta > 0.0 && theta < M_PI / 2.0))
        throw ConfigError("clifford_small_s3: theta must lie in (0, pi/2)");
    const double ct = std::cos(theta), k = std::sin(theta) / std::sqrt(2.0);
    CatalogEntry e;
    e.name = "clifford_small_s3";
    e.params = {{"theta", theta}};
    e.chart.model = SpaceFormModel(1.0, 4);
    e.chart.name = "clifford_small_s3";
    e.chart.domain = {0.05, 1.5, 0.05, 1.5};
    e.chart.isothermal_claim = true;  // E = G = k^2, F = 0
    e.chart.map = [ct, k](double u, double v) {
        Vec x(6);
        x << ct, k * std::cos(u), k * std::sin(u), k * std::cos(v), k * std::sin(v), 0.0;
        return x;
    };
    e.chart.jet = [ct, k](double u, double v) {
        const double ca = std::cos(u), sa = std::sin(u);
        const double cb = std::cos(v), sb = std::sin(v);
        ChartJet J;
        for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(6);
        J.x << ct, k * ca, k * sa, k * cb, k * sb, 0.0;
        J.xu(1) = -k * sa;
        J.xu(2) = k * ca;
        J.xv(3) = -k * sb;
        J.xv(4) = k * cb;
        J.xuu(1) = -k * ca;
        J.xuu(2) = -k * sa;
        J.xvv(3) = -k * cb;
        J.xvv(4) = -k * sb;
        return J;
    };
    const double Hn = ct / std::sin(theta);
    e.truth = GroundTruth{true, Hn, 0.0, 0.0, 0.0, true, 2,
                          "minimal Clifford torus in a totally umbilical S^3(sin theta)"};
    e.a_H << Hn * Hn, 0.0, 0.0, Hn * Hn;
    return e;
}

// (f) graph_control: vertical graph of height lambda*u*v over a stereographic
// S^2 patch.  Not pmc; calibrated so the pmc residual stays above 0.01 at the
// probe point.  Negative control for every differential check.
inline CatalogEntry make_graph_control(const std::map<std::string, double>& params) {
    detail::check_known_params(params, {"lambda"}, "graph_control");
    const double lambda = detail::get_param(params, "lambda", 0.5);
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ConfigError("graph_control: lambda must lie in (0, 1]");
    CatalogEntry e;
    e.name = "graph_control";
    e.params = {{"lambda", lambda}};
    e.chart.model = SpaceFormModel(1.0, 2);
    e.chart.name = "graph_control";
    e.chart.domain = {0.15, 0.65, 0.15, 0.65};
    e.chart.isothermal_claim = true;  // within tolerance for small lambda*u*v slopes
    e.chart.map = [lambda](double u, double v) {
        const auto j = detail::stereo_sphere(u, v);
        Vec x(4);
        x << j.x[0], j.x[1], j.x[2], lambda * u * v;
        return x;
    };
    e.chart.jet = [lambda](double u, double v) {
        const auto j = detail::stereo_sphere(u, v);
        ChartJet J;
        for (Vec* out : {&J.x, &J.xu, &J.xv, &J.xuu, &J.xuv, &J.xvv}) *out = Vec::Zero(4);
        for (int i = 0; i < 3; ++i) {
            J.x(i) = j.x[i];
            J.xu(i) = j.xu[i];
            J.xv(i) = j.xv[i];
            J.xuu(i) = j.xuu[i];
            J.xuv(i) = j.xuv[i];
            J.xvv(i) = j.xvv[i];
        }
        J.x(3) = lambda * u * v;
        J.xu(3) = lambda * v;
        J.xv(3) = lambda * u;
        J.xuv(3) = lambda;
        return J;
    };
    e.truth.has_values = false;
    e.truth.pmc = false;
    e.truth.theorem_item = 0;
    e.truth.notes = "perturbed vertical graph, negative control";
    e.probe_u = 0.4;
    e.probe_v = 0.4;
    e.min_pmc_residual = 0.01;
    return e;
}

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "slice",     "cyl_s2",           "cyl_s2_stretch", "cyl_h2",
        "sphere_s3", "clifford_small_s3", "graph_control"};
    return names;
}

inline CatalogEntry make_surface(const std::string& name,
                                 const std::map<std::string, double>& params = {}) {
    if (name == "slice") return make_slice(params);
    if (name == "cyl_s2") return make_cyl_s2(params, false);
    if (name == "cyl_s2_stretch") return make_cyl_s2(params, true);
    if (name == "cyl_h2") return make_cyl_h2(params);
    if (name == "sphere_s3") return make_sphere_s3(params);
    if (name == "clifford_small_s3") return make_clifford(params);
    if (name == "graph_control") return make_graph_control(params);
    throw ConfigError("unknown surface '" + name + "'");
}

// Worst deviation of computed invariants from the stored closed forms over a
// grid.  For the negative control the table carries the probe-point pmc
// residual instead (expected to stay above min_pmc_residual).
struct DeviationTable {
    std::map<std::string, double> max_dev;
};

inline DeviationTable ground_truth_check(const CatalogEntry& entry, int nu, int nv,
                                         JetMode mode, double h) {
    DeviationTable table;
    if (!entry.truth.has_values) {
        const PmcResidual pr =
            pmc_residual(entry.chart, entry.probe_u, entry.probe_v, mode, h);
        table.max_dev["pmc_residual_at_probe"] = pr.normal_derivative;
        return table;
    }
    const Domain& d = entry.chart.domain;
    const double margin = 4.0 * h;
    double dH = 0.0, dT = 0.0, dS = 0.0, dK = 0.0;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const double u =
                d.u0 + margin + (d.u1 - d.u0 - 2.0 * margin) * (i + 0.5) / nu;
            const double v =
                d.v0 + margin + (d.v1 - d.v0 - 2.0 * margin) * (j + 0.5) / nv;
            const FrameData fd = frames(entry.chart, u, v, mode, h);
            dH = std::max(dH, std::abs(fd.Hnorm - entry.truth.Hnorm));
            dT = std::max(dT, std::abs(std::sqrt(fd.Tnorm2) - entry.truth.Tnorm));
            dS = std::max(dS,
                          std::abs(s_operator(fd).squaredNorm() - entry.truth.s_norm2));
            const double K = fd.minimal
                                 ? gauss_curvature_intrinsic(
                                       induced_metric(entry.chart, mode, h), u, v, h)
                                 : gauss_curvature_extrinsic(fd).K;
            dK = std::max(dK, std::abs(K - entry.truth.K));
        }
    table.max_dev["Hnorm"] = dH;
    table.max_dev["Tnorm"] = dT;
    table.max_dev["s_norm2"] = dS;
    table.max_dev["K"] = dK;
    return table;
}

}  // namespace pmc
