#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "pmc/chart.hpp"
#include "pmc/common.hpp"

namespace pmc {

using ScalarField = std::function<double(double, double)>;
using OperatorField = std::function<Eigen::Matrix2d(double, double)>;

// Second-order jet of a scalar chart function.  h = 0 marks analytic values.
struct Jet2 {
    double value = 0.0;
    double du = 0.0, dv = 0.0;
    double duu = 0.0, duv = 0.0, dvv = 0.0;
    double h = 0.0;
};

inline Jet2 fd_jet(const ScalarField& f, double u, double v, double h,
                   const Domain* domain = nullptr) {
    if (!(h > 0.0)) throw ConfigError("fd_jet needs a positive step");
    if (domain && !domain->contains(u, v, h))
        throw DomainError("finite-difference stencil exits the domain");
    const double fc = f(u, v);
    const double fe = f(u + h, v), fw = f(u - h, v);
    const double fn = f(u, v + h), fs = f(u, v - h);
    const double fne = f(u + h, v + h), fnw = f(u - h, v + h);
    const double fse = f(u + h, v - h), fsw = f(u - h, v - h);
    Jet2 j;
    j.value = fc;
    j.du = (fe - fw) / (2.0 * h);
    j.dv = (fn - fs) / (2.0 * h);
    j.duu = (fe - 2.0 * fc + fw) / (h * h);
    j.dvv = (fn - 2.0 * fc + fs) / (h * h);
    j.duv = (fne - fnw - fse + fsw) / (4.0 * h * h);
    j.h = h;
    return j;
}

// First fundamental form coefficients at a chart point.
struct Metric2 {
    double E = 1.0, F = 0.0, G = 1.0;
    double det() const { return E * G - F * F; }
};

using MetricField = std::function<Metric2(double, double)>;

inline void validate_metric(const Metric2& g) {
    if (!(g.E > 0.0) || !(g.G > 0.0) || !(g.det() > 0.0))
        throw DegenerateChartError("degenerate metric (EG - F^2 <= 0)");
}

// Christoffel symbols of the second kind, G[k][i][j] = Gamma^k_{ij}.
struct Christoffel2 {
    double G[2][2][2] = {};
};

inline Christoffel2 christoffel(const MetricField& g, double u, double v, double h) {
    const Metric2 g0 = g(u, v);
    validate_metric(g0);
    const Metric2 ge = g(u + h, v), gw = g(u - h, v);
    const Metric2 gn = g(u, v + h), gs = g(u, v - h);
    validate_metric(ge);
    validate_metric(gw);
    validate_metric(gn);
    validate_metric(gs);

    // dg[a][i][j] = d_a g_{ij}
    auto comp = [](const Metric2& m, int i, int j) {
        if (i == 0 && j == 0) return m.E;
        if (i == 1 && j == 1) return m.G;
        return m.F;
    };
    double dg[2][2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            dg[0][i][j] = (comp(ge, i, j) - comp(gw, i, j)) / (2.0 * h);
            dg[1][i][j] = (comp(gn, i, j) - comp(gs, i, j)) / (2.0 * h);
        }

    const double det = g0.det();
    const double ginv[2][2] = {{g0.G / det, -g0.F / det}, {-g0.F / det, g0.E / det}};

    Christoffel2 ch;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                ch.G[k][i][j] = 0.5 * s;
            }
    return ch;
}

// Canonical orthonormal tangent frame of a metric: Gram-Schmidt on the
// coordinate basis with e1 along du.  b[i][a]: e_i = b[i][0] du + b[i][1] dv.
struct FrameCoeff {
    double b[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
};

inline FrameCoeff orthonormal_frame(const Metric2& g) {
    validate_metric(g);
    const double se = std::sqrt(g.E);
    const double w = std::sqrt(g.G - g.F * g.F / g.E);
    FrameCoeff fc;
    fc.b[0][0] = 1.0 / se;
    fc.b[0][1] = 0.0;
    fc.b[1][0] = -g.F / (g.E * w);
    fc.b[1][1] = 1.0 / w;
    return fc;
}

// Connection form of the canonical frame: omega_k = <nabla_{e_k} e_1, e_2>.
inline std::array<double, 2> connection_form(const MetricField& g, double u, double v,
                                             double h) {
    const Metric2 g0 = g(u, v);
    const FrameCoeff B0 = orthonormal_frame(g0);
    const Christoffel2 ch = christoffel(g, u, v, h);

    const FrameCoeff Be = orthonormal_frame(g(u + h, v));
    const FrameCoeff Bw = orthonormal_frame(g(u - h, v));
    const FrameCoeff Bn = orthonormal_frame(g(u, v + h));
    const FrameCoeff Bs = orthonormal_frame(g(u, v - h));
    double dB[2][2];  // dB[a][b] = d_a (e_1)^b
    for (int b = 0; b < 2; ++b) {
        dB[0][b] = (Be.b[0][b] - Bw.b[0][b]) / (2.0 * h);
        dB[1][b] = (Bn.b[0][b] - Bs.b[0][b]) / (2.0 * h);
    }

    const double gmat[2][2] = {{g0.E, g0.F}, {g0.F, g0.G}};
    std::array<double, 2> omega{};
    for (int k = 0; k < 2; ++k) {
        double w[2];  // coordinates of nabla_{e_k} e_1
        for (int b = 0; b < 2; ++b) {
            double s = 0.0;
            for (int a = 0; a < 2; ++a) {
                double inner = dB[a][b];
                for (int c = 0; c < 2; ++c) inner += B0.b[0][c] * ch.G[b][a][c];
                s += B0.b[k][a] * inner;
            }
            w[b] = s;
        }
        double om = 0.0;
        for (int b = 0; b < 2; ++b)
            for (int d = 0; d < 2; ++d) om += w[b] * gmat[b][d] * B0.b[1][d];
        omega[k] = om;
    }
    return omega;
}

// Covariant derivative of a symmetric operator field given in the canonical
// orthonormal frame.  comp[k][i][j] = (nabla_k S)_{ij}; norm2 = |nabla S|^2.
// A constant frame rotation can be applied to verify gauge invariance.
struct OperatorDerivative {
    double comp[2][2][2] = {};
    double norm2 = 0.0;
};

inline OperatorDerivative covariant_derivative_operator(const OperatorField& Sf,
                                                        const MetricField& g, double u,
                                                        double v, double h,
                                                        double frame_rotation = 0.0) {
    Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
    if (frame_rotation != 0.0) {
        const double cr = std::cos(frame_rotation), sr = std::sin(frame_rotation);
        R << cr, sr, -sr, cr;  // e'_i = R_{ij} e_j
    }
    auto S = [&](double uu, double vv) -> Eigen::Matrix2d {
        return R * Sf(uu, vv) * R.transpose();
    };

    const Eigen::Matrix2d S0 = S(u, v);
    const Eigen::Matrix2d Se = S(u + h, v), Sw = S(u - h, v);
    const Eigen::Matrix2d Sn = S(u, v + h), Ss = S(u, v - h);
    const Eigen::Matrix2d dSu = (Se - Sw) / (2.0 * h);
    const Eigen::Matrix2d dSv = (Sn - Ss) / (2.0 * h);

    const FrameCoeff B0 = orthonormal_frame(g(u, v));
    const std::array<double, 2> om = connection_form(g, u, v, h);
    double Bk[2][2], omk[2];
    for (int k = 0; k < 2; ++k) {
        for (int a = 0; a < 2; ++a)
            Bk[k][a] = R(k, 0) * B0.b[0][a] + R(k, 1) * B0.b[1][a];
        omk[k] = R(k, 0) * om[0] + R(k, 1) * om[1];
    }

    OperatorDerivative od;
    for (int k = 0; k < 2; ++k) {
        const Eigen::Matrix2d ek = Bk[k][0] * dSu + Bk[k][1] * dSv;
        od.comp[k][0][0] = ek(0, 0) - 2.0 * omk[k] * S0(1, 0);
        od.comp[k][0][1] = ek(0, 1) - omk[k] * (S0(1, 1) - S0(0, 0));
        od.comp[k][1][0] = ek(1, 0) + omk[k] * (S0(0, 0) - S0(1, 1));
        od.comp[k][1][1] = ek(1, 1) + 2.0 * omk[k] * S0(0, 1);
    }
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) od.norm2 += od.comp[k][i][j] * od.comp[k][i][j];
    return od;
}

// Laplace-Beltrami in divergence form,
//   (1/sqrt(det g)) d_a ( sqrt(det g) g^{ab} d_b f ),
// by nested central differences.  Linear in f; annihilates constants.
inline double laplace_beltrami(const ScalarField& f, const MetricField& g, double u,
                               double v, double h) {
    auto flux = [&](int a, double uu, double vv) {
        const Metric2 m = g(uu, vv);
        validate_metric(m);
        const double det = m.det();
        const double dfu = (f(uu + h, vv) - f(uu - h, vv)) / (2.0 * h);
        const double dfv = (f(uu, vv + h) - f(uu, vv - h)) / (2.0 * h);
        const double r = std::sqrt(det);
        if (a == 0) return r * ((m.G * dfu - m.F * dfv) / det);
        return r * ((-m.F * dfu + m.E * dfv) / det);
    };
    const Metric2 g0 = g(u, v);
    validate_metric(g0);
    const double div = (flux(0, u + h, v) - flux(0, u - h, v) + flux(1, u, v + h) -
                        flux(1, u, v - h)) /
                       (2.0 * h);
    return div / std::sqrt(g0.det());
}

// Hessian of a scalar in the canonical orthonormal frame:
//   (Hess f)_{ij} = e_i(e_j(f)) - <nabla_{e_i} e_j, e_m> e_m(f).
inline Eigen::Matrix2d hessian(const ScalarField& f, const MetricField& g, double u,
                               double v, double h) {
    auto df = [&](int j, double uu, double vv) {
        const FrameCoeff B = orthonormal_frame(g(uu, vv));
        const double dfu = (f(uu + h, vv) - f(uu - h, vv)) / (2.0 * h);
        const double dfv = (f(uu, vv + h) - f(uu, vv - h)) / (2.0 * h);
        return B.b[j][0] * dfu + B.b[j][1] * dfv;
    };
    const FrameCoeff B0 = orthonormal_frame(g(u, v));
    const std::array<double, 2> om = connection_form(g, u, v, h);
    const double d1 = df(0, u, v), d2 = df(1, u, v);
    const double eu = (df(0, u + h, v) - df(0, u - h, v)) / (2.0 * h);
    const double ev = (df(0, u, v + h) - df(0, u, v - h)) / (2.0 * h);
    const double fu = (df(1, u + h, v) - df(1, u - h, v)) / (2.0 * h);
    const double fv = (df(1, u, v + h) - df(1, u, v - h)) / (2.0 * h);

    Eigen::Matrix2d H;
    for (int i = 0; i < 2; ++i) {
        const double ei_d1 = B0.b[i][0] * eu + B0.b[i][1] * ev;
        const double ei_d2 = B0.b[i][0] * fu + B0.b[i][1] * fv;
        H(i, 0) = ei_d1 - om[i] * d2;  // nabla_{e_i} e_1 = om_i e_2
        H(i, 1) = ei_d2 + om[i] * d1;  // nabla_{e_i} e_2 = -om_i e_1
    }
    return H;
}

// Measured convergence of a residual across a decreasing step sequence.
struct ConvergenceTable {
    std::vector<double> steps;
    std::vector<double> residuals;
    std::vector<double> pair_orders;
    double order = std::numeric_limits<double>::quiet_NaN();  // least-squares slope
    bool saturated = false;  // residuals at round-off, order meaningless
};

inline constexpr double kSaturationFloor = 100.0 * DBL_EPSILON;

inline ConvergenceTable convergence_order(const std::function<double(double)>& residual,
                                          const std::vector<double>& steps) {
    if (steps.size() < 3) throw ConfigError("convergence estimation needs >= 3 steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0)) throw ConfigError("steps must be positive");
        if (i > 0 && !(steps[i] < steps[i - 1]))
            throw ConfigError("steps must be strictly decreasing");
    }
    ConvergenceTable t;
    t.steps = steps;
    double rmax = 0.0;
    for (double h : steps) {
        const double r = residual(h);
        t.residuals.push_back(r);
        rmax = std::max(rmax, r);
    }
    t.saturated = rmax < kSaturationFloor;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        const double r0 = t.residuals[i], r1 = t.residuals[i + 1];
        double p = std::numeric_limits<double>::quiet_NaN();
        if (r0 > 0.0 && r1 > 0.0) p = std::log(r0 / r1) / std::log(steps[i] / steps[i + 1]);
        t.pair_orders.push_back(p);
    }
    // least-squares slope of log(residual) vs log(h)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(t.residuals[i] > 0.0)) continue;
        const double x = std::log(steps[i]), y = std::log(t.residuals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++npts;
    }
    if (npts >= 2) {
        const double denom = npts * sxx - sx * sx;
        if (denom != 0.0) t.order = (npts * sxy - sx * sy) / denom;
    }
    return t;
}

}  // namespace pmc
