#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "pmc/calculus.hpp"
#include "pmc/immersion.hpp"

namespace pmc {

// ---------------------------------------------------------------------------
// Algebraic layer: pure functions of the frame components (A_H, t, |H|, c).
// ---------------------------------------------------------------------------

// Q(X,Y) = 2<A_H X, Y> - c <X,xi><Y,xi>, in the orthonormal tangent frame.
inline Eigen::Matrix2d q_form(const Eigen::Matrix2d& a_H, const Eigen::Vector2d& t,
                              double c) {
    return 2.0 * a_H - c * (t * t.transpose());
}

// S = 2A_H - c<T,.>T + (c|T|^2/2 - 2|H|^2) id: symmetric and traceless.
inline Eigen::Matrix2d s_operator(const Eigen::Matrix2d& a_H, const Eigen::Vector2d& t,
                                  double Hnorm, double c) {
    const double shift = 0.5 * c * t.squaredNorm() - 2.0 * Hnorm * Hnorm;
    return 2.0 * a_H - c * (t * t.transpose()) + shift * Eigen::Matrix2d::Identity();
}

inline Eigen::Matrix2d q_form(const FrameData& fd) { return q_form(fd.a_H, fd.t, fd.c()); }
inline Eigen::Matrix2d s_operator(const FrameData& fd) {
    return s_operator(fd.a_H, fd.t, fd.Hnorm, fd.c());
}

// Defect of <SX,Y> = Q(X,Y) - (trace Q / 2) <X,Y>: an algebraic identity,
// so the residual is round-off for any inputs.
inline double sq_relation_residual(const Eigen::Matrix2d& Q, const Eigen::Matrix2d& S) {
    const Eigen::Matrix2d traceless =
        Q - 0.5 * Q.trace() * Eigen::Matrix2d::Identity();
    return (S - traceless).cwiseAbs().maxCoeff();
}

// | |ST|^2 - |T|^2 |S|^2 / 2 |, valid for traceless symmetric S in dim 2.
inline double st_identity_residual(const Eigen::Matrix2d& S, const Eigen::Vector2d& t) {
    if (std::abs(S.trace()) >= 1e-10)
        throw std::invalid_argument("st_identity_residual: operator is not traceless");
    const double st2 = (S * t).squaredNorm();
    return std::abs(st2 - 0.5 * t.squaredNorm() * S.squaredNorm());
}

// Margin of the sharp Cauchy-Schwarz step |<ST,T>| <= |T|^2 |S| / sqrt(2)
// (nonnegative up to round-off for traceless symmetric S).
inline double st_cauchy_schwarz_margin(const Eigen::Matrix2d& S, const Eigen::Vector2d& t) {
    const double stt = t.dot(S * t);
    return t.squaredNorm() * S.norm() / std::sqrt(2.0) - std::abs(stt);
}

// ---------------------------------------------------------------------------
// Curvature.
// ---------------------------------------------------------------------------

// Gaussian curvature from the frame data,
//   K = c(1-|T|^2) + |H|^2 - |S|^2/(8|H|^2) - c^2|T|^4/(16|H|^2)
//       - c<ST,T>/(4|H|^2) + sum_{alpha>3} det A_alpha,
// together with the defect of det A_3 against the same closed form and the
// largest det A_alpha over the trace-free normal directions (each <= 0).
struct ExtrinsicCurvature {
    double K = 0.0;
    double detA3 = 0.0;
    double detA3_residual = 0.0;
    double max_detA_alpha = 0.0;  // max over alpha > 3; 0 when there are none
    double stt = 0.0;             // <ST,T>
    double s_norm2 = 0.0;
};

inline ExtrinsicCurvature gauss_curvature_extrinsic(const FrameData& fd) {
    if (fd.minimal)
        throw MinimalSurfaceError("extrinsic curvature formula divides by |H|^2");
    const double c = fd.c();
    const double H2 = fd.Hnorm * fd.Hnorm;
    const Eigen::Matrix2d S = s_operator(fd);
    const double s2 = S.squaredNorm();
    const double T2 = fd.Tnorm2;
    const double stt = fd.t.dot(S * fd.t);

    ExtrinsicCurvature out;
    out.stt = stt;
    out.s_norm2 = s2;
    const double base =
        H2 - s2 / (8.0 * H2) - c * c * T2 * T2 / (16.0 * H2) - c * stt / (4.0 * H2);
    out.detA3 = fd.h_form[0].determinant();
    out.detA3_residual = std::abs(out.detA3 - base);

    double extra = 0.0;
    bool any = false;
    for (int a = 1; a < fd.normal_count(); ++a) {
        const double d = fd.h_form[a].determinant();
        extra += d;
        out.max_detA_alpha = any ? std::max(out.max_detA_alpha, d) : d;
        any = true;
    }
    out.K = c * (1.0 - T2) + base + extra;
    return out;
}

// Independent route to K: Brioschi formula on the metric coefficients alone.
inline double gauss_curvature_intrinsic(const MetricField& g, double u, double v, double h) {
    auto Ef = [&](double a, double b) { return g(a, b).E; };
    auto Ff = [&](double a, double b) { return g(a, b).F; };
    auto Gf = [&](double a, double b) { return g(a, b).G; };
    const Jet2 jE = fd_jet(Ef, u, v, h);
    const Jet2 jF = fd_jet(Ff, u, v, h);
    const Jet2 jG = fd_jet(Gf, u, v, h);
    const Metric2 g0{jE.value, jF.value, jG.value};
    validate_metric(g0);

    Eigen::Matrix3d M1, M2;
    M1 << -0.5 * jE.dvv + jF.duv - 0.5 * jG.duu, 0.5 * jE.du, jF.du - 0.5 * jE.dv,
        jF.dv - 0.5 * jG.du, g0.E, g0.F,
        0.5 * jG.dv, g0.F, g0.G;
    M2 << 0.0, 0.5 * jE.dv, 0.5 * jG.du,
        0.5 * jE.dv, g0.E, g0.F,
        0.5 * jG.du, g0.F, g0.G;
    const double det = g0.det();
    return (M1.determinant() - M2.determinant()) / (det * det);
}

// ---------------------------------------------------------------------------
// Differential residuals.
// ---------------------------------------------------------------------------

// Components of S in the canonical orthonormal frame, as an operator field.
inline OperatorField s_component_field(const SurfaceChart& chart, JetMode mode, double h) {
    return [chart, mode, h](double u, double v) {
        return s_operator(frames(chart, u, v, mode, h));
    };
}

// |(nabla_{e1} S) e2 - (nabla_{e2} S) e1|.  Zero for pmc surfaces; reported
// but not asserted elsewhere.
inline double codazzi_residual(const OperatorField& Sf, const MetricField& g, double u,
                               double v, double h) {
    const OperatorDerivative od = covariant_derivative_operator(Sf, g, u, v, h);
    const double r0 = od.comp[0][1][0] - od.comp[1][0][0];
    const double r1 = od.comp[0][1][1] - od.comp[1][0][1];
    return std::sqrt(r0 * r0 + r1 * r1);
}

// Residuals of the Laplacian identity for |S|^2, in its surface form
//   1/2 lap |S|^2 = 2K|S|^2 + |nabla S|^2
// and in the general Cheng-Yau form specialized to a surface,
//   1/2 lap |S|^2 = |nabla S|^2 + sum_i lambda_i Hess(trace S)_{ii}
//                   + K (lambda_1 - lambda_2)^2,
// with lambda_i the eigenvalues of S.  The two agree identically since S is
// traceless and (lambda_1 - lambda_2)^2 = 2|S|^2.
struct SimonsResiduals {
    double surface = 0.0;
    double cheng_yau = 0.0;
    double K = 0.0;
    double s_norm2 = 0.0;
    double grad_s_norm2 = 0.0;
    double half_lap_s_norm2 = 0.0;
};

inline SimonsResiduals simons_residual(const SurfaceChart& chart, double u, double v,
                                       JetMode mode, double h) {
    const OperatorField Sf = s_component_field(chart, mode, h);
    const MetricField g = induced_metric(chart, mode, h);
    ScalarField s2f = [Sf](double uu, double vv) { return Sf(uu, vv).squaredNorm(); };

    SimonsResiduals out;
    out.half_lap_s_norm2 = 0.5 * laplace_beltrami(s2f, g, u, v, h);
    const OperatorDerivative od = covariant_derivative_operator(Sf, g, u, v, h);
    out.grad_s_norm2 = od.norm2;

    const FrameData fd = frames(chart, u, v, mode, h);
    out.K = fd.minimal ? gauss_curvature_intrinsic(g, u, v, h)
                       : gauss_curvature_extrinsic(fd).K;

    const Eigen::Matrix2d S0 = s_operator(fd);
    out.s_norm2 = S0.squaredNorm();
    out.surface =
        std::abs(out.half_lap_s_norm2 - 2.0 * out.K * out.s_norm2 - out.grad_s_norm2);

    // Cheng-Yau form: eigen-structure of S plus the Hessian of its trace.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (S0 + S0.transpose()));
    const Eigen::Vector2d lam = es.eigenvalues();
    const Eigen::Matrix2d V = es.eigenvectors();
    ScalarField trf = [Sf](double uu, double vv) { return Sf(uu, vv).trace(); };
    Eigen::Matrix2d Ht = hessian(trf, g, u, v, h);
    Ht = 0.5 * (Ht + Ht.transpose()).eval();
    const Eigen::Matrix2d Hrot = V.transpose() * Ht * V;
    const double trace_term = lam(0) * Hrot(0, 0) + lam(1) * Hrot(1, 1);
    const double curv_term = out.K * (lam(0) - lam(1)) * (lam(0) - lam(1));
    out.cheng_yau =
        std::abs(out.half_lap_s_norm2 - out.grad_s_norm2 - trace_term - curv_term);
    return out;
}

// ---------------------------------------------------------------------------
// Bounds.
// ---------------------------------------------------------------------------

// Pointwise quadratic-form margin and the closed-form |S| bounds.  The margin
//   M_Q = -|S|^2/(8|H|^2) - c<ST,T>/(4|H|^2) - c^2|T|^4/(16|H|^2)
//         + c(1-|T|^2) + |H|^2
// equals K - sum_{alpha>3} det A_alpha >= K, so it is nonnegative wherever
// K >= 0.  Two closed forms are reported: the literal ones and the exact
// positive roots of the quadratic inequalities
//   c > 0:  |S|^2 - sqrt(2) c |S| - 8|H|^2 (c + |H|^2) <= 0,
//   c < 0:  |S|^2 + sqrt(2) c |S| - 8|H|^4 <= 0.
// Only the root-derived bounds are asserted by the verification checks.
struct BoundMargins {
    double m_quadratic = 0.0;
    double bound_paper = 0.0;
    double bound_derived = 0.0;
    double margin_paper = 0.0;     // bound_paper - |S|
    double margin_derived = 0.0;   // bound_derived - |S|
};

inline BoundMargins bound_margins(double c, double Hnorm, double Tnorm, double Snorm,
                                  double stt) {
    if (c == 0.0) throw ConfigError("|S| bounds need a curved factor (c != 0)");
    if (Hnorm <= kEpsH)
        throw MinimalSurfaceError("|S| bounds divide by |H|^2 (minimal surface)");
    const double H2 = Hnorm * Hnorm;
    const double T2 = Tnorm * Tnorm;
    BoundMargins out;
    out.m_quadratic = -Snorm * Snorm / (8.0 * H2) - c * stt / (4.0 * H2) -
                      c * c * T2 * T2 / (16.0 * H2) + c * (1.0 - T2) + H2;
    const double r2 = std::sqrt(2.0);
    if (c > 0.0) {
        out.bound_paper = (std::sqrt(c * c + 16.0 * c * H2 + 16.0 * H2) + c) / r2;
        out.bound_derived = (std::sqrt(c * c + 16.0 * c * H2 + 16.0 * H2 * H2) + c) / r2;
    } else {
        out.bound_paper = (std::sqrt(c * c + H2) - c) / r2;
        out.bound_derived = (std::sqrt(c * c + 16.0 * H2 * H2) - c) / r2;
    }
    out.margin_paper = out.bound_paper - Snorm;
    out.margin_derived = out.bound_derived - Snorm;
    return out;
}

// ---------------------------------------------------------------------------
// Holomorphicity of the (2,0)-part of Q.
// ---------------------------------------------------------------------------

// In isothermal chart coordinates the (2,0)-part of Q has coefficient
//   q = (Q(du,du) - Q(dv,dv))/4 - i Q(du,dv)/2,
// holomorphic exactly when Q^{(2,0)} is.  Returns the Cauchy-Riemann defect
//   |d_u Re q - d_v Im q| + |d_v Re q + d_u Im q|.
inline double holomorphicity_residual(const SurfaceChart& chart, double u, double v,
                                      JetMode mode, double h,
                                      double iso_tol = kIsothermalTol) {
    if (!chart.isothermal_claim)
        throw NotIsothermalError("chart '" + chart.name +
                                 "' does not claim isothermal coordinates");
    auto q_at = [&](double uu, double vv) -> Eigen::Vector2d {
        const FrameData fd = frames(chart, uu, vv, mode, h);
        if (std::abs(fd.g.E - fd.g.G) > iso_tol * fd.g.E ||
            std::abs(fd.g.F) > iso_tol * fd.g.E)
            throw NotIsothermalError("chart '" + chart.name +
                                     "' fails the isothermal check");
        // coordinate vectors in the frame: du = sqrt(E) e1,
        // dv = (F/sqrt(E)) e1 + w e2
        const double se = std::sqrt(fd.g.E);
        const double w = std::sqrt(fd.g.G - fd.g.F * fd.g.F / fd.g.E);
        const Eigen::Vector2d pu(se, 0.0), pv(fd.g.F / se, w);
        const Eigen::Matrix2d aH = fd.a_H;
        const double xiu = pu.dot(fd.t), xiv = pv.dot(fd.t);
        const double c = fd.c();
        const double Quu = 2.0 * pu.dot(aH * pu) - c * xiu * xiu;
        const double Qvv = 2.0 * pv.dot(aH * pv) - c * xiv * xiv;
        const double Quv = 2.0 * pu.dot(aH * pv) - c * xiu * xiv;
        return Eigen::Vector2d(0.25 * (Quu - Qvv), -0.5 * Quv);
    };
    const Eigen::Vector2d qe = q_at(u + h, v), qw = q_at(u - h, v);
    const Eigen::Vector2d qn = q_at(u, v + h), qs = q_at(u, v - h);
    const double re_u = (qe(0) - qw(0)) / (2.0 * h);
    const double re_v = (qn(0) - qs(0)) / (2.0 * h);
    const double im_u = (qe(1) - qw(1)) / (2.0 * h);
    const double im_v = (qn(1) - qs(1)) / (2.0 * h);
    return std::abs(re_u - im_v) + std::abs(re_v + im_u);
}

// ---------------------------------------------------------------------------
// Per-point report.
// ---------------------------------------------------------------------------

struct InvariantReport {
    Eigen::Matrix2d Q, S;
    double s_norm2 = 0.0;
    std::optional<double> K_extrinsic;
    double K_intrinsic = 0.0;
    std::optional<double> detA3;
    std::optional<double> detA3_residual;
    std::optional<double> max_detA_alpha;
    double stt = 0.0;
    std::optional<BoundMargins> margins;

    double sq_relation = 0.0;
    double trace_S = 0.0;
    double st_identity = 0.0;
    std::optional<double> codazzi;
    std::optional<double> simons;
    std::optional<double> cheng_yau;
    std::optional<double> holomorphic;

    bool minimal = false;
    bool flat = false;
    bool S_zero = false;
};

struct ReportOptions {
    bool differential = true;   // codazzi / simons / cheng-yau
    bool holomorphic = false;   // only meaningful on isothermal charts
    bool bounds = true;         // skipped silently on minimal points
    double flag_tol = 1e-6;     // |K| and |S| thresholds for flat / S_zero
};

inline InvariantReport invariant_report(const SurfaceChart& chart, double u, double v,
                                        JetMode mode, double h,
                                        const ReportOptions& opt = {}) {
    const FrameData fd = frames(chart, u, v, mode, h);
    InvariantReport rep;
    rep.minimal = fd.minimal;
    rep.Q = q_form(fd);
    rep.S = s_operator(fd);
    rep.s_norm2 = rep.S.squaredNorm();
    rep.sq_relation = sq_relation_residual(rep.Q, rep.S);
    rep.trace_S = std::abs(rep.S.trace());
    rep.st_identity = st_identity_residual(rep.S, fd.t);
    rep.stt = fd.t.dot(rep.S * fd.t);

    const MetricField g = induced_metric(chart, mode, h);
    rep.K_intrinsic = gauss_curvature_intrinsic(g, u, v, h);
    if (!fd.minimal) {
        const ExtrinsicCurvature ec = gauss_curvature_extrinsic(fd);
        rep.K_extrinsic = ec.K;
        rep.detA3 = ec.detA3;
        rep.detA3_residual = ec.detA3_residual;
        if (fd.normal_count() > 1) rep.max_detA_alpha = ec.max_detA_alpha;
        if (opt.bounds && fd.c() != 0.0)
            rep.margins = bound_margins(fd.c(), fd.Hnorm, std::sqrt(fd.Tnorm2),
                                        rep.S.norm(), rep.stt);
    }
    if (opt.differential) {
        const OperatorField Sf = s_component_field(chart, mode, h);
        rep.codazzi = codazzi_residual(Sf, g, u, v, h);
        const SimonsResiduals sr = simons_residual(chart, u, v, mode, h);
        rep.simons = sr.surface;
        rep.cheng_yau = sr.cheng_yau;
    }
    if (opt.holomorphic) rep.holomorphic = holomorphicity_residual(chart, u, v, mode, h);

    const double K = rep.K_extrinsic ? *rep.K_extrinsic : rep.K_intrinsic;
    rep.flat = std::abs(K) < opt.flag_tol;
    rep.S_zero = rep.S.norm() < opt.flag_tol;
    return rep;
}

}  // namespace pmc
