#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "pmc/calculus.hpp"
#include "pmc/chart.hpp"
#include "pmc/spaceform.hpp"

namespace pmc {

enum class NormalCompletion { Forward, Reverse };

// Per-point frame and second-fundamental-form data of an immersed surface.
// Tangent frame: Gram-Schmidt on (x_u, x_v) with e1 along x_u.  Normal frame:
// E3 = H/|H| when non-minimal, completed by projecting flat coordinate
// directions in a fixed order and skipping near-dependent candidates.
// All vectors are stacked flat coordinates (M part first, height last).
struct FrameData {
    SpaceFormModel model;
    double u = 0.0, v = 0.0, h = 0.0;
    JetMode mode = JetMode::Analytic;

    Vec x;                       // position
    std::array<Vec, 2> e;        // orthonormal tangent frame
    std::vector<Vec> normals;    // E_3 .. E_{n+1}
    std::vector<char> completed; // per normal: produced by completion (sign-alignable)
    std::vector<Eigen::Matrix2d> h_form;  // h^alpha_{ij} per normal
    Eigen::Matrix2d a_H;         // <sigma(e_i,e_j), H>
    Vec H;                       // mean curvature vector
    double Hnorm = 0.0;
    Eigen::Vector2d t;           // tangent components of xi
    double Tnorm2 = 0.0, Nnorm2 = 0.0;
    Metric2 g;                   // induced metric at the point
    FrameCoeff coeff;            // e_i in the coordinate basis
    bool minimal = false;

    double c() const { return model.c; }
    int normal_count() const { return static_cast<int>(normals.size()); }

    AmbientPoint point() const {
        const int m = model.m_dim();
        return AmbientPoint{x.head(m), x(m)};
    }
    AmbientVector ambient(const Vec& stacked) const {
        const int m = model.m_dim();
        return AmbientVector{stacked.head(m), stacked(m), point()};
    }
};

namespace detail {

// Projection onto the tangent space of M^n(c) x R at stacked position x:
// removes the radial model direction from the M part.
inline Vec project_product_tangent(const SpaceFormModel& model, const Vec& x, const Vec& w) {
    if (model.c == 0.0) return w;
    const int m = model.m_dim();
    Vec out = w;
    const double coef = model.c * (model.lorentz()
                                       ? (w.head(m).dot(x.head(m)) - 2.0 * w(0) * x(0))
                                       : w.head(m).dot(x.head(m)));
    out.head(m) -= coef * x.head(m);
    return out;
}

}  // namespace detail

inline FrameData frames(const SurfaceChart& chart, double u, double v, JetMode mode,
                        double h, NormalCompletion completion = NormalCompletion::Forward,
                        const FrameData* align_to = nullptr) {
    const SpaceFormModel& model = chart.model;
    const int D = model.flat_dim();
    const ChartJet J = chart_jet(chart, u, v, mode, h);

    FrameData fd;
    fd.model = model;
    fd.u = u;
    fd.v = v;
    fd.h = h;
    fd.mode = mode;
    fd.x = J.x;

    if (model.c != 0.0) {
        const int m = model.m_dim();
        const double q = model.mdot(J.x.head(m), J.x.head(m));
        if (std::abs(q - 1.0 / model.c) > kModelTol)
            throw DegenerateChartError("chart image violates the flat-model constraint");
    }

    const double E = model.sdot(J.xu, J.xu);
    const double F = model.sdot(J.xu, J.xv);
    const double G = model.sdot(J.xv, J.xv);
    fd.g = Metric2{E, F, G};
    if (!(fd.g.det() > kGramTol))
        throw DegenerateChartError("coordinate tangents nearly dependent");
    fd.coeff = orthonormal_frame(fd.g);

    fd.e[0] = fd.coeff.b[0][0] * J.xu;
    fd.e[1] = fd.coeff.b[1][0] * J.xu + fd.coeff.b[1][1] * J.xv;

    // sigma(e_i,e_j): flat second derivative, projected to the product tangent
    // space, with the surface-tangential part removed.
    const Vec* xdd[2][2] = {{&J.xuu, &J.xuv}, {&J.xuv, &J.xvv}};
    std::array<std::array<Vec, 2>, 2> sigma;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Vec w = Vec::Zero(D);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    w += fd.coeff.b[i][k] * fd.coeff.b[j][l] * (*xdd[k][l]);
            w = detail::project_product_tangent(model, J.x, w);
            w -= model.sdot(w, fd.e[0]) * fd.e[0];
            w -= model.sdot(w, fd.e[1]) * fd.e[1];
            sigma[i][j] = std::move(w);
        }

    fd.H = 0.5 * (sigma[0][0] + sigma[1][1]);
    const double H2 = model.sdot(fd.H, fd.H);
    fd.Hnorm = std::sqrt(std::max(0.0, H2));
    fd.minimal = fd.Hnorm <= kEpsH;

    // Normal frame.
    const int wanted = model.n - 1;
    fd.normals.reserve(wanted);
    if (!fd.minimal) {
        fd.normals.push_back(fd.H / fd.Hnorm);
        fd.completed.push_back(0);
    }
    auto push_candidate = [&](int k) {
        if (static_cast<int>(fd.normals.size()) >= wanted) return;
        Vec d = Vec::Zero(D);
        d(k) = 1.0;
        Vec w = detail::project_product_tangent(model, J.x, d);
        w -= model.sdot(w, fd.e[0]) * fd.e[0];
        w -= model.sdot(w, fd.e[1]) * fd.e[1];
        for (const Vec& n : fd.normals) w -= model.sdot(w, n) * n;
        const double nn = model.sdot(w, w);
        if (nn < kNearDependentTol * kNearDependentTol) return;  // near-dependent, skip
        fd.normals.push_back(w / std::sqrt(nn));
        fd.completed.push_back(1);
    };
    if (completion == NormalCompletion::Forward) {
        for (int k = 0; k < D; ++k) push_candidate(k);
    } else {
        for (int k = D - 1; k >= 0; --k) push_candidate(k);
    }
    if (static_cast<int>(fd.normals.size()) != wanted)
        throw DegenerateChartError("normal frame completion failed");

    // Keep completion-generated normals continuous along stencils.
    if (align_to && align_to->normal_count() == wanted) {
        for (int a = 0; a < wanted; ++a)
            if (fd.completed[a] && model.sdot(fd.normals[a], align_to->normals[a]) < 0.0)
                fd.normals[a] = -fd.normals[a];
    }

    fd.h_form.resize(wanted);
    for (int a = 0; a < wanted; ++a)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                fd.h_form[a](i, j) = model.sdot(sigma[i][j], fd.normals[a]);

    // A_H is normal-frame independent: <sigma(e_i,e_j), H>.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) fd.a_H(i, j) = model.sdot(sigma[i][j], fd.H);

    // Split of the vertical unit xi: t_i = <xi, e_i> is the height component
    // of e_i; N = xi - t_1 e_1 - t_2 e_2.
    fd.t(0) = fd.e[0](D - 1);
    fd.t(1) = fd.e[1](D - 1);
    fd.Tnorm2 = fd.t.squaredNorm();
    Vec N = Vec::Zero(D);
    N(D - 1) = 1.0;
    N -= fd.t(0) * fd.e[0] + fd.t(1) * fd.e[1];
    fd.Nnorm2 = model.sdot(N, N);
    return fd;
}

// Shape operator components (A_alpha)_{ij} = h^alpha_{ij}, alpha from 3.
inline Eigen::Matrix2d shape_operator(const FrameData& fd, int alpha) {
    const int idx = alpha - 3;
    if (idx < 0 || idx >= fd.normal_count())
        throw std::invalid_argument("shape_operator: normal index out of range");
    return fd.h_form[idx];
}

namespace detail {

// Directional derivative of a stacked vector field along e_i at the center of
// a 4-point stencil; the field is sampled through `eval`.
template <typename FieldEval>
Vec stencil_derivative(const FrameData& fd0, FieldEval&& eval, int i, double h) {
    const Vec fe = eval(fd0.u + h, fd0.v);
    const Vec fw = eval(fd0.u - h, fd0.v);
    const Vec fn = eval(fd0.u, fd0.v + h);
    const Vec fs = eval(fd0.u, fd0.v - h);
    const Vec du = (fe - fw) / (2.0 * h);
    const Vec dv = (fn - fs) / (2.0 * h);
    return fd0.coeff.b[i][0] * du + fd0.coeff.b[i][1] * dv;
}

}  // namespace detail

// max_i | tangential(nabla_{e_i} E_alpha) + A_alpha e_i |.  The Weingarten
// equation holds for every immersed surface; the residual is O(h^2).
inline double weingarten_residual(const SurfaceChart& chart, double u, double v, int alpha,
                                  JetMode mode, double h) {
    const FrameData fd0 = frames(chart, u, v, mode, h);
    const int idx = alpha - 3;
    if (idx < 0 || idx >= fd0.normal_count())
        throw std::invalid_argument("weingarten_residual: normal index out of range");
    auto field = [&](double uu, double vv) {
        return frames(chart, uu, vv, mode, h, NormalCompletion::Forward, &fd0).normals[idx];
    };
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        Vec d = detail::stencil_derivative(fd0, field, i, h);
        d = detail::project_product_tangent(fd0.model, fd0.x, d);
        Eigen::Vector2d r;
        for (int j = 0; j < 2; ++j)
            r(j) = fd0.model.sdot(d, fd0.e[j]) + fd0.h_form[idx](i, j);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

// Parallelism defect of the mean curvature vector in the normal bundle:
// max_i |normal part of nabla_{e_i} H|, plus the derivative of |H| along the
// tangent frame (both vanish for pmc surfaces).
struct PmcResidual {
    double normal_derivative = 0.0;
    std::array<double, 2> d_absH{0.0, 0.0};
    bool minimal = false;
};

inline PmcResidual pmc_residual(const SurfaceChart& chart, double u, double v, JetMode mode,
                                double h) {
    const FrameData fd0 = frames(chart, u, v, mode, h);
    PmcResidual out;
    out.minimal = fd0.minimal;
    if (fd0.minimal) return out;

    const FrameData fe = frames(chart, u + h, v, mode, h);
    const FrameData fw = frames(chart, u - h, v, mode, h);
    const FrameData fn = frames(chart, u, v + h, mode, h);
    const FrameData fs = frames(chart, u, v - h, mode, h);
    const Vec dHu = (fe.H - fw.H) / (2.0 * h);
    const Vec dHv = (fn.H - fs.H) / (2.0 * h);
    const double dnu = (fe.Hnorm - fw.Hnorm) / (2.0 * h);
    const double dnv = (fn.Hnorm - fs.Hnorm) / (2.0 * h);

    for (int i = 0; i < 2; ++i) {
        Vec d = fd0.coeff.b[i][0] * dHu + fd0.coeff.b[i][1] * dHv;
        d = detail::project_product_tangent(fd0.model, fd0.x, d);
        d -= fd0.model.sdot(d, fd0.e[0]) * fd0.e[0];
        d -= fd0.model.sdot(d, fd0.e[1]) * fd0.e[1];
        out.normal_derivative =
            std::max(out.normal_derivative, std::sqrt(std::abs(fd0.model.sdot(d, d))));
        out.d_absH[i] = fd0.coeff.b[i][0] * dnu + fd0.coeff.b[i][1] * dnv;
    }
    return out;
}

// Tangential / normal split of the vertical direction.
struct XiDecomposition {
    Eigen::Vector2d t;
    double Tnorm2 = 0.0;
    double Nnorm2 = 0.0;
};

inline XiDecomposition xi_decomposition(const FrameData& fd) {
    return XiDecomposition{fd.t, fd.Tnorm2, fd.Nnorm2};
}

// Induced metric of a chart as a metric field.
inline MetricField induced_metric(const SurfaceChart& chart, JetMode mode, double h) {
    return [chart, mode, h](double u, double v) {
        const ChartJet J = chart_jet(chart, u, v, mode, h);
        return Metric2{chart.model.sdot(J.xu, J.xu), chart.model.sdot(J.xu, J.xv),
                       chart.model.sdot(J.xv, J.xv)};
    };
}

}  // namespace pmc
