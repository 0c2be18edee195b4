#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pmc/catalog.hpp"
#include "pmc/immersion.hpp"
#include "pmc/invariants.hpp"

using namespace pmc;

namespace {
constexpr double kH = 1e-4;
}

TEST_CASE("slice is totally geodesic: H = 0, T = 0, minimal flag") {
    const CatalogEntry e = make_surface("slice");
    const FrameData fd = frames(e.chart, 0.1, -0.2, JetMode::Analytic, kH);
    CHECK(fd.minimal);
    CHECK(fd.Hnorm < 1e-12);
    CHECK(std::sqrt(fd.Tnorm2) < 1e-12);
    for (int a = 3; a < 3 + fd.normal_count(); ++a)
        CHECK(shape_operator(fd, a).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("vertical cylinder in S^2 x R at theta0 = pi/4") {
    // Circle of colatitude theta0 has geodesic curvature cot(theta0) = 1,
    // vertical lines are geodesics: |H| = 1/2, A_3 = diag(1, 0), and the
    // vertical direction is fully tangent (|T| = 1).
    const CatalogEntry e = make_surface("cyl_s2", {{"theta0", M_PI / 4.0}});
    const FrameData fd = frames(e.chart, 0.7, 0.2, JetMode::Analytic, kH);
    CHECK_FALSE(fd.minimal);
    CHECK(fd.Hnorm == Catch::Approx(0.5).margin(1e-12));
    CHECK(std::sqrt(fd.Tnorm2) == Catch::Approx(1.0).margin(1e-12));
    CHECK(fd.Nnorm2 == Catch::Approx(0.0).margin(1e-12));

    const Eigen::Matrix2d A3 = shape_operator(fd, 3);
    CHECK(A3(0, 0) == Catch::Approx(1.0).margin(1e-10));
    CHECK(A3(0, 1) == Catch::Approx(0.0).margin(1e-10));
    CHECK(A3(1, 1) == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("geodesic sphere in S^3 x R at theta0 = pi/4 is umbilical") {
    const CatalogEntry e = make_surface("sphere_s3", {{"theta0", M_PI / 4.0}});
    const FrameData fd = frames(e.chart, 0.3, -0.4, JetMode::Analytic, kH);
    CHECK(fd.Hnorm == Catch::Approx(1.0).margin(1e-11));
    CHECK(std::sqrt(fd.Tnorm2) == Catch::Approx(0.0).margin(1e-12));
    const Eigen::Matrix2d A3 = shape_operator(fd, 3);
    CHECK(A3(0, 0) == Catch::Approx(1.0).margin(1e-10));
    CHECK(A3(1, 1) == Catch::Approx(1.0).margin(1e-10));
    CHECK(A3(0, 1) == Catch::Approx(0.0).margin(1e-10));
    CHECK(shape_operator(fd, 4).cwiseAbs().maxCoeff() < 1e-10);  // A_xi = 0
}

TEST_CASE("frame invariants hold on every catalog chart", "[property]") {
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_surface(name);
        const Domain& d = e.chart.domain;
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
                const double u = d.u0 + (d.u1 - d.u0) * i / 4.0;
                const double v = d.v0 + (d.v1 - d.v0) * j / 4.0;
                const FrameData fd = frames(e.chart, u, v, JetMode::Analytic, kH);
                // orthonormal frame
                std::vector<const Vec*> basis = {&fd.e[0], &fd.e[1]};
                for (const Vec& n : fd.normals) basis.push_back(&n);
                for (std::size_t a = 0; a < basis.size(); ++a)
                    for (std::size_t b = a; b < basis.size(); ++b) {
                        const double ip = fd.model.sdot(*basis[a], *basis[b]);
                        CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
                    }
                // unit vertical split
                CHECK(std::abs(fd.Tnorm2 + fd.Nnorm2 - 1.0) < 1e-10);
                // h^alpha symmetric by construction
                for (int a = 0; a < fd.normal_count(); ++a)
                    CHECK(fd.h_form[a](0, 1) == fd.h_form[a](1, 0));
                // E3 aligned with H on non-minimal charts
                if (!fd.minimal) {
                    const Vec diff = fd.normals[0] - fd.H / fd.Hnorm;
                    CHECK(diff.lpNorm<Eigen::Infinity>() < 1e-10);
                    CHECK(std::abs(fd.h_form[0].trace() - 2.0 * fd.Hnorm) < 1e-8);
                }
                for (int a = 1; a < fd.normal_count(); ++a)
                    if (!fd.minimal) CHECK(std::abs(fd.h_form[a].trace()) < 1e-8);
            }
    }
}

TEST_CASE("second fundamental form symmetry, independent route", "[property]") {
    // <nabla_{e1} e2 - nabla_{e2} e1, E_alpha> should be O(h^2): the frame
    // bracket is tangent, so its normal part vanishes.
    const CatalogEntry e = make_surface("graph_control");
    const double u = 0.4, v = 0.35, h = 1e-4;
    const FrameData fd0 = frames(e.chart, u, v, JetMode::Analytic, h);
    auto e1f = [&](double uu, double vv) {
        return frames(e.chart, uu, vv, JetMode::Analytic, h).e[0];
    };
    auto e2f = [&](double uu, double vv) {
        return frames(e.chart, uu, vv, JetMode::Analytic, h).e[1];
    };
    auto dirderiv = [&](auto&& field, int i) {
        const Vec fe = field(u + h, v), fw = field(u - h, v);
        const Vec fn = field(u, v + h), fs = field(u, v - h);
        const Vec du = (fe - fw) / (2.0 * h), dv = (fn - fs) / (2.0 * h);
        return Vec(fd0.coeff.b[i][0] * du + fd0.coeff.b[i][1] * dv);
    };
    const Vec bracket = dirderiv(e2f, 0) - dirderiv(e1f, 1);
    for (const Vec& n : fd0.normals)
        CHECK(std::abs(fd0.model.sdot(bracket, n)) < 100.0 * h * h);
}

TEST_CASE("weingarten residual is O(h^2) on pmc charts and the control") {
    for (const char* name : {"slice", "cyl_s2", "graph_control"}) {
        const CatalogEntry e = make_surface(name);
        const Domain& d = e.chart.domain;
        const double u = 0.5 * (d.u0 + d.u1), v = 0.5 * (d.v0 + d.v1);
        for (int a = 0; a < e.chart.model.n - 1; ++a) {
            const double r = weingarten_residual(e.chart, u, v, a + 3,
                                                 JetMode::Analytic, 1e-4);
            CHECK(r < 1e-6);
        }
    }
}

TEST_CASE("pmc residual vanishes on pmc charts") {
    for (const char* name : {"cyl_s2", "cyl_h2", "sphere_s3", "clifford_small_s3"}) {
        const CatalogEntry e = make_surface(name);
        const Domain& d = e.chart.domain;
        const double u = 0.45 * (d.u0 + d.u1), v = 0.55 * (d.v0 + d.v1);
        const PmcResidual pr = pmc_residual(e.chart, u, v, JetMode::Analytic, 1e-4);
        CHECK_FALSE(pr.minimal);
        CHECK(pr.normal_derivative < 1e-8);
        CHECK(std::abs(pr.d_absH[0]) < 1e-8);
        CHECK(std::abs(pr.d_absH[1]) < 1e-8);
    }
}

TEST_CASE("pmc residual of the minimal slice reports the minimality flag") {
    const CatalogEntry e = make_surface("slice");
    const PmcResidual pr = pmc_residual(e.chart, 0.1, 0.1, JetMode::Analytic, 1e-4);
    CHECK(pr.minimal);
    CHECK(pr.normal_derivative == 0.0);
}

TEST_CASE("graph control is not pmc at its probe point") {
    const CatalogEntry e = make_surface("graph_control");
    const PmcResidual pr =
        pmc_residual(e.chart, e.probe_u, e.probe_v, JetMode::Analytic, 1e-4);
    CHECK(pr.normal_derivative >= e.min_pmc_residual);
}

TEST_CASE("xi decomposition on the witnesses") {
    const CatalogEntry cyl = make_surface("cyl_s2");
    const XiDecomposition xc =
        xi_decomposition(frames(cyl.chart, 0.5, 0.0, JetMode::Analytic, kH));
    CHECK(xc.Tnorm2 == Catch::Approx(1.0).margin(1e-12));  // e2 is vertical

    const CatalogEntry sph = make_surface("sphere_s3");
    const XiDecomposition xs =
        xi_decomposition(frames(sph.chart, 0.2, 0.1, JetMode::Analytic, kH));
    CHECK(xs.Tnorm2 == Catch::Approx(0.0).margin(1e-12));  // horizontal surface
    CHECK(xs.Nnorm2 == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("frame gauge invariance under the alternate completion order") {
    for (const char* name : {"sphere_s3", "clifford_small_s3", "slice"}) {
        const CatalogEntry e = make_surface(name);
        const Domain& d = e.chart.domain;
        const double u = 0.4 * d.u0 + 0.6 * d.u1, v = 0.7 * d.v0 + 0.3 * d.v1;
        const FrameData fwd =
            frames(e.chart, u, v, JetMode::Analytic, kH, NormalCompletion::Forward);
        const FrameData rev =
            frames(e.chart, u, v, JetMode::Analytic, kH, NormalCompletion::Reverse);
        CHECK(std::abs(fwd.Hnorm - rev.Hnorm) < 1e-9);
        CHECK(std::abs(fwd.Tnorm2 - rev.Tnorm2) < 1e-9);
        const double s_fwd = s_operator(fwd).norm();
        const double s_rev = s_operator(rev).norm();
        CHECK(std::abs(s_fwd - s_rev) < 1e-9);
    }
}

TEST_CASE("finite-difference frames converge to analytic frames", "[convergence]") {
    for (const char* name : {"cyl_s2", "sphere_s3", "graph_control"}) {
        const CatalogEntry e = make_surface(name);
        const Domain& d = e.chart.domain;
        const double u = 0.5 * (d.u0 + d.u1), v = 0.5 * (d.v0 + d.v1);
        const FrameData ref = frames(e.chart, u, v, JetMode::Analytic, kH);
        const ConvergenceTable t = convergence_order(
            [&](double h) {
                const FrameData fd = frames(e.chart, u, v, JetMode::FiniteDifference, h);
                double err = std::abs(fd.Hnorm - ref.Hnorm);
                err = std::max(err, (fd.a_H - ref.a_H).cwiseAbs().maxCoeff());
                err = std::max(err, std::abs(fd.Tnorm2 - ref.Tnorm2));
                return err;
            },
            {4e-3, 2e-3, 1e-3});
        INFO(name);
        CHECK((t.saturated || t.order >= 1.9));
    }
}

TEST_CASE("frames reject out-of-range and degenerate input") {
    const CatalogEntry e = make_surface("cyl_s2");
    CHECK_THROWS_AS(frames(e.chart, -5.0, 0.0, JetMode::Analytic, kH), DomainError);
    CHECK_THROWS_AS(
        frames(e.chart, 1.999999, 0.0, JetMode::FiniteDifference, 1e-4), DomainError);
    const FrameData fd = frames(e.chart, 0.5, 0.5, JetMode::Analytic, kH);
    CHECK_THROWS_AS(shape_operator(fd, 2), std::invalid_argument);
    CHECK_THROWS_AS(shape_operator(fd, 4), std::invalid_argument);
}
