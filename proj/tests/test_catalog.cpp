#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pmc/catalog.hpp"

using namespace pmc;

TEST_CASE("catalog lists its surfaces") {
    const auto& names = catalog_names();
    CHECK(names.size() == 7);
    for (const auto& n : names) CHECK_NOTHROW(make_surface(n));
    CHECK_THROWS_AS(make_surface("moebius"), ConfigError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_surface("cyl_s2", {{"theta0", 2.0}}), ConfigError);
    CHECK_THROWS_AS(make_surface("cyl_s2", {{"theta0", 0.0}}), ConfigError);
    CHECK_THROWS_AS(make_surface("cyl_h2", {{"rho", -1.0}}), ConfigError);
    CHECK_THROWS_AS(make_surface("sphere_s3", {{"radius", 1.0}}), ConfigError);
    CHECK_THROWS_AS(make_surface("graph_control", {{"lambda", 0.0}}), ConfigError);
    CHECK_NOTHROW(make_surface("cyl_s2", {{"theta0", 1.2}}));
}

TEST_CASE("stored ground truth is consistent with the operator definition") {
    // |S|^2 recomputed from the stored closed-form frame data must match.
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_surface(name);
        if (!e.truth.has_values) continue;
        const Eigen::Matrix2d S =
            s_operator(e.a_H, e.t, e.truth.Hnorm, e.chart.model.c);
        INFO(name);
        CHECK(std::abs(S.squaredNorm() - e.truth.s_norm2) < 1e-12);
    }
}

TEST_CASE("chart images satisfy the model constraint") {
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_surface(name);
        if (e.chart.model.c == 0.0) continue;
        const Domain& d = e.chart.domain;
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j) {
                const double u = d.u0 + (d.u1 - d.u0) * i / 4.0;
                const double v = d.v0 + (d.v1 - d.v0) * j / 4.0;
                const Vec x = e.chart.map(u, v);
                const int m = e.chart.model.m_dim();
                const double q = e.chart.model.mdot(x.head(m), x.head(m));
                INFO(name);
                CHECK(std::abs(q - 1.0 / e.chart.model.c) < 1e-12);
            }
    }
}

TEST_CASE("analytic jets match finite differences", "[convergence]") {
    // guards the hand-derived closed-form jets of every catalog chart
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_surface(name);
        const Domain& d = e.chart.domain;
        const double u = 0.55 * d.u0 + 0.45 * d.u1, v = 0.35 * d.v0 + 0.65 * d.v1;
        const ChartJet exact = chart_jet(e.chart, u, v, JetMode::Analytic, 0.0);
        const ConvergenceTable t = convergence_order(
            [&](double h) {
                const ChartJet fd = chart_jet(e.chart, u, v, JetMode::FiniteDifference, h);
                double err = 0.0;
                err = std::max(err, (fd.xu - exact.xu).lpNorm<Eigen::Infinity>());
                err = std::max(err, (fd.xv - exact.xv).lpNorm<Eigen::Infinity>());
                err = std::max(err, (fd.xuu - exact.xuu).lpNorm<Eigen::Infinity>());
                err = std::max(err, (fd.xuv - exact.xuv).lpNorm<Eigen::Infinity>());
                err = std::max(err, (fd.xvv - exact.xvv).lpNorm<Eigen::Infinity>());
                return err;
            },
            {4e-3, 2e-3, 1e-3});
        INFO(name);
        CHECK((t.saturated || t.order >= 1.9));
        CHECK((exact.x - e.chart.map(u, v)).lpNorm<Eigen::Infinity>() < 1e-15);
    }
}

TEST_CASE("ground truth check: analytic deviations at round-off") {
    for (const char* name : {"cyl_s2", "cyl_h2", "sphere_s3", "clifford_small_s3"}) {
        const CatalogEntry e = make_surface(name);
        const DeviationTable t = ground_truth_check(e, 8, 8, JetMode::Analytic, 1e-4);
        INFO(name);
        CHECK(t.max_dev.at("Hnorm") < 1e-9);
        CHECK(t.max_dev.at("Tnorm") < 1e-9);
        CHECK(t.max_dev.at("s_norm2") < 1e-9);
        CHECK(t.max_dev.at("K") < 1e-9);
    }
    // the minimal slice reads K through the finite-difference intrinsic route
    const CatalogEntry slice = make_surface("slice");
    const DeviationTable t = ground_truth_check(slice, 8, 8, JetMode::Analytic, 1e-4);
    CHECK(t.max_dev.at("Hnorm") < 1e-9);
    CHECK(t.max_dev.at("s_norm2") < 1e-9);
    CHECK(t.max_dev.at("K") < 1e-6);
}

TEST_CASE("ground truth check on specific parameter values") {
    // cyl_s2 at theta0 = pi/4: |H| = 1/2, |S|^2 = 2, K = 0
    const CatalogEntry cyl = make_surface("cyl_s2", {{"theta0", M_PI / 4.0}});
    CHECK(cyl.truth.Hnorm == Catch::Approx(0.5).margin(1e-15));
    CHECK(cyl.truth.s_norm2 == Catch::Approx(2.0).margin(1e-15));
    CHECK(cyl.truth.K == 0.0);
    CHECK(cyl.truth.theorem_item == 1);

    // sphere_s3 at theta0 = pi/3: |H| = cot(pi/3) = 1/sqrt(3)
    const CatalogEntry sph = make_surface("sphere_s3", {{"theta0", M_PI / 3.0}});
    CHECK(sph.truth.Hnorm == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-15));
    const DeviationTable t = ground_truth_check(sph, 6, 6, JetMode::Analytic, 1e-4);
    CHECK(t.max_dev.at("Hnorm") < 1e-9);

    // default cyl_h2 has coth(rho) = 2, so |H| = 1
    const CatalogEntry hyp = make_surface("cyl_h2");
    CHECK(hyp.truth.Hnorm == Catch::Approx(1.0).margin(1e-15));
    CHECK(hyp.truth.theorem_item == 1);

    const CatalogEntry cliff = make_surface("clifford_small_s3");
    CHECK(cliff.truth.theorem_item == 2);
    CHECK(cliff.truth.K == 0.0);
}

TEST_CASE("negative control stays calibrated") {
    const CatalogEntry e = make_surface("graph_control");
    const DeviationTable t = ground_truth_check(e, 4, 4, JetMode::Analytic, 1e-4);
    CHECK(t.max_dev.at("pmc_residual_at_probe") >= e.min_pmc_residual);
}

TEST_CASE("stretched cylinder drops the isothermal claim but keeps the geometry") {
    const CatalogEntry e = make_surface("cyl_s2_stretch");
    CHECK_FALSE(e.chart.isothermal_claim);
    const DeviationTable t = ground_truth_check(e, 6, 6, JetMode::Analytic, 1e-4);
    CHECK(t.max_dev.at("Hnorm") < 1e-9);
    CHECK(t.max_dev.at("K") < 1e-9);
    // its metric really is non-isothermal
    const FrameData fd = frames(e.chart, 1.0, 0.8, JetMode::Analytic, 1e-4);
    CHECK(std::abs(fd.g.E - fd.g.G) > 0.05 * fd.g.E);
}

TEST_CASE("hyperbolic slice witnesses K = c < 0") {
    const CatalogEntry e = make_surface("slice", {{"c", -1.0}});
    const DeviationTable t = ground_truth_check(e, 6, 6, JetMode::Analytic, 1e-4);
    CHECK(t.max_dev.at("K") < 1e-6);
    CHECK(e.truth.K == -1.0);
}

TEST_CASE("euclidean slice is supported by the types") {
    const CatalogEntry e = make_surface("slice", {{"c", 0.0}});
    const FrameData fd = frames(e.chart, 0.2, 0.1, JetMode::Analytic, 1e-4);
    CHECK(fd.minimal);
    CHECK(fd.g.E == Catch::Approx(1.0));
    const MetricField g = induced_metric(e.chart, JetMode::Analytic, 1e-4);
    CHECK(std::abs(gauss_curvature_intrinsic(g, 0.2, 0.1, 1e-4)) < 1e-10);
}
