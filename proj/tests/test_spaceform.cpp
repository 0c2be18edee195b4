#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pmc/spaceform.hpp"

using namespace pmc;

namespace {

Vec v3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

// random tangent vector at a point of the model (projection of a random
// flat direction)
AmbientVector random_tangent(const SpaceFormModel& m, const AmbientPoint& at,
                             std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec w(m.m_dim());
    for (int i = 0; i < w.size(); ++i) w(i) = dist(rng);
    return project_tangent(m, at, w, dist(rng));
}

}  // namespace

TEST_CASE("product metric on coordinate examples") {
    SpaceFormModel sph(1.0, 2);
    AmbientPoint p{v3(1, 0, 0), 0.0};
    AmbientVector X{v3(0, 1, 0), 0.0, p};
    AmbientVector Y{v3(0, 1, 0), 0.0, p};
    CHECK(product_metric(sph, X, Y) == Catch::Approx(1.0));

    SpaceFormModel hyp(-1.0, 2);
    AmbientPoint q{v3(1, 0, 0), 0.0};
    AmbientVector Xh{v3(0, 1, 0), 0.0, q};
    AmbientVector Yh{v3(0, 0, 0), 1.0, q};
    CHECK(product_metric(hyp, Xh, Yh) == Catch::Approx(0.0));

    // hyperboloid constraint <p,p>_L = 1/c
    CHECK(hyp.mdot(q.p, q.p) == Catch::Approx(-1.0));
}

TEST_CASE("product metric rejects mismatched basepoints") {
    SpaceFormModel sph(1.0, 2);
    AmbientPoint p{v3(1, 0, 0), 0.0}, q{v3(0, 1, 0), 0.0};
    AmbientVector X{v3(0, 1, 0), 0.0, p};
    AmbientVector Y{v3(0, 0, 1), 0.0, q};
    CHECK_THROWS_AS(product_metric(sph, X, Y), std::invalid_argument);
}

TEST_CASE("product metric rejects invalid basepoints") {
    SpaceFormModel sph(1.0, 2);
    AmbientPoint bad{v3(2, 0, 0), 0.0};
    AmbientVector X{v3(0, 1, 0), 0.0, bad};
    CHECK_THROWS_AS(product_metric(sph, X, X), DegenerateChartError);
}

TEST_CASE("tangent projection kills the radial direction and fixes tangents") {
    SpaceFormModel sph(1.0, 2);
    AmbientPoint p{v3(1, 0, 0), 0.0};

    AmbientVector radial = project_tangent(sph, p, v3(1, 0, 0), 0.0);
    CHECK(radial.v.norm() == Catch::Approx(0.0).margin(1e-15));
    CHECK(radial.s == 0.0);

    AmbientVector tang = project_tangent(sph, p, v3(0, 2, 0), 3.0);
    CHECK((tang.v - v3(0, 2, 0)).norm() == Catch::Approx(0.0).margin(1e-15));
    CHECK(tang.s == 3.0);
}

TEST_CASE("hyperbolic projection output is Lorentz-orthogonal to the point") {
    SpaceFormModel hyp(-1.0, 2);
    AmbientPoint p{v3(std::sqrt(2.0), 1, 0), 0.0};
    AmbientVector out = project_tangent(hyp, p, v3(1, 0, 0), 0.0);
    CHECK(hyp.mdot(p.p, out.v) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("projection is idempotent", "[property]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double c : {1.0, -1.0}) {
        SpaceFormModel m(c, 2);
        for (int trial = 0; trial < 50; ++trial) {
            // a point on the model: normalize a random direction (timelike
            // with positive first coordinate in the hyperbolic case)
            Vec d = v3(std::abs(dist(rng)) + 1.5, dist(rng), dist(rng));
            AmbientPoint p{c > 0 ? Vec(d / d.norm())
                                 : Vec(d / std::sqrt(-m.mdot(d, d))),
                           dist(rng)};
            Vec w = v3(dist(rng), dist(rng), dist(rng));
            AmbientVector once = project_tangent(m, p, w, 0.5);
            AmbientVector twice = project_tangent(m, p, once.v, once.s);
            CHECK((once.v - twice.v).lpNorm<Eigen::Infinity>() < 1e-12);
        }
    }
}

TEST_CASE("positive definiteness on tangents, hyperbolic included", "[property]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SpaceFormModel m(-1.0, 2);
    for (int trial = 0; trial < 100; ++trial) {
        Vec d = v3(std::abs(dist(rng)) + 1.5, dist(rng), dist(rng));
        AmbientPoint p{d / std::sqrt(-m.mdot(d, d)), 0.0};
        AmbientVector X = random_tangent(m, p, rng);
        const double n2 = product_metric(m, X, X);
        if (X.v.norm() + std::abs(X.s) > 1e-10) CHECK(n2 > 0.0);
    }
}

TEST_CASE("ambient curvature: sectional value, vertical kill, antisymmetry") {
    SpaceFormModel sph(1.0, 2);
    AmbientPoint p{v3(1, 0, 0), 0.0};
    AmbientVector X{v3(0, 1, 0), 0.0, p};
    AmbientVector Y{v3(0, 0, 1), 0.0, p};
    AmbientVector xi = vertical_unit(sph, p);

    AmbientVector R = ambient_curvature(sph, X, Y, Y);
    CHECK((R.v - X.v).lpNorm<Eigen::Infinity>() < 1e-14);  // R(X,Y)Y = cX

    AmbientVector Rxi = ambient_curvature(sph, X, Y, xi);
    CHECK(Rxi.v.norm() < 1e-14);

    AmbientVector Rxx = ambient_curvature(sph, X, X, Y);
    CHECK(Rxx.v.norm() < 1e-14);
}

TEST_CASE("curvature symmetries on random tangent quadruples", "[property]") {
    std::mt19937 rng(3);
    for (double c : {1.0, -1.0}) {
        SpaceFormModel m(c, 3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vec d(4);
        for (int trial = 0; trial < 50; ++trial) {
            for (int i = 0; i < 4; ++i) d(i) = dist(rng);
            d(0) = std::abs(d(0)) + 1.5;
            AmbientPoint p{c > 0 ? Vec(d / d.norm())
                                 : Vec(d / std::sqrt(-m.mdot(d, d))),
                           0.0};
            AmbientVector X = random_tangent(m, p, rng);
            AmbientVector Y = random_tangent(m, p, rng);
            AmbientVector Z = random_tangent(m, p, rng);
            AmbientVector W = random_tangent(m, p, rng);
            auto ip = [&](const AmbientVector& A, const AmbientVector& B) {
                return product_metric(m, A, B);
            };
            const double rxyzw = ip(ambient_curvature(m, X, Y, Z), W);
            const double ryxzw = ip(ambient_curvature(m, Y, X, Z), W);
            const double rxywz = ip(ambient_curvature(m, X, Y, W), Z);
            CHECK(rxyzw == Catch::Approx(-ryxzw).margin(1e-10));
            CHECK(rxyzw == Catch::Approx(-rxywz).margin(1e-10));
        }
    }
}

TEST_CASE("euclidean factor: projection is the identity, curvature vanishes") {
    SpaceFormModel eu(0.0, 2);
    AmbientPoint p{Eigen::Vector2d(0.3, -0.7), 1.0};
    AmbientVector X = project_tangent(eu, p, Eigen::Vector2d(1.0, 2.0), 3.0);
    CHECK(X.v(0) == 1.0);
    CHECK(X.v(1) == 2.0);
    CHECK(X.s == 3.0);
    AmbientVector Y = project_tangent(eu, p, Eigen::Vector2d(0.0, 1.0), 0.0);
    CHECK(ambient_curvature(eu, X, Y, Y).v.norm() == 0.0);
}

TEST_CASE("model rejects dimension below two") {
    CHECK_THROWS_AS(SpaceFormModel(1.0, 1), ConfigError);
}
