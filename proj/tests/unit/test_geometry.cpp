#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "surfframe/geometry.hpp"
#include "surfframe/harness.hpp"
#include "surfframe/rng.hpp"

using namespace surfframe;

namespace {

Vector vec2(double x, double y) {
    Vector v(2);
    v << x, y;
    return v;
}

ConvexBody square_hull() {
    return ConvexBody::polytope_hull(
        {vec2(1, 1), vec2(1, -1), vec2(-1, 1), vec2(-1, -1)});
}

}  // namespace

TEST_CASE("minkowski functional on the stock bodies") {
    auto ball = ConvexBody::ball(2, 1.0);
    CHECK(minkowski_functional(ball, vec2(0.5, 0)) == Catch::Approx(0.5));
    CHECK(minkowski_functional(ball, Vector::Zero(2)) == 0.0);

    auto ell = ConvexBody::ellipsoid(vec2(2, 1));
    CHECK(minkowski_functional(ell, vec2(2, 0)) == Catch::Approx(1.0));

    auto sq = square_hull();
    CHECK(minkowski_functional(sq, Vector::Zero(2)) == 0.0);
    CHECK(minkowski_functional(sq, vec2(0.5, 0)) == Catch::Approx(0.5).margin(1e-9));
    CHECK(minkowski_functional(sq, vec2(1, 1)) == Catch::Approx(1.0).margin(1e-9));
    CHECK(minkowski_functional(sq, vec2(2, 0)) == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("gauge is positively homogeneous") {
    auto rng = make_rng(7);
    std::uniform_real_distribution<double> u(-3, 3), t(0, 5);
    for (const auto& body : {ConvexBody::ball(2, 1.5), ConvexBody::ellipsoid(vec2(2, 1)),
                             square_hull()}) {
        for (int i = 0; i < 50; ++i) {
            Vector x = vec2(u(rng), u(rng));
            double s = t(rng);
            CHECK(std::abs(body.gauge(s * x) - s * body.gauge(x)) <
                  1e-9 * (1 + s) * (1 + x.norm()));
        }
    }
}

TEST_CASE("dual norm closed forms and vertex maximum") {
    auto ball = ConvexBody::ball(2, 1.0);
    CHECK(dual_norm(ball, vec2(3, 4)) == Catch::Approx(5.0));

    CHECK(dual_norm(square_hull(), vec2(1, 2)) == Catch::Approx(3.0));

    double a = 2.0, b = 0.7;
    auto ell = ConvexBody::ellipsoid(vec2(a, b));
    CHECK(dual_norm(ell, vec2(1, 0)) == Catch::Approx(a));
    auto rng = make_rng(11);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 32; ++i) {
        Vector xi = vec2(u(rng), u(rng));
        double expect = std::sqrt(a * a * xi[0] * xi[0] + b * b * xi[1] * xi[1]);
        CHECK(dual_norm(ell, xi) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("dual norm homogeneity invariant") {
    auto rng = make_rng(13);
    std::uniform_real_distribution<double> u(-2, 2), ts(0, 10);
    for (const auto& body : {ConvexBody::ball(2, 0.8), ConvexBody::ellipsoid(vec2(1.3, 2.2)),
                             square_hull()}) {
        for (int i = 0; i < 100; ++i) {
            Vector xi = vec2(u(rng), u(rng));
            double t = ts(rng);
            CHECK(std::abs(dual_norm(body, t * xi) - t * dual_norm(body, xi)) <=
                  1e-10 * (1 + t) * xi.norm());
        }
    }
}

TEST_CASE("duality sandwich from in/out radii") {
    auto rng = make_rng(17);
    std::uniform_real_distribution<double> u(-5, 5);
    for (const auto& body :
         {ConvexBody::ball(2, 2.0), ConvexBody::ellipsoid(vec2(0.5, 3)), square_hull(),
          ConvexBody::polytope_hull({vec2(2, -1), vec2(-1, 2), vec2(-1, -1)})}) {
        double ck = body.sandwich_constant();
        REQUIRE(ck >= 1.0);
        for (int i = 0; i < 200; ++i) {
            Vector x = vec2(u(rng), u(rng));
            double rho = dual_norm(body, x);
            CHECK(rho <= ck * x.norm() + 1e-9);
            CHECK(rho >= x.norm() / ck - 1e-9);
        }
    }
}

TEST_CASE("projection onto subspace directions") {
    Matrix b1(3, 1);
    b1 << 1, 0, 0;
    Vector x(3);
    x << 2, 5, 7;
    Vector p = project(b1, x);
    CHECK(p[0] == Catch::Approx(2.0));
    CHECK(p[1] == 0.0);
    CHECK(p[2] == 0.0);

    Matrix diag(2, 1);
    diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Vector q = project(diag, vec2(1, 0));
    CHECK(q[0] == Catch::Approx(0.5));
    CHECK(q[1] == Catch::Approx(0.5));
}

TEST_CASE("projection is idempotent and norm-nonincreasing") {
    auto rng = make_rng(23);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 1000; ++rep) {
        int d = 2 + static_cast<int>(rep % 3);
        int k = 1 + static_cast<int>(rep % d);
        if (k >= d) k = d - 1;
        if (k < 1) k = 1;
        Matrix raw(d, k);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < k; ++j) raw(i, j) = g(rng);
        Eigen::HouseholderQR<Matrix> qr(raw);
        Matrix basis = Matrix(qr.householderQ()).leftCols(k);
        Vector x(d);
        for (int i = 0; i < d; ++i) x[i] = g(rng);
        Vector p = project(basis, x);
        CHECK((project(basis, p) - p).norm() < 1e-12 * (1 + p.norm()));
        CHECK(p.norm() <= x.norm() + 1e-12);
    }
}

TEST_CASE("facet construction rejects degenerate sides") {
    Matrix basis(2, 1);
    basis << 1, 0;
    Vector sides(1);
    sides << 1e-13;
    CHECK_THROWS_AS(Facet(AffineSubspace(basis, Vector::Zero(2)), sides), DegenerateFacet);
}

TEST_CASE("affine subspace demands orthonormal basis") {
    Matrix bad(2, 1);
    bad << 1, 1;
    CHECK_THROWS(AffineSubspace(bad, Vector::Zero(2)));
}

TEST_CASE("classification of the stock polygons") {
    auto tri = classify_facets(unit_triangle_boundary());
    CHECK(tri.num_classes() == 3);
    for (const auto& c : tri.classes) CHECK(c.size() == 1);

    auto sq = classify_facets(unit_square_boundary());
    CHECK(sq.num_classes() == 2);
    for (const auto& c : sq.classes) {
        CHECK(c.size() == 2);
        CHECK(c.perp_projections_distinct);
    }
}

TEST_CASE("classification is a partition") {
    auto facets = unit_square_boundary();
    auto extra = unit_triangle_boundary();
    facets.insert(facets.end(), extra.begin(), extra.end());
    auto cls = classify_facets(facets);
    std::vector<int> seen(facets.size(), 0);
    for (const auto& c : cls.classes)
        for (int idx : c.members) seen[idx] += 1;
    for (int s : seen) CHECK(s == 1);
}

TEST_CASE("nesting violation: segment plus coplanar square") {
    std::vector<Facet> facets;
    Matrix full = Matrix::Identity(2, 2);
    Vector two_sides(2);
    two_sides << 1, 1;
    facets.emplace_back(AffineSubspace(full, vec2(2, 0)), two_sides);
    facets.push_back(segment_facet(vec2(0, 0), vec2(1, 0)));
    CHECK_THROWS_AS(classify_facets(facets), HypothesisViolation);
    auto lenient = classify_facets(facets, /*enforce=*/false);
    CHECK_FALSE(lenient.hypothesis_ok);
    CHECK(lenient.violations.size() == 1);
}

TEST_CASE("cap diameter of near-flat circle caps") {
    auto disk = ConvexBody::ball(2, 1.0);
    Vector lam = vec2(50, 0);

    double d50 = cap_diameter(disk, lam, 50.0, 2.0, 4000);
    CHECK(d50 >= 3.9);
    CHECK(d50 <= 4.0);
    CHECK(d50 == Catch::Approx(oracles::circle_cap_diameter(50.0, 50.0, 2.0)).margin(2e-3));

    double d495 = cap_diameter(disk, lam, 49.5, 2.0, 4000);
    CHECK(d495 > 0.0);
    CHECK(d495 < d50);
    CHECK(d495 == Catch::Approx(oracles::circle_cap_diameter(49.5, 50.0, 2.0)).margin(2e-3));
}

TEST_CASE("cap diameter raises on empty caps") {
    auto disk = ConvexBody::ball(2, 1.0);
    // |t - rho*(lambda)| exceeds r times the Lipschitz constant of rho*
    CHECK_THROWS_AS(cap_diameter(disk, vec2(50, 0), 55.0, 2.0, 2000), EmptyCap);
}

TEST_CASE("cap diameter stays uniformly positive near the level of lambda") {
    auto disk = ConvexBody::ball(2, 1.0);
    double ck = disk.sandwich_constant();
    double r = 2.0 * ck;
    auto rng = make_rng(31);
    std::uniform_real_distribution<double> radius(100.0, 1000.0), angle(0, 2 * M_PI),
        toff(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double rr = radius(rng), th = angle(rng);
        Vector lam = vec2(rr * std::cos(th), rr * std::sin(th));
        double t = dual_norm(disk, lam) + toff(rng) * 0.999;
        double diam = cap_diameter(disk, lam, t, r, 2000);
        CHECK(diam >= 1.0);
    }
}

TEST_CASE("cap diameter on the sphere in R^3") {
    auto ball3 = ConvexBody::ball(3, 1.0);
    Vector lam(3);
    lam << 80, 0, 0;
    double d = cap_diameter(ball3, lam, 80.0, 2.0, 4000);
    CHECK(d > 3.5);
    CHECK(d <= 4.0 + 1e-9);
}
