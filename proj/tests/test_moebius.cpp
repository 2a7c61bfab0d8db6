#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "viscore/moebius.hpp"
#include "viscore/util.hpp"

using namespace viscore;

namespace {

MoebiusMap random_map(const CounterRng& rng, uint64_t i) {
    // random loxodromic-ish map through random fixed points and length
    Complex p(2.0 * rng.uniform(1, 4 * i) - 1.0, 2.0 * rng.uniform(1, 4 * i + 1) - 1.0);
    Complex q(2.0 * rng.uniform(1, 4 * i + 2) - 1.0, 2.0 * rng.uniform(1, 4 * i + 3) - 1.0);
    if (std::abs(p - q) < 0.1) q += Complex(0.5, 0.5);
    double len = 0.3 + 1.5 * rng.uniform(2, i);
    double twist = 2.0 * rng.uniform(3, i);
    return make_loxodromic(p, q, len, twist);
}

const MoebiusMap kDilation = MoebiusMap::make({2, 0}, {0, 0}, {0, 0}, {1, 0});  // z -> 2z
const MoebiusMap kShift = MoebiusMap::make({1, 0}, {1, 0}, {0, 0}, {1, 0});     // z -> z+1

}  // namespace

TEST_CASE("composition acts as function composition") {
    MoebiusMap f = kDilation * kShift;  // z -> 2(z+1)
    CHECK(std::abs(f.apply(Complex(0, 0)) - Complex(2, 0)) < 1e-12);

    MoebiusMap g = random_map(CounterRng{11}, 3);
    CHECK(moebius_distance(g * g.inverse(), MoebiusMap::identity()) < 1e-10);
    CHECK(moebius_distance(MoebiusMap::identity() * g, g) < 1e-12);
}

TEST_CASE("group laws hold for random maps") {
    CounterRng rng{42};
    for (uint64_t i = 0; i < 50; ++i) {
        MoebiusMap f = random_map(rng, 3 * i), g = random_map(rng, 3 * i + 1),
                   h = random_map(rng, 3 * i + 2);
        CHECK(moebius_distance((f * g) * h, f * (g * h)) < 1e-9);
        CHECK(moebius_distance(f * f.inverse(), MoebiusMap::identity()) < 1e-9);
        Complex det = f.a * f.d - f.b * f.c;
        CHECK(std::abs(det - 1.0) < 1e-12);  // normalized at construction
    }
}

TEST_CASE("sphere action handles infinity") {
    CHECK(std::abs(kShift.apply(SpherePoint::from_complex({0, 0})).value - Complex(1, 0)) <
          1e-12);
    CHECK(kDilation.apply(SpherePoint::at_infinity()).infinite);

    // z -> -1/z fixes i
    MoebiusMap inv = MoebiusMap::make({0, 0}, {-1, 0}, {1, 0}, {0, 0});
    SpherePoint img = inv.apply(SpherePoint::from_complex({0, 1}));
    CHECK(std::abs(img.value - Complex(0, 1)) < 1e-12);
}

TEST_CASE("classification by squared trace") {
    CHECK(classify(MoebiusMap::make({1, 0}, {1, 0}, {0, 0}, {1, 0})) == MapClass::parabolic);
    double s2 = std::sqrt(2.0);
    CHECK(classify(MoebiusMap::make({s2, 0}, {0, 0}, {0, 0}, {1 / s2, 0})) ==
          MapClass::loxodromic);
    Complex u = std::exp(Complex(0, M_PI / 8));
    CHECK(classify(MoebiusMap::make(u, {0, 0}, {0, 0}, 1.0 / u)) == MapClass::elliptic);
    CHECK(classify(MoebiusMap::identity()) == MapClass::identity);
}

TEST_CASE("classification is conjugation invariant") {
    CounterRng rng{7};
    MoebiusMap reps[3] = {
        MoebiusMap::make({1, 0}, {1, 0}, {0, 0}, {1, 0}),         // parabolic
        MoebiusMap::make({1.5, 0}, {0, 0}, {0, 0}, {1 / 1.5, 0}), // loxodromic
        MoebiusMap::make(std::exp(Complex(0, 0.4)), {0, 0}, {0, 0}, std::exp(Complex(0, -0.4))),
    };
    for (uint64_t i = 0; i < 20; ++i) {
        MoebiusMap g = random_map(rng, i);
        for (const MoebiusMap& f : reps)
            CHECK(classify(g * f * g.inverse()) == classify(f));
    }
}

TEST_CASE("fixed points with attracting first") {
    FixedPoints fp = fixed_points(kDilation);  // z -> 2z: infinity attracts
    CHECK(fp.first.infinite);
    CHECK(!fp.single);
    CHECK(std::abs(fp.second.value) < 1e-12);

    FixedPoints par = fixed_points(kShift);
    CHECK(par.single);
    CHECK(par.first.infinite);

    // z -> 1/z has fixed points at +-1
    MoebiusMap inv = MoebiusMap::make({0, 0}, {1, 0}, {1, 0}, {0, 0});
    FixedPoints el = fixed_points(inv);
    CHECK(!el.single);
    CHECK(std::abs(std::abs(el.first.value) - 1.0) < 1e-10);
    CHECK(std::abs(el.first.value + el.second.value) < 1e-10);

    CHECK_THROWS_AS(fixed_points(MoebiusMap::identity()), std::invalid_argument);
}

TEST_CASE("fixed points match map dynamics for random loxodromics") {
    CounterRng rng{19};
    for (uint64_t i = 0; i < 30; ++i) {
        MoebiusMap f = random_map(rng, i + 100);
        FixedPoints fp = fixed_points(f);
        // iterating from a generic point converges to the attracting point
        SpherePoint z = SpherePoint::from_complex({0.123, 0.456});
        for (int k = 0; k < 60; ++k) z = f.apply(z);
        CHECK(angular_distance(z.unit, fp.first.unit) < 1e-5);
    }
}

TEST_CASE("stereographic chart conventions") {
    CHECK(angular_distance(stereo(Complex(0, 0)), {0, 0, -1}) < 1e-15);
    CHECK(angular_distance(SpherePoint::at_infinity().unit, {0, 0, 1}) < 1e-15);
    Complex z(1, 1);
    SpherePoint p = stereo_inv(stereo(z));
    CHECK(std::abs(p.value - z) < 1e-12);

    CounterRng rng{5};
    for (uint64_t i = 0; i < 100; ++i) {
        Vec3 v = rng.unit_vector(0, i);
        SpherePoint q = stereo_inv(v);
        if (q.infinite) continue;
        CHECK(angular_distance(stereo(q.value), v) < 1e-10);
        CHECK(std::abs(q.unit.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("half-space extension: dilation scales heights") {
    double s2 = std::sqrt(2.0);
    MoebiusMap f = MoebiusMap::make({s2, 0}, {0, 0}, {0, 0}, {1 / s2, 0});
    HalfSpacePoint p{Complex(0, 0), 1.0};
    HalfSpacePoint q = apply_half(f, p);
    CHECK(std::abs(q.z) < 1e-12);
    CHECK(q.t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ball action is an isometry") {
    CounterRng rng{77};
    for (uint64_t i = 0; i < 40; ++i) {
        MoebiusMap f = random_map(rng, i + 500);
        BallPoint p(rng.unit_vector(10, i) * (0.8 * rng.uniform(11, i)));
        BallPoint q(rng.unit_vector(12, i) * (0.8 * rng.uniform(13, i)));
        double before = hyperbolic_distance(p, q);
        double after = hyperbolic_distance(apply_ball(f, p), apply_ball(f, q));
        CHECK(std::abs(before - after) < 1e-8);
    }
    BallPoint y(Vec3{0.3, -0.2, 0.5});
    CHECK((apply_ball(MoebiusMap::identity(), y).v - y.v).norm() < 1e-12);
}

TEST_CASE("ball and half-space charts invert each other") {
    CounterRng rng{3};
    for (uint64_t i = 0; i < 100; ++i) {
        BallPoint y(rng.unit_vector(0, i) * (0.999 * rng.uniform(1, i)));
        BallPoint back = to_ball(to_half(y));
        CHECK((back.v - y.v).norm() < 1e-10);
    }
    CHECK_THROWS_AS(BallPoint(Vec3{0, 0, 1}), std::domain_error);
}

TEST_CASE("ball translation moves the origin and preserves circles") {
    BallPoint y(Vec3{0.2, -0.4, 0.3});
    MoebiusMap t = ball_translation(y);
    CHECK((apply_ball(t, BallPoint()).v - y.v).norm() < 1e-10);
    CHECK(moebius_distance(ball_translation(BallPoint()), MoebiusMap::identity()) < 1e-12);

    // boundary image of a round circle is a round circle
    std::vector<Vec3> images;
    for (int k = 0; k < 24; ++k) {
        double phi = 2.0 * M_PI * k / 24;
        Vec3 c = Vec3{0.6 * std::cos(phi), 0.6 * std::sin(phi), 0.8};
        images.push_back(t.apply(SpherePoint::from_unit(c.normalized())).unit);
    }
    CHECK(fit_plane(images).residual < 1e-8);
}

TEST_CASE("ray endpoints commute with isometries") {
    CounterRng rng{123};
    for (uint64_t i = 0; i < 20; ++i) {
        MoebiusMap f = random_map(rng, i + 900);
        BallPoint y(rng.unit_vector(20, i) * (0.7 * rng.uniform(21, i)));
        Vec3 dir = rng.unit_vector(22, i);

        SpherePoint lhs = f.apply(ray_endpoint(y, dir));
        // push the direction through the rotation relating the two frames
        BallPoint fy = apply_ball(f, y);
        MoebiusMap rot = ball_translation(fy).inverse() * f * ball_translation(y);
        Vec3 pushed = rot.apply(SpherePoint::from_unit(dir)).unit;
        SpherePoint rhs = ray_endpoint(fy, pushed);
        CHECK(angular_distance(lhs.unit, rhs.unit) < 1e-7);
    }
}

TEST_CASE("equator translation slides the invariant plane") {
    MoebiusMap m = equator_translation(Complex(0.4, -0.2));
    BallPoint img = apply_ball(m, BallPoint());
    CHECK(std::abs(img.v.x - 0.4) < 1e-10);
    CHECK(std::abs(img.v.y + 0.2) < 1e-10);
    CHECK(std::abs(img.v.z) < 1e-10);
    // plane points stay on the plane
    BallPoint p(Vec3{-0.3, 0.5, 0.0});
    CHECK(std::abs(apply_ball(m, p).v.z) < 1e-10);
}

TEST_CASE("cap images under Moebius maps are caps") {
    CounterRng rng{31};
    for (uint64_t i = 0; i < 20; ++i) {
        MoebiusMap f = random_map(rng, i + 50);
        Cap cap{rng.unit_vector(30, i), 0.3 + 1.5 * rng.uniform(31, i)};
        MappedCap img = map_cap(f, cap);
        CHECK(img.fit_residual < 1e-8);
        // spot-check membership transport on interior points
        Vec3 any = std::abs(cap.center.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
        Vec3 e1 = cap.center.cross(any).normalized();
        for (double frac : {0.0, 0.5, 0.9}) {
            double ang = frac * cap.theta;
            Vec3 inside = std::cos(ang) * cap.center + std::sin(ang) * e1;
            CHECK(img.cap.center.dot(f.apply(SpherePoint::from_unit(inside)).unit) >=
                  std::cos(img.cap.theta) - 1e-8);
        }
    }
}

TEST_CASE("boundary geodesics are unit speed with the right endpoints") {
    SpherePoint xi1 = SpherePoint::from_unit(Vec3{0, 0, 1});
    SpherePoint xi2 = SpherePoint::from_unit(Vec3{0, 0, -1});
    BoundaryGeodesic g(xi1, xi2);
    CHECK((g.at(0.0).v - Vec3{0, 0, 0}).norm() < 1e-10);  // polar axis through 0
    CHECK(hyperbolic_distance(g.at(0.3), g.at(1.1)) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(angular_distance(g.at(-8.0).v.normalized(), xi1.unit) < 1e-3);
    CHECK(angular_distance(g.at(8.0).v.normalized(), xi2.unit) < 1e-3);

    SpherePoint a = SpherePoint::from_complex({0.8, 0.1});
    SpherePoint b = SpherePoint::from_complex({-0.4, 0.7});
    BoundaryGeodesic h(a, b);
    CHECK(hyperbolic_distance(h.at(-1.0), h.at(2.0)) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(angular_distance(h.at(9.0).v.normalized(), b.unit) < 1e-3);
}
