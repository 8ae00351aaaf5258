#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "apcsf/error.hpp"
#include "apcsf/geometry.hpp"
#include "helpers.hpp"

using namespace apcsf;
using testing::kPi;

TEST_CASE("frames: circle of radius 2 has curvature 1/2 at every node") {
    // 256 nodes per turn, slightly more than one turn
    std::vector<Vec2> x;
    for (int i = 0; i < 260; ++i) x.push_back(2.0 * unit(2.0 * kPi * i / 256.0));
    const auto f = frames(OpenCurve(x));
    REQUIRE(f.size() == x.size());
    for (const auto& s : f) CHECK(s.curvature == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("frames: straight segment") {
    std::vector<Vec2> x;
    for (int i = 0; i < 16; ++i) x.push_back({i / 15.0, 0.0});
    for (const auto& s : frames(OpenCurve(x))) {
        CHECK(std::abs(s.curvature) < 1e-12);
        CHECK(s.tangent.x == doctest::Approx(1.0));
        CHECK(std::abs(s.tangent.y) < 1e-14);
        CHECK(s.normal.y == doctest::Approx(1.0));
    }
}

TEST_CASE("frames: counterclockwise half circle has curvature +1") {
    const auto f = frames(OpenCurve(testing::arc_nodes({0, 0}, 1.0, 0.0, kPi, 128)));
    for (const auto& s : f) {
        CHECK(s.curvature == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(norm(s.tangent) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.normal.x == -s.tangent.y);
        CHECK(s.normal.y == s.tangent.x);
    }
}

TEST_CASE("length oracles") {
    std::vector<Vec2> seg;
    for (int i = 0; i < 7; ++i) seg.push_back({3.0 * i / 6.0, 4.0 * i / 6.0});
    CHECK(length(OpenCurve(seg)) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(length(ClosedCurve(testing::circle_nodes({0, 0}, 1.0, 1024))) == doctest::Approx(2 * kPi).epsilon(1e-5));

    // graph x = -log cos y, closed-form length log tan(pi/4 + y1/2)
    const double y1 = kPi / 2 - 0.1;
    std::vector<Vec2> g;
    for (int i = 0; i < 512; ++i) {
        const double y = y1 * i / 511.0;
        g.push_back({-std::log(std::cos(y)), y});
    }
    CHECK(std::abs(length(OpenCurve(g)) - 2.994898453767571) < 1e-4);
}

TEST_CASE("total curvature") {
    CHECK(total_curvature(OpenCurve(testing::arc_nodes({0, 0}, 1.0, 0.0, kPi, 200))) == doctest::Approx(kPi).epsilon(1e-3));
    std::vector<Vec2> seg;
    for (int i = 0; i < 10; ++i) seg.push_back({0.3 * i, -0.1 * i});
    CHECK(std::abs(total_curvature(OpenCurve(seg))) < 1e-14);
    CHECK(total_curvature(ClosedCurve(testing::circle_nodes({1, 2}, 3.0, 100))) == doctest::Approx(2 * kPi));
}

TEST_CASE("signed area") {
    CHECK(signed_area(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}) == doctest::Approx(1.0));
    auto cw = testing::arc_nodes({0, 0}, 1.0, 0.0, -2 * kPi, 513);
    cw.pop_back();
    CHECK(signed_area(ClosedCurve(cw)) == doctest::Approx(-kPi).epsilon(1e-3));

    // figure eight (lemniscate of Gerono): the two lobes cancel
    std::vector<Vec2> eight;
    for (int i = 0; i < 400; ++i) {
        const double t = 2 * kPi * i / 400.0;
        eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    CHECK(std::abs(signed_area(eight)) < 1e-6);
    // lobe oracle: fan triangulation of one lobe, lobes of opposite sign
    std::vector<Vec2> lobe(eight.begin(), eight.begin() + 201);
    CHECK(std::abs(testing::fan_area(lobe)) == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("signed area matches the fan triangulation oracle on random star polygons") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 500; ++k) {
        const auto p = testing::random_star_polygon(rng, 5 + k % 40);
        CHECK(std::abs(signed_area(p) - testing::fan_area(p)) < 1e-12);
    }
}

TEST_CASE("turning number") {
    CHECK(turning_number(ClosedCurve(testing::circle_nodes({0, 0}, 1.0, 64))) == 1);
    std::vector<Vec2> twice;
    for (int i = 0; i < 128; ++i) twice.push_back((1.0 + 0.3 * std::cos(i * kPi / 64 * 1.0)) * unit(4 * kPi * i / 128.0));
    CHECK(turning_number(ClosedCurve(twice)) == 2);
    CHECK(turning_number(ClosedCurve(testing::circle_nodes({0, 0}, 1.0, 64)).reversed()) == -1);
}

TEST_CASE("turning number of a sampled square") {
    std::vector<Vec2> sq;
    for (int i = 0; i < 8; ++i) sq.push_back({i / 8.0, 0.0});
    for (int i = 0; i < 8; ++i) sq.push_back({1.0, i / 8.0});
    for (int i = 0; i < 8; ++i) sq.push_back({1.0 - i / 8.0, 1.0});
    for (int i = 0; i < 8; ++i) sq.push_back({0.0, 1.0 - i / 8.0});
    CHECK(turning_number(ClosedCurve(sq)) == 1);
    CHECK(total_curvature(ClosedCurve(sq)) == doctest::Approx(2 * kPi));
}

TEST_CASE("turning number uses declared corner angles") {
    // half disk: arc nodes then the diameter, corners at the two junctions
    auto x = testing::arc_nodes({0, 0}, 1.0, 0.0, kPi, 65);
    for (int i = 1; i < 16; ++i) x.push_back({-1.0 + 2.0 * i / 16.0, 0.0});
    const std::size_t last_arc = 64;
    // the junction at (-1,0) turns by pi/2 plus half an arc step; declaring pi/2 keeps the sum integral
    const ClosedCurve c(x, {Corner{0, kPi / 2}, Corner{last_arc, kPi / 2}});
    CHECK(turning_number(c) == 1);
    const ClosedCurve bad(x, {Corner{0, kPi / 2}, Corner{last_arc, -kPi / 2}});
    CHECK_THROWS_AS(turning_number(bad), Error);
}

TEST_CASE("convexity") {
    CHECK(is_convex(OpenCurve(testing::arc_nodes({0, 0}, 1.0, 0.0, kPi, 64)), 1e-9));
    std::vector<Vec2> sine;
    for (int i = 0; i < 100; ++i) sine.push_back({i / 99.0, std::sin(2 * kPi * i / 99.0)});
    CHECK_FALSE(is_convex(OpenCurve(sine), 1e-9));
}

TEST_CASE("self intersections") {
    CHECK(count_self_intersections(testing::circle_nodes({0, 0}, 1.0, 50), true) == 0);
    std::vector<Vec2> eight;
    for (int i = 0; i < 200; ++i) {
        const double t = 2 * kPi * i / 200.0;
        eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    CHECK(count_self_intersections(eight, true) == 1);
}

TEST_CASE("invariants are enforced") {
    CHECK_THROWS_AS(OpenCurve({{0, 0}, {1, 0}, {2, 0}}), Error);
    CHECK_THROWS_AS(OpenCurve({{0, 0}, {1, 0}, {1, 0}, {2, 0}}), Error);
    CHECK_THROWS_AS(OpenCurve({{0, 0}, {1, 0}, {std::nan(""), 0}, {2, 0}}), Error);
    CHECK_THROWS_AS(ClosedCurve(testing::circle_nodes({0, 0}, 1.0, 8), {Corner{9, 0.1}}), Error);
    CHECK_THROWS_AS(ClosedCurve(testing::circle_nodes({0, 0}, 1.0, 8), {Corner{2, 4.0}}), Error);
}

TEST_CASE("Menger curvature and circle tangents are exact on circles") {
    const Vec2 a = 2.0 * unit(0.1), b = 2.0 * unit(0.4), c = 2.0 * unit(0.9);
    CHECK(menger_curvature(a, b, c) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(menger_curvature(c, b, a) == doctest::Approx(-0.5).epsilon(1e-12));
    const Vec2 tb = circle_tangent_mid(a, b, c);
    CHECK(dot(tb, unit(0.4 + kPi / 2)) == doctest::Approx(1.0).epsilon(1e-12));
    const Vec2 ta = circle_tangent_start(a, b, c);
    CHECK(dot(ta, unit(0.1 + kPi / 2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: reversing an open curve negates total curvature and keeps length") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        std::vector<Vec2> x;
        double th = u(rng);
        Vec2 p{0, 0};
        for (int i = 0; i < 60; ++i) {
            x.push_back(p);
            th += 0.2 * u(rng);
            p = p + 0.1 * unit(th);
        }
        const OpenCurve c(x);
        CHECK(length(c.reversed()) == doctest::Approx(length(c)));
        CHECK(total_curvature(c.reversed()) == doctest::Approx(-total_curvature(c)));
    }
}
