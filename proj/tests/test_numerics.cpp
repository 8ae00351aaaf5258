#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "apcsf/error.hpp"
#include "apcsf/numerics.hpp"
#include "helpers.hpp"

using namespace apcsf;
using testing::kPi;

namespace {

// dense Gaussian elimination with partial pivoting
std::vector<double> dense_solve(std::vector<std::vector<double>> m, std::vector<double> d) {
    const std::size_t n = d.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m[i][k]) > std::abs(m[p][k])) p = i;
        std::swap(m[k], m[p]);
        std::swap(d[k], d[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
            d[i] -= f * d[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = d[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }
    return x;
}

}  // namespace

TEST_CASE("tridiagonal solvers agree with a dense solve") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + trial % 30;
        std::vector<double> a(n), b(n), c(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = u(rng);
            c[i] = u(rng);
            b[i] = 2.5 + u(rng);  // diagonally dominant
            d[i] = u(rng);
        }
        std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            m[i][i] = b[i];
            if (i > 0) m[i][i - 1] = a[i];
            if (i + 1 < n) m[i][i + 1] = c[i];
        }
        const auto x = solve_tridiagonal(a, b, c, d);
        const auto ref = dense_solve(m, d);
        for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-10));

        m[0][n - 1] += a[0];
        m[n - 1][0] += c[n - 1];
        const auto xc = solve_cyclic_tridiagonal(a, b, c, d);
        const auto refc = dense_solve(m, d);
        for (std::size_t i = 0; i < n; ++i) CHECK(xc[i] == doctest::Approx(refc[i]).epsilon(1e-10));
    }
}

TEST_CASE("clamped spline reproduces a cubic exactly") {
    auto f = [](double t) { return Vec2{1.0 - 2.0 * t + 0.5 * t * t * t, 3.0 * t * t - t * t * t}; };
    auto df = [](double t) { return Vec2{-2.0 + 1.5 * t * t, 6.0 * t - 3.0 * t * t}; };
    std::vector<double> u;
    std::vector<Vec2> x;
    double t = 0.0;
    for (int i = 0; i < 9; ++i) {
        u.push_back(t);
        x.push_back(f(t));
        t += 0.2 + 0.05 * (i % 3);
    }
    const auto s = CubicSpline2::clamped(u, x, df(u.front()), df(u.back()));
    for (double q = u.front(); q <= u.back(); q += 0.013) {
        CHECK(norm(s(q) - f(q)) < 1e-12);
        CHECK(norm(s.eval(q, 1) - df(q)) < 1e-11);
    }
}

TEST_CASE("natural spline is linear on collinear data") {
    std::vector<double> u{0.0, 0.3, 1.0, 1.2, 2.0};
    std::vector<Vec2> x;
    for (double t : u) x.push_back({2.0 * t + 1.0, -t});
    const auto s = CubicSpline2::natural(u, x);
    for (double q = 0.0; q <= 2.0; q += 0.05) {
        CHECK(norm(s(q) - Vec2{2.0 * q + 1.0, -q}) < 1e-13);
        CHECK(norm(s.eval(q, 2)) < 1e-12);
    }
}

TEST_CASE("periodic spline of a circle") {
    const int n = 64;
    std::vector<double> u;
    std::vector<Vec2> x;
    for (int i = 0; i <= n; ++i) {
        u.push_back(2.0 * kPi * i / n);
        x.push_back(unit(u.back()));
    }
    x.back() = x.front();
    const auto s = CubicSpline2::periodic(u, x);
    CHECK(s.is_periodic());
    for (double q = 0.0; q < 2.0 * kPi; q += 0.07) {
        CHECK(norm(s(q) - unit(q)) < 1e-6);
        CHECK(norm(s.eval(q, 2) + unit(q)) < 1e-3);
    }
    // wraps outside the base period
    CHECK(norm(s(2.0 * kPi + 0.3) - s(0.3)) < 1e-12);
}

TEST_CASE("polyfit recovers polynomials and polyval differentiates") {
    std::vector<double> t;
    std::vector<Vec2> x;
    for (int i = 0; i < 12; ++i) {
        const double s = -1.0 + 0.17 * i;
        t.push_back(s);
        x.push_back({0.5 - s + 2.0 * s * s * s, 4.0 * s * s});
    }
    const auto c = polyfit(t, x, 3);
    REQUIRE(c.size() == 4);
    CHECK(c[0].x == doctest::Approx(0.5));
    CHECK(c[1].x == doctest::Approx(-1.0));
    CHECK(std::abs(c[2].x) < 1e-10);
    CHECK(c[3].x == doctest::Approx(2.0));
    CHECK(c[2].y == doctest::Approx(4.0));
    CHECK(polyval(c, 0.3, 1).x == doctest::Approx(-1.0 + 6.0 * 0.09));
    CHECK(polyval(c, 0.3, 2).y == doctest::Approx(8.0));
    CHECK(polyval(c, 0.3, 3).x == doctest::Approx(12.0));
    CHECK_THROWS_AS(polyfit({0.0, 1.0}, {{0, 0}, {1, 1}}, 2), Error);
}

TEST_CASE("Brent root and minimizer") {
    CHECK(brent_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14) ==
          doctest::Approx(0.7390851332151607).epsilon(1e-13));
    CHECK(brent_root([](double x) { return x * x * x - 2.0; }, 0.0, 3.0, 1e-14) ==
          doctest::Approx(std::cbrt(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(brent_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), Error);
    CHECK(brent_minimize([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, -2.0, 2.0, 1e-10) ==
          doctest::Approx(0.3).epsilon(1e-7));
    CHECK(brent_minimize([](double x) { return -std::sin(x); }, 0.0, 3.0, 1e-10) == doctest::Approx(kPi / 2).epsilon(1e-7));
}
