#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "apcsf/vec2.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// n nodes on the arc of radius r about c from angle a0 to a1, both included.
inline std::vector<apcsf::Vec2> arc_nodes(apcsf::Vec2 c, double r, double a0, double a1, std::size_t n) {
    std::vector<apcsf::Vec2> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(n - 1);
        x[i] = c + r * apcsf::unit(a);
    }
    return x;
}

// n distinct nodes of a full circle, counterclockwise.
inline std::vector<apcsf::Vec2> circle_nodes(apcsf::Vec2 c, double r, std::size_t n) {
    std::vector<apcsf::Vec2> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = c + r * apcsf::unit(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    return x;
}

// Star-shaped simple polygon with random radii.
inline std::vector<apcsf::Vec2> random_star_polygon(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> radius(0.3, 2.0), jitter(-0.4, 0.4), shift(-5.0, 5.0);
    const apcsf::Vec2 c{shift(rng), shift(rng)};
    std::vector<apcsf::Vec2> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * kPi * (static_cast<double>(i) + jitter(rng)) / static_cast<double>(n);
        x[i] = c + radius(rng) * apcsf::unit(a);
    }
    return x;
}

// Fan triangulation about a vertex of a star-shaped polygon.
inline double fan_area(const std::vector<apcsf::Vec2>& x) {
    double a = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) a += 0.5 * apcsf::cross(x[i] - x[0], x[i + 1] - x[0]);
    return a;
}

}  // namespace testing
