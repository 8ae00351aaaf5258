#pragma once

#include <cstddef>
#include <vector>

#include "apcsf/vec2.hpp"

namespace apcsf {

// Node spacing below this fraction of the curve length counts as degenerate.
inline constexpr double kRegularityFraction = 1e-9;

class OpenCurve {
public:
    explicit OpenCurve(std::vector<Vec2> nodes);

    const std::vector<Vec2>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    Vec2 operator[](std::size_t i) const { return nodes_[i]; }
    Vec2 front() const { return nodes_.front(); }
    Vec2 back() const { return nodes_.back(); }

    OpenCurve reversed() const;

private:
    std::vector<Vec2> nodes_;
};

struct Corner {
    std::size_t index = 0;
    double angle = 0.0;  // exterior angle in (-pi, pi]
};

class ClosedCurve {
public:
    explicit ClosedCurve(std::vector<Vec2> nodes, std::vector<Corner> corners = {});

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<Corner>& corners() const { return corners_; }
    std::size_t size() const { return nodes_.size(); }
    Vec2 operator[](std::size_t i) const { return nodes_[i]; }

    ClosedCurve reversed() const;

private:
    std::vector<Vec2> nodes_;
    std::vector<Corner> corners_;
};

struct FrameSample {
    Vec2 position;
    Vec2 tangent;
    Vec2 normal;
    double curvature = 0.0;
    double arclength_weight = 0.0;
};

std::vector<FrameSample> frames(const OpenCurve& curve);
std::vector<FrameSample> frames(const ClosedCurve& curve);

double length(const OpenCurve& curve);
double length(const ClosedCurve& curve);

// Tangent turning: signed edge-to-edge angles plus the half-angles between
// the endpoint tangents and the end edges.
double total_curvature(const OpenCurve& curve);
double total_curvature(const OpenCurve& curve, Vec2 start_tangent, Vec2 end_tangent);
double total_curvature(const ClosedCurve& curve);

double signed_area(const ClosedCurve& curve);
double signed_area(const std::vector<Vec2>& polygon);

int turning_number(const ClosedCurve& curve);

bool is_convex(const OpenCurve& curve, double tolerance);

// Proper crossings between non-adjacent edges.
int count_self_intersections(const std::vector<Vec2>& nodes, bool closed);

// Signed curvature of the circle through a, b, c (Menger curvature).
double menger_curvature(Vec2 a, Vec2 b, Vec2 c);

// Unit tangent at b of the circle through a, b, c, oriented from a toward c.
Vec2 circle_tangent_mid(Vec2 a, Vec2 b, Vec2 c);

// Unit tangent at a of the circle through a, b, c, oriented from a toward c.
Vec2 circle_tangent_start(Vec2 a, Vec2 b, Vec2 c);

}  // namespace apcsf
