#pragma once

#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "apcsf/geometry.hpp"
#include "apcsf/numerics.hpp"
#include "apcsf/vec2.hpp"

namespace apcsf {

enum class SupportKind { Circle, Ellipse, Table, Line };

struct SupportPoint {
    Vec2 point;
    Vec2 tangent;
    Vec2 inner_normal;
    double curvature = 0.0;
};

inline constexpr double kAngleTolerance = 1e-5;
inline constexpr double kAntipodalTolerance = 1e-3;
inline constexpr int kTableMinSamples = 4096;

// Convex closed curve, positively oriented, or a straight line.
// Closed kinds are parametrized on [0, period()): angle for circle and ellipse,
// sample index for tables. Lines use arclength along the direction.
class SupportCurve {
public:
    static SupportCurve circle(Vec2 center, double radius);
    static SupportCurve ellipse(Vec2 center, double a, double b, double rotation = 0.0);
    static SupportCurve table(std::vector<Vec2> nodes);
    // default is f(s) = (-s, 0)
    static SupportCurve line(Vec2 point = {0.0, 0.0}, Vec2 direction = {-1.0, 0.0});

    SupportKind kind() const { return kind_; }
    bool is_line() const { return kind_ == SupportKind::Line; }
    bool is_closed() const { return !is_line(); }
    double period() const;

    SupportPoint evaluate(double param) const;
    // continuous angle of the tangent; increases by 2*pi per period on closed kinds
    double tangent_angle(double param) const;

    std::pair<double, Vec2> project(Vec2 p) const;

    // d_Sigma, the least distance between parallel supporting lines; +inf for lines
    double minimum_width() const;
    double contact_tolerance() const;

    // image under x -> scale * R(rotation) x + shift
    SupportCurve transformed(double scale, double rotation, Vec2 shift) const;

    Vec2 center() const { return center_; }
    double radius() const { return a_; }
    double semi_major() const { return a_; }
    double semi_minor() const { return b_; }
    double rotation() const { return rot_; }
    Vec2 line_point() const { return center_; }
    Vec2 line_direction() const { return dir_; }
    const std::vector<Vec2>& table_nodes() const;

private:
    SupportKind kind_ = SupportKind::Circle;
    Vec2 center_;
    double a_ = 1.0, b_ = 1.0, rot_ = 0.0;
    Vec2 dir_{1.0, 0.0};
    struct Table {
        std::vector<Vec2> nodes;
        CubicSpline2 spline;
        std::vector<double> chord_turning;  // from edge 0 to edge k
    };
    std::shared_ptr<const Table> table_;
    double width_cache_ = -1.0;

    double support_function(double theta) const;
};

std::pair<double, Vec2> project_to_support(const SupportCurve& support, Vec2 p);
double minimum_width(const SupportCurve& support);
SupportPoint evaluate(const SupportCurve& support, double param);

struct BoundaryArc {
    double start_param = 0.0;  // at gamma(b)
    double end_param = 0.0;    // at gamma(a), unwrapped so the arc runs monotonically
    std::vector<Vec2> samples;
    bool degenerate = false;
    double normal_turning = 0.0;  // signed, positive when travelling counterclockwise
};

BoundaryArc short_piece(const SupportCurve& support, double from_param, double to_param);

// Open curve whose endpoints sit on the support with perpendicular outward contact.
class AnchoredCurve {
public:
    // validates contact and the Neumann angle condition
    AnchoredCurve(OpenCurve curve, SupportCurve support, double angle_tolerance = kAngleTolerance);

    // contact is checked, the angle condition is not; endpoint parameters from projection
    static AnchoredCurve unchecked(OpenCurve curve, SupportCurve support);

    const OpenCurve& curve() const { return curve_; }
    const SupportCurve& support() const { return support_; }
    double param_a() const { return param_a_; }
    double param_b() const { return param_b_; }

    // prescribed tangents: tau(a) = -nu_Sigma(gamma(a)), tau(b) = +nu_Sigma(gamma(b))
    Vec2 boundary_tangent_a() const;
    Vec2 boundary_tangent_b() const;

    // angle between the fitted endpoint tangents and the prescribed ones
    std::pair<double, double> contact_angle_errors() const;

    AnchoredCurve reversed() const;

private:
    AnchoredCurve(OpenCurve curve, SupportCurve support, double pa, double pb);

    OpenCurve curve_;
    SupportCurve support_;
    double param_a_ = 0.0, param_b_ = 0.0;
};

// Endpoint tangent from a cubic fit through the four end nodes, oriented along the curve.
Vec2 fitted_end_tangent(const std::vector<Vec2>& nodes, bool at_start);

BoundaryArc short_piece(const AnchoredCurve& anchored);

double enclosed_area(const AnchoredCurve& anchored, const BoundaryArc& arc);
double enclosed_area(const AnchoredCurve& anchored);

// Closed polyline gamma followed by sigma (interior samples only).
std::vector<Vec2> closed_polyline(const AnchoredCurve& anchored, const BoundaryArc& arc);

}  // namespace apcsf
