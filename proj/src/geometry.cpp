#include "apcsf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apcsf/error.hpp"

namespace apcsf {

namespace {

void check_nodes(const std::vector<Vec2>& nodes, bool closed) {
    if (nodes.size() < 4) {
        throw Error(ErrorKind::DegenerateCurve, "curve needs at least 4 nodes, got " + std::to_string(nodes.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!is_finite(nodes[i])) throw Error(ErrorKind::DegenerateCurve, "non-finite node " + std::to_string(i));
        if (i + 1 < nodes.size()) total += norm(nodes[i + 1] - nodes[i]);
    }
    if (closed) total += norm(nodes.front() - nodes.back());
    const double eps = kRegularityFraction * total;
    const std::size_t edges = closed ? nodes.size() : nodes.size() - 1;
    for (std::size_t i = 0; i < edges; ++i) {
        const double h = norm(nodes[(i + 1) % nodes.size()] - nodes[i]);
        if (!(h > eps)) throw Error(ErrorKind::DegenerateCurve, "nodes " + std::to_string(i) + " and " + std::to_string((i + 1) % nodes.size()) + " coincide");
    }
}

// Unsigned angle at vertex p of the triangle (p, q, r).
double vertex_angle(Vec2 p, Vec2 q, Vec2 r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

OpenCurve::OpenCurve(std::vector<Vec2> nodes) : nodes_(std::move(nodes)) { check_nodes(nodes_, false); }

OpenCurve OpenCurve::reversed() const {
    std::vector<Vec2> r(nodes_.rbegin(), nodes_.rend());
    return OpenCurve(std::move(r));
}

ClosedCurve::ClosedCurve(std::vector<Vec2> nodes, std::vector<Corner> corners)
    : nodes_(std::move(nodes)), corners_(std::move(corners)) {
    check_nodes(nodes_, true);
    for (const auto& c : corners_) {
        if (c.index >= nodes_.size()) throw Error(ErrorKind::InvalidInput, "corner index out of range");
        if (!(c.angle > -std::numbers::pi && c.angle <= std::numbers::pi)) {
            throw Error(ErrorKind::InvalidInput, "exterior angle outside (-pi, pi]");
        }
    }
}

ClosedCurve ClosedCurve::reversed() const {
    const std::size_t n = nodes_.size();
    std::vector<Vec2> r(n);
    // keep node 0 in place so corner indices map simply
    for (std::size_t i = 0; i < n; ++i) r[i] = nodes_[(n - i) % n];
    std::vector<Corner> c;
    for (const auto& k : corners_) {
        Corner m{(n - k.index) % n, -k.angle};
        if (m.angle == -std::numbers::pi) m.angle = std::numbers::pi;
        c.push_back(m);
    }
    return ClosedCurve(std::move(r), std::move(c));
}

double menger_curvature(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 e1 = b - a, e2 = c - b, e3 = c - a;
    const double den = norm(e1) * norm(e2) * norm(e3);
    if (!(den > 0.0)) return 0.0;
    return 2.0 * cross(e1, e2) / den;
}

Vec2 circle_tangent_mid(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 u = normalized(b - a);
    const double s = sign_of(cross(b - a, c - b));
    return rotate(u, s * vertex_angle(c, a, b));
}

Vec2 circle_tangent_start(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 u = normalized(b - a);
    const double s = sign_of(cross(b - a, c - b));
    return rotate(u, -s * vertex_angle(c, a, b));
}

std::vector<FrameSample> frames(const OpenCurve& curve) {
    const auto& x = curve.nodes();
    const std::size_t n = x.size();
    std::vector<FrameSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        FrameSample& f = out[i];
        f.position = x[i];
        const double hl = i > 0 ? norm(x[i] - x[i - 1]) : 0.0;
        const double hr = i + 1 < n ? norm(x[i + 1] - x[i]) : 0.0;
        f.arclength_weight = 0.5 * (hl + hr);
        if (i == 0) {
            f.curvature = menger_curvature(x[0], x[1], x[2]);
            f.tangent = circle_tangent_start(x[0], x[1], x[2]);
        } else if (i + 1 == n) {
            f.curvature = menger_curvature(x[n - 3], x[n - 2], x[n - 1]);
            f.tangent = -circle_tangent_start(x[n - 1], x[n - 2], x[n - 3]);
        } else {
            f.curvature = menger_curvature(x[i - 1], x[i], x[i + 1]);
            f.tangent = circle_tangent_mid(x[i - 1], x[i], x[i + 1]);
        }
        f.normal = perp(f.tangent);
    }
    return out;
}

std::vector<FrameSample> frames(const ClosedCurve& curve) {
    const auto& x = curve.nodes();
    const std::size_t n = x.size();
    std::vector<FrameSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = x[(i + n - 1) % n], b = x[i], c = x[(i + 1) % n];
        FrameSample& f = out[i];
        f.position = b;
        f.arclength_weight = 0.5 * (norm(b - a) + norm(c - b));
        f.curvature = menger_curvature(a, b, c);
        f.tangent = circle_tangent_mid(a, b, c);
        f.normal = perp(f.tangent);
    }
    return out;
}

double length(const OpenCurve& curve) {
    const auto& x = curve.nodes();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += norm(x[i + 1] - x[i]);
    return s;
}

double length(const ClosedCurve& curve) {
    const auto& x = curve.nodes();
    double s = norm(x.front() - x.back());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += norm(x[i + 1] - x[i]);
    return s;
}

double total_curvature(const OpenCurve& curve, Vec2 start_tangent, Vec2 end_tangent) {
    const auto& x = curve.nodes();
    const std::size_t n = x.size();
    double sum = turning_angle(start_tangent, x[1] - x[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) sum += turning_angle(x[i] - x[i - 1], x[i + 1] - x[i]);
    sum += turning_angle(x[n - 1] - x[n - 2], end_tangent);
    return sum;
}

double total_curvature(const OpenCurve& curve) {
    const auto f = frames(curve);
    return total_curvature(curve, f.front().tangent, f.back().tangent);
}

double total_curvature(const ClosedCurve& curve) {
    const auto& x = curve.nodes();
    const std::size_t n = x.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += turning_angle(x[i] - x[(i + n - 1) % n], x[(i + 1) % n] - x[i]);
    }
    return sum;
}

double signed_area(const std::vector<Vec2>& p) {
    const std::size_t n = p.size();
    if (n < 3) return 0.0;
    // shift to the first vertex to limit cancellation
    const Vec2 o = p[0];
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cross(p[i] - o, p[(i + 1) % n] - o);
    return 0.5 * s;
}

double signed_area(const ClosedCurve& curve) { return signed_area(curve.nodes()); }

int turning_number(const ClosedCurve& curve) {
    const auto& x = curve.nodes();
    const std::size_t n = x.size();
    std::vector<double> declared(n, 0.0);
    std::vector<bool> is_corner(n, false);
    for (const auto& c : curve.corners()) {
        is_corner[c.index] = true;
        declared[c.index] = c.angle;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_corner[i]) {
            sum += declared[i];
        } else {
            sum += turning_angle(x[i] - x[(i + n - 1) % n], x[(i + 1) % n] - x[i]);
        }
    }
    const double m = sum / (2.0 * std::numbers::pi);
    const double r = std::round(m);
    if (std::abs(m - r) > 0.1) {
        throw Error(ErrorKind::NonIntegerTurning, "turning sum / 2pi = " + std::to_string(m));
    }
    return static_cast<int>(r);
}

bool is_convex(const OpenCurve& curve, double tolerance) {
    const auto f = frames(curve);
    return std::all_of(f.begin(), f.end(), [&](const FrameSample& s) { return s.curvature >= -tolerance; });
}

int count_self_intersections(const std::vector<Vec2>& x, bool closed) {
    const std::size_t n = x.size();
    const std::size_t m = closed ? n : n - 1;
    auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return sign_of(cross(b - a, c - a)); };
    int count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 p = x[i], q = x[(i + 1) % n];
        const double xmin = std::min(p.x, q.x), xmax = std::max(p.x, q.x);
        const double ymin = std::min(p.y, q.y), ymax = std::max(p.y, q.y);
        for (std::size_t j = i + 2; j < m; ++j) {
            if (closed && i == 0 && j == m - 1) continue;
            const Vec2 r = x[j], s = x[(j + 1) % n];
            if (std::max(r.x, s.x) < xmin || std::min(r.x, s.x) > xmax) continue;
            if (std::max(r.y, s.y) < ymin || std::min(r.y, s.y) > ymax) continue;
            const double o1 = orient(p, q, r), o2 = orient(p, q, s);
            const double o3 = orient(r, s, p), o4 = orient(r, s, q);
            if (o1 * o2 < 0.0 && o3 * o4 < 0.0) ++count;
        }
    }
    return count;
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateCurve: return "DegenerateCurve";
        case ErrorKind::NonIntegerTurning: return "NonIntegerTurning";
        case ErrorKind::UnsupportedForLine: return "UnsupportedForLine";
        case ErrorKind::AntipodalEndpoints: return "AntipodalEndpoints";
        case ErrorKind::MismatchedEndpoints: return "MismatchedEndpoints";
        case ErrorKind::ProjectionDiverged: return "ProjectionDiverged";
        case ErrorKind::StepRejected: return "StepRejected";
        case ErrorKind::BoundaryEnforcementFailed: return "BoundaryEnforcementFailed";
        case ErrorKind::InsufficientBlowup: return "InsufficientBlowup";
        case ErrorKind::InsufficientResolution: return "InsufficientResolution";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::EvenIndex: return "EvenIndex";
        case ErrorKind::NotPerpendicular: return "NotPerpendicular";
        case ErrorKind::RecipeInfeasible: return "RecipeInfeasible";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace apcsf
