#include "apcsf/support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apcsf/error.hpp"

namespace apcsf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pm_pi(double a) {
    a = std::remainder(a, kTwoPi);
    return a;
}

double wrap_positive(double a, double period) {
    double r = std::fmod(a, period);
    if (r < 0.0) r += period;
    return r;
}

}  // namespace

SupportCurve SupportCurve::circle(Vec2 center, double radius) {
    if (!(radius > 0.0) || !is_finite(center)) throw Error(ErrorKind::InvalidInput, "circle needs a positive radius");
    SupportCurve s;
    s.kind_ = SupportKind::Circle;
    s.center_ = center;
    s.a_ = s.b_ = radius;
    s.width_cache_ = 2.0 * radius;
    return s;
}

SupportCurve SupportCurve::ellipse(Vec2 center, double a, double b, double rotation) {
    if (!(a > 0.0 && b > 0.0) || !is_finite(center)) throw Error(ErrorKind::InvalidInput, "ellipse needs positive semi-axes");
    if (b > a) {
        std::swap(a, b);
        rotation += 0.5 * kPi;
    }
    SupportCurve s;
    s.kind_ = SupportKind::Ellipse;
    s.center_ = center;
    s.a_ = a;
    s.b_ = b;
    s.rot_ = rotation;
    // width(theta) = 2 sqrt(a^2 cos^2 + b^2 sin^2) in the body frame; sweep then refine
    const int grid = 4096;
    double best = 1e300, best_t = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = kPi * i / grid;
        const double w = s.support_function(t) + s.support_function(t + kPi);
        if (w < best) {
            best = w;
            best_t = t;
        }
    }
    const double step = kPi / grid;
    const double t = brent_minimize([&](double th) { return s.support_function(th) + s.support_function(th + kPi); },
                                    best_t - step, best_t + step, 1e-12);
    s.width_cache_ = std::min(best, s.support_function(t) + s.support_function(t + kPi));
    return s;
}

SupportCurve SupportCurve::line(Vec2 point, Vec2 direction) {
    const double n = norm(direction);
    if (!(n > 0.0) || !is_finite(point)) throw Error(ErrorKind::InvalidInput, "line needs a nonzero direction");
    SupportCurve s;
    s.kind_ = SupportKind::Line;
    s.center_ = point;
    s.dir_ = direction / n;
    s.width_cache_ = std::numeric_limits<double>::infinity();
    return s;
}

SupportCurve SupportCurve::table(std::vector<Vec2> nodes) {
    if (nodes.size() < static_cast<std::size_t>(kTableMinSamples)) {
        throw Error(ErrorKind::InvalidInput, "table support needs at least " + std::to_string(kTableMinSamples) + " samples");
    }
    if (nodes.front() == nodes.back()) nodes.pop_back();
    const ClosedCurve poly(nodes);
    if (!(signed_area(poly) > 0.0)) throw Error(ErrorKind::InvalidInput, "table support must be counterclockwise");
    const std::size_t n = nodes.size();
    double turn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = turning_angle(nodes[i] - nodes[(i + n - 1) % n], nodes[(i + 1) % n] - nodes[i]);
        if (t < -1e-12) throw Error(ErrorKind::InvalidInput, "table support must be convex");
        turn += t;
    }
    if (std::abs(turn - kTwoPi) > 1e-6) throw Error(ErrorKind::InvalidInput, "table support must be simple");
    auto tab = std::make_shared<Table>();
    tab->nodes = nodes;
    tab->chord_turning.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        tab->chord_turning[i] = tab->chord_turning[i - 1] + turning_angle(nodes[i] - nodes[i - 1], nodes[(i + 1) % n] - nodes[i]);
    }
    std::vector<double> u(n + 1);
    std::vector<Vec2> x(nodes);
    x.push_back(nodes.front());
    for (std::size_t i = 0; i <= n; ++i) u[i] = static_cast<double>(i);
    tab->spline = CubicSpline2::periodic(std::move(u), std::move(x));
    SupportCurve s;
    s.kind_ = SupportKind::Table;
    s.table_ = std::move(tab);
    // sweep directions; support points refined on the spline
    const int grid = 4096;
    double best = 1e300, best_t = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = kPi * i / grid;
        const double w = s.support_function(t) + s.support_function(t + kPi);
        if (w < best) {
            best = w;
            best_t = t;
        }
    }
    const double step = kPi / grid;
    const double t = brent_minimize([&](double th) { return s.support_function(th) + s.support_function(th + kPi); },
                                    best_t - step, best_t + step, 1e-12);
    s.width_cache_ = std::min(best, s.support_function(t) + s.support_function(t + kPi));
    return s;
}

const std::vector<Vec2>& SupportCurve::table_nodes() const {
    static const std::vector<Vec2> empty;
    return table_ ? table_->nodes : empty;
}

double SupportCurve::period() const {
    switch (kind_) {
        case SupportKind::Circle:
        case SupportKind::Ellipse: return kTwoPi;
        case SupportKind::Table: return static_cast<double>(table_->nodes.size());
        case SupportKind::Line: return std::numeric_limits<double>::infinity();
    }
    return kTwoPi;
}

double SupportCurve::support_function(double theta) const {
    const Vec2 u = unit(theta);
    switch (kind_) {
        case SupportKind::Circle: return dot(center_, u) + a_;
        case SupportKind::Ellipse: {
            const double c = std::cos(theta - rot_), s = std::sin(theta - rot_);
            return dot(center_, u) + std::sqrt(a_ * a_ * c * c + b_ * b_ * s * s);
        }
        case SupportKind::Table: {
            const auto& x = table_->nodes;
            std::size_t k = 0;
            double best = -1e300;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double v = dot(x[i], u);
                if (v > best) {
                    best = v;
                    k = i;
                }
            }
            // maximize <x(t), u> near sample k
            const auto& sp = table_->spline;
            const double t = brent_minimize([&](double p) { return -dot(sp(p), u); }, static_cast<double>(k) - 1.0,
                                            static_cast<double>(k) + 1.0, 1e-12);
            return std::max(best, dot(sp(t), u));
        }
        case SupportKind::Line: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

SupportPoint SupportCurve::evaluate(double param) const {
    SupportPoint p;
    switch (kind_) {
        case SupportKind::Circle: {
            const double th = param + rot_;
            p.point = center_ + a_ * unit(th);
            p.tangent = {-std::sin(th), std::cos(th)};
            p.curvature = 1.0 / a_;
            break;
        }
        case SupportKind::Ellipse: {
            const double c = std::cos(param), s = std::sin(param);
            const Vec2 d = rotate({-a_ * s, b_ * c}, rot_);
            p.point = center_ + rotate({a_ * c, b_ * s}, rot_);
            p.tangent = normalized(d);
            const double dn = norm(d);
            p.curvature = a_ * b_ / (dn * dn * dn);
            break;
        }
        case SupportKind::Table: {
            const auto& sp = table_->spline;
            const Vec2 d1 = sp.eval(param, 1), d2 = sp.eval(param, 2);
            p.point = sp(param);
            p.tangent = normalized(d1);
            const double dn = norm(d1);
            p.curvature = cross(d1, d2) / (dn * dn * dn);
            break;
        }
        case SupportKind::Line: {
            p.point = center_ + param * dir_;
            p.tangent = dir_;
            p.curvature = 0.0;
            break;
        }
    }
    p.inner_normal = perp(p.tangent);
    return p;
}

double SupportCurve::tangent_angle(double param) const {
    switch (kind_) {
        case SupportKind::Circle: return param + rot_ + 0.5 * kPi;
        case SupportKind::Ellipse: {
            const double base = param + rot_ + 0.5 * kPi;
            return base + wrap_pm_pi(angle_of(evaluate(param).tangent) - base);
        }
        case SupportKind::Table: {
            const double n = period();
            const double turns = std::floor(param / n);
            const double u = param - turns * n;
            // lift against the chord leaving the knot; table turning is monotone
            const auto& x = table_->nodes;
            const std::size_t k = std::min(static_cast<std::size_t>(std::floor(u)), x.size() - 1);
            const double ref = angle_of(x[1] - x[0]) + table_->chord_turning[k];
            const double a = angle_of(evaluate(u).tangent);
            return ref + wrap_pm_pi(a - ref) + kTwoPi * turns;
        }
        case SupportKind::Line: return angle_of(dir_);
    }
    return 0.0;
}

std::pair<double, Vec2> SupportCurve::project(Vec2 p) const {
    switch (kind_) {
        case SupportKind::Circle: {
            const Vec2 d = p - center_;
            const double th = norm(d) > 0.0 ? angle_of(d) : 0.0;
            const double param = wrap_positive(th - rot_, kTwoPi);
            return {param, evaluate(param).point};
        }
        case SupportKind::Line: {
            const double s = dot(p - center_, dir_);
            return {s, center_ + s * dir_};
        }
        case SupportKind::Ellipse:
        case SupportKind::Table: {
            const double P = period();
            const int coarse = kind_ == SupportKind::Ellipse ? 256 : static_cast<int>(table_->nodes.size());
            double best_t = 0.0, best_d = 1e300;
            for (int i = 0; i < coarse; ++i) {
                const double t = P * i / coarse;
                const Vec2 q = kind_ == SupportKind::Ellipse ? evaluate(t).point : table_->nodes[static_cast<std::size_t>(i)];
                const double d = norm(q - p);
                if (d < best_d) {
                    best_d = d;
                    best_t = t;
                }
            }
            const double h = P / coarse;
            auto dist2 = [&](double t) {
                const Vec2 q = evaluate(t).point - p;
                return dot(q, q);
            };
            // Newton on <x(t) - p, x'(t)> = 0, fallback to a bracketed search
            double t = best_t;
            bool ok = false;
            for (int it = 0; it < 50; ++it) {
                Vec2 x, d1, d2;
                if (kind_ == SupportKind::Ellipse) {
                    const double c = std::cos(t), s = std::sin(t);
                    x = center_ + rotate({a_ * c, b_ * s}, rot_);
                    d1 = rotate({-a_ * s, b_ * c}, rot_);
                    d2 = rotate({-a_ * c, -b_ * s}, rot_);
                } else {
                    x = table_->spline(t);
                    d1 = table_->spline.eval(t, 1);
                    d2 = table_->spline.eval(t, 2);
                }
                const double g = dot(x - p, d1);
                const double dg = dot(d1, d1) + dot(x - p, d2);
                if (!(dg > 0.0)) break;
                double step = -g / dg;
                step = std::clamp(step, -h, h);
                t += step;
                if (std::abs(step) < 1e-15 * std::max(1.0, P)) {
                    ok = true;
                    break;
                }
            }
            if (!ok || std::abs(t - best_t) > 1.5 * h || !(dist2(t) <= dist2(best_t) * (1.0 + 1e-12) + 1e-300)) {
                t = brent_minimize(dist2, best_t - h, best_t + h, 1e-14);
            }
            if (!std::isfinite(t)) throw Error(ErrorKind::ProjectionDiverged, "projection onto support failed");
            t = wrap_positive(t, P);
            return {t, evaluate(t).point};
        }
    }
    return {0.0, p};
}

double SupportCurve::minimum_width() const {
    if (is_line()) throw Error(ErrorKind::UnsupportedForLine, "minimum width of a line is +inf");
    return width_cache_;
}

double SupportCurve::contact_tolerance() const { return is_line() ? 1e-7 : 1e-7 * width_cache_; }

SupportCurve SupportCurve::transformed(double scale, double rotation, Vec2 shift) const {
    auto map = [&](Vec2 x) { return scale * apcsf::rotate(x, rotation) + shift; };
    switch (kind_) {
        case SupportKind::Circle: {
            SupportCurve s = circle(map(center_), scale * a_);
            s.rot_ = rot_ + rotation;
            return s;
        }
        case SupportKind::Ellipse: return ellipse(map(center_), scale * a_, scale * b_, rot_ + rotation);
        case SupportKind::Line: return line(map(center_), apcsf::rotate(dir_, rotation));
        case SupportKind::Table: {
            std::vector<Vec2> x;
            x.reserve(table_->nodes.size());
            for (Vec2 p : table_->nodes) x.push_back(map(p));
            return table(std::move(x));
        }
    }
    return *this;
}

std::pair<double, Vec2> project_to_support(const SupportCurve& support, Vec2 p) { return support.project(p); }
double minimum_width(const SupportCurve& support) { return support.minimum_width(); }
SupportPoint evaluate(const SupportCurve& support, double param) { return support.evaluate(param); }

BoundaryArc short_piece(const SupportCurve& support, double from_param, double to_param) {
    BoundaryArc arc;
    arc.start_param = from_param;
    const Vec2 p0 = support.evaluate(from_param).point;
    const Vec2 p1 = support.evaluate(to_param).point;
    if (norm(p1 - p0) <= support.contact_tolerance()) {
        arc.end_param = from_param;
        arc.degenerate = true;
        arc.samples = {p0};
        return arc;
    }
    if (support.is_line()) {
        arc.end_param = to_param;
        arc.samples = {p0, p1};
        return arc;
    }
    const double P = support.period();
    double ccw = std::fmod(support.tangent_angle(to_param) - support.tangent_angle(from_param), kTwoPi);
    if (ccw < 0.0) ccw += kTwoPi;
    if (std::abs(ccw - kPi) < kAntipodalTolerance) {
        throw Error(ErrorKind::AntipodalEndpoints, "both arcs of the support turn by pi (turning " + std::to_string(ccw) + ")");
    }
    if (ccw < kPi) {
        arc.end_param = from_param + wrap_positive(to_param - from_param, P);
        arc.normal_turning = ccw;
    } else {
        arc.end_param = from_param - wrap_positive(from_param - to_param, P);
        arc.normal_turning = -(kTwoPi - ccw);
    }
    const double max_step = kTwoPi / 8192.0;
    const int segments = std::max(1, static_cast<int>(std::ceil(std::abs(arc.normal_turning) / max_step)));
    arc.samples.reserve(static_cast<std::size_t>(segments) + 1);
    arc.samples.push_back(p0);
    for (int k = 1; k < segments; ++k) {
        const double t = arc.start_param + (arc.end_param - arc.start_param) * k / segments;
        arc.samples.push_back(support.evaluate(t).point);
    }
    arc.samples.push_back(p1);
    return arc;
}

AnchoredCurve::AnchoredCurve(OpenCurve curve, SupportCurve support, double pa, double pb)
    : curve_(std::move(curve)), support_(std::move(support)), param_a_(pa), param_b_(pb) {}

AnchoredCurve AnchoredCurve::unchecked(OpenCurve curve, SupportCurve support) {
    const auto [pa, qa] = support.project(curve.front());
    const auto [pb, qb] = support.project(curve.back());
    const double tol = support.contact_tolerance();
    if (norm(qa - curve.front()) > tol || norm(qb - curve.back()) > tol) {
        throw Error(ErrorKind::BoundaryEnforcementFailed, "endpoint off the support by more than the contact tolerance");
    }
    return AnchoredCurve(std::move(curve), std::move(support), pa, pb);
}

AnchoredCurve::AnchoredCurve(OpenCurve curve, SupportCurve support, double angle_tolerance)
    : curve_(std::move(curve)), support_(std::move(support)) {
    const auto [pa, qa] = support_.project(curve_.front());
    const auto [pb, qb] = support_.project(curve_.back());
    const double tol = support_.contact_tolerance();
    if (norm(qa - curve_.front()) > tol || norm(qb - curve_.back()) > tol) {
        throw Error(ErrorKind::InvalidInput, "curve endpoints must lie on the support");
    }
    param_a_ = pa;
    param_b_ = pb;
    const auto [ea, eb] = contact_angle_errors();
    if (ea > angle_tolerance || eb > angle_tolerance) {
        throw Error(ErrorKind::NotPerpendicular,
                    "contact angle error " + std::to_string(std::max(ea, eb)) + " rad exceeds tolerance");
    }
}

Vec2 AnchoredCurve::boundary_tangent_a() const { return -support_.evaluate(param_a_).inner_normal; }
Vec2 AnchoredCurve::boundary_tangent_b() const { return support_.evaluate(param_b_).inner_normal; }

std::pair<double, double> AnchoredCurve::contact_angle_errors() const {
    const Vec2 ta = fitted_end_tangent(curve_.nodes(), true);
    const Vec2 tb = fitted_end_tangent(curve_.nodes(), false);
    return {std::abs(turning_angle(boundary_tangent_a(), ta)), std::abs(turning_angle(boundary_tangent_b(), tb))};
}

AnchoredCurve AnchoredCurve::reversed() const { return AnchoredCurve(curve_.reversed(), support_, param_b_, param_a_); }

Vec2 fitted_end_tangent(const std::vector<Vec2>& x, bool at_start) {
    const std::size_t n = x.size();
    std::vector<double> t(4);
    std::vector<Vec2> p(4);
    double s = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t i = at_start ? k : n - 1 - k;
        if (k > 0) s += norm(x[i] - p[k - 1]);
        t[k] = s;
        p[k] = x[i];
    }
    const auto c = polyfit(t, p, 3);
    const Vec2 d = normalized(polyval(c, 0.0, 1));
    return at_start ? d : -d;
}

BoundaryArc short_piece(const AnchoredCurve& anchored) {
    return short_piece(anchored.support(), anchored.param_b(), anchored.param_a());
}

std::vector<Vec2> closed_polyline(const AnchoredCurve& anchored, const BoundaryArc& arc) {
    const auto& x = anchored.curve().nodes();
    const double tol = anchored.support().contact_tolerance();
    if (norm(arc.samples.front() - x.back()) > tol || norm(arc.samples.back() - x.front()) > tol) {
        throw Error(ErrorKind::MismatchedEndpoints, "boundary arc does not join gamma(b) to gamma(a)");
    }
    std::vector<Vec2> poly(x);
    for (std::size_t k = 1; k + 1 < arc.samples.size(); ++k) poly.push_back(arc.samples[k]);
    return poly;
}

double enclosed_area(const AnchoredCurve& anchored, const BoundaryArc& arc) {
    return signed_area(closed_polyline(anchored, arc));
}

double enclosed_area(const AnchoredCurve& anchored) { return enclosed_area(anchored, short_piece(anchored)); }

}  // namespace apcsf
