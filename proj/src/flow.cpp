#include "apcsf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apcsf/error.hpp"
#include "apcsf/numerics.hpp"
#include "apcsf/singularity.hpp"

namespace apcsf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;  // [a b; c d]
};

Mat2 operator+(Mat2 x, Mat2 y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
Mat2 operator-(Mat2 x, Mat2 y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
Mat2 operator*(double s, Mat2 x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
Mat2 operator*(Mat2 x, Mat2 y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
Vec2 operator*(Mat2 m, Vec2 v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }
Mat2 identity() { return {1, 0, 0, 1}; }
Mat2 outer(Vec2 n) { return {n.x * n.x, n.x * n.y, n.y * n.x, n.y * n.y}; }
Mat2 inverse(Mat2 m) {
    const double det = m.a * m.d - m.b * m.c;
    return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}
Mat2 columns(Vec2 c0, Vec2 c1) { return {c0.x, c1.x, c0.y, c1.y}; }

// Block tridiagonal system L_i x_{i-1} + D_i x_i + U_i x_{i+1} = r_i, factored once.
class BlockTridiagonal {
public:
    BlockTridiagonal(std::vector<Mat2> L, std::vector<Mat2> D, std::vector<Mat2> U)
        : L_(std::move(L)), U_(std::move(U)), Dinv_(D.size()), W_(D.size()) {
        const std::size_t m = D.size();
        Dinv_[0] = inverse(D[0]);
        for (std::size_t i = 1; i < m; ++i) {
            W_[i] = L_[i] * Dinv_[i - 1];
            Dinv_[i] = inverse(D[i] - W_[i] * U_[i - 1]);
        }
    }

    std::vector<Vec2> solve(std::vector<Vec2> r) const {
        const std::size_t m = r.size();
        for (std::size_t i = 1; i < m; ++i) r[i] = r[i] - W_[i] * r[i - 1];
        std::vector<Vec2> x(m);
        x[m - 1] = Dinv_[m - 1] * r[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) x[i] = Dinv_[i] * (r[i] - U_[i] * x[i + 1]);
        return x;
    }

private:
    std::vector<Mat2> L_, U_, Dinv_, W_;
};

// Curvature at x0 of the cubic through x0 (tangent t0), x1, x2.
double endpoint_kappa(Vec2 x0, Vec2 x1, Vec2 x2, Vec2 t0) {
    const double s1 = norm(x1 - x0);
    const double s2 = s1 + norm(x2 - x1);
    const Vec2 r1 = x1 - x0 - s1 * t0;
    const Vec2 r2 = x2 - x0 - s2 * t0;
    const double det = s1 * s1 * s2 * s2 * (s2 - s1);
    const Vec2 a = (s2 * s2 * s2 * r1 - s1 * s1 * s1 * r2) / det;
    return 2.0 * dot(a, perp(t0));
}

// Node parameters equidistributing the piecewise linear density rho over knots u.
std::vector<double> equidistribute(const std::vector<double>& u, const std::vector<double>& rho, std::size_t count, bool closed_count) {
    const std::size_t m = u.size();
    std::vector<double> W(m, 0.0);
    for (std::size_t j = 0; j + 1 < m; ++j) W[j + 1] = W[j] + 0.5 * (rho[j] + rho[j + 1]) * (u[j + 1] - u[j]);
    const double total = W.back();
    const std::size_t intervals = closed_count ? count : count - 1;
    std::vector<double> out(count);
    std::size_t j = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(intervals);
        while (j + 2 < m && W[j + 1] < target) ++j;
        const double h = u[j + 1] - u[j];
        const double r = std::max(0.0, target - W[j]);
        const double slope = (rho[j + 1] - rho[j]) / h;
        const double disc = std::max(0.0, rho[j] * rho[j] + 2.0 * slope * r);
        const double x = 2.0 * r / (rho[j] + std::sqrt(disc));
        out[k] = u[j] + std::clamp(x, 0.0, h);
    }
    if (!closed_count) out.back() = u.back();
    out.front() = u.front();
    return out;
}

std::vector<double> density(const DiscreteCurve& d, bool closed) {
    const std::size_t n = d.kappa.size();
    double abs_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_total += std::abs(d.kappa[i]) * d.weight[i];
    const double alpha = std::max(abs_total, kTwoPi) / d.length;
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::abs(d.kappa[i]) + alpha;
    std::vector<double> s(rho);
    for (std::size_t i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i + 1 == n)) continue;
        s[i] = 0.25 * rho[(i + n - 1) % n] + 0.5 * rho[i] + 0.25 * rho[(i + 1) % n];
    }
    return s;
}

double max_spacing_ratio(const std::vector<Vec2>& x, bool closed) {
    const std::size_t n = x.size();
    const std::size_t edges = closed ? n : n - 1;
    double worst = 1.0, prev = closed ? norm(x.front() - x.back()) : -1.0;
    for (std::size_t i = 0; i < edges; ++i) {
        const double h = norm(x[(i + 1) % n] - x[i]);
        if (prev > 0.0) worst = std::max(worst, std::max(h / prev, prev / h));
        prev = h;
    }
    return worst;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b, bool b_closed) {
    const std::size_t m = b.size();
    const std::size_t edges = b_closed ? m : m - 1;
    double worst = 0.0;
    for (Vec2 p : a) {
        double best = 1e300;
        for (std::size_t j = 0; j < edges; ++j) best = std::min(best, point_segment_distance(p, b[j], b[(j + 1) % m]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::ReachedTEnd: return "ReachedTEnd";
        case Outcome::CurvatureBlowup: return "CurvatureBlowup";
        case Outcome::StepFailure: return "StepFailure";
    }
    return "Unknown";
}

double effective_dt_safety(const FlowConfig& config) {
    if (config.dt_safety > 0.0) return config.dt_safety;
    return config.scheme == Scheme::Explicit ? 0.2 : 2.0;
}

namespace detail {

double min_spacing(const std::vector<Vec2>& x, bool closed) {
    double h = closed ? norm(x.front() - x.back()) : 1e300;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) h = std::min(h, norm(x[i + 1] - x[i]));
    return h;
}

std::vector<Vec2> implicit_increment(const std::vector<Vec2>& x, const DiscreteCurve& d, double dt, bool periodic) {
    const std::size_t n = x.size();
    std::vector<Mat2> L(n), D(n), U(n);
    std::vector<Vec2> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 P = outer(d.normal[i]);
        r[i] = dt * (d.kappa[i] - d.kappa_bar) * d.normal[i];
        const bool first = !periodic && i == 0;
        const bool last = !periodic && i + 1 == n;
        if (first || last) {
            // ghost node mirrored across the support tangent line
            const double h = first ? norm(x[1] - x[0]) : norm(x[n - 1] - x[n - 2]);
            const double g = 2.0 * dt / (h * h);
            D[i] = identity() + g * P;
            (first ? U[i] : L[i]) = -g * P;
            continue;
        }
        const Vec2 xl = x[(i + n - 1) % n], xr = x[(i + 1) % n];
        const double hl = norm(x[i] - xl), hr = norm(xr - x[i]);
        const double c = 2.0 * dt / (hl + hr);
        L[i] = -(c / hl) * P;
        U[i] = -(c / hr) * P;
        D[i] = identity() + (c / hl + c / hr) * P;
    }
    if (!periodic) return BlockTridiagonal(L, D, U).solve(r);

    // rows 1..n-1 with x_0 eliminated as a parameter
    const std::size_t m = n - 1;
    std::vector<Mat2> Ls(L.begin() + 1, L.end()), Ds(D.begin() + 1, D.end()), Us(U.begin() + 1, U.end());
    const BlockTridiagonal sub(Ls, Ds, Us);
    const auto p = sub.solve(std::vector<Vec2>(r.begin() + 1, r.end()));
    std::vector<Vec2> ex(m), ey(m);
    ex[0] = -(L[1] * Vec2{1, 0});
    ey[0] = -(L[1] * Vec2{0, 1});
    ex[m - 1] = ex[m - 1] - U[n - 1] * Vec2{1, 0};
    ey[m - 1] = ey[m - 1] - U[n - 1] * Vec2{0, 1};
    const auto qx = sub.solve(ex), qy = sub.solve(ey);
    const Mat2 Q1 = columns(qx[0], qy[0]), Qn = columns(qx[m - 1], qy[m - 1]);
    const Mat2 M = D[0] + U[0] * Q1 + L[0] * Qn;
    const Vec2 x0 = inverse(M) * (r[0] - U[0] * p[0] - L[0] * p[m - 1]);
    std::vector<Vec2> out(n);
    out[0] = x0;
    for (std::size_t i = 0; i < m; ++i) out[i + 1] = p[i] + columns(qx[i], qy[i]) * x0;
    return out;
}

}  // namespace detail

DiscreteCurve discretize_open(const std::vector<Vec2>& x, Vec2 ta, Vec2 tb) {
    const std::size_t n = x.size();
    DiscreteCurve d;
    d.kappa.resize(n);
    d.normal.resize(n);
    d.weight.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d.kappa[i] = menger_curvature(x[i - 1], x[i], x[i + 1]);
        d.normal[i] = perp(circle_tangent_mid(x[i - 1], x[i], x[i + 1]));
    }
    d.kappa[0] = endpoint_kappa(x[0], x[1], x[2], ta);
    d.normal[0] = perp(ta);
    d.kappa[n - 1] = -endpoint_kappa(x[n - 1], x[n - 2], x[n - 3], -tb);
    d.normal[n - 1] = perp(tb);
    double total = turning_angle(ta, x[1] - x[0]) + turning_angle(x[n - 1] - x[n - 2], tb);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = norm(x[i + 1] - x[i]);
        d.length += h;
        d.weight[i] += 0.5 * h;
        d.weight[i + 1] += 0.5 * h;
        if (i > 0) total += turning_angle(x[i] - x[i - 1], x[i + 1] - x[i]);
    }
    d.total_curvature = total;
    d.kappa_bar = total / d.length;
    return d;
}

DiscreteCurve discretize_closed(const std::vector<Vec2>& x) {
    const std::size_t n = x.size();
    DiscreteCurve d;
    d.kappa.resize(n);
    d.normal.resize(n);
    d.weight.assign(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = x[(i + n - 1) % n], b = x[i], c = x[(i + 1) % n];
        d.kappa[i] = menger_curvature(a, b, c);
        d.normal[i] = perp(circle_tangent_mid(a, b, c));
        total += turning_angle(b - a, c - b);
        const double h = norm(c - b);
        d.length += h;
        d.weight[i] += 0.5 * h;
        d.weight[(i + 1) % n] += 0.5 * h;
    }
    d.total_curvature = total;
    d.kappa_bar = total / d.length;
    return d;
}

DiscreteCurve discretize(const AnchoredCurve& anchored) {
    return discretize_open(anchored.curve().nodes(), anchored.boundary_tangent_a(), anchored.boundary_tangent_b());
}

double default_kappa_stop(const AnchoredCurve& initial) {
    const DiscreteCurve d = discretize(initial);
    double kmax = 0.0;
    for (double k : d.kappa) kmax = std::max(kmax, std::abs(k));
    return kKappaStopFactor * std::max(kmax, 1.0 / d.length);
}

std::vector<Vec2> velocity_field(const AnchoredCurve& anchored) {
    const DiscreteCurve d = discretize(anchored);
    std::vector<Vec2> v(d.kappa.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (d.kappa[i] - d.kappa_bar) * d.normal[i];
    return v;
}

std::vector<Vec2> redistribute_open(const std::vector<Vec2>& x, Vec2 ta, Vec2 tb, std::size_t count) {
    const std::size_t n = x.size();
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) u[i] = u[i - 1] + norm(x[i] - x[i - 1]);
    const auto spline = CubicSpline2::clamped(u, x, ta, tb);
    const auto rho = density(discretize_open(x, ta, tb), false);
    const auto targets = equidistribute(u, rho, count, false);
    std::vector<Vec2> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = spline(targets[k]);
    out.front() = x.front();
    out.back() = x.back();
    return out;
}

std::vector<Vec2> redistribute_closed(const std::vector<Vec2>& x, std::size_t count) {
    const std::size_t n = x.size();
    std::vector<double> u(n + 1, 0.0);
    std::vector<Vec2> xs(x);
    xs.push_back(x.front());
    for (std::size_t i = 1; i <= n; ++i) u[i] = u[i - 1] + norm(xs[i] - xs[i - 1]);
    const auto spline = CubicSpline2::periodic(u, xs);
    auto rho = density(discretize_closed(x), true);
    rho.push_back(rho.front());
    const auto targets = equidistribute(u, rho, count, true);
    std::vector<Vec2> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = spline(targets[k]);
    out.front() = x.front();
    return out;
}

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b, bool a_closed, bool b_closed) {
    return std::max(directed_hausdorff(a, b, b_closed), directed_hausdorff(b, a, a_closed));
}

FlowState initial_state(const AnchoredCurve& initial, const FlowConfig& config) {
    FlowState s{initial, 0.0, 0, 0.0};
    const std::size_t n = static_cast<std::size_t>(config.node_count);
    if (n >= 4 && n != initial.curve().size()) {
        auto x = redistribute_open(initial.curve().nodes(), initial.boundary_tangent_a(), initial.boundary_tangent_b(), n);
        s.anchored = AnchoredCurve::unchecked(OpenCurve(std::move(x)), initial.support());
    }
    return s;
}

FlowState step(const FlowState& state, const FlowConfig& config, double time_cap) {
    const SupportCurve& support = state.anchored.support();
    const std::vector<Vec2>& x = state.anchored.curve().nodes();
    const std::size_t n = x.size();
    const DiscreteCurve d = discretize(state.anchored);
    const double hmin = detail::min_spacing(x, false);

    const double dt_rule = effective_dt_safety(config) * hmin * hmin;
    if (dt_rule < config.dt_min) {
        throw Error(ErrorKind::StepRejected, "time step " + std::to_string(dt_rule) + " below dt_min");
    }
    double dt = dt_rule;
    dt = std::min(dt, state.dt_last > 0.0 ? 1.25 * state.dt_last : config.dt_initial);
    const double remaining = std::min(time_cap, config.t_end) - state.time;
    if (remaining > 0.0) dt = std::min(dt, remaining);

    std::vector<Vec2> y(n);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 0 && dt < config.dt_min) {
            throw Error(ErrorKind::StepRejected, "step halving reached dt_min");
        }
        std::vector<Vec2> inc;
        if (config.scheme == Scheme::SemiImplicit) {
            inc = detail::implicit_increment(x, d, dt, false);
        } else {
            inc.resize(n);
            for (std::size_t i = 0; i < n; ++i) inc[i] = dt * (d.kappa[i] - d.kappa_bar) * d.normal[i];
        }
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            y[i] = x[i] + inc[i];
            const double hl = i > 0 ? norm(x[i] - x[i - 1]) : 1e300;
            const double hr = i + 1 < n ? norm(x[i + 1] - x[i]) : 1e300;
            ok = is_finite(y[i]) && norm(inc[i]) <= 0.5 * std::min(hl, hr);
        }
        if (ok) {
            y.front() = support.project(y.front()).second;
            y.back() = support.project(y.back()).second;
            ok = detail::min_spacing(y, false) > kRegularityFraction * d.length;
        }
        if (ok) break;
        dt *= 0.5;
    }

    const long next = state.step_index + 1;
    const bool scheduled = config.redistribute_every > 0 && next % config.redistribute_every == 0;
    if (config.redistribute_every > 0 && (scheduled || max_spacing_ratio(y, false) > 3.0)) {
        const Vec2 ta = -support.evaluate(support.project(y.front()).first).inner_normal;
        const Vec2 tb = support.evaluate(support.project(y.back()).first).inner_normal;
        y = redistribute_open(y, ta, tb, n);
    }
    return FlowState{AnchoredCurve::unchecked(OpenCurve(std::move(y)), support), state.time + dt, next, dt};
}

MonitorRecord monitor(const FlowState& state) {
    const DiscreteCurve d = discretize(state.anchored);
    MonitorRecord m;
    m.step = state.step_index;
    m.time = state.time;
    m.length = d.length;
    m.area = enclosed_area(state.anchored);
    m.kappa_bar = d.kappa_bar;
    m.total_curvature = d.total_curvature;
    m.kappa_max = 0.0;
    m.kappa_min = d.kappa.front();
    for (std::size_t i = 0; i < d.kappa.size(); ++i) {
        m.kappa_max = std::max(m.kappa_max, std::abs(d.kappa[i]));
        m.kappa_min = std::min(m.kappa_min, d.kappa[i]);
        m.kappa_l2 += d.kappa[i] * d.kappa[i] * d.weight[i];
    }
    m.kappa_a = d.kappa.front();
    m.kappa_b = d.kappa.back();
    m.dt = state.dt_last;
    return m;
}

namespace {

Snapshot make_snapshot(const FlowState& s) {
    Snapshot snap;
    snap.step = s.step_index;
    snap.time = s.time;
    snap.nodes = s.anchored.curve().nodes();
    snap.curvature = discretize(s.anchored).kappa;
    snap.self_intersections = count_self_intersections(snap.nodes, false);
    return snap;
}

}  // namespace

Trajectory run(const AnchoredCurve& initial, const FlowConfig& config) {
    if (!(config.dt_min < config.dt_initial)) throw Error(ErrorKind::InvalidInput, "dt_min must be below dt_initial");
    Trajectory traj;
    traj.support = initial.support();
    FlowState state = initial_state(initial, config);
    traj.kappa_stop = config.kappa_stop > 0.0 ? config.kappa_stop : default_kappa_stop(state.anchored);
    const double interval = config.snapshot_interval > 0.0 ? config.snapshot_interval : config.t_end / 50.0;
    std::vector<double> outputs = config.output_times;
    std::sort(outputs.begin(), outputs.end());
    std::size_t next_output = 0;
    while (next_output < outputs.size() && outputs[next_output] <= 0.0) ++next_output;

    auto record = [&](bool snapshot) {
        MonitorRecord m = monitor(state);
        if (snapshot) {
            traj.snapshots.push_back(make_snapshot(state));
            m.self_intersections = traj.snapshots.back().self_intersections;
        }
        traj.monitors.push_back(m);
        return m;
    };
    MonitorRecord last = record(true);
    double snap_kappa = last.kappa_max;
    double snap_time = 0.0;

    while (true) {
        if (state.time >= config.t_end * (1.0 - 1e-14)) {
            traj.outcome = Outcome::ReachedTEnd;
            break;
        }
        if (last.kappa_max >= traj.kappa_stop) {
            traj.outcome = Outcome::CurvatureBlowup;
            break;
        }
        if (state.step_index >= config.max_steps) {
            traj.outcome = Outcome::StepFailure;
            traj.message = "step limit reached";
            break;
        }
        const double cap = next_output < outputs.size() ? outputs[next_output] : std::numeric_limits<double>::infinity();
        try {
            state = step(state, config, cap);
        } catch (const Error& e) {
            traj.outcome = Outcome::StepFailure;
            traj.message = e.what();
            break;
        }
        bool hit_output = false;
        while (next_output < outputs.size() && state.time >= outputs[next_output] * (1.0 - 1e-14)) {
            hit_output = true;
            ++next_output;
        }
        DiscreteCurve probe = discretize(state.anchored);
        double kmax = 0.0;
        for (double k : probe.kappa) kmax = std::max(kmax, std::abs(k));
        const bool grow = kmax >= config.snapshot_growth * snap_kappa;
        const bool timed = state.time >= snap_time + interval;
        const bool final_step = state.time >= config.t_end * (1.0 - 1e-14) || kmax >= traj.kappa_stop;
        const bool snap = hit_output || grow || timed || final_step;
        last = record(snap);
        if (snap) {
            snap_kappa = last.kappa_max;
            if (timed) snap_time = state.time;
        }
    }
    if (traj.snapshots.back().step != state.step_index) {
        traj.snapshots.push_back(make_snapshot(state));
        traj.monitors.back().self_intersections = traj.snapshots.back().self_intersections;
    }
    if (traj.outcome != Outcome::ReachedTEnd) {
        try {
            const auto est = estimate_singular_time(traj.monitors);
            traj.t_est = est.t_est;
            traj.t_est_uncertainty = est.uncertainty;
        } catch (const Error&) {
        }
    }
    return traj;
}

std::pair<double, double> boundary_identity_residual(const FlowState& state) {
    const auto& x = state.anchored.curve().nodes();
    const SupportCurve& support = state.anchored.support();
    const DiscreteCurve d = discretize(state.anchored);
    const std::size_t n = x.size();
    // cubic fit of the node curvatures over about 2 sqrt(n) nodes, skipping the end node
    const std::size_t m = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(2.0 * std::sqrt(double(n)))), 6,
                                                  std::max<std::size_t>(n - 1, 1));
    const int degree = m >= 8 ? 3 : 2;
    // curvature and its derivative along the inward arclength from one end
    auto end_values = [&](bool at_start) {
        std::vector<double> t;
        std::vector<Vec2> k;
        double s = 0.0;
        for (std::size_t j = 1; j <= m && j < n; ++j) {
            const std::size_t i = at_start ? j : n - 1 - j;
            const std::size_t prev = at_start ? i - 1 : i + 1;
            s += norm(x[i] - x[prev]);
            t.push_back(s);
            k.push_back({d.kappa[i], 0.0});
        }
        const auto c = polyfit(t, k, degree);
        return std::pair<double, double>{polyval(c, 0.0, 0).x, polyval(c, 0.0, 1).x};
    };
    const auto [ka, dka] = end_values(true);
    const auto [kb, dkb_in] = end_values(false);
    const double dkb = -dkb_in;
    const double ksa = support.evaluate(state.anchored.param_a()).curvature;
    const double ksb = support.evaluate(state.anchored.param_b()).curvature;
    return {dka - (ka - d.kappa_bar) * ksa, dkb + (kb - d.kappa_bar) * ksb};
}

}  // namespace apcsf
