#include "apcsf/line_mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apcsf/error.hpp"
#include "apcsf/singularity.hpp"

namespace apcsf {

namespace {

struct ClosedState {
    std::vector<Vec2> x;
    double time = 0.0;
    long step = 0;
    double dt_last = 0.0;
};

MonitorRecord closed_monitor(const ClosedState& s, std::size_t half_count) {
    const DiscreteCurve d = discretize_closed(s.x);
    MonitorRecord m;
    m.step = s.step;
    m.time = s.time;
    m.length = d.length;
    m.area = signed_area(s.x);
    m.kappa_bar = d.kappa_bar;
    m.total_curvature = d.total_curvature;
    m.kappa_min = d.kappa.front();
    for (std::size_t i = 0; i < d.kappa.size(); ++i) {
        m.kappa_max = std::max(m.kappa_max, std::abs(d.kappa[i]));
        m.kappa_min = std::min(m.kappa_min, d.kappa[i]);
        m.kappa_l2 += d.kappa[i] * d.kappa[i] * d.weight[i];
    }
    m.kappa_a = d.kappa.front();
    m.kappa_b = d.kappa[half_count - 1];
    m.dt = s.dt_last;
    m.index = static_cast<int>(std::lround(d.total_curvature / (2.0 * std::numbers::pi)));
    return m;
}

Snapshot closed_snapshot(const ClosedState& s) {
    Snapshot snap;
    snap.step = s.step;
    snap.time = s.time;
    snap.closed = true;
    snap.nodes = s.x;
    snap.curvature = discretize_closed(s.x).kappa;
    snap.self_intersections = count_self_intersections(s.x, true);
    return snap;
}

ClosedState closed_step(const ClosedState& state, const FlowConfig& config, double time_cap, const SupportCurve& line,
                        double& drift) {
    const auto& x = state.x;
    const std::size_t n = x.size();
    const DiscreteCurve d = discretize_closed(x);
    const double hmin = detail::min_spacing(x, true);
    const double dt_rule = effective_dt_safety(config) * hmin * hmin;
    if (dt_rule < config.dt_min) {
        throw Error(ErrorKind::StepRejected, "time step " + std::to_string(dt_rule) + " below dt_min");
    }
    double dt = std::min(dt_rule, state.dt_last > 0.0 ? 1.25 * state.dt_last : config.dt_initial);
    const double remaining = std::min(time_cap, config.t_end) - state.time;
    if (remaining > 0.0) dt = std::min(dt, remaining);

    std::vector<Vec2> y(n);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 0 && dt < config.dt_min) throw Error(ErrorKind::StepRejected, "step halving reached dt_min");
        std::vector<Vec2> inc;
        if (config.scheme == Scheme::SemiImplicit) {
            inc = detail::implicit_increment(x, d, dt, true);
        } else {
            inc.resize(n);
            for (std::size_t i = 0; i < n; ++i) inc[i] = dt * (d.kappa[i] - d.kappa_bar) * d.normal[i];
        }
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            y[i] = x[i] + inc[i];
            const double h = std::min(norm(x[i] - x[(i + n - 1) % n]), norm(x[(i + 1) % n] - x[i]));
            ok = is_finite(y[i]) && norm(inc[i]) <= 0.5 * h;
        }
        if (ok) ok = detail::min_spacing(y, true) > kRegularityFraction * d.length;
        if (ok) break;
        dt *= 0.5;
    }
    drift = std::max(drift, mirror_asymmetry(y, line));
    y = symmetrize(std::move(y), line);

    const long next = state.step + 1;
    if (config.redistribute_every > 0 && next % config.redistribute_every == 0) {
        y = symmetrize(redistribute_closed(y, n), line);
    }
    return ClosedState{std::move(y), state.time + dt, next, dt};
}

}  // namespace

Vec2 mirror(const SupportCurve& line, Vec2 p) {
    const Vec2 o = line.line_point(), u = line.line_direction();
    const Vec2 q = p - o;
    return o + 2.0 * dot(q, u) * u - q;
}

std::vector<Vec2> double_nodes(const std::vector<Vec2>& half, const SupportCurve& line) {
    std::vector<Vec2> out(half);
    for (std::size_t i = half.size() - 1; i-- > 1;) out.push_back(mirror(line, half[i]));
    return out;
}

ReflectedCurve reflect(const AnchoredCurve& anchored, double angle_tolerance) {
    const SupportCurve& line = anchored.support();
    if (!line.is_line()) throw Error(ErrorKind::InvalidInput, "reflection needs a line support");
    const auto [ea, eb] = anchored.contact_angle_errors();
    if (ea > angle_tolerance || eb > angle_tolerance) {
        throw Error(ErrorKind::NotPerpendicular, "contact angle errors " + std::to_string(ea) + ", " + std::to_string(eb));
    }
    const auto& half = anchored.curve().nodes();
    ClosedCurve closed(double_nodes(half, line));
    int m = turning_number(closed);
    bool rev = false;
    if (m < 0) {
        closed = closed.reversed();
        m = -m;
        rev = true;
    }
    return ReflectedCurve{std::move(closed), m, line, half.size(), rev};
}

std::vector<Vec2> original_half(const std::vector<Vec2>& x, std::size_t half_count, bool reversed, const SupportCurve& line) {
    std::vector<Vec2> out(x.begin(), x.begin() + static_cast<long>(half_count));
    // the reversed double carries the mirror image in the first half
    if (reversed) {
        for (auto& p : out) p = mirror(line, p);
    }
    return out;
}

double mirror_asymmetry(const std::vector<Vec2>& x, const SupportCurve& line) {
    const std::size_t n = x.size();
    double worst = 0.0;
    for (std::size_t i = 0; i <= n / 2; ++i) {
        worst = std::max(worst, 0.5 * norm(x[i] - mirror(line, x[(n - i) % n])));
    }
    return worst;
}

std::vector<Vec2> symmetrize(std::vector<Vec2> x, const SupportCurve& line) {
    const std::size_t n = x.size();
    for (std::size_t i = 1; i < n / 2; ++i) {
        const Vec2 p = 0.5 * (x[i] + mirror(line, x[n - i]));
        x[i] = p;
        x[n - i] = mirror(line, p);
    }
    x[0] = line.project(x[0]).second;
    x[n / 2] = line.project(x[n / 2]).second;
    return x;
}

Trajectory run_reflected(const ReflectedCurve& initial, const FlowConfig& config) {
    if (!(config.dt_min < config.dt_initial)) throw Error(ErrorKind::InvalidInput, "dt_min must be below dt_initial");
    const SupportCurve& line = initial.line;
    Trajectory traj;
    traj.support = line;
    ClosedState state{initial.closed.nodes(), 0.0, 0, 0.0};
    std::size_t half = initial.half_count;
    if (config.node_count >= 4 && static_cast<std::size_t>(config.node_count) != half) {
        half = static_cast<std::size_t>(config.node_count);
        state.x = symmetrize(redistribute_closed(state.x, 2 * (half - 1)), line);
    }
    {
        const DiscreteCurve d = discretize_closed(state.x);
        double kmax = 0.0;
        for (double k : d.kappa) kmax = std::max(kmax, std::abs(k));
        traj.kappa_stop = config.kappa_stop > 0.0 ? config.kappa_stop : kKappaStopFactor * std::max(kmax, 1.0 / d.length);
    }
    const double interval = config.snapshot_interval > 0.0 ? config.snapshot_interval : config.t_end / 50.0;
    std::vector<double> outputs = config.output_times;
    std::sort(outputs.begin(), outputs.end());
    std::size_t next_output = 0;
    while (next_output < outputs.size() && outputs[next_output] <= 0.0) ++next_output;

    auto record = [&](bool snapshot) {
        MonitorRecord m = closed_monitor(state, half);
        if (snapshot) {
            traj.snapshots.push_back(closed_snapshot(state));
            m.self_intersections = traj.snapshots.back().self_intersections;
        }
        traj.monitors.push_back(m);
        return m;
    };
    MonitorRecord last = record(true);
    double snap_kappa = last.kappa_max, snap_time = 0.0;

    while (true) {
        if (state.time >= config.t_end * (1.0 - 1e-14)) {
            traj.outcome = Outcome::ReachedTEnd;
            break;
        }
        if (last.kappa_max >= traj.kappa_stop) {
            traj.outcome = Outcome::CurvatureBlowup;
            break;
        }
        if (state.step >= config.max_steps) {
            traj.outcome = Outcome::StepFailure;
            traj.message = "step limit reached";
            break;
        }
        const double cap = next_output < outputs.size() ? outputs[next_output] : std::numeric_limits<double>::infinity();
        try {
            state = closed_step(state, config, cap, line, traj.symmetry_drift);
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
        MonitorRecord m = closed_monitor(state, half);
        const bool grow = m.kappa_max >= config.snapshot_growth * snap_kappa;
        const bool timed = state.time >= snap_time + interval;
        const bool final_step = state.time >= config.t_end * (1.0 - 1e-14) || m.kappa_max >= traj.kappa_stop;
        const bool snap = hit_output || grow || timed || final_step;
        if (snap) {
            traj.snapshots.push_back(closed_snapshot(state));
            m.self_intersections = traj.snapshots.back().self_intersections;
            snap_kappa = m.kappa_max;
            if (timed) snap_time = state.time;
        }
        traj.monitors.push_back(m);
        last = m;
    }
    if (traj.snapshots.back().step != state.step) {
        traj.snapshots.push_back(closed_snapshot(state));
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

}  // namespace apcsf
