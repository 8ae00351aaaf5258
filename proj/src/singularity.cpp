#include "apcsf/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apcsf/error.hpp"
#include "apcsf/line_mode.hpp"
#include "apcsf/numerics.hpp"

namespace apcsf {

namespace {

constexpr double kPi = std::numbers::pi;

struct PowerFit {
    double t_est = 0.0;
    double ssr = 0.0;
    double exponent = 1.0;
    double amplitude = 0.0;
};

// log(1/k^2) = log a + p log(T - t), least squares in (log a, p) for fixed T
PowerFit fit_at(const std::vector<double>& t, const std::vector<double>& y, double T) {
    const std::size_t n = t.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(T - t[i]);
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double den = nn * sxx - sx * sx;
    PowerFit f;
    f.t_est = T;
    f.exponent = den > 0.0 ? (nn * sxy - sx * sy) / den : 1.0;
    const double loga = (sy - f.exponent * sx) / nn;
    f.amplitude = std::exp(loga);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - loga - f.exponent * x[i];
        f.ssr += r * r;
    }
    return f;
}

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y) {
    const double t_last = t.back();
    const double span = std::max(t_last - t.front(), 1e-300);
    auto ssr = [&](double z) { return fit_at(t, y, t_last + std::exp(z)).ssr; };
    const double zlo = std::log(span * 1e-9), zhi = std::log(span * 20.0);
    const int grid = 160;
    double best = 1e300;
    int bi = 0;
    for (int k = 0; k <= grid; ++k) {
        const double z = zlo + (zhi - zlo) * k / grid;
        const double v = ssr(z);
        if (v < best) {
            best = v;
            bi = k;
        }
    }
    const double h = (zhi - zlo) / grid;
    const double z = brent_minimize(ssr, zlo + h * std::max(0, bi - 1), zlo + h * std::min(grid, bi + 1), 1e-12);
    PowerFit f = fit_at(t, y, t_last + std::exp(z));
    if (f.ssr > best) f = fit_at(t, y, t_last + std::exp(zlo + h * bi));
    return f;
}

std::size_t suffix_above(const std::vector<MonitorRecord>& m, double threshold) {
    std::size_t begin = m.size();
    while (begin > 0 && m[begin - 1].kappa_max >= threshold) --begin;
    return begin;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const char* to_string(CriterionCase c) {
    switch (c) {
        case CriterionCase::PositiveAreaQuotient: return "PositiveAreaQuotient";
        case CriterionCase::NegativeArea: return "NegativeArea";
        case CriterionCase::NotApplicable: return "NotApplicable";
    }
    return "Unknown";
}

const char* to_string(BlowupType t) {
    switch (t) {
        case BlowupType::TypeI: return "TypeI";
        case BlowupType::TypeII: return "TypeII";
        case BlowupType::Undetermined: return "Undetermined";
    }
    return "Unknown";
}

const char* to_string(GrimSide s) { return s == GrimSide::Boundary ? "Boundary" : "Interior"; }

CriterionVerdict check_criterion(const AnchoredCurve& initial) {
    CriterionVerdict v;
    const SupportCurve& support = initial.support();
    if (support.is_line()) throw Error(ErrorKind::UnsupportedForLine, "use the line criterion for line supports");
    v.dSigma = support.minimum_width();
    double total = discretize(initial).total_curvature;
    const AnchoredCurve oriented = total < 0.0 ? initial.reversed() : initial;
    if (total < 0.0) {
        v.reoriented = true;
        total = discretize(oriented).total_curvature;
    }
    v.total_curvature = total;
    v.l = static_cast<int>(std::floor(total / (2.0 * kPi))) + 1;
    v.threshold = kPi * (2.0 * v.l - 1.0) * (2.0 * v.l - 1.0) / v.l;
    v.L0 = length(oriented.curve());
    if (v.L0 >= v.dSigma) {
        v.kind = CriterionCase::NotApplicable;
        try {
            v.A0 = enclosed_area(oriented);
        } catch (const Error&) {
            v.A0 = std::numeric_limits<double>::quiet_NaN();
        }
        return v;
    }
    v.A0 = enclosed_area(oriented);
    if (std::abs(v.A0) <= 1e-12 * v.L0 * v.L0) {
        v.kind = CriterionCase::NotApplicable;
        return v;
    }
    if (v.A0 < 0.0) {
        v.kind = CriterionCase::NegativeArea;
        v.predicted_singularity = true;
    } else {
        v.kind = CriterionCase::PositiveAreaQuotient;
        v.quotient = v.L0 * v.L0 / v.A0;
        v.predicted_singularity = v.quotient <= v.threshold;
    }
    return v;
}

LineCriterionVerdict line_criterion(int m, double L, double A) {
    if (m % 2 == 0) throw Error(ErrorKind::EvenIndex, "reflected index " + std::to_string(m) + " is even");
    LineCriterionVerdict v;
    v.m = m;
    v.L = L;
    v.A = A;
    v.negative_area = A < 0.0;
    v.index_condition = m >= 3 && L * L < 4.0 * kPi * m * A;
    v.predicted_singularity = v.negative_area || v.index_condition;
    return v;
}

LineCriterionVerdict check_line_criterion(const AnchoredCurve& initial) {
    const ReflectedCurve r = reflect(initial);
    return line_criterion(r.index, length(r.closed), signed_area(r.closed));
}

SingularTimeEstimate estimate_singular_time(const std::vector<MonitorRecord>& m, const TailOptions& options) {
    if (m.size() < 5) throw Error(ErrorKind::InsufficientBlowup, "too few monitor records");
    const double k0 = m.front().kappa_max, k1 = m.back().kappa_max;
    if (!(k1 >= options.min_growth * k0)) {
        throw Error(ErrorKind::InsufficientBlowup, "kappa_max grew by " + std::to_string(k1 / k0) + "x");
    }
    const std::size_t begin = suffix_above(m, k1 * std::pow(10.0, -options.fit_decades));
    const std::size_t count = m.size() - begin;
    if (count < 6) throw Error(ErrorKind::InsufficientBlowup, "too few samples in the fit window");
    auto fit_range = [&](std::size_t b, std::size_t e) {
        std::vector<double> t, y;
        for (std::size_t i = b; i < e; ++i) {
            t.push_back(m[i].time);
            y.push_back(-2.0 * std::log(m[i].kappa_max));
        }
        return fit_power_law(t, y);
    };
    const PowerFit full = fit_range(begin, m.size());
    const std::size_t third = count / 3;
    const PowerFit early = fit_range(begin, m.size() - third);
    const PowerFit late = fit_range(begin + third, m.size());
    SingularTimeEstimate est;
    est.t_est = full.t_est;
    est.exponent = full.exponent;
    est.amplitude = full.amplitude;
    est.fit_begin = begin;
    est.uncertainty = std::max(std::abs(early.t_est - full.t_est), std::abs(late.t_est - full.t_est));
    return est;
}

std::vector<std::size_t> resolved_tail(const std::vector<MonitorRecord>& m, double t_est, double uncertainty,
                                       const TailOptions& options) {
    std::vector<std::size_t> idx;
    if (m.empty() || !std::isfinite(t_est)) return idx;
    const double k1 = m.back().kappa_max;
    const double threshold = std::max(m.front().kappa_max, k1 * std::pow(10.0, -options.classify_decades));
    for (std::size_t i = suffix_above(m, threshold); i < m.size(); ++i) {
        const double gap = t_est - m[i].time;
        if (gap > 0.0 && gap >= options.resolved_factor * uncertainty) idx.push_back(i);
    }
    return idx;
}

TypeClassification classify(const std::vector<MonitorRecord>& m, double t_est, double uncertainty, double growth_factor,
                            const TailOptions& options) {
    TypeClassification c;
    const auto idx = resolved_tail(m, t_est, uncertainty, options);
    for (std::size_t i : idx) {
        const double k = m[i].kappa_max;
        c.rate_series.emplace_back(m[i].time, k * k * (t_est - m[i].time));
    }
    if (c.rate_series.size() < 8) return c;
    std::vector<double> r;
    for (const auto& p : c.rate_series) r.push_back(p.second);
    c.rate_min = *std::min_element(r.begin(), r.end());
    c.rate_max = *std::max_element(r.begin(), r.end());
    // bins equally spaced in log(T - t), first bin nearest t = 0
    std::vector<double> z;
    for (const auto& p : c.rate_series) z.push_back(std::log(t_est - p.first));
    const double z_hi = z.front(), z_lo = z.back();
    auto window_median = [&](double from, double to) {
        std::vector<double> v;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (z[i] <= from && z[i] >= to) v.push_back(r[i]);
        }
        return v.empty() ? std::numeric_limits<double>::quiet_NaN() : median(std::move(v));
    };
    const double width = z_hi - z_lo;
    c.growth = window_median(z_lo + width / 32.0, z_lo) / window_median(z_hi, z_hi - width / 32.0);
    const int bins = 8;
    bool increasing = true;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int b = 0; b < bins; ++b) {
        const double med = window_median(z_hi - width * b / bins, z_hi - width * (b + 1) / bins);
        if (std::isnan(med)) continue;
        if (!std::isnan(prev)) increasing = increasing && med >= 0.9 * prev;
        prev = med;
    }
    const double center = median(r);
    const bool bounded = c.rate_min >= 0.8 * center && c.rate_max <= 1.2 * center;
    if (increasing && c.growth >= growth_factor) {
        c.verdict = BlowupType::TypeII;
    } else if (bounded) {
        c.verdict = BlowupType::TypeI;
    }
    return c;
}

BlowupType classify_type(const std::vector<MonitorRecord>& monitors, double t_est, double growth_factor) {
    return classify(monitors, t_est, 0.0, growth_factor).verdict;
}

std::vector<RescaledFrame> hamilton_blowup(const Trajectory& traj, double t_est, int schedule_size, const TailOptions& options) {
    if (!std::isfinite(t_est)) throw Error(ErrorKind::InsufficientBlowup, "no singular time estimate");
    std::vector<const Snapshot*> snaps;
    std::vector<double> kmax;
    for (const auto& s : traj.snapshots) {
        if (s.time >= t_est || s.curvature.empty()) continue;
        snaps.push_back(&s);
        double k = 0.0;
        for (double c : s.curvature) k = std::max(k, std::abs(c));
        kmax.push_back(k);
    }
    if (snaps.size() < 3) throw Error(ErrorKind::InsufficientResolution, "fewer than 3 snapshots before T");
    const double threshold = kmax.back() * std::pow(10.0, -options.classify_decades);
    std::size_t first = snaps.size();
    while (first > 0 && kmax[first - 1] >= threshold) --first;
    if (snaps.size() - first < 3 || kmax.back() < options.min_growth * kmax.front()) {
        throw Error(ErrorKind::InsufficientResolution, "snapshots do not resolve the blow-up");
    }
    const double j_lo = 1.0 / (t_est - snaps[first]->time);
    const double j_hi = 1.0 / (t_est - snaps.back()->time);
    if (!(j_hi > 1.001 * j_lo)) throw Error(ErrorKind::InsufficientResolution, "snapshot tail too short");

    std::vector<RescaledFrame> out;
    for (int k = 0; k < schedule_size; ++k) {
        const double j = j_lo * std::pow(j_hi / j_lo, static_cast<double>(k + 1) / schedule_size);
        const double cutoff = t_est - 1.0 / j;
        std::size_t best_s = first;
        double best = -1.0;
        for (std::size_t s = first; s < snaps.size(); ++s) {
            if (snaps[s]->time >= cutoff) break;
            const double v = kmax[s] * kmax[s] * (cutoff - snaps[s]->time);
            if (v >= best) {
                best = v;
                best_s = s;
            }
        }
        if (best < 0.0) continue;
        const Snapshot& c = *snaps[best_s];
        std::size_t tip = 0;
        for (std::size_t i = 0; i < c.curvature.size(); ++i) {
            if (std::abs(c.curvature[i]) > std::abs(c.curvature[tip])) tip = i;
        }
        const double q = std::abs(c.curvature[tip]);
        const Vec2 origin = c.nodes[tip];
        auto rescale = [&](const Snapshot& s, bool center) {
            RescaledFrame f;
            f.j = j;
            f.q = q;
            f.tip = tip;
            f.center = center;
            f.time = s.time;
            f.step = s.step;
            f.tau = q * q * (s.time - c.time);
            for (Vec2 p : s.nodes) f.nodes.push_back(q * (p - origin));
            for (double kv : s.curvature) {
                f.curvature.push_back(kv / q);
                f.max_abs_curvature = std::max(f.max_abs_curvature, std::abs(kv / q));
            }
            return f;
        };
        for (double tau : {-1.0, 1.0}) {
            const double target = c.time + tau / (q * q);
            const Snapshot* near = nullptr;
            for (const auto& s : traj.snapshots) {
                if (&s == &c || s.time >= t_est) continue;
                if (!near || std::abs(s.time - target) < std::abs(near->time - target)) near = &s;
            }
            if (near && std::abs(q * q * (near->time - c.time) - tau) <= 0.5) {
                if (tau < 0.0) out.push_back(rescale(*near, false));
                else {
                    out.push_back(rescale(c, true));
                    out.push_back(rescale(*near, false));
                    continue;
                }
            }
            if (tau > 0.0) out.push_back(rescale(c, true));
        }
    }
    if (out.empty()) throw Error(ErrorKind::InsufficientResolution, "no Hamilton frames selected");
    return out;
}

GrimFit grim_reaper_fit(const OpenCurve& curve) {
    const auto f = frames(curve);
    const std::size_t n = f.size();
    std::size_t tip = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(f[i].curvature) > std::abs(f[tip].curvature)) tip = i;
    }
    const double kt = f[tip].curvature;
    if (std::abs(std::abs(kt) - 1.0) > 0.05) {
        throw Error(ErrorKind::NotNormalized, "max |kappa| = " + std::to_string(std::abs(kt)));
    }
    const double sgn = kt > 0.0 ? 1.0 : -1.0;
    const double window = std::acos(0.2);
    const double boundary_turning = 0.25;
    GrimFit g;
    double num = 0.0, den = 0.0;
    auto visit = [&](std::size_t i, double theta) {
        const double r = sgn * f[i].curvature - std::cos(theta);
        num += f[i].arclength_weight * r * r;
        den += f[i].arclength_weight;
        ++g.window_nodes;
    };
    visit(tip, 0.0);
    bool boundary = tip == 0 || tip + 1 == n;
    double theta = 0.0;
    for (std::size_t i = tip + 1; i < n; ++i) {
        theta += sgn * turning_angle(f[i - 1].tangent, f[i].tangent);
        if (std::abs(theta) > window) break;
        visit(i, theta);
        if (i + 1 == n && std::abs(theta) <= boundary_turning) boundary = true;
    }
    theta = 0.0;
    for (std::size_t i = tip; i-- > 0;) {
        theta -= sgn * turning_angle(f[i].tangent, f[i + 1].tangent);
        if (std::abs(theta) > window) break;
        visit(i, theta);
        if (i == 0 && std::abs(theta) <= boundary_turning) boundary = true;
    }
    g.residual = std::sqrt(num / den);
    g.side = boundary ? GrimSide::Boundary : GrimSide::Interior;
    return g;
}

L2Rate l2_rate_check(const std::vector<MonitorRecord>& m, double t_est, double uncertainty, const TailOptions& options) {
    L2Rate out;
    const auto idx = resolved_tail(m, t_est, uncertainty, options);
    for (std::size_t i : idx) out.series.emplace_back(m[i].time, m[i].kappa_l2 * std::sqrt(t_est - m[i].time));
    if (out.series.size() < 4) return out;
    const double g0 = std::log(t_est - out.series.front().first);
    const double g1 = std::log(t_est - out.series.back().first);
    const int chunks = 4;
    std::vector<double> peak(chunks, -1.0);
    for (const auto& [t, q] : out.series) {
        const double g = std::log(t_est - t);
        int c = g0 > g1 ? static_cast<int>((g0 - g) / (g0 - g1) * chunks) : 0;
        c = std::clamp(c, 0, chunks - 1);
        peak[static_cast<std::size_t>(c)] = std::max(peak[static_cast<std::size_t>(c)], q);
    }
    std::vector<double> p;
    for (double v : peak) {
        if (v >= 0.0) p.push_back(v);
    }
    if (p.size() < 2) return out;
    out.C = *std::min_element(p.begin(), p.end());
    out.holds = out.C > 0.0 && p.back() >= 0.5 * p.front();
    return out;
}

SingularityReport analyze(const Trajectory& traj, const AnalysisFlags& flags) {
    SingularityReport rep;
    if (!flags.blowup || traj.outcome == Outcome::ReachedTEnd) return rep;
    try {
        rep.estimate = estimate_singular_time(traj.monitors);
        rep.has_estimate = true;
    } catch (const Error& e) {
        rep.notes.emplace_back(e.what());
        return rep;
    }
    const double T = rep.estimate.t_est, unc = rep.estimate.uncertainty;
    rep.type = classify(traj.monitors, T, unc);
    if (!rep.type.rate_series.empty()) rep.rate_floor = rep.type.rate_min;
    if (flags.l2_rate) rep.l2 = l2_rate_check(traj.monitors, T, unc);
    try {
        rep.blowup_frames = hamilton_blowup(traj, T);
    } catch (const Error& e) {
        rep.notes.emplace_back(e.what());
    }
    if (flags.grim_fit && !rep.blowup_frames.empty()) {
        const RescaledFrame* last = nullptr;
        for (const auto& f : rep.blowup_frames) {
            if (f.center) last = &f;
        }
        if (last) {
            try {
                std::vector<Vec2> nodes = last->nodes;
                const bool closed = !traj.snapshots.empty() && traj.snapshots.front().closed;
                if (closed) {
                    // open the closed curve opposite the tip
                    std::rotate(nodes.begin(), nodes.begin() + static_cast<long>((last->tip + nodes.size() / 2) % nodes.size()), nodes.end());
                }
                rep.grim = grim_reaper_fit(OpenCurve(std::move(nodes)));
                rep.has_grim_fit = true;
            } catch (const Error& e) {
                rep.notes.emplace_back(e.what());
            }
        }
    }
    return rep;
}

}  // namespace apcsf
