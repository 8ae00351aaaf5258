#include "apcsf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "apcsf/curve_io.hpp"
#include "apcsf/error.hpp"
#include "apcsf/examples.hpp"
#include "apcsf/line_mode.hpp"
#include "apcsf/numerics.hpp"
#include "json.hpp"

namespace apcsf {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Scheme parse_scheme(const std::string& s) {
    if (s == "semi_implicit" || s == "semi-implicit" || s == "implicit") return Scheme::SemiImplicit;
    if (s == "explicit") return Scheme::Explicit;
    throw Error(ErrorKind::InvalidInput, "unknown scheme '" + s + "'");
}

InitialSpec parse_initial(const json& j, InitialSpec spec) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.rfind("example_", 0) == 0) {
            spec.kind = "example";
            spec.name = s.substr(8);
        } else if (s.rfind("from_file:", 0) == 0) {
            spec.kind = "file";
            spec.path = s.substr(10);
        } else {
            spec.kind = "file";
            spec.path = s;
        }
        return spec;
    }
    spec.kind = j.value("kind", spec.kind);
    spec.name = j.value("name", spec.name);
    if (j.contains("path")) spec.path = j["path"].get<std::string>();
    spec.radius = j.value("radius", spec.radius);
    spec.nodes = j.value("nodes", spec.nodes);
    if (j.contains("points")) {
        spec.points.clear();
        for (const auto& p : j["points"]) spec.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return spec;
}

void apply_flow(const json& j, FlowConfig& f) {
    f.node_count = j.value("nodes", f.node_count);
    f.dt_initial = j.value("dt", f.dt_initial);
    f.dt_min = j.value("dt_min", f.dt_min);
    f.dt_safety = j.value("dt_safety", f.dt_safety);
    f.t_end = j.value("t_end", f.t_end);
    f.kappa_stop = j.value("kappa_stop", f.kappa_stop);
    f.redistribute_every = j.value("redistribute_every", f.redistribute_every);
    if (j.contains("scheme")) f.scheme = parse_scheme(j["scheme"].get<std::string>());
    f.snapshot_growth = j.value("snapshot_growth", f.snapshot_growth);
    f.snapshot_interval = j.value("snapshot_interval", f.snapshot_interval);
    if (j.contains("output_times")) f.output_times = j["output_times"].get<std::vector<double>>();
    f.max_steps = j.value("max_steps", f.max_steps);
}

AnchoredCurve spline_initial(const SupportCurve& support, const std::vector<Vec2>& pts, std::size_t nodes) {
    if (pts.size() < 2) throw Error(ErrorKind::InvalidInput, "spline needs at least two control points");
    std::vector<Vec2> x = pts;
    const auto [pa, qa] = support.project(x.front());
    const auto [pb, qb] = support.project(x.back());
    x.front() = qa;
    x.back() = qb;
    std::vector<double> u(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) u[i] = u[i - 1] + norm(x[i] - x[i - 1]);
    const double total = u.back();
    const Vec2 ta = -1.0 * support.evaluate(pa).inner_normal;
    const Vec2 tb = support.evaluate(pb).inner_normal;
    const CubicSpline2 spline = CubicSpline2::clamped(u, x, total * ta, total * tb);
    const std::size_t fine = 20 * std::max<std::size_t>(nodes, 4);
    std::vector<Vec2> dense(fine);
    for (std::size_t i = 0; i < fine; ++i) dense[i] = spline(total * static_cast<double>(i) / static_cast<double>(fine - 1));
    dense.front() = qa;
    dense.back() = qb;
    std::vector<Vec2> y = redistribute_open(dense, ta, tb, nodes);
    y.front() = qa;
    y.back() = qb;
    return AnchoredCurve(OpenCurve(std::move(y)), support);
}

struct Viewport {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    double width = 800.0;
    double scale() const { return width / (x1 - x0); }
    double height() const { return (y1 - y0) * scale(); }
    Vec2 map(Vec2 p) const { return {(p.x - x0) * scale(), (y1 - p.y) * scale()}; }
};

Viewport make_viewport(const std::vector<Snapshot>& frames, const SupportCurve& support) {
    Viewport v{1e300, 1e300, -1e300, -1e300};
    auto add = [&](Vec2 p) {
        v.x0 = std::min(v.x0, p.x);
        v.y0 = std::min(v.y0, p.y);
        v.x1 = std::max(v.x1, p.x);
        v.y1 = std::max(v.y1, p.y);
    };
    for (const auto& f : frames) {
        for (const auto& p : f.nodes) add(p);
    }
    if (support.kind() == SupportKind::Circle) {
        add(support.center() - Vec2{support.radius(), support.radius()});
        add(support.center() + Vec2{support.radius(), support.radius()});
    } else if (support.is_closed()) {
        const int n = 360;
        for (int i = 0; i < n; ++i) add(support.evaluate(support.period() * i / n).point);
    } else {
        add(support.line_point());
    }
    if (!(v.x1 > v.x0)) v.x1 = v.x0 + 1.0;
    if (!(v.y1 > v.y0)) v.y1 = v.y0 + 1.0;
    const double pad = 0.05 * std::max(v.x1 - v.x0, v.y1 - v.y0);
    v.x0 -= pad;
    v.y0 -= pad;
    v.x1 += pad;
    v.y1 += pad;
    return v;
}

std::string polyline(const Viewport& v, const std::vector<Vec2>& pts, bool closed, const std::string& style) {
    std::ostringstream os;
    os << "<" << (closed ? "polygon" : "polyline") << " fill=\"none\" " << style << " points=\"";
    char buf[64];
    for (const auto& p : pts) {
        const Vec2 q = v.map(p);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", q.x, q.y);
        os << buf;
    }
    os << "\"/>\n";
    return os.str();
}

std::string support_svg(const Viewport& v, const SupportCurve& support) {
    const std::string style = "stroke=\"#1f77b4\" stroke-width=\"1.5\"";
    if (support.is_line()) {
        const double ext = 2.0 * std::max(v.x1 - v.x0, v.y1 - v.y0);
        const Vec2 p = support.line_point(), d = support.line_direction();
        return polyline(v, {p - ext * d, p + ext * d}, false, style);
    }
    const int n = 720;
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = support.evaluate(support.period() * i / n).point;
    return polyline(v, pts, true, style);
}

std::string frame_svg(const Viewport& v, const Snapshot& f, const SupportCurve& support, double opacity) {
    char style[96];
    std::snprintf(style, sizeof style, "stroke=\"#d62728\" stroke-width=\"1.2\" stroke-opacity=\"%.3f\"", opacity);
    std::string out = polyline(v, f.nodes, f.closed, style);
    if (!f.closed && f.nodes.size() >= 2) {
        try {
            const auto arc = short_piece(AnchoredCurve::unchecked(OpenCurve(f.nodes), support));
            if (!arc.samples.empty()) {
                std::snprintf(style, sizeof style,
                              "stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6,4\" stroke-opacity=\"%.3f\"",
                              opacity);
                out += polyline(v, arc.samples, false, style);
            }
        } catch (const Error&) {
        }
    }
    return out;
}

std::string svg_document(const Viewport& v, const std::string& body) {
    std::ostringstream os;
    char head[200];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.2f %.2f\">\n",
                  v.width, v.height(), v.width, v.height());
    os << head << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" << body << "</svg>\n";
    return os.str();
}

std::string frame_name(long step, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "frame_%09ld.%s", step, ext);
    return buf;
}

Outcome parse_outcome(const std::string& s) {
    if (s == to_string(Outcome::CurvatureBlowup)) return Outcome::CurvatureBlowup;
    if (s == to_string(Outcome::StepFailure)) return Outcome::StepFailure;
    return Outcome::ReachedTEnd;
}

}  // namespace

ExperimentConfig apply_config_json(const std::string& text, ExperimentConfig base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
    }
    try {
        if (j.contains("support")) {
            base.support = j["support"].is_string() ? support_from_spec(j["support"].get<std::string>())
                                                    : parse_support(j["support"].dump());
        }
        if (j.contains("initial")) base.initial = parse_initial(j["initial"], base.initial);
        if (j.contains("flow")) apply_flow(j["flow"], base.flow);
        if (j.contains("analyses")) {
            const auto& a = j["analyses"];
            base.analyses.criterion = a.value("criterion", base.analyses.criterion);
            base.analyses.blowup = a.value("blowup", base.analyses.blowup);
            base.analyses.grim_fit = a.value("grim_fit", base.analyses.grim_fit);
            base.analyses.l2_rate = a.value("l2_rate", base.analyses.l2_rate);
            base.analyses.line_criteria = a.value("line_criteria", base.analyses.line_criteria);
        }
        if (j.contains("line_mode")) {
            const std::string m = j["line_mode"].get<std::string>();
            if (m != "half_plane" && m != "reflected") throw Error(ErrorKind::InvalidInput, "line_mode must be half_plane or reflected");
            base.line_mode = m == "reflected" ? LineRunMode::Reflected : LineRunMode::HalfPlane;
        }
        if (j.contains("output_dir")) base.output_dir = j["output_dir"].get<std::string>();
        base.seed = j.value("seed", base.seed);
        base.write_frames = j.value("frames", base.write_frames);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
    }
    return base;
}

void validate(const ExperimentConfig& c) {
    if (c.analyses.line_criteria && !c.support.is_line()) {
        throw Error(ErrorKind::InvalidInput, "line_criteria requires a line support");
    }
    if (c.line_mode == LineRunMode::Reflected && !c.support.is_line()) {
        throw Error(ErrorKind::InvalidInput, "reflected runs require a line support");
    }
    if (!(c.flow.dt_min < c.flow.dt_initial)) throw Error(ErrorKind::InvalidInput, "dt_min must be below dt");
    if (c.flow.kappa_stop < 0.0) throw Error(ErrorKind::InvalidInput, "kappa_stop must be positive");
    if (c.flow.node_count < 4) throw Error(ErrorKind::InvalidInput, "at least 4 nodes required");
    if (c.initial.kind == "file" && !std::filesystem::exists(c.initial.path)) {
        throw Error(ErrorKind::InvalidInput, "initial curve file not found: " + c.initial.path.string());
    }
}

AnchoredCurve build_initial(const ExperimentConfig& c) {
    const InitialSpec& in = c.initial;
    const SupportCurve& s = c.support;
    const std::size_t n = std::max<std::size_t>(in.nodes, 8);
    if (in.kind == "example") {
        if (in.name == "oversized") return oversized_arc(s, n);
        if (in.name == "thin") return tall_thin_arc(s, n);
        if (in.name == "semicircle") return semicircle_on_line(s, in.radius > 0.0 ? in.radius : 1.0, n);
        if (in.name == "perturbed") return perturbed_semicircle(s, 0.15, 0.08, n);
        return generate_example_detail(in.name, s, n).curve;
    }
    if (in.kind == "file") {
        const CurveDocument doc = read_curve_document(in.path);
        return AnchoredCurve(to_open_curve(doc), s);
    }
    if (in.kind == "arc") {
        if (s.is_line()) return semicircle_on_line(s, in.radius > 0.0 ? in.radius : 1.0, n);
        return stationary_arc(s, in.radius > 0.0 ? in.radius : 0.5 * s.radius(), n);
    }
    if (in.kind == "spline") return spline_initial(s, in.points, n);
    if (in.kind == "random_line") {
        const SupportCurve def = SupportCurve::line();
        if (!s.is_line() || !(s.line_point() == def.line_point()) || !(s.line_direction() == def.line_direction())) {
            throw Error(ErrorKind::InvalidInput, "random_line needs the default line support");
        }
        return random_line_curve(c.seed, n);
    }
    throw Error(ErrorKind::InvalidInput, "unknown initial kind '" + in.kind + "'");
}

std::string monitors_csv(const std::vector<MonitorRecord>& monitors, bool with_index) {
    std::ostringstream os;
    os << "time,L,A,kappa_bar,total_curvature,kappa_max,kappa_min,kappa_a,kappa_b,dt,step,kappa_l2,self_intersections";
    if (with_index) os << ",index";
    os << "\n";
    for (const auto& m : monitors) {
        for (double v : {m.time, m.length, m.area, m.kappa_bar, m.total_curvature, m.kappa_max, m.kappa_min, m.kappa_a,
                         m.kappa_b, m.dt}) {
            os << format_double(v) << ',';
        }
        os << m.step << ',' << format_double(m.kappa_l2) << ',' << m.self_intersections;
        if (with_index) os << ',' << m.index;
        os << "\n";
    }
    return os.str();
}

std::vector<MonitorRecord> parse_monitors_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "empty monitor file");
    std::vector<std::string> cols;
    {
        std::istringstream h(line);
        std::string c;
        while (std::getline(h, c, ',')) cols.push_back(c);
    }
    std::vector<MonitorRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream r(line);
        std::string cell;
        MonitorRecord m;
        for (std::size_t i = 0; std::getline(r, cell, ','); ++i) {
            if (i >= cols.size()) break;
            const std::string& c = cols[i];
            const double v = std::stod(cell);
            if (c == "time") m.time = v;
            else if (c == "L") m.length = v;
            else if (c == "A") m.area = v;
            else if (c == "kappa_bar") m.kappa_bar = v;
            else if (c == "total_curvature") m.total_curvature = v;
            else if (c == "kappa_max") m.kappa_max = v;
            else if (c == "kappa_min") m.kappa_min = v;
            else if (c == "kappa_a") m.kappa_a = v;
            else if (c == "kappa_b") m.kappa_b = v;
            else if (c == "dt") m.dt = v;
            else if (c == "step") m.step = static_cast<long>(v);
            else if (c == "kappa_l2") m.kappa_l2 = v;
            else if (c == "self_intersections") m.self_intersections = static_cast<int>(v);
            else if (c == "index") m.index = static_cast<int>(v);
        }
        out.push_back(m);
    }
    return out;
}

std::string criterion_json(const CriterionVerdict& v) {
    json j = {{"case", to_string(v.kind)},
              {"predicted_singularity", v.predicted_singularity},
              {"l", v.l},
              {"total_curvature", v.total_curvature},
              {"L0", v.L0},
              {"d_sigma", v.dSigma},
              {"A0", v.A0},
              {"quotient", number_or_null(v.quotient)},
              {"threshold", v.threshold},
              {"reoriented", v.reoriented}};
    return j.dump(2);
}

std::string report_json(const Trajectory& t, const std::optional<CriterionVerdict>& criterion,
                        const std::optional<LineCriterionVerdict>& line, const std::optional<SingularityReport>& report) {
    json j;
    j["outcome"] = to_string(t.outcome);
    j["message"] = t.message;
    j["steps"] = t.monitors.empty() ? 0 : t.monitors.back().step;
    j["final_time"] = t.monitors.empty() ? 0.0 : t.monitors.back().time;
    j["kappa_stop"] = t.kappa_stop;
    j["t_est"] = number_or_null(t.t_est);
    j["t_est_uncertainty"] = number_or_null(t.t_est_uncertainty);
    j["symmetry_drift"] = t.symmetry_drift;
    if (t.support) j["support"] = json::parse(support_to_json(*t.support));
    if (criterion) j["criterion"] = json::parse(criterion_json(*criterion));
    if (line) {
        j["line_criterion"] = {{"m", line->m},
                               {"L", line->L},
                               {"A", line->A},
                               {"negative_area", line->negative_area},
                               {"index_condition", line->index_condition},
                               {"predicted_singularity", line->predicted_singularity}};
    }
    if (report) {
        const auto& r = *report;
        json s;
        s["has_estimate"] = r.has_estimate;
        if (r.has_estimate) {
            s["t_est"] = r.estimate.t_est;
            s["uncertainty"] = r.estimate.uncertainty;
            s["exponent"] = r.estimate.exponent;
        }
        s["type_verdict"] = to_string(r.type.verdict);
        s["type_growth"] = number_or_null(r.type.growth);
        s["rate_floor"] = number_or_null(r.rate_floor);
        json rs = json::array();
        for (const auto& [time, v] : r.type.rate_series) rs.push_back({time, v});
        s["rate_series"] = std::move(rs);
        json ls = json::array();
        for (const auto& [time, v] : r.l2.series) ls.push_back({time, v});
        s["l2_series"] = std::move(ls);
        s["l2_constant"] = r.l2.C;
        s["l2_holds"] = r.l2.holds;
        s["blowup_frames"] = r.blowup_frames.size();
        if (r.has_grim_fit) {
            s["grim_fit"] = {{"residual", r.grim.residual}, {"side", to_string(r.grim.side)}, {"window_nodes", r.grim.window_nodes}};
        }
        s["notes"] = r.notes;
        j["singularity"] = std::move(s);
    }
    return j.dump(2);
}

std::string render_svg(const std::vector<Snapshot>& frames, const SupportCurve& support) {
    const Viewport v = make_viewport(frames, support);
    std::string body = support_svg(v, support);
    // at most 16 frames drawn, later frames darker
    const std::size_t n = frames.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + 15) / 16);
    for (std::size_t i = 0; i < n; i += stride) {
        body += frame_svg(v, frames[i], support, 0.25 + 0.5 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 2) - 1));
    }
    if (n > 0 && (n - 1) % stride != 0) body += frame_svg(v, frames.back(), support, 1.0);
    return svg_document(v, body);
}

void write_outputs(const std::filesystem::path& dir, const Trajectory& t, const SupportCurve& support,
                   const std::string& report, bool frames, bool with_index) {
    std::filesystem::create_directories(dir);
    write_text(dir / "monitors.csv", monitors_csv(t.monitors, with_index));
    write_text(dir / "report.json", report);
    write_text(dir / "render.svg", render_svg(t.snapshots, support));
    if (!frames) return;
    const Viewport v = make_viewport(t.snapshots, support);
    for (const auto& s : t.snapshots) {
        CurveDocument doc;
        doc.closed = s.closed;
        doc.nodes = s.nodes;
        doc.time = s.time;
        doc.step = s.step;
        doc.curvature = s.curvature;
        write_curve_document(dir / "frames" / frame_name(s.step, "json"), doc);
        write_text(dir / "render" / frame_name(s.step, "svg"), svg_document(v, support_svg(v, support) + frame_svg(v, s, support, 1.0)));
    }
}

void write_blowup_frames(const std::filesystem::path& dir, const std::vector<RescaledFrame>& frames) {
    std::size_t k = 0;
    for (const auto& f : frames) {
        CurveDocument doc;
        doc.nodes = f.nodes;
        doc.time = f.time;
        doc.step = f.step;
        doc.curvature = f.curvature;
        char name[64];
        std::snprintf(name, sizeof name, "rescaled_%03zu.json", k++);
        json j = json::parse(to_json(doc));
        j["j"] = f.j;
        j["tau"] = f.tau;
        j["center"] = f.center;
        j["max_abs_curvature"] = f.max_abs_curvature;
        write_text(dir / "blowup" / name, j.dump());
    }
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
    Trajectory t;
    t.monitors = parse_monitors_csv(read_text(dir / "monitors.csv"));
    if (std::filesystem::exists(dir / "report.json")) {
        const json r = json::parse(read_text(dir / "report.json"));
        t.outcome = parse_outcome(r.value("outcome", ""));
        t.kappa_stop = r.value("kappa_stop", 0.0);
        if (r.contains("support")) t.support = parse_support(r["support"].dump());
    }
    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(dir / "frames")) {
        for (const auto& e : std::filesystem::directory_iterator(dir / "frames")) {
            if (e.path().extension() == ".json") files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const CurveDocument doc = read_curve_document(f);
        Snapshot s;
        s.closed = doc.closed;
        s.nodes = doc.nodes;
        s.time = doc.time.value_or(0.0);
        s.step = doc.step.value_or(0);
        s.curvature = doc.curvature;
        if (s.curvature.empty()) {
            s.curvature = s.closed ? discretize_closed(s.nodes).kappa
                                   : discretize_open(s.nodes, fitted_end_tangent(s.nodes, true), fitted_end_tangent(s.nodes, false)).kappa;
        }
        s.self_intersections = count_self_intersections(s.nodes, s.closed);
        t.snapshots.push_back(std::move(s));
    }
    if (t.monitors.empty()) throw Error(ErrorKind::InvalidInput, "no monitors in " + dir.string());
    if (t.outcome != Outcome::ReachedTEnd) {
        try {
            const auto est = estimate_singular_time(t.monitors);
            t.t_est = est.t_est;
            t.t_est_uncertainty = est.uncertainty;
        } catch (const Error&) {
        }
    }
    return t;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
    validate(c);
    ExperimentResult res;
    const AnchoredCurve initial = build_initial(c);
    const bool line = c.support.is_line();
    if (c.analyses.criterion && !line) res.criterion = check_criterion(initial);
    if (c.analyses.line_criteria && line) res.line_criterion = check_line_criterion(initial);

    const bool reflected = line && c.line_mode == LineRunMode::Reflected;
    res.trajectory = reflected ? run_reflected(reflect(initial), c.flow) : run(initial, c.flow);
    if (!res.trajectory.support) res.trajectory.support = c.support;

    if (c.analyses.blowup && res.trajectory.outcome != Outcome::ReachedTEnd) {
        AnalysisFlags flags;
        flags.grim_fit = c.analyses.grim_fit;
        flags.l2_rate = c.analyses.l2_rate;
        res.report = analyze(res.trajectory, flags);
        if (!res.report->has_estimate) res.exit_code = kExitAnalysisFailed;
    }
    res.report_json = report_json(res.trajectory, res.criterion, res.line_criterion, res.report);
    if (!c.output_dir.empty()) {
        write_outputs(c.output_dir, res.trajectory, c.support, res.report_json, c.write_frames, reflected);
        if (res.report) write_blowup_frames(c.output_dir, res.report->blowup_frames);
    }
    return res;
}

}  // namespace apcsf
