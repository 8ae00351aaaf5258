#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "apcsf/curve_io.hpp"
#include "apcsf/error.hpp"
#include "apcsf/examples.hpp"
#include "apcsf/experiment.hpp"

using namespace apcsf;

namespace {

struct Options {
    std::string example;
    std::string initial;
    double arc_radius = 0.0;
    std::string support = "circle";
    std::string config;
    std::string out;
    std::string scheme;
    int nodes = 0;
    std::size_t initial_nodes = 800;
    double dt = 0.0;
    double dt_min = 0.0;
    double t_end = 0.0;
    double kappa_stop = 0.0;
    std::uint64_t seed = 1;
    bool reflected = false;
    bool no_frames = false;
};

void add_source_flags(CLI::App* app, Options& o) {
    app->add_option("--example", o.example, "one, two, three, four, oversized, thin, semicircle, perturbed");
    app->add_option("--initial", o.initial, "initial curve document");
    app->add_option("--arc", o.arc_radius, "orthogonal arc (circle support) or semicircle (line) of this radius");
    app->add_option("--support", o.support, "line, circle, circle:R, inline JSON or a support document")->capture_default_str();
    app->add_option("--initial-nodes", o.initial_nodes, "nodes of generated initial curves")->capture_default_str();
    app->add_option("--seed", o.seed, "seed for randomized initial curves")->capture_default_str();
    app->add_option("--config", o.config, "JSON experiment config; overrides flags");
}

void add_flow_flags(CLI::App* app, Options& o) {
    app->add_option("--nodes", o.nodes, "flow node count");
    app->add_option("--dt", o.dt, "initial time step");
    app->add_option("--dt-min", o.dt_min, "smallest accepted time step");
    app->add_option("--t-end", o.t_end, "final time");
    app->add_option("--kappa-stop", o.kappa_stop, "curvature blow-up threshold");
    app->add_option("--scheme", o.scheme, "semi_implicit or explicit");
    app->add_option("--out", o.out, "output directory");
    app->add_flag("--reflected", o.reflected, "line support: run the reflected closed curve");
    app->add_flag("--no-frames", o.no_frames, "skip per-frame files");
}

ExperimentConfig make_config(const Options& o) {
    ExperimentConfig c;
    c.support = support_from_spec(o.support);
    c.initial.nodes = o.initial_nodes;
    if (!o.initial.empty()) {
        c.initial.kind = "file";
        c.initial.path = o.initial;
    } else if (o.arc_radius > 0.0) {
        c.initial.kind = "arc";
        c.initial.radius = o.arc_radius;
    } else if (!o.example.empty()) {
        c.initial.kind = "example";
        c.initial.name = o.example;
    } else if (c.support.is_line()) {
        c.initial.kind = "example";
        c.initial.name = "semicircle";
    }
    if (o.nodes > 0) c.flow.node_count = o.nodes;
    if (o.dt > 0.0) c.flow.dt_initial = o.dt;
    if (o.dt_min > 0.0) c.flow.dt_min = o.dt_min;
    if (o.t_end > 0.0) c.flow.t_end = o.t_end;
    if (o.kappa_stop > 0.0) c.flow.kappa_stop = o.kappa_stop;
    if (!o.scheme.empty()) {
        if (o.scheme == "explicit") c.flow.scheme = Scheme::Explicit;
        else if (o.scheme == "semi_implicit" || o.scheme == "semi-implicit") c.flow.scheme = Scheme::SemiImplicit;
        else throw Error(ErrorKind::InvalidInput, "unknown scheme '" + o.scheme + "'");
    }
    if (!o.out.empty()) c.output_dir = o.out;
    c.seed = o.seed;
    c.line_mode = o.reflected ? LineRunMode::Reflected : LineRunMode::HalfPlane;
    c.write_frames = !o.no_frames;
    if (c.support.is_line()) {
        c.analyses.criterion = false;
        c.analyses.line_criteria = true;
    }
    if (!o.config.empty()) c = apply_config_json(read_text(o.config), c);
    return c;
}

void print_criterion(const CriterionVerdict& v) {
    std::printf("case: %s\npredicted_singularity: %s\nl: %d\ntotal_curvature: %.10g\nL0: %.10g\nd_sigma: %.10g\nA0: %.10g\n",
                to_string(v.kind), v.predicted_singularity ? "true" : "false", v.l, v.total_curvature, v.L0, v.dSigma, v.A0);
    std::printf("quotient: %.10g\nthreshold: %.10g\nreoriented: %s\n", v.quotient, v.threshold, v.reoriented ? "true" : "false");
}

void print_line_criterion(const LineCriterionVerdict& v) {
    std::printf("m: %d\nL: %.10g\nA: %.10g\nnegative_area: %s\nindex_condition: %s\npredicted_singularity: %s\n", v.m, v.L, v.A,
                v.negative_area ? "true" : "false", v.index_condition ? "true" : "false",
                v.predicted_singularity ? "true" : "false");
}

void print_report(const SingularityReport& r) {
    if (r.has_estimate) std::printf("T_est: %.12g +- %.3g\n", r.estimate.t_est, r.estimate.uncertainty);
    std::printf("type: %s (growth %.3g)\nrate_floor: %.4g\n", to_string(r.type.verdict), r.type.growth, r.rate_floor);
    std::printf("l2_rate: %s (C = %.4g)\n", r.l2.holds ? "holds" : "fails", r.l2.C);
    if (r.has_grim_fit) std::printf("grim_fit: residual %.4g, %s\n", r.grim.residual, to_string(r.grim.side));
    for (const auto& n : r.notes) std::printf("note: %s\n", n.c_str());
}

int cmd_simulate(const Options& o) {
    const ExperimentConfig c = make_config(o);
    const ExperimentResult res = run_experiment(c);
    const auto& t = res.trajectory;
    if (res.criterion) std::printf("criterion: %s, predicted %s\n", to_string(res.criterion->kind),
                                   res.criterion->predicted_singularity ? "true" : "false");
    if (res.line_criterion) std::printf("line criterion: m = %d, predicted %s\n", res.line_criterion->m,
                                        res.line_criterion->predicted_singularity ? "true" : "false");
    std::printf("outcome: %s\nsteps: %ld\ntime: %.12g\n", to_string(t.outcome), t.monitors.back().step, t.monitors.back().time);
    if (!t.message.empty()) std::printf("message: %s\n", t.message.c_str());
    const auto& m0 = t.monitors.front();
    const auto& m1 = t.monitors.back();
    std::printf("L: %.10g -> %.10g\nA: %.10g -> %.10g\nkappa_max: %.6g -> %.6g\n", m0.length, m1.length, m0.area, m1.area,
                m0.kappa_max, m1.kappa_max);
    if (res.report) print_report(*res.report);
    if (!c.output_dir.empty()) std::printf("written: %s\n", c.output_dir.string().c_str());
    return res.exit_code;
}

int cmd_check(const Options& o) {
    const ExperimentConfig c = make_config(o);
    validate(c);
    const AnchoredCurve initial = build_initial(c);
    if (c.support.is_line()) {
        print_line_criterion(check_line_criterion(initial));
        return kExitCompleted;
    }
    const CriterionVerdict v = check_criterion(initial);
    print_criterion(v);
    return v.kind == CriterionCase::NotApplicable ? kExitNotApplicable : kExitCompleted;
}

int cmd_blowup(const std::string& dir) {
    Trajectory t = load_trajectory(dir);
    const SingularityReport r = analyze(t);
    print_report(r);
    write_text(std::filesystem::path(dir) / "blowup_report.json", report_json(t, std::nullopt, std::nullopt, r));
    write_blowup_frames(dir, r.blowup_frames);
    return r.has_estimate ? kExitCompleted : kExitAnalysisFailed;
}

int cmd_examples(const Options& o, const std::string& emit) {
    const SupportCurve support = support_from_spec(o.support);
    for (const auto& name : example_names()) {
        if (!o.example.empty() && name != o.example) continue;
        const ExampleRecipe r = example_recipe(name);
        std::printf("%s: %s\n  knob: %s in [%g, %g]\n", name.c_str(), r.summary.c_str(), r.knob.c_str(), r.knob_lo, r.knob_hi);
        for (const auto& t : r.targets) std::printf("  target: %s\n", t.c_str());
        if (emit.empty()) continue;
        const GeneratedExample g = generate_example_detail(name, support, o.initial_nodes);
        std::printf("  knob = %.6g, L0 = %.6g, A0 = %.6g, total = %.6g\n", g.knob, g.length, g.area, g.total_curvature);
        CurveDocument doc;
        doc.nodes = g.curve.curve().nodes();
        write_curve_document(std::filesystem::path(emit) / (name + ".json"), doc);
    }
    return kExitCompleted;
}

int cmd_width(const Options& o) {
    const SupportCurve s = support_from_spec(o.support);
    if (s.is_line()) throw Error(ErrorKind::UnsupportedForLine, "a line has no minimum width");
    std::printf("%.12g\n", s.minimum_width());
    return kExitCompleted;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Area-preserving curve shortening flow with free boundary"};
    app.require_subcommand(1);
    Options o;
    std::string blowup_dir, emit_dir;

    auto* sim = app.add_subcommand("simulate", "run the flow and write monitors, frames and a report");
    add_source_flags(sim, o);
    add_flow_flags(sim, o);

    auto* check = app.add_subcommand("check", "evaluate the singularity criteria for an initial curve");
    add_source_flags(check, o);

    auto* blow = app.add_subcommand("blowup", "re-analyze a stored run");
    blow->add_option("dir", blowup_dir, "output directory of a simulate run")->required();

    auto* ex = app.add_subcommand("examples", "list example recipes, optionally emitting curves");
    ex->add_option("--example", o.example, "restrict to one example");
    ex->add_option("--support", o.support, "support for emitted curves")->capture_default_str();
    ex->add_option("--initial-nodes", o.initial_nodes, "nodes per emitted curve")->capture_default_str();
    ex->add_option("--emit", emit_dir, "directory for generated curve documents");

    auto* width = app.add_subcommand("width", "print the minimum width of a support curve");
    width->add_option("--support", o.support, "support specification")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitError;
    }
    try {
        if (*sim) return cmd_simulate(o);
        if (*check) return cmd_check(o);
        if (*blow) return cmd_blowup(blowup_dir);
        if (*ex) return cmd_examples(o, emit_dir);
        if (*width) return cmd_width(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
