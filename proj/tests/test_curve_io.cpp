#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>

#include "apcsf/curve_io.hpp"
#include "apcsf/error.hpp"
#include "apcsf/experiment.hpp"
#include "helpers.hpp"

using namespace apcsf;
using testing::kPi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    std::random_device rd;
    const fs::path p = fs::temp_directory_path() / ("apcsf_" + name + "_" + std::to_string(rd()));
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("curve documents round trip exactly") {
    CurveDocument d;
    d.closed = true;
    d.nodes = testing::circle_nodes({0.1, -0.2}, 1.0 / 3.0, 17);
    d.corners = {Corner{3, 0.25}};
    d.time = 0.125;
    d.step = 42;
    d.curvature = std::vector<double>(17, 3.0);
    const auto e = parse_curve_document(to_json(d));
    CHECK(e.closed);
    REQUIRE(e.nodes.size() == d.nodes.size());
    for (std::size_t i = 0; i < d.nodes.size(); ++i) CHECK(e.nodes[i] == d.nodes[i]);
    REQUIRE(e.corners.size() == 1);
    CHECK(e.corners[0].index == 3);
    CHECK(e.corners[0].angle == 0.25);
    CHECK(*e.time == 0.125);
    CHECK(*e.step == 42);
    CHECK(e.curvature == d.curvature);
    CHECK(to_closed_curve(e).corners().size() == 1);
    CHECK_THROWS_AS(to_open_curve(e), Error);
}

TEST_CASE("malformed curve documents are rejected") {
    CHECK_THROWS_AS(parse_curve_document("{"), Error);
    CHECK_THROWS_AS(parse_curve_document(R"({"kind": "open"})"), Error);
    CHECK_THROWS_AS(parse_curve_document(R"({"kind": "spiral", "nodes": [[0,0],[1,0],[2,1]]})"), Error);
    CHECK_THROWS_AS(parse_curve_document(R"({"kind": "open", "nodes": [[0,0],[1],[2,1]]})"), Error);
    CHECK_THROWS_AS(read_curve_document("/nonexistent/curve.json"), Error);
}

TEST_CASE("semicircle data file") {
    const auto d = read_curve_document(fs::path(APCSF_TEST_DATA) / "semicircle.json");
    CHECK_FALSE(d.closed);
    CHECK(d.nodes.size() == 201);
    const AnchoredCurve a(to_open_curve(d), SupportCurve::line());
    CHECK(enclosed_area(a) == doctest::Approx(kPi / 2).epsilon(1e-4));
}

TEST_CASE("support documents") {
    const auto e = read_support(fs::path(APCSF_TEST_DATA) / "ellipse.json");
    CHECK(e.kind() == SupportKind::Ellipse);
    CHECK(std::abs(e.minimum_width() - 2.0) < 1e-4);
    for (const auto& s : {SupportCurve::circle({1, 2}, 3.0), SupportCurve::ellipse({0, 1}, 3.0, 2.0, 0.4),
                          SupportCurve::line({1, 0}, {0, 1})}) {
        const auto r = parse_support(support_to_json(s));
        CHECK(r.kind() == s.kind());
        for (double t : {0.0, 0.7, 2.0}) CHECK(norm(r.evaluate(t).point - s.evaluate(t).point) < 1e-14);
    }
    const auto alt = parse_support(R"({"kind": "ellipse", "center": [0, 0], "semi_major": 2, "semi_minor": 1})");
    CHECK(alt.semi_major() == 2.0);
    CHECK(support_from_spec("line").is_line());
    CHECK(support_from_spec("circle").radius() == 4.0);
    CHECK(support_from_spec("circle:2.5").radius() == 2.5);
    CHECK(support_from_spec(R"({"kind": "circle", "center": [0, 0], "radius": 7})").radius() == 7.0);
    CHECK_THROWS_AS(support_from_spec("circle:abc"), Error);
    CHECK_THROWS_AS(parse_support(R"({"kind": "square"})"), Error);
    CHECK_THROWS(parse_support(R"({"kind": "circle", "radius": 1})"));
}

TEST_CASE("monitor CSV round trip") {
    std::vector<MonitorRecord> m(3);
    for (int i = 0; i < 3; ++i) {
        m[i].step = 10 * i;
        m[i].time = 0.1 * i + 1e-17;
        m[i].length = kPi + i;
        m[i].area = -1.0 / 3.0;
        m[i].kappa_max = std::exp(i);
        m[i].dt = 1e-9;
        m[i].kappa_l2 = 2.5;
        m[i].self_intersections = i;
        m[i].index = 3;
    }
    const auto csv = monitors_csv(m, true);
    CHECK(csv.rfind("time,L,A,kappa_bar,total_curvature,kappa_max,kappa_min,kappa_a,kappa_b,dt", 0) == 0);
    const auto back = parse_monitors_csv(csv);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back[i].step == m[i].step);
        CHECK(back[i].time == m[i].time);
        CHECK(back[i].length == m[i].length);
        CHECK(back[i].area == m[i].area);
        CHECK(back[i].kappa_max == m[i].kappa_max);
        CHECK(back[i].self_intersections == i);
        CHECK(back[i].index == 3);
    }
}

TEST_CASE("experiment configuration") {
    const auto c = apply_config_json(R"({
        "support": "line",
        "initial": "example_semicircle",
        "flow": {"nodes": 64, "t_end": 0.25, "scheme": "explicit", "output_times": [0.1]},
        "analyses": {"line_criteria": true, "criterion": false},
        "line_mode": "reflected",
        "seed": 9
    })", ExperimentConfig{});
    CHECK(c.support.is_line());
    CHECK(c.initial.kind == "example");
    CHECK(c.initial.name == "semicircle");
    CHECK(c.flow.node_count == 64);
    CHECK(c.flow.scheme == Scheme::Explicit);
    CHECK(c.flow.output_times.size() == 1);
    CHECK(c.line_mode == LineRunMode::Reflected);
    CHECK(c.seed == 9);
    CHECK_NOTHROW(validate(c));

    CHECK_THROWS_AS(apply_config_json("[1, 2", ExperimentConfig{}), Error);
    CHECK_THROWS_AS(apply_config_json(R"({"line_mode": "sideways"})", ExperimentConfig{}), Error);
    ExperimentConfig bad;
    bad.line_mode = LineRunMode::Reflected;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = ExperimentConfig{};
    bad.flow.dt_min = 1.0;
    CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("a short run writes outputs that load back") {
    const fs::path dir = scratch("run");
    ExperimentConfig c;
    c.support = SupportCurve::line();
    c.initial.name = "perturbed";
    c.initial.nodes = 400;
    c.flow.node_count = 60;
    c.flow.t_end = 0.05;
    c.analyses.criterion = false;
    c.analyses.line_criteria = true;
    c.output_dir = dir;
    const auto r = run_experiment(c);
    CHECK(r.exit_code == kExitCompleted);
    REQUIRE(r.line_criterion.has_value());
    CHECK(r.line_criterion->m == 1);
    CHECK(fs::exists(dir / "monitors.csv"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "render.svg"));
    const auto t = load_trajectory(dir);
    CHECK(t.monitors.size() == r.trajectory.monitors.size());
    CHECK(t.snapshots.size() == r.trajectory.snapshots.size());
    CHECK(t.outcome == Outcome::ReachedTEnd);
    CHECK(t.monitors.back().time == r.trajectory.monitors.back().time);
    REQUIRE(t.support.has_value());
    CHECK(t.support->is_line());
    fs::remove_all(dir);
}
