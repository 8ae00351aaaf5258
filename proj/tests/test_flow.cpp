#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "apcsf/error.hpp"
#include "apcsf/examples.hpp"
#include "apcsf/flow.hpp"
#include "helpers.hpp"

using namespace apcsf;
using testing::kPi;

namespace {

double max_norm(const std::vector<Vec2>& v) {
    double m = 0.0;
    for (const auto& p : v) m = std::max(m, norm(p));
    return m;
}

}  // namespace

TEST_CASE("discretization of a semicircle") {
    const auto a = semicircle_on_line(SupportCurve::line(), 1.0, 201);
    const auto d = discretize(a);
    for (double k : d.kappa) CHECK(k == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(d.length == doctest::Approx(kPi).epsilon(1e-4));
    CHECK(d.total_curvature == doctest::Approx(kPi).epsilon(1e-4));
    CHECK(d.kappa_bar == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("stationary arcs do not move") {
    const auto circle = SupportCurve::circle({0, 0}, 4.0);
    const auto arc = stationary_arc(circle, 1.5, 200);
    CHECK(max_norm(velocity_field(arc)) < 1e-3);
    auto [ra, rb] = boundary_identity_residual(initial_state(arc, {.node_count = 200}));
    CHECK(std::abs(ra) < 1e-3);
    CHECK(std::abs(rb) < 1e-3);

    FlowConfig cfg;
    cfg.node_count = 100;
    cfg.t_end = 0.05;
    const auto t = run(arc, cfg);
    CHECK(t.outcome == Outcome::ReachedTEnd);
    CHECK(hausdorff_distance(arc.curve().nodes(), t.snapshots.back().nodes, false, false) < 1e-3);
}

TEST_CASE("perturbed semicircle relaxes to a semicircle of the same area") {
    const auto line = SupportCurve::line();
    const auto init = perturbed_semicircle(line, 0.15, 0.08, 400);
    FlowConfig cfg;
    cfg.t_end = 2.0;
    double drift[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        cfg.node_count = 100 << k;
        const auto t = run(init, cfg);
        REQUIRE(t.outcome == Outcome::ReachedTEnd);
        const double A0 = t.monitors.front().area;
        for (std::size_t i = 1; i < t.monitors.size(); ++i) {
            CHECK(t.monitors[i].length <= t.monitors[i - 1].length + 1e-6);
            CHECK(t.monitors[i].total_curvature == doctest::Approx(kPi).epsilon(1e-6));
            drift[k] = std::max(drift[k], std::abs(t.monitors[i].area - A0) / A0);
        }
        CHECK(t.monitors.back().length < t.monitors.front().length - 0.05);
        if (k == 0) continue;
        const double r = std::sqrt(2.0 * A0 / kPi);
        const auto& last = t.snapshots.back();
        // endpoints on the line, nodes near the semicircle about their midpoint
        CHECK(std::abs(last.nodes.front().y) < 1e-9);
        CHECK(std::abs(last.nodes.back().y) < 1e-9);
        const Vec2 c = 0.5 * (last.nodes.front() + last.nodes.back());
        for (const auto& p : last.nodes) CHECK(std::abs(norm(p - c) - r) < 5e-3);
    }
    // the area defect is a discretization error of second order
    CHECK(drift[1] < 2e-4);
    CHECK(drift[1] < drift[0] / 3.0);
}

TEST_CASE("boundary curvature slope on a line decays under refinement") {
    const auto line = SupportCurve::line();
    const auto init = perturbed_semicircle(line, 0.15, 0.08, 800);
    double res[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        FlowConfig cfg;
        cfg.node_count = 100 << k;
        FlowState s = initial_state(init, cfg);
        while (s.time < 0.1) s = step(s, cfg, 0.1);
        const auto [ra, rb] = boundary_identity_residual(s);
        res[k] = std::max(std::abs(ra), std::abs(rb));
    }
    CHECK(res[0] < 0.05);
    CHECK(res[1] < res[0] / 1.8);
}

TEST_CASE("endpoints stay on a circular support and keep the contact angle") {
    const auto circle = SupportCurve::circle({0, 0}, 4.0);
    const auto g = generate_example_detail("two", circle, 400);
    FlowConfig cfg;
    cfg.node_count = 200;
    cfg.t_end = 2e-3;
    FlowState s = initial_state(g.curve, cfg);
    while (s.time < cfg.t_end) {
        s = step(s, cfg, cfg.t_end);
        const auto& x = s.anchored.curve().nodes();
        CHECK(std::abs(norm(x.front()) - 4.0) < 1e-9);
        CHECK(std::abs(norm(x.back()) - 4.0) < 1e-9);
    }
    CHECK(s.time == cfg.t_end);
    const auto [ea, eb] = s.anchored.contact_angle_errors();
    CHECK(ea < 1e-3);
    CHECK(eb < 1e-3);
}

TEST_CASE("time steps respect the parabolic bound and the time cap") {
    const auto a = perturbed_semicircle(SupportCurve::line(), 0.1, 0.0, 400);
    FlowConfig cfg;
    cfg.node_count = 100;
    const FlowState s0 = initial_state(a, cfg);
    const double h = detail::min_spacing(s0.anchored.curve().nodes(), false);
    const FlowState s1 = step(s0, cfg);
    CHECK(s1.dt_last <= effective_dt_safety(cfg) * h * h * (1.0 + 1e-12));
    const FlowState s2 = step(s0, cfg, 1e-7);
    CHECK(s2.time == 1e-7);
}

TEST_CASE("explicit and semi-implicit schemes agree") {
    const auto a = perturbed_semicircle(SupportCurve::line(), 0.15, 0.08, 400);
    FlowConfig cfg;
    cfg.node_count = 60;
    cfg.t_end = 0.05;
    const auto ti = run(a, cfg);
    cfg.scheme = Scheme::Explicit;
    const auto te = run(a, cfg);
    CHECK(hausdorff_distance(ti.snapshots.back().nodes, te.snapshots.back().nodes, false, false) < 2e-3);
}

TEST_CASE("kappa stop default") {
    const auto a = semicircle_on_line(SupportCurve::line(), 2.0, 101);
    CHECK(default_kappa_stop(a) == doctest::Approx(kKappaStopFactor * 0.5).epsilon(1e-3));
}

TEST_CASE("Hausdorff distance and redistribution") {
    const auto c1 = testing::circle_nodes({0, 0}, 1.0, 400);
    const auto c2 = testing::circle_nodes({0, 0}, 1.1, 333);
    CHECK(hausdorff_distance(c1, c2, true, true) == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(hausdorff_distance(c1, c1, true, true) == 0.0);

    const auto r = redistribute_closed(c1, 256);
    REQUIRE(r.size() == 256);
    for (const auto& p : r) CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-6));
    const auto arc = testing::arc_nodes({0, 0}, 1.0, 0.0, kPi, 50);
    const auto ro = redistribute_open(arc, {0, 1}, {0, -1}, 120);
    REQUIRE(ro.size() == 120);
    CHECK(norm(ro.front() - arc.front()) < 1e-15);
    CHECK(norm(ro.back() - arc.back()) < 1e-15);
    for (const auto& p : ro) CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-5));
}
