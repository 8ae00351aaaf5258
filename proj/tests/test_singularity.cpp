#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "apcsf/error.hpp"
#include "apcsf/examples.hpp"
#include "apcsf/singularity.hpp"
#include "helpers.hpp"

using namespace apcsf;
using testing::kPi;

namespace {

// monitor records at T - t = 10^(-8 u) for u in [0, 1), geometric towards T = 1
std::vector<MonitorRecord> series(const std::function<double(double)>& kappa_of_gap, int n = 400, double decades = 8.0) {
    std::vector<MonitorRecord> m;
    for (int i = 0; i < n; ++i) {
        const double gap = std::pow(10.0, -decades * i / n);
        MonitorRecord r;
        r.step = i;
        r.time = 1.0 - gap;
        r.kappa_max = kappa_of_gap(gap);
        m.push_back(r);
    }
    return m;
}

std::vector<Vec2> grim_nodes(double x0, double x1, int n) {
    std::vector<Vec2> x;
    for (int i = 0; i < n; ++i) {
        const double s = x0 + (x1 - x0) * i / (n - 1);
        x.push_back({s, -std::log(std::cos(s))});
    }
    return x;
}

AnchoredCurve scaled(const AnchoredCurve& a, double k) {
    std::vector<Vec2> x;
    for (const auto& p : a.curve().nodes()) x.push_back(k * p);
    return AnchoredCurve(OpenCurve(std::move(x)), a.support().transformed(k, 0.0, {0.0, 0.0}));
}

}  // namespace

TEST_CASE("singular time of an exact Type I series") {
    const auto m = series([](double g) { return 1.0 / std::sqrt(2.0 * g); });
    const auto e = estimate_singular_time(m);
    CHECK(std::abs(e.t_est - 1.0) < 1e-6);
    CHECK(e.exponent == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(e.amplitude == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("singular time with a logarithmic correction") {
    const auto m = series([](double g) { return std::sqrt(std::log(1.0 / g) / g); }, 400, 6.0);
    const auto e = estimate_singular_time(m);
    CHECK(std::abs(e.t_est - 1.0) < 0.02);
}

TEST_CASE("flat curvature is not a blow-up") {
    const auto m = series([](double) { return 3.0; });
    try {
        estimate_singular_time(m);
        FAIL("expected InsufficientBlowup");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientBlowup);
    }
}

TEST_CASE("type classification of synthetic rates") {
    const auto m1 = series([](double g) { return std::sqrt(0.5 / g); });
    const auto c1 = classify(m1, 1.0);
    CHECK(c1.verdict == BlowupType::TypeI);
    CHECK(c1.growth == doctest::Approx(1.0));
    CHECK(classify_type(m1, 1.0) == BlowupType::TypeI);

    // rate doubles per decade of T - t
    const auto m2 = series([](double g) { return std::sqrt(std::pow(2.0, -std::log10(g)) / g); });
    const auto c2 = classify(m2, 1.0);
    CHECK(c2.verdict == BlowupType::TypeII);
    CHECK(c2.growth > 4.0);
    CHECK(c2.rate_max > c2.rate_min);

    // oscillating rate is neither
    const auto m3 = series([](double g) { return std::sqrt((1.0 + 0.5 * std::sin(std::log(g))) / g); });
    CHECK(classify(m3, 1.0).verdict == BlowupType::Undetermined);
}

TEST_CASE("resolved tail drops samples within the uncertainty of T") {
    const auto m = series([](double g) { return 1.0 / std::sqrt(2.0 * g); });
    const auto all = resolved_tail(m, 1.0, 0.0);
    const auto some = resolved_tail(m, 1.0, 1e-4);
    CHECK(some.size() < all.size());
    for (auto i : some) CHECK(1.0 - m[i].time >= 2e-4);
}

TEST_CASE("L2 rate on synthetic series") {
    auto m = series([](double g) { return 1.0 / std::sqrt(2.0 * g); });
    for (auto& r : m) r.kappa_l2 = 1.0 / std::sqrt(1.0 - r.time);
    const auto a = l2_rate_check(m, 1.0);
    CHECK(a.holds);
    CHECK(a.C == doctest::Approx(1.0));
    for (auto& r : m) r.kappa_l2 = 5.0;
    CHECK_FALSE(l2_rate_check(m, 1.0).holds);
}

TEST_CASE("grim reaper fit self tests") {
    const auto full = grim_reaper_fit(OpenCurve(grim_nodes(-1.5, 1.5, 2001)));
    CHECK(full.residual < 1e-3);
    CHECK(full.side == GrimSide::Interior);
    const auto half = grim_reaper_fit(OpenCurve(grim_nodes(0.0, 1.5, 1001)));
    CHECK(half.residual < 1e-3);
    CHECK(half.side == GrimSide::Boundary);
    // on a unit circle the residual is sqrt((3w - 4 sin w + sin w cos w) / 2w), w = acos 0.2
    const double w = std::acos(0.2);
    const double expect = std::sqrt((3 * w - 4 * std::sin(w) + std::sin(w) * std::cos(w)) / (2 * w));
    // the middle node is pushed out slightly so the tip sits there
    auto arc = testing::arc_nodes({0, 0}, 1.0, -kPi / 2 - 1.6, -kPi / 2 + 1.6, 2001);
    arc[1000] = {0.0, -1.0 - 1e-10};
    const auto circ = grim_reaper_fit(OpenCurve(arc));
    CHECK(circ.residual == doctest::Approx(expect).epsilon(1e-3));
    CHECK(circ.residual > 0.2);
    // scaled by 2, not normalized
    std::vector<Vec2> big;
    for (const auto& p : grim_nodes(-1.5, 1.5, 501)) big.push_back(2.0 * p);
    CHECK_THROWS_AS(grim_reaper_fit(OpenCurve(big)), Error);
}

TEST_CASE("Hamilton blow-up of self-similar shrinking grim caps") {
    // snapshots of the grim profile scaled by sqrt(2 (T - t)) so kappa_max = 1 / sqrt(2 (T - t))
    Trajectory t;
    const auto base = grim_nodes(-1.4, 1.4, 201);
    OpenCurve oc(base);
    const auto fr = frames(oc);
    for (int i = 0; i < 200; ++i) {
        const double gap = std::pow(10.0, -6.0 * i / 200.0);
        const double lam = std::sqrt(2.0 * gap);
        Snapshot s;
        s.step = i;
        s.time = 1.0 - gap;
        for (const auto& p : base) s.nodes.push_back(lam * p);
        for (const auto& f : fr) s.curvature.push_back(f.curvature / lam);
        t.snapshots.push_back(s);
    }
    const auto frames_out = hamilton_blowup(t, 1.0);
    REQUIRE_FALSE(frames_out.empty());
    for (const auto& f : frames_out) CHECK(std::abs(f.max_abs_curvature - 1.0) < 0.5);
    int centers = 0;
    for (const auto& f : frames_out) {
        if (!f.center) continue;
        ++centers;
        CHECK(std::abs(f.max_abs_curvature - 1.0) < 1e-12);
        CHECK(f.tau == 0.0);
        CHECK(norm(f.nodes[f.tip]) < 1e-15);
    }
    CHECK(centers == 8);
    CHECK_THROWS_AS(hamilton_blowup(t, std::nan("")), Error);
}

TEST_CASE("singularity criterion on the circle examples") {
    const auto one = check_criterion(generate_example("one", 400));
    CHECK(one.kind == CriterionCase::PositiveAreaQuotient);
    CHECK(one.l == 2);
    CHECK(one.threshold == doctest::Approx(4.5 * kPi));
    CHECK(one.predicted_singularity);
    const auto three = check_criterion(generate_example("three", 400));
    CHECK(three.kind == CriterionCase::NegativeArea);
    CHECK(three.predicted_singularity);
    const auto four = check_criterion(generate_example("four", 400));
    CHECK(four.reoriented);
    CHECK(four.total_curvature > 0.0);
    CHECK(four.kind == CriterionCase::NegativeArea);

    const auto circle = SupportCurve::circle({0, 0}, 4.0);
    CHECK(check_criterion(oversized_arc(circle, 400)).kind == CriterionCase::NotApplicable);
    const auto thin = check_criterion(tall_thin_arc(circle, 400));
    CHECK(thin.l == 1);
    CHECK(thin.quotient > kPi);
    CHECK_FALSE(thin.predicted_singularity);
    CHECK_THROWS_AS(check_criterion(semicircle_on_line(SupportCurve::line(), 1.0, 101)), Error);
}

TEST_CASE("property: criterion is orientation invariant and scale covariant") {
    const auto circle = SupportCurve::circle({0, 0}, 4.0);
    for (const auto& a : {generate_example("one", 400), generate_example("three", 400), stationary_arc(circle, 1.5, 400)}) {
        const auto v = check_criterion(a);
        const auto r = check_criterion(a.reversed());
        CHECK(r.kind == v.kind);
        CHECK(r.l == v.l);
        CHECK(r.A0 == doctest::Approx(v.A0).epsilon(1e-9));
        CHECK(r.L0 == doctest::Approx(v.L0).epsilon(1e-12));
        CHECK(r.reoriented != v.reoriented);
        const auto s = check_criterion(scaled(a, 2.5));
        CHECK(s.kind == v.kind);
        CHECK(s.L0 == doctest::Approx(2.5 * v.L0).epsilon(1e-9));
        CHECK(s.A0 == doctest::Approx(6.25 * v.A0).epsilon(1e-9));
        CHECK(s.dSigma == doctest::Approx(2.5 * v.dSigma).epsilon(1e-9));
        if (v.kind == CriterionCase::PositiveAreaQuotient) CHECK(s.quotient == doctest::Approx(v.quotient).epsilon(1e-9));
    }
}

TEST_CASE("line criterion") {
    CHECK_FALSE(line_criterion(1, kPi * 2, kPi).predicted_singularity);
    const auto v = line_criterion(3, 8.0, 2.0);
    CHECK(v.index_condition);
    CHECK(v.predicted_singularity);
    CHECK(line_criterion(1, 5.0, -0.1).negative_area);
    CHECK(line_criterion(1, 5.0, -0.1).predicted_singularity);
    CHECK_FALSE(line_criterion(3, 8.0, 1.6).predicted_singularity);
    try {
        line_criterion(2, 1.0, 1.0);
        FAIL("expected EvenIndex");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EvenIndex);
    }
    const auto semi = check_line_criterion(semicircle_on_line(SupportCurve::line(), 1.0, 201));
    CHECK(semi.m == 1);
    CHECK(semi.A == doctest::Approx(kPi).epsilon(1e-4));
    CHECK_FALSE(semi.predicted_singularity);
}
