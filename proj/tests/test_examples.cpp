#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "apcsf/error.hpp"
#include "apcsf/examples.hpp"
#include "apcsf/flow.hpp"
#include "apcsf/singularity.hpp"
#include "helpers.hpp"

using namespace apcsf;
using testing::kPi;

namespace {

const GeneratedExample& example(const std::string& name) {
    static std::map<std::string, GeneratedExample> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, generate_example_detail(name, 800)).first;
    return it->second;
}

double kappa_min(const AnchoredCurve& a) {
    const auto d = discretize(a);
    double m = 1e300;
    for (double k : d.kappa) m = std::min(m, k);
    return m;
}

}  // namespace

TEST_CASE("heading profiles") {
    HeadingProfile p;
    p.start = {1.0, 2.0};
    p.theta0 = kPi / 2;
    p.length = 3.0;
    CHECK(norm(p.end_point() - Vec2{1.0, 5.0}) < 1e-12);
    // constant turning closes a circle of radius L / 2pi
    p.baseline = 2.0 * kPi / p.length;
    CHECK(norm(p.end_point() - p.start) < 1e-12);
    const auto x = sample_profile(p, 300);
    REQUIRE(x.size() == 300);
    const Vec2 c = p.start + Vec2{-p.length / (2 * kPi), 0.0};
    for (const auto& q : x) CHECK(norm(q - c) == doctest::Approx(p.length / (2 * kPi)).epsilon(1e-9));

    HeadingProfile b;
    b.length = 2.0;
    b.bumps = {Bump{0.5, 0.2, kPi / 2}};
    CHECK(b.bump_turning() == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(b.heading(2.0) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(b.curvature(0.2) == 0.0);
    CHECK(b.curvature(1.0) > 0.0);
}

TEST_CASE("example one") {
    const auto& g = example("one");
    const double d = g.curve.support().minimum_width();
    CHECK(g.length <= 0.95 * 4 * kPi / 3);
    CHECK(g.length <= 0.95 * d);
    CHECK(g.area >= 1.05 * kPi / 2);
    CHECK(g.total_curvature > 2 * kPi);
    CHECK(g.total_curvature < 4 * kPi);
    CHECK(g.knob >= g.recipe.knob_lo);
    CHECK(g.knob <= g.recipe.knob_hi);
    const auto v = check_criterion(g.curve);
    CHECK(v.kind == CriterionCase::PositiveAreaQuotient);
    CHECK(v.predicted_singularity);
}

TEST_CASE("example two is embedded") {
    const auto& g = example("two");
    CHECK(g.length <= 0.95 * 4 * kPi / 3);
    CHECK(g.area >= 1.05 * kPi / 2);
    CHECK(count_self_intersections(g.curve.curve().nodes(), false) == 0);
    CHECK(check_criterion(g.curve).predicted_singularity);
}

TEST_CASE("example three has negative area and positive curvature") {
    const auto& g = example("three");
    CHECK(g.area <= -0.05 * g.length * g.length / (4 * kPi));
    CHECK(g.length <= 0.95 * g.curve.support().minimum_width());
    CHECK(kappa_min(g.curve) >= 0.0);
    CHECK(g.total_curvature > 2 * kPi);
    CHECK(g.total_curvature < 4 * kPi);
    CHECK(check_criterion(g.curve).kind == CriterionCase::NegativeArea);
}

TEST_CASE("example four turns negatively") {
    const auto& g = example("four");
    CHECK(g.length <= 0.95 * g.curve.support().minimum_width());
    CHECK(g.total_curvature <= -0.05 * 2 * kPi);
    CHECK(g.total_curvature >= -0.95 * 2 * kPi);
    CHECK(g.area >= 0.05 * g.length * g.length / (4 * kPi));
    const auto v = check_criterion(g.curve);
    CHECK(v.reoriented);
    CHECK(v.kind == CriterionCase::NegativeArea);
}

TEST_CASE("examples are deterministic and anchored") {
    for (const auto& name : example_names()) {
        const auto a = generate_example(name, 800);
        const auto& b = example(name).curve;
        REQUIRE(a.curve().size() == b.curve().size());
        for (std::size_t i = 0; i < a.curve().size(); ++i) CHECK(a.curve()[i] == b.curve()[i]);
        const auto [ea, eb] = b.contact_angle_errors();
        CHECK(ea <= kAngleTolerance);
        CHECK(eb <= kAngleTolerance);
    }
}

TEST_CASE("recipes and their failure modes") {
    CHECK(example_names().size() == 4);
    CHECK_THROWS_AS(example_recipe("five"), Error);
    try {
        generate_example_detail("one", SupportCurve::circle({0, 0}, 0.5), 400);
        FAIL("expected RecipeInfeasible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RecipeInfeasible);
    }
    CHECK_THROWS_AS(generate_example_detail("one", SupportCurve::line(), 400), Error);
    // other circles work too
    const auto g = generate_example_detail("two", SupportCurve::circle({1, 1}, 5.0), 400);
    CHECK(norm(g.curve.curve().front() - Vec2{1, 1}) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("auxiliary generators") {
    const auto circle = SupportCurve::circle({0, 0}, 4.0);
    const auto arc = stationary_arc(circle, 1.0, 300);
    for (double k : discretize(arc).kappa) CHECK(k == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(length(oversized_arc(circle, 400).curve()) > circle.minimum_width());
    const auto thin = tall_thin_arc(circle, 400);
    CHECK(count_self_intersections(thin.curve().nodes(), false) == 0);
    const auto p = perturbed_semicircle(SupportCurve::line(), 0.1, 0.05, 400);
    CHECK(std::abs(p.curve().front().y) < 1e-12);
    CHECK(total_curvature(p.curve()) == doctest::Approx(kPi).epsilon(1e-4));
    // distinct seeds give distinct curves
    const auto r1 = random_line_curve(1, 400), r2 = random_line_curve(2, 400);
    CHECK(hausdorff_distance(r1.curve().nodes(), r2.curve().nodes(), false, false) > 1e-3);
}
