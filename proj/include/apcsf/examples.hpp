#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apcsf/support.hpp"

namespace apcsf {

// Raised-cosine curvature bump; center and width are fractions of the length.
struct Bump {
    double center = 0.5;
    double width = 0.1;
    double turning = 0.0;
};

// Curve given by its heading: theta(s) = theta0 + baseline * s + bump turnings.
struct HeadingProfile {
    Vec2 start;
    double theta0 = 0.0;
    double length = 1.0;
    double baseline = 0.0;
    std::vector<Bump> bumps;

    double heading(double s) const;
    double curvature(double s) const;
    // turning of the bumps restricted to [0, length]
    double bump_turning() const;
    Vec2 end_point() const;
};

// Nodes at arclength positions that equidistribute |kappa| + alpha.
std::vector<Vec2> sample_profile(const HeadingProfile& profile, std::size_t count);

struct ExampleRecipe {
    std::string name;
    std::string summary;
    SupportCurve support = SupportCurve::circle({0.0, 0.0}, 4.0);
    std::vector<std::string> targets;
    std::string knob;
    double knob_lo = 0.0;
    double knob_hi = 0.0;
};

struct GeneratedExample {
    ExampleRecipe recipe;
    AnchoredCurve curve;
    double knob = 0.0;
    double length = 0.0;
    double area = 0.0;
    double total_curvature = 0.0;
};

std::vector<std::string> example_names();
ExampleRecipe example_recipe(const std::string& name);

// Names: one, two, three, four. Throws RecipeInfeasible when the targets
// cannot be met with margin on the given support.
GeneratedExample generate_example_detail(const std::string& name, std::size_t nodes = 800);
GeneratedExample generate_example_detail(const std::string& name, const SupportCurve& support, std::size_t nodes = 800);
AnchoredCurve generate_example(const std::string& name, std::size_t nodes = 800);

// Arc of the circle orthogonal to a circular support, outside the support.
AnchoredCurve stationary_arc(const SupportCurve& circle, double arc_radius, std::size_t nodes);

// Embedded arc with length above the support's minimum width.
AnchoredCurve oversized_arc(const SupportCurve& circle, std::size_t nodes);

// Convex embedded finger with L^2 / A far above the l = 1 threshold.
AnchoredCurve tall_thin_arc(const SupportCurve& circle, std::size_t nodes);

// Upper half of a circle centred on a line point, perpendicular at both ends.
AnchoredCurve semicircle_on_line(const SupportCurve& line, double radius, std::size_t nodes);

// Semicircle with radial perturbation r(phi) = 1 + eps2 cos 2phi + eps3 cos 3phi.
AnchoredCurve perturbed_semicircle(const SupportCurve& line, double eps2, double eps3, std::size_t nodes);

// Random perpendicular curve on the line with heading
// pi/2 + k pi u + sum a_j sin(j pi u) for odd k.
AnchoredCurve random_line_curve(std::uint64_t seed, std::size_t nodes);

}  // namespace apcsf
