#include "apcsf/examples.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "apcsf/error.hpp"
#include "apcsf/flow.hpp"
#include "apcsf/numerics.hpp"

namespace apcsf {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1]
constexpr double kGaussX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double bump_cumulative(double u) {
    u = std::clamp(u, -0.5, 0.5);
    return u + 0.5 + std::sin(2.0 * kPi * u) / (2.0 * kPi);
}

double bump_density(double u) { return std::abs(u) <= 0.5 ? 1.0 + std::cos(2.0 * kPi * u) : 0.0; }

using Heading = std::function<double(double)>;

Vec2 integrate_heading(const Heading& theta, double s0, double s1, int pieces) {
    Vec2 sum;
    const double h = (s1 - s0) / pieces;
    for (int p = 0; p < pieces; ++p) {
        const double mid = s0 + (p + 0.5) * h;
        for (int g = 0; g < 8; ++g) sum = sum + (0.5 * h * kGaussW[g]) * unit(theta(mid + 0.5 * h * kGaussX[g]));
    }
    return sum;
}

// Positions at arclengths equidistributing |kappa| + alpha on [0, L].
std::vector<Vec2> sample_curve(Vec2 start, double L, const Heading& theta, const std::function<double(double)>& kappa,
                               std::size_t count) {
    const std::size_t cells = 64 * count;
    std::vector<double> s(cells + 1), rho(cells + 1);
    double abs_total = 0.0;
    for (std::size_t i = 0; i <= cells; ++i) {
        s[i] = L * static_cast<double>(i) / static_cast<double>(cells);
        rho[i] = std::abs(kappa(s[i]));
        if (i > 0) abs_total += 0.5 * (rho[i] + rho[i - 1]) * (s[i] - s[i - 1]);
    }
    const double alpha = std::max(abs_total, 2.0 * kPi) / L;
    std::vector<double> W(cells + 1, 0.0);
    for (std::size_t i = 1; i <= cells; ++i) W[i] = W[i - 1] + (0.5 * (rho[i] + rho[i - 1]) + alpha) * (s[i] - s[i - 1]);
    std::vector<double> targets(count);
    std::size_t j = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double w = W.back() * static_cast<double>(k) / static_cast<double>(count - 1);
        while (j + 1 < cells && W[j + 1] < w) ++j;
        const double f = std::clamp((w - W[j]) / (W[j + 1] - W[j]), 0.0, 1.0);
        targets[k] = s[j] + f * (s[j + 1] - s[j]);
    }
    targets.front() = 0.0;
    targets.back() = L;
    std::vector<Vec2> out(count);
    out[0] = start;
    for (std::size_t k = 1; k < count; ++k) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((targets[k] - targets[k - 1]) / (L / 4096.0))));
        out[k] = out[k - 1] + integrate_heading(theta, targets[k - 1], targets[k], pieces);
    }
    return out;
}

std::vector<Vec2> sample_profile_impl(const HeadingProfile& p, std::size_t count) {
    return sample_curve(p.start, p.length, [&](double s) { return p.heading(s); }, [&](double s) { return p.curvature(s); },
                        count);
}

void require_circle(const SupportCurve& support) {
    if (support.kind() != SupportKind::Circle) throw Error(ErrorKind::InvalidInput, "example recipes need a circle support");
}

Vec2 circle_point(const SupportCurve& c, double angle) { return c.center() + c.radius() * unit(angle); }

// Half curve from the support point at angle phia to the vertical axis through
// the circle center; the mirror image completes it.
struct SymmetricSpec {
    double phia = 0.0;
    double turn = 0.0;  // heading change over the half
    std::vector<Bump> bumps;
};

HeadingProfile half_profile(const SupportCurve& circle, const SymmetricSpec& spec, double half_length) {
    HeadingProfile p;
    p.start = circle_point(circle, spec.phia);
    p.theta0 = spec.phia;
    p.length = half_length;
    p.bumps = spec.bumps;
    p.baseline = (spec.turn - p.bump_turning()) / half_length;
    return p;
}

HeadingProfile solve_symmetric(const SupportCurve& circle, const SymmetricSpec& spec) {
    const double R = circle.radius(), cx = circle.center().x;
    auto gap = [&](double Lh) { return half_profile(circle, spec, Lh).end_point().x - cx; };
    const int grid = 120;
    const double lo = 0.02 * R, hi = 3.0 * R;
    double prev = gap(lo);
    for (int i = 1; i <= grid; ++i) {
        const double L1 = lo + (hi - lo) * i / grid;
        const double cur = gap(L1);
        if (prev * cur < 0.0) {
            const double L0 = lo + (hi - lo) * (i - 1) / grid;
            return half_profile(circle, spec, brent_root(gap, L0, L1, 1e-15 * R));
        }
        prev = cur;
    }
    throw Error(ErrorKind::RecipeInfeasible, "no symmetric closure found");
}

std::vector<Vec2> symmetric_nodes(const SupportCurve& circle, const HeadingProfile& half, std::size_t nodes) {
    const std::size_t h = std::max<std::size_t>(4, (nodes + 1) / 2);
    std::vector<Vec2> x = sample_profile_impl(half, h);
    const double cx = circle.center().x;
    x.back().x = cx;
    for (std::size_t i = h - 1; i-- > 0;) x.push_back({2.0 * cx - x[i].x, x[i].y});
    return x;
}

AnchoredCurve anchor(std::vector<Vec2> x, const SupportCurve& support, double angle_tolerance = kAngleTolerance) {
    x.front() = support.project(x.front()).second;
    x.back() = support.project(x.back()).second;
    return AnchoredCurve(OpenCurve(std::move(x)), support, angle_tolerance);
}

struct Metrics {
    double length = 0.0;
    double area = 0.0;
    double total = 0.0;
    double kappa_min = 0.0;
    int crossings = 0;
};

Metrics measure(const AnchoredCurve& c) {
    Metrics m;
    const DiscreteCurve d = discretize(c);
    m.length = d.length;
    m.total = d.total_curvature;
    m.kappa_min = *std::min_element(d.kappa.begin(), d.kappa.end());
    m.area = enclosed_area(c);
    m.crossings = count_self_intersections(c.curve().nodes(), false);
    return m;
}

using MarginFn = std::function<std::vector<double>(double)>;

bool feasible(const std::vector<double>& m) {
    return std::all_of(m.begin(), m.end(), [](double v) { return v >= 0.0; });
}

std::vector<double> safe_margins(const MarginFn& f, double knob) {
    try {
        return f(knob);
    } catch (const Error&) {
        return {-1.0};
    }
}

// Feasible knob interval located on a grid and refined by bisection; returns its midpoint.
double tune_knob(const MarginFn& margins, double lo, double hi, const std::string& name) {
    const int grid = 32;
    std::vector<double> k(grid + 1);
    std::vector<bool> ok(grid + 1);
    int best = -1, best_run = 0;
    for (int i = 0; i <= grid; ++i) {
        k[i] = lo + (hi - lo) * i / grid;
        ok[i] = feasible(safe_margins(margins, k[i]));
    }
    for (int i = 0; i <= grid;) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 <= grid && ok[j + 1]) ++j;
        if (j - i + 1 > best_run) {
            best_run = j - i + 1;
            best = i;
        }
        i = j + 1;
    }
    if (best < 0) throw Error(ErrorKind::RecipeInfeasible, "example " + name + ": targets not met anywhere on the knob range");
    const int first = best, last = best + best_run - 1;
    auto refine = [&](double good, double bad) {
        for (int it = 0; it < 24; ++it) {
            const double mid = 0.5 * (good + bad);
            (feasible(safe_margins(margins, mid)) ? good : bad) = mid;
        }
        return good;
    };
    const double left = first > 0 ? refine(k[first], k[first - 1]) : k[first];
    const double right = last < grid ? refine(k[last], k[last + 1]) : k[last];
    return 0.5 * (left + right);
}

constexpr std::size_t kTuneNodes = 400;
// plain arc between an endpoint and the first hook
constexpr double kEndGap = 0.02;
constexpr double kMargin = 0.05;
// coarse tuning curves resolve the end hooks poorly
constexpr double kTuneTolerance = 0.05;

// Example One and Four: orthogonal-arc-like cap with a loop of turning
// sign * 2 pi at the top.
SymmetricSpec loop_spec(double beta, double sign) {
    SymmetricSpec s;
    s.phia = kPi / 2.0 - beta;
    s.turn = kPi / 2.0 + beta + sign * kPi;
    s.bumps = {Bump{1.0, 0.2, sign * 2.0 * kPi}};
    return s;
}

// Example Two: pi hooks at both ends and a bulb hanging into the support region.
SymmetricSpec bulb_spec(double beta) {
    SymmetricSpec s;
    s.phia = kPi / 2.0 + beta;
    s.turn = 1.5 * kPi - beta;
    s.bumps = {Bump{kEndGap + 0.05, 0.1, kPi}};
    return s;
}

AnchoredCurve build_symmetric(const SupportCurve& circle, const SymmetricSpec& spec, std::size_t nodes,
                              double angle_tolerance = kAngleTolerance) {
    return anchor(symmetric_nodes(circle, solve_symmetric(circle, spec), nodes), circle, angle_tolerance);
}

// Example Three: arch, descending edge, tight loop, rising edge, end arch.
// The first arch turning closes the curve on the support, the end arch
// turning fixes the end heading.
struct ThreeSpec {
    double beta = 0.12;
    double length_ratio = 0.9;  // L / d_Sigma
    double baseline = 0.02;     // times 8 / d_Sigma
    double edge_arch = 0.12;
    double loop_turning = 6.0;
};

HeadingProfile three_profile(const SupportCurve& circle, const ThreeSpec& spec, double loop_width, double t1,
                             double& t3) {
    HeadingProfile p;
    const double d = 2.0 * circle.radius();
    const double phia = kPi / 2.0 - spec.beta;
    p.start = circle_point(circle, phia);
    p.theta0 = phia;
    p.length = spec.length_ratio * d;
    p.baseline = spec.baseline * 8.0 / d;
    const double ew = spec.edge_arch;
    p.bumps = {Bump{kEndGap + ew / 2.0, ew, t1}, Bump{0.5, loop_width, spec.loop_turning},
               Bump{1.0 - kEndGap - ew / 2.0, ew, t3}};
    for (int it = 0; it < 100; ++it) {
        const Vec2 e = p.end_point();
        const double psi = angle_of(circle.evaluate(circle.project(e).first).inner_normal);
        const double now = p.heading(p.length);
        const double nominal = p.theta0 + 3.0 * kPi;
        const double target = psi + 2.0 * kPi * std::round((nominal - psi) / (2.0 * kPi));
        const double delta = target - now;
        p.bumps[2].turning += delta;
        if (std::abs(delta) < 1e-14) break;
    }
    t3 = p.bumps[2].turning;
    return p;
}

double radial_gap(const SupportCurve& support, Vec2 p) {
    const auto [param, q] = support.project(p);
    return -dot(p - q, support.evaluate(param).inner_normal);
}

HeadingProfile solve_three(const SupportCurve& circle, const ThreeSpec& spec, double loop_width) {
    double t3 = 2.4;
    auto gap = [&](double t1) { return radial_gap(circle, three_profile(circle, spec, loop_width, t1, t3).end_point()); };
    const int grid = 20;
    const double lo = 1.8, hi = 3.8;
    double prev = gap(lo);
    for (int i = 1; i <= grid; ++i) {
        const double t1 = lo + (hi - lo) * i / grid;
        const double cur = gap(t1);
        if (prev * cur < 0.0) {
            const double root = brent_root(gap, lo + (hi - lo) * (i - 1) / grid, t1, 1e-15);
            return three_profile(circle, spec, loop_width, root, t3);
        }
        prev = cur;
    }
    throw Error(ErrorKind::RecipeInfeasible, "example three: no closure found");
}

GeneratedExample finish(ExampleRecipe recipe, AnchoredCurve curve, double knob) {
    const Metrics m = measure(curve);
    return GeneratedExample{std::move(recipe), std::move(curve), knob, m.length, m.area, m.total};
}

}  // namespace

double HeadingProfile::heading(double s) const {
    double t = theta0 + baseline * s;
    for (const auto& b : bumps) t += b.turning * bump_cumulative((s / length - b.center) / b.width);
    return t;
}

double HeadingProfile::curvature(double s) const {
    double k = baseline;
    for (const auto& b : bumps) k += b.turning / (b.width * length) * bump_density((s / length - b.center) / b.width);
    return k;
}

double HeadingProfile::bump_turning() const {
    double t = 0.0;
    for (const auto& b : bumps) t += b.turning * (bump_cumulative((1.0 - b.center) / b.width) - bump_cumulative(-b.center / b.width));
    return t;
}

Vec2 HeadingProfile::end_point() const {
    return start + integrate_heading([this](double s) { return heading(s); }, 0.0, length, 256);
}

std::vector<Vec2> sample_profile(const HeadingProfile& profile, std::size_t count) {
    return sample_profile_impl(profile, count);
}

std::vector<std::string> example_names() { return {"one", "two", "three", "four"}; }

ExampleRecipe example_recipe(const std::string& name) {
    ExampleRecipe r;
    r.name = name;
    if (name == "one") {
        r.summary = "limacon-like cap with a small inner loop near the top (l = 2)";
        r.targets = {"L0 <= 0.95 * 4pi/3", "A0 >= 1.05 * pi/2", "2pi < total < 4pi"};
        r.knob = "contact half-angle beta";
        r.knob_lo = 0.1;
        r.knob_hi = 0.4;
    } else if (name == "two") {
        r.summary = "embedded bulb hanging into the support region, hooks at both ends";
        r.targets = {"L0 <= 0.95 * 4pi/3", "L0 <= 0.95 * d_Sigma", "A0 >= 1.05 * pi/2", "no self-intersections"};
        r.knob = "contact half-angle beta";
        r.knob_lo = 0.2;
        r.knob_hi = 0.45;
    } else if (name == "three") {
        r.summary = "locally convex curve with a loop inside the support region; negative enclosed area";
        r.targets = {"A0 <= -0.05 * L0^2 / (4pi)", "L0 <= 0.95 * d_Sigma", "kappa > 0", "2pi < total < 4pi"};
        r.knob = "loop width fraction";
        r.knob_lo = 0.08;
        r.knob_hi = 0.3;
    } else if (name == "four") {
        r.summary = "example one with the small loop reversed; non-convex, total in (-2pi, 0)";
        r.targets = {"L0 <= 0.95 * d_Sigma", "-0.95 * 2pi <= total <= -0.05 * 2pi", "A0 >= 0.05 * L0^2 / (4pi)"};
        r.knob = "contact half-angle beta";
        r.knob_lo = 0.1;
        r.knob_hi = 0.4;
    } else {
        throw Error(ErrorKind::InvalidInput, "unknown example '" + name + "'");
    }
    return r;
}

GeneratedExample generate_example_detail(const std::string& name, std::size_t nodes) {
    return generate_example_detail(name, SupportCurve::circle({0.0, 0.0}, 4.0), nodes);
}

GeneratedExample generate_example_detail(const std::string& name, const SupportCurve& support, std::size_t nodes) {
    ExampleRecipe recipe = example_recipe(name);
    require_circle(support);
    recipe.support = support;
    const double d = support.minimum_width();
    const double quarter = 4.0 * kPi / 3.0;
    const double l2_scale = 1.0 / (4.0 * kPi);

    if (name == "one" || name == "four") {
        const double sign = name == "one" ? 1.0 : -1.0;
        MarginFn margins = [&](double beta) {
            const Metrics m = measure(build_symmetric(support, loop_spec(beta, sign), kTuneNodes, kTuneTolerance));
            if (sign > 0.0) {
                return std::vector<double>{(1.0 - kMargin) * quarter - m.length, m.area - (1.0 + kMargin) * kPi / 2.0,
                                           (1.0 - kMargin) * d - m.length, m.total - 2.0 * kPi, 4.0 * kPi - m.total};
            }
            return std::vector<double>{(1.0 - kMargin) * d - m.length, -kMargin * 2.0 * kPi - m.total,
                                       m.total + (1.0 - kMargin) * 2.0 * kPi, m.area - kMargin * m.length * m.length * l2_scale};
        };
        const double beta = tune_knob(margins, recipe.knob_lo, recipe.knob_hi, name);
        return finish(recipe, build_symmetric(support, loop_spec(beta, sign), nodes), beta);
    }
    if (name == "two") {
        MarginFn margins = [&](double beta) {
            const Metrics m = measure(build_symmetric(support, bulb_spec(beta), kTuneNodes, kTuneTolerance));
            return std::vector<double>{(1.0 - kMargin) * quarter - m.length, (1.0 - kMargin) * d - m.length,
                                       m.area - (1.0 + kMargin) * kPi / 2.0, m.crossings == 0 ? 1.0 : -1.0};
        };
        const double beta = tune_knob(margins, recipe.knob_lo, recipe.knob_hi, name);
        return finish(recipe, build_symmetric(support, bulb_spec(beta), nodes), beta);
    }
    // three
    const ThreeSpec spec;
    auto build = [&](double width, std::size_t n, double tol = kAngleTolerance) {
        return anchor(sample_profile_impl(solve_three(support, spec, width), n), support, tol);
    };
    MarginFn margins = [&](double width) {
        const Metrics m = measure(build(width, kTuneNodes, kTuneTolerance));
        return std::vector<double>{-kMargin * m.length * m.length * l2_scale - m.area, (1.0 - kMargin) * d - m.length,
                                   m.kappa_min, m.total - 2.0 * kPi, 4.0 * kPi - m.total};
    };
    const double width = tune_knob(margins, recipe.knob_lo, recipe.knob_hi, name);
    return finish(recipe, build(width, nodes), width);
}

AnchoredCurve generate_example(const std::string& name, std::size_t nodes) {
    return generate_example_detail(name, nodes).curve;
}

AnchoredCurve stationary_arc(const SupportCurve& circle, double rho, std::size_t nodes) {
    require_circle(circle);
    const double R = circle.radius();
    const double d = std::sqrt(R * R + rho * rho);
    const double half = kPi - std::atan(R / rho);
    const Vec2 c = circle.center() + Vec2{0.0, d};
    std::vector<Vec2> x(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double phi = kPi / 2.0 - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(nodes - 1);
        x[i] = c + rho * unit(phi);
    }
    return anchor(std::move(x), circle);
}

AnchoredCurve oversized_arc(const SupportCurve& circle, std::size_t nodes) {
    require_circle(circle);
    return stationary_arc(circle, 3.0 * circle.radius(), nodes);
}

AnchoredCurve tall_thin_arc(const SupportCurve& circle, std::size_t nodes) {
    require_circle(circle);
    const double beta = 0.02;
    SymmetricSpec s;
    s.phia = kPi / 2.0 - beta;
    s.turn = kPi / 2.0 + beta;
    s.bumps = {Bump{1.0, 0.2, 2.0 * s.turn * 0.98}};
    return build_symmetric(circle, s, nodes);
}

namespace {

// local frame of a line: e1 = -direction, e2 = -inner normal
std::pair<Vec2, Vec2> line_frame(const SupportCurve& line) {
    const Vec2 u = line.line_direction();
    return {-1.0 * u, -1.0 * perp(u)};
}

AnchoredCurve polar_on_line(const SupportCurve& line, const std::function<double(double)>& r, std::size_t nodes) {
    if (!line.is_line()) throw Error(ErrorKind::InvalidInput, "line support expected");
    const auto [e1, e2] = line_frame(line);
    std::vector<Vec2> x(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double phi = kPi * static_cast<double>(i) / static_cast<double>(nodes - 1);
        const double rr = r(phi);
        x[i] = line.line_point() + (rr * std::cos(phi)) * e1 + (rr * std::sin(phi)) * e2;
    }
    return anchor(std::move(x), line);
}

}  // namespace

AnchoredCurve semicircle_on_line(const SupportCurve& line, double radius, std::size_t nodes) {
    return polar_on_line(line, [radius](double) { return radius; }, nodes);
}

AnchoredCurve perturbed_semicircle(const SupportCurve& line, double eps2, double eps3, std::size_t nodes) {
    return polar_on_line(line, [=](double phi) { return 1.0 + eps2 * std::cos(2.0 * phi) + eps3 * std::cos(3.0 * phi); },
                         nodes);
}

AnchoredCurve random_line_curve(std::uint64_t seed, std::size_t nodes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    const SupportCurve line = SupportCurve::line();
    const auto [e1, e2] = line_frame(line);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const int k = std::array<int, 4>{-3, -1, 1, 3}[static_cast<std::size_t>(pick(rng))];
        std::vector<double> a(6, 0.0);
        for (int j = 2; j <= 5; ++j) a[static_cast<std::size_t>(j)] = 1.5 * coef(rng) / j;
        auto heading = [&](double u) {
            double t = kPi / 2.0 + k * kPi * u;
            for (int j = 1; j <= 5; ++j) t += a[static_cast<std::size_t>(j)] * std::sin(j * kPi * u);
            return t;
        };
        auto kappa = [&](double u) {
            double t = k * kPi;
            for (int j = 1; j <= 5; ++j) t += a[static_cast<std::size_t>(j)] * j * kPi * std::cos(j * kPi * u);
            return t;
        };
        // a_1 closes the curve on the line
        auto height = [&](double a1) {
            a[1] = a1;
            return integrate_heading(heading, 0.0, 1.0, 256).y;
        };
        double best = std::numeric_limits<double>::infinity();
        const int grid = 60;
        double prev = height(-3.0);
        for (int i = 1; i <= grid; ++i) {
            const double a1 = -3.0 + 6.0 * i / grid;
            const double cur = height(a1);
            if (prev * cur <= 0.0) {
                const double root = brent_root(height, a1 - 6.0 / grid, a1, 1e-15);
                if (std::abs(root) < std::abs(best)) best = root;
            }
            prev = cur;
        }
        if (!std::isfinite(best)) continue;
        a[1] = best;
        const auto local = sample_curve({0.0, 0.0}, 1.0, heading, kappa, nodes);
        std::vector<Vec2> x(nodes);
        for (std::size_t i = 0; i < nodes; ++i) x[i] = line.line_point() + local[i].x * e1 + local[i].y * e2;
        try {
            return anchor(std::move(x), line);
        } catch (const Error&) {
            continue;
        }
    }
    throw Error(ErrorKind::RecipeInfeasible, "no closed random curve for seed " + std::to_string(seed));
}

}  // namespace apcsf
