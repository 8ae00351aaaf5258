#pragma once

#include <functional>
#include <vector>

#include "apcsf/vec2.hpp"

namespace apcsf {

// Cubic interpolating spline of a plane curve over a strictly increasing parameter.
class CubicSpline2 {
public:
    CubicSpline2() = default;

    // first derivatives prescribed at both ends
    static CubicSpline2 clamped(std::vector<double> u, std::vector<Vec2> x, Vec2 d0, Vec2 d1);
    static CubicSpline2 natural(std::vector<double> u, std::vector<Vec2> x);
    // x.back() must equal x.front(); u.back() - u.front() is the period
    static CubicSpline2 periodic(std::vector<double> u, std::vector<Vec2> x);

    Vec2 operator()(double t) const { return eval(t, 0); }
    // order in {0, 1, 2, 3}
    Vec2 eval(double t, int order) const;

    double front() const { return u_.front(); }
    double back() const { return u_.back(); }
    bool is_periodic() const { return periodic_; }

private:
    std::vector<double> u_;
    std::vector<Vec2> x_;
    std::vector<Vec2> m_;  // second derivatives at knots
    bool periodic_ = false;
};

// Coefficients c[0..degree] of the least-squares polynomial sum c_k t^k through (t_i, x_i).
// Needs at least degree + 1 samples.
std::vector<Vec2> polyfit(const std::vector<double>& t, const std::vector<Vec2>& x, int degree);

// d^order/dt^order of the polynomial at t
Vec2 polyval(const std::vector<Vec2>& c, double t, int order = 0);

// Minimizes f on [lo, hi] by golden-section search with parabolic steps (Brent).
double brent_minimize(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter = 200);

// Root of f on [lo, hi] where f changes sign (Brent). Throws InvalidInput if not bracketed.
double brent_root(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter = 200);

// Solves the tridiagonal system a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i.
std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double> d);

// Same system with a_0 coupling x_{n-1} and c_{n-1} coupling x_0.
std::vector<double> solve_cyclic_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double> d);

}  // namespace apcsf
