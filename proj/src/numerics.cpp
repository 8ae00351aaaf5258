#include "apcsf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "apcsf/error.hpp"

namespace apcsf {

namespace {

void check_knots(const std::vector<double>& u, const std::vector<Vec2>& x) {
    if (u.size() != x.size() || u.size() < 2) throw Error(ErrorKind::InvalidInput, "spline needs matching knots and values");
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        if (!(u[i + 1] > u[i])) throw Error(ErrorKind::InvalidInput, "spline knots must increase strictly");
    }
}

std::vector<Vec2> solve_components(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                                   const std::vector<Vec2>& d, bool cyclic) {
    std::vector<double> dx(d.size()), dy(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        dx[i] = d[i].x;
        dy[i] = d[i].y;
    }
    auto sx = cyclic ? solve_cyclic_tridiagonal(a, b, c, dx) : solve_tridiagonal(a, b, c, dx);
    auto sy = cyclic ? solve_cyclic_tridiagonal(a, b, c, dy) : solve_tridiagonal(a, b, c, dy);
    std::vector<Vec2> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = {sx[i], sy[i]};
    return out;
}

}  // namespace

std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double> d) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double> d) {
    const std::size_t n = b.size();
    if (n < 3) throw Error(ErrorKind::InvalidInput, "cyclic system needs at least 3 unknowns");
    // Sherman-Morrison on the corner entries
    const double alpha = c[n - 1], beta = a[0];
    const double gamma = -b[0];
    std::vector<double> bb = b;
    bb[0] -= gamma;
    bb[n - 1] -= alpha * beta / gamma;
    std::vector<double> aa = a, cc = c;
    aa[0] = 0.0;
    cc[n - 1] = 0.0;
    auto x = solve_tridiagonal(aa, bb, cc, d);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    auto z = solve_tridiagonal(aa, bb, cc, u);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
}

CubicSpline2 CubicSpline2::clamped(std::vector<double> u, std::vector<Vec2> x, Vec2 d0, Vec2 d1) {
    check_knots(u, x);
    const std::size_t n = u.size();
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
    std::vector<Vec2> r(n);
    const double h0 = u[1] - u[0], hn = u[n - 1] - u[n - 2];
    b[0] = 2.0 * h0;
    c[0] = h0;
    r[0] = 6.0 * ((x[1] - x[0]) / h0 - d0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = u[i] - u[i - 1], hr = u[i + 1] - u[i];
        a[i] = hl;
        b[i] = 2.0 * (hl + hr);
        c[i] = hr;
        r[i] = 6.0 * ((x[i + 1] - x[i]) / hr - (x[i] - x[i - 1]) / hl);
    }
    a[n - 1] = hn;
    b[n - 1] = 2.0 * hn;
    r[n - 1] = 6.0 * (d1 - (x[n - 1] - x[n - 2]) / hn);
    CubicSpline2 s;
    s.m_ = solve_components(a, b, c, r, false);
    s.u_ = std::move(u);
    s.x_ = std::move(x);
    return s;
}

CubicSpline2 CubicSpline2::natural(std::vector<double> u, std::vector<Vec2> x) {
    check_knots(u, x);
    const std::size_t n = u.size();
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0);
    std::vector<Vec2> r(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = u[i] - u[i - 1], hr = u[i + 1] - u[i];
        a[i] = hl;
        b[i] = 2.0 * (hl + hr);
        c[i] = hr;
        r[i] = 6.0 * ((x[i + 1] - x[i]) / hr - (x[i] - x[i - 1]) / hl);
    }
    CubicSpline2 s;
    s.m_ = solve_components(a, b, c, r, false);
    s.u_ = std::move(u);
    s.x_ = std::move(x);
    return s;
}

CubicSpline2 CubicSpline2::periodic(std::vector<double> u, std::vector<Vec2> x) {
    check_knots(u, x);
    const std::size_t n = u.size() - 1;  // distinct knots
    if (n < 3) throw Error(ErrorKind::InvalidInput, "periodic spline needs at least 3 distinct knots");
    std::vector<double> a(n), b(n), c(n);
    std::vector<Vec2> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hl = i == 0 ? u[n] - u[n - 1] : u[i] - u[i - 1];
        const double hr = u[i + 1] - u[i];
        const Vec2 xl = i == 0 ? x[n - 1] : x[i - 1];
        a[i] = hl;
        b[i] = 2.0 * (hl + hr);
        c[i] = hr;
        r[i] = 6.0 * ((x[i + 1] - x[i]) / hr - (x[i] - xl) / hl);
    }
    CubicSpline2 s;
    s.m_ = solve_components(a, b, c, r, true);
    s.m_.push_back(s.m_.front());
    x.back() = x.front();
    s.u_ = std::move(u);
    s.x_ = std::move(x);
    s.periodic_ = true;
    return s;
}

Vec2 CubicSpline2::eval(double t, int order) const {
    if (periodic_) {
        const double p = u_.back() - u_.front();
        t = u_.front() + std::fmod(t - u_.front(), p);
        if (t < u_.front()) t += p;
    }
    const std::size_t n = u_.size();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), t) - u_.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
    const double h = u_[i + 1] - u_[i];
    const double A = (u_[i + 1] - t) / h, B = (t - u_[i]) / h;
    const Vec2 xi = x_[i], xj = x_[i + 1], mi = m_[i], mj = m_[i + 1];
    switch (order) {
        case 0: return A * xi + B * xj + ((A * A * A - A) * mi + (B * B * B - B) * mj) * (h * h / 6.0);
        case 1: return (xj - xi) / h - ((3.0 * A * A - 1.0) * h / 6.0) * mi + ((3.0 * B * B - 1.0) * h / 6.0) * mj;
        case 2: return A * mi + B * mj;
        default: return (mj - mi) / h;
    }
}

std::vector<Vec2> polyfit(const std::vector<double>& t, const std::vector<Vec2>& x, int degree) {
    const std::size_t m = t.size(), k = static_cast<std::size_t>(degree) + 1;
    if (m < k || x.size() != m) throw Error(ErrorKind::InvalidInput, "polyfit needs at least degree + 1 samples");
    double scale = 0.0;
    for (double v : t) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    // Householder QR on the scaled Vandermonde matrix, two right-hand sides
    std::vector<std::vector<double>> A(m, std::vector<double>(k));
    std::vector<double> bx(m), by(m);
    for (std::size_t i = 0; i < m; ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            A[i][j] = p;
            p *= t[i] / scale;
        }
        bx[i] = x[i].x;
        by[i] = x[i].y;
    }
    for (std::size_t j = 0; j < k; ++j) {
        double nrm = 0.0;
        for (std::size_t i = j; i < m; ++i) nrm += A[i][j] * A[i][j];
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw Error(ErrorKind::InvalidInput, "polyfit: rank deficient samples");
        const double alpha = A[j][j] > 0 ? -nrm : nrm;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = j; i < m; ++i) v[i] = A[i][j];
        v[j] -= alpha;
        double vv = 0.0;
        for (std::size_t i = j; i < m; ++i) vv += v[i] * v[i];
        if (vv == 0.0) continue;
        auto reflect = [&](auto&& get) {
            double s = 0.0;
            for (std::size_t i = j; i < m; ++i) s += v[i] * get(i);
            s = 2.0 * s / vv;
            for (std::size_t i = j; i < m; ++i) get(i) -= s * v[i];
        };
        for (std::size_t c = j; c < k; ++c) reflect([&](std::size_t i) -> double& { return A[i][c]; });
        reflect([&](std::size_t i) -> double& { return bx[i]; });
        reflect([&](std::size_t i) -> double& { return by[i]; });
    }
    std::vector<Vec2> c(k);
    for (std::size_t j = k; j-- > 0;) {
        double sx = bx[j], sy = by[j];
        for (std::size_t l = j + 1; l < k; ++l) {
            sx -= A[j][l] * c[l].x;
            sy -= A[j][l] * c[l].y;
        }
        c[j] = {sx / A[j][j], sy / A[j][j]};
    }
    double p = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        c[j] = c[j] / p;
        p *= scale;
    }
    return c;
}

Vec2 polyval(const std::vector<Vec2>& c, double t, int order) {
    Vec2 s;
    for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(order);) {
        double f = 1.0;
        for (int q = 0; q < order; ++q) f *= static_cast<double>(j - static_cast<std::size_t>(q));
        s = s * t + f * c[j];
    }
    return s;
}

double brent_minimize(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
    const double golden = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + golden * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + 1e-300, tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

double brent_root(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
    double a = lo, b = hi, fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw Error(ErrorKind::InvalidInput, "brent_root: root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b; fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

}  // namespace apcsf
