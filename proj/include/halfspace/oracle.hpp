#pragma once

// Independent verification machinery: Gauss-Legendre rules, tensor-product
// quadrature on simple planar regions, central finite differences, and a
// grid-then-descend minimizer for two-dimensional objectives.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "halfspace/core.hpp"

namespace halfspace::oracle {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1]; computed once per n, thread-safe.
inline const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: need at least one node");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        GaussRule rule = n == 1 ? GaussRule{{0.0}, {2.0}} : detail::compute_gauss_legendre(n);
        it = cache.emplace(n, std::move(rule)).first;
    }
    return it->second;
}

/// Integral of f over [a, b] with an n-point rule.
template <class F>
double gauss_1d(F&& f, double a, double b, int n) {
    const GaussRule& g = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
    return s * half;
}

struct RectangleRegion {
    double x0, x1, y0, y1;
};
struct DiskRegion {
    double radius;
};
struct AnnularSectorRegion {
    double r0, r1, theta0, theta1;
};

using Region = std::variant<RectangleRegion, DiskRegion, AnnularSectorRegion>;

struct QuadratureSpec {
    Region region;
    int nodes_x = 16;  // first axis (x, or radius for polar regions)
    int nodes_y = 16;  // second axis (y, or angle)
    int refinement_cap = 4;
    double tolerance = 1e-10;

    void validate() const {
        if (nodes_x < 8 || nodes_y < 8) throw std::domain_error("QuadratureSpec: node counts must be >= 8");
        if (refinement_cap < 1) throw std::domain_error("QuadratureSpec: refinement cap must be >= 1");
    }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    int refinements = 0;
};

namespace detail {

template <class F>
double tensor_rule(const Region& region, int nx, int ny, F& f) {
    const GaussRule& gx = gauss_legendre(nx);
    const GaussRule& gy = gauss_legendre(ny);
    double total = 0.0;
    if (const auto* rect = std::get_if<RectangleRegion>(&region)) {
        const double hx = 0.5 * (rect->x1 - rect->x0);
        const double mx = 0.5 * (rect->x1 + rect->x0);
        const double hy = 0.5 * (rect->y1 - rect->y0);
        const double my = 0.5 * (rect->y1 + rect->y0);
        for (int i = 0; i < nx; ++i) {
            const double x = mx + hx * gx.nodes[i];
            double row = 0.0;
            for (int j = 0; j < ny; ++j) row += gy.weights[j] * f(x, my + hy * gy.nodes[j]);
            total += gx.weights[i] * row;
        }
        return total * hx * hy;
    }
    double r0 = 0.0;
    double r1 = 0.0;
    double t0 = -std::numbers::pi;
    double t1 = std::numbers::pi;
    if (const auto* disk = std::get_if<DiskRegion>(&region)) {
        r1 = disk->radius;
    } else {
        const auto& sec = std::get<AnnularSectorRegion>(region);
        r0 = sec.r0;
        r1 = sec.r1;
        t0 = sec.theta0;
        t1 = sec.theta1;
    }
    const double hr = 0.5 * (r1 - r0);
    const double mr = 0.5 * (r1 + r0);
    const double ht = 0.5 * (t1 - t0);
    const double mt = 0.5 * (t1 + t0);
    for (int i = 0; i < nx; ++i) {
        const double r = mr + hr * gx.nodes[i];
        double row = 0.0;
        for (int j = 0; j < ny; ++j) {
            const double t = mt + ht * gy.nodes[j];
            row += gy.weights[j] * f(r * std::cos(t), r * std::sin(t));
        }
        total += gx.weights[i] * r * row;
    }
    return total * hr * ht;
}

}  // namespace detail

/// Tensor Gauss-Legendre quadrature of f(x, y) over the region. The node
/// counts are doubled until two successive estimates agree to the tolerance
/// or the refinement cap is reached; the last difference is the error estimate.
template <class F>
QuadResult quad2d(const QuadratureSpec& spec, F&& f) {
    spec.validate();
    QuadResult res;
    int nx = spec.nodes_x;
    int ny = spec.nodes_y;
    double prev = detail::tensor_rule(spec.region, nx, ny, f);
    for (int k = 1; k <= spec.refinement_cap; ++k) {
        nx *= 2;
        ny *= 2;
        const double cur = detail::tensor_rule(spec.region, nx, ny, f);
        res.refinements = k;
        res.error_estimate = std::abs(cur - prev);
        res.value = cur;
        prev = cur;
        if (res.error_estimate <= spec.tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

/// Central-difference gradient.
template <class F>
Vector finite_diff_grad(F&& f, const Vector& w, double h) {
    if (!(h > 0.0)) throw std::domain_error("finite_diff_grad: step must be positive");
    Vector g(w.dim());
    for (std::size_t i = 0; i < w.dim(); ++i) {
        Vector a = w;
        Vector b = w;
        a[i] += h;
        b[i] -= h;
        g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

/// Search box in polar coordinates: r in (0, r_max], theta in (theta_min, theta_max].
struct PolarBox {
    double r_max = 1.0;
    double theta_min = -std::numbers::pi;
    double theta_max = std::numbers::pi;
    int radial_nodes = 200;
    int angular_nodes = 720;
};

struct MinimizeOptions {
    double grad_tol = 1e-9;
    int max_descent_iters = 20000;
    double armijo_c = 1e-4;
    int max_backtracks = 60;
    int max_newton_iters = 50;
};

struct MinimizeResult {
    Vector argmin;
    double value = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();
    Vector best_grid_point;
    double best_grid_value = std::numeric_limits<double>::infinity();
    int descent_iters = 0;
    int newton_iters = 0;
    bool converged = false;
    std::string message;
};

inline Vector polar_point(double r, double theta) { return Vector{r * std::cos(theta), r * std::sin(theta)}; }

/// Scans the polar grid (index-ordered, first minimum wins), then runs
/// gradient descent with Armijo backtracking from the best node, finished by
/// Newton steps that use a finite-difference Jacobian of `grad`.
/// The returned value never exceeds the best grid value.
template <class F, class G>
MinimizeResult grid_refine_minimize(F&& f, G&& grad, const PolarBox& box, const MinimizeOptions& opts = {}) {
    if (!(box.r_max > 0.0) || !(box.theta_max > box.theta_min)) throw std::domain_error("grid_refine_minimize: empty box");
    if (box.radial_nodes < 1 || box.angular_nodes < 1) throw std::domain_error("grid_refine_minimize: empty grid");
    MinimizeResult res;
    for (int i = 0; i < box.radial_nodes; ++i) {
        const double r = box.r_max * (i + 1) / box.radial_nodes;
        for (int j = 0; j < box.angular_nodes; ++j) {
            const double t = box.theta_min + (box.theta_max - box.theta_min) * (j + 1) / box.angular_nodes;
            const Vector p = polar_point(r, t);
            const double v = f(p);
            if (v < res.best_grid_value) {
                res.best_grid_value = v;
                res.best_grid_point = p;
            }
        }
    }

    Vector w = res.best_grid_point;
    double fw = res.best_grid_value;
    Vector g = grad(w);
    double gn = norm(g);
    double step = 1.0;
    Vector prev_w;
    Vector prev_g;
    int it = 0;
    for (; it < opts.max_descent_iters && gn > opts.grad_tol; ++it) {
        if (!prev_w.empty()) {
            // Barzilai-Borwein trial step
            const Vector s = w - prev_w;
            const Vector yv = g - prev_g;
            const double sy = dot(s, yv);
            if (sy > 0.0) step = dot(s, s) / sy;
        }
        bool accepted = false;
        double t = step;
        for (int k = 0; k < opts.max_backtracks; ++k, t *= 0.5) {
            const Vector cand = w - t * g;
            const double fc = f(cand);
            if (fc <= fw - opts.armijo_c * t * gn * gn) {
                prev_w = w;
                prev_g = g;
                w = cand;
                fw = fc;
                step = t;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // objective resolution reached; Newton takes over
        g = grad(w);
        gn = norm(g);
    }
    res.descent_iters = it;

    // Newton on grad = 0; the Jacobian comes from central differences of grad.
    for (int k = 0; k < opts.max_newton_iters && gn > opts.grad_tol; ++k) {
        const std::size_t d = w.dim();
        if (d != 2) break;
        const double h = 1e-6 * std::max(1.0, norm(w));
        double jac[2][2];
        for (std::size_t c = 0; c < 2; ++c) {
            Vector a = w;
            Vector b = w;
            a[c] += h;
            b[c] -= h;
            const Vector ga = grad(a);
            const Vector gb = grad(b);
            for (std::size_t r = 0; r < 2; ++r) jac[r][c] = (ga[r] - gb[r]) / (2.0 * h);
        }
        const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if (!(std::abs(det) > 0.0)) break;
        Vector delta{(jac[1][1] * g[0] - jac[0][1] * g[1]) / det, (-jac[1][0] * g[0] + jac[0][0] * g[1]) / det};
        bool improved = false;
        for (int b = 0; b < 30; ++b) {
            const Vector cand = w - delta;
            const Vector gc = grad(cand);
            const double gcn = norm(gc);
            const double fc = f(cand);
            if (gcn < gn && fc <= res.best_grid_value) {
                w = cand;
                g = gc;
                gn = gcn;
                fw = fc;
                improved = true;
                break;
            }
            delta *= 0.5;
        }
        res.newton_iters = k + 1;
        if (!improved) break;
    }

    res.argmin = w;
    res.value = fw;
    res.grad_norm = gn;
    if (res.value > res.best_grid_value) {
        res.argmin = res.best_grid_point;
        res.value = res.best_grid_value;
        res.grad_norm = norm(grad(res.argmin));
    }
    res.converged = res.grad_norm <= opts.grad_tol;
    res.message = res.converged ? "converged" : "gradient tolerance not reached within budget";
    return res;
}

}  // namespace halfspace::oracle
