#pragma once

// Quadrature over a ConvexCell in coordinates aligned with a unit direction d:
// x = t*d + u*perp(d). The outer t-integral is split at every point where the
// chord [u_lo(t), u_hi(t)] changes form (vertex projections, edge/circle
// crossings) and is graded geometrically around t = 0, where margins
// <w, x> = |w| t change sign. Cells clipped by a disk are integrated in the
// angle variable t = rho*sin(phi), which removes the square-root endpoint
// behaviour of the circular chord.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "halfspace/geometry.hpp"
#include "halfspace/oracle.hpp"

namespace halfspace::geom {

struct SliceRule {
    int order = 12;              // Gauss-Legendre nodes per panel
    int inner_nodes = 1;         // nodes across each chord (1 is exact for integrands linear in u)
    double feature_scale = 0.0;  // |w|: grade panels at spacing 2^k / scale around t = 0
    std::vector<double> extra_breaks;
};

struct Chord {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool empty() const { return !(hi > lo); }
};

/// Chord of the cell on the line {<d, x> = t}, parametrized along perp(d).
inline Chord chord_at(const ConvexCell& cell, Point2 d, double t, const std::vector<HalfPlane>& planes) {
    const Point2 p = perp(d);
    Chord c{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const HalfPlane& h : planes) {
        const double a = dot(h.normal, p);
        const double rhs = h.offset - t * dot(h.normal, d);
        const double scale = std::max(std::abs(h.normal.x), std::abs(h.normal.y));
        if (std::abs(a) <= 1e-15 * scale) {
            if (rhs < 0.0) return {0.0, 0.0};
            continue;
        }
        if (a > 0.0) {
            c.hi = std::min(c.hi, rhs / a);
        } else {
            c.lo = std::max(c.lo, rhs / a);
        }
    }
    if (const auto& r = cell.disk_radius()) {
        const double s2 = (*r) * (*r) - t * t;
        if (s2 <= 0.0) return {0.0, 0.0};
        const double s = std::sqrt(s2);
        c.lo = std::max(c.lo, -s);
        c.hi = std::min(c.hi, s);
    }
    return c;
}

/// Sorted breakpoints in t covering the cell's extent along d.
inline std::vector<double> slice_breakpoints(const ConvexCell& cell, Point2 d, const SliceRule& rule) {
    std::vector<double> pts;
    const Polygon& poly = cell.polygon();
    double tmin = std::numeric_limits<double>::infinity();
    double tmax = -tmin;
    for (const Point2& v : poly) {
        const double t = dot(v, d);
        pts.push_back(t);
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (const auto& r = cell.disk_radius()) {
        tmin = std::max(tmin, -*r);
        tmax = std::min(tmax, *r);
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = poly[i];
            const Point2 e = poly[(i + 1) % n] - a;
            const double qa = norm2(e);
            const double qb = 2.0 * dot(a, e);
            const double qc = norm2(a) - (*r) * (*r);
            const double disc = qb * qb - 4.0 * qa * qc;
            if (qa > 0.0 && disc > 0.0) {
                const double sq = std::sqrt(disc);
                for (double s : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
                    if (s >= 0.0 && s <= 1.0) pts.push_back(dot(a + s * e, d));
                }
            }
        }
    }
    if (!(tmax > tmin)) return {};
    pts.push_back(0.0);
    if (rule.feature_scale > 0.0) {
        const double extent = std::max(std::abs(tmin), std::abs(tmax));
        for (double h = 1.0 / rule.feature_scale; h < extent; h *= 2.0) {
            pts.push_back(h);
            pts.push_back(-h);
        }
    }
    for (double b : rule.extra_breaks) pts.push_back(b);
    std::vector<double> out;
    out.reserve(pts.size() + 2);
    out.push_back(tmin);
    for (double t : pts) {
        if (t > tmin && t < tmax) out.push_back(t);
    }
    out.push_back(tmax);
    std::sort(out.begin(), out.end());
    const double tiny = 1e-14 * std::max(1.0, tmax - tmin);
    std::vector<double> uniq;
    uniq.reserve(out.size());
    for (double t : out) {
        if (uniq.empty() || t - uniq.back() > tiny) uniq.push_back(t);
    }
    if (uniq.size() >= 2 && tmax - uniq.back() <= tiny) uniq.back() = tmax;
    return uniq;
}

/// Integral over the cell of f(t, u). T must support `T{}`, `+=` and `* double`.
template <class T, class F>
T integrate_cell(const ConvexCell& cell, Point2 d, F&& f, const SliceRule& rule = {}) {
    T total{};
    if (cell.empty()) return total;
    const std::vector<double> breaks = slice_breakpoints(cell, d, rule);
    if (breaks.size() < 2) return total;
    const std::vector<HalfPlane> planes = cell.halfplanes();
    const oracle::GaussRule& outer = oracle::gauss_legendre(rule.order);
    const oracle::GaussRule& inner = oracle::gauss_legendre(rule.inner_nodes);
    const auto& disk = cell.disk_radius();

    auto add_slice = [&](double t, double weight) {
        const Chord c = chord_at(cell, d, t, planes);
        if (c.empty()) return;
        const double half = 0.5 * (c.hi - c.lo);
        const double mid = 0.5 * (c.hi + c.lo);
        for (std::size_t k = 0; k < inner.nodes.size(); ++k) {
            const double u = mid + half * inner.nodes[k];
            total += f(t, u) * (weight * half * inner.weights[k]);
        }
    };

    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p];
        const double b = breaks[p + 1];
        if (disk) {
            const double rho = *disk;
            const double pa = std::asin(std::clamp(a / rho, -1.0, 1.0));
            const double pb = std::asin(std::clamp(b / rho, -1.0, 1.0));
            const double hp = 0.5 * (pb - pa);
            const double mp = 0.5 * (pb + pa);
            for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
                const double phi = mp + hp * outer.nodes[i];
                add_slice(rho * std::sin(phi), outer.weights[i] * hp * rho * std::cos(phi));
            }
        } else {
            const double h = 0.5 * (b - a);
            const double m = 0.5 * (b + a);
            for (std::size_t i = 0; i < outer.nodes.size(); ++i) add_slice(m + h * outer.nodes[i], outer.weights[i] * h);
        }
    }
    return total;
}

/// Small fixed-size accumulator for vector-valued integrands.
template <std::size_t N>
struct Accum {
    std::array<double, N> v{};
    Accum& operator+=(const Accum& o) {
        for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
        return *this;
    }
    friend Accum operator*(Accum a, double c) {
        for (double& x : a.v) x *= c;
        return a;
    }
    double operator[](std::size_t i) const { return v[i]; }
};

}  // namespace halfspace::geom
