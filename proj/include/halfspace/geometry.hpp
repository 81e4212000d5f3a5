#pragma once

// Planar convex cells (convex polygon, optionally intersected with a
// centered disk) and closed-form areas. Every region of the built-in 2D
// distributions is a union of such cells.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace halfspace::geom {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double c, Point2 a) { return {c * a.x, c * a.y}; }
    friend bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point2 a) { return dot(a, a); }
/// Counterclockwise quarter turn.
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }

/// Closed halfplane {x : <normal, x> <= offset}.
struct HalfPlane {
    Point2 normal;
    double offset = 0.0;

    [[nodiscard]] double eval(Point2 p) const { return dot(normal, p) - offset; }
};

using Polygon = std::vector<Point2>;

/// Signed shoelace area (positive for counterclockwise order).
inline double polygon_area(const Polygon& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * s;
}

/// Sutherland-Hodgman clip of a convex polygon by one halfplane.
inline Polygon clip(const Polygon& poly, const HalfPlane& h) {
    Polygon out;
    const std::size_t n = poly.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = poly[i];
        const Point2 q = poly[(i + 1) % n];
        const double fp = h.eval(p);
        const double fq = h.eval(q);
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            const double s = fp / (fp - fq);
            out.push_back(p + s * (q - p));
        }
    }
    if (out.size() < 3) out.clear();
    return out;
}

/// Signed area of triangle (origin, a, b) intersected with the disk of radius r.
inline double triangle_disk_area(Point2 a, Point2 b, double r) {
    const Point2 d = b - a;
    const double qa = norm2(d);
    if (qa == 0.0) return 0.0;
    const double qb = 2.0 * dot(a, d);
    const double qc = norm2(a) - r * r;
    double params[4] = {0.0, 0.0, 0.0, 1.0};
    int count = 1;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double s1 = (-qb - sq) / (2.0 * qa);
        const double s2 = (-qb + sq) / (2.0 * qa);
        if (s1 > 0.0 && s1 < 1.0) params[count++] = s1;
        if (s2 > 0.0 && s2 < 1.0) params[count++] = s2;
    }
    params[count++] = 1.0;
    double area = 0.0;
    for (int i = 0; i + 1 < count; ++i) {
        const Point2 p = a + params[i] * d;
        const Point2 q = a + params[i + 1] * d;
        const Point2 mid = 0.5 * (p + q);
        if (norm2(mid) <= r * r) {
            area += 0.5 * cross(p, q);
        } else {
            area += 0.5 * r * r * std::atan2(cross(p, q), dot(p, q));
        }
    }
    return area;
}

/// Area of a counterclockwise convex polygon intersected with the centered disk.
inline double polygon_disk_area(const Polygon& poly, double r) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) s += triangle_disk_area(poly[i], poly[(i + 1) % n], r);
    return s;
}

/// Convex polygon, optionally intersected with the disk of radius `disk_radius`
/// centered at the origin. Polygon vertices are stored counterclockwise.
class ConvexCell {
public:
    ConvexCell() = default;
    explicit ConvexCell(Polygon poly, std::optional<double> disk_radius = std::nullopt)
        : poly_(std::move(poly)), disk_(disk_radius) {
        if (!poly_.empty() && polygon_area(poly_) < 0.0) std::reverse(poly_.begin(), poly_.end());
        if (disk_ && !(*disk_ > 0.0)) throw std::domain_error("disk radius must be positive");
    }

    static ConvexCell rectangle(double x0, double x1, double y0, double y1) {
        return ConvexCell(Polygon{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
    }
    static ConvexCell square(Point2 center, double edge) {
        const double h = 0.5 * edge;
        return rectangle(center.x - h, center.x + h, center.y - h, center.y + h);
    }
    /// Disk of radius r intersected with {<n, x> <= 0}: a half disk.
    static ConvexCell half_disk(double r, Point2 outward_normal) {
        const double pad = 1.0 + 1e-9;
        ConvexCell box = rectangle(-r * pad, r * pad, -r * pad, r * pad);
        box.poly_ = clip(box.poly_, HalfPlane{outward_normal, 0.0});
        box.disk_ = r;
        return box;
    }
    static ConvexCell disk(double r) {
        const double pad = 1.0 + 1e-9;
        ConvexCell box = rectangle(-r * pad, r * pad, -r * pad, r * pad);
        box.disk_ = r;
        return box;
    }

    [[nodiscard]] const Polygon& polygon() const noexcept { return poly_; }
    [[nodiscard]] const std::optional<double>& disk_radius() const noexcept { return disk_; }
    [[nodiscard]] bool empty() const noexcept { return poly_.size() < 3; }

    [[nodiscard]] ConvexCell clipped(const HalfPlane& h) const {
        ConvexCell out;
        out.poly_ = clip(poly_, h);
        out.disk_ = disk_;
        return out;
    }

    [[nodiscard]] double area() const {
        if (empty()) return 0.0;
        if (disk_) return polygon_disk_area(poly_, *disk_);
        return polygon_area(poly_);
    }

    [[nodiscard]] bool contains(Point2 p) const {
        if (empty()) return false;
        if (disk_ && norm2(p) > (*disk_) * (*disk_)) return false;
        const std::size_t n = poly_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (cross(poly_[(i + 1) % n] - poly_[i], p - poly_[i]) < 0.0) return false;
        }
        return true;
    }

    [[nodiscard]] double max_radius() const {
        double m = 0.0;
        for (const Point2& p : poly_) m = std::max(m, std::sqrt(norm2(p)));
        if (disk_) m = std::min(m, *disk_);
        return m;
    }

    /// Edge halfplanes of the polygon.
    [[nodiscard]] std::vector<HalfPlane> halfplanes() const {
        std::vector<HalfPlane> hs;
        const std::size_t n = poly_.size();
        hs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = poly_[i];
            const Point2 b = poly_[(i + 1) % n];
            const Point2 e = b - a;
            const Point2 nrm{e.y, -e.x};  // outward for counterclockwise order
            hs.push_back({nrm, dot(nrm, a)});
        }
        return hs;
    }

private:
    Polygon poly_;
    std::optional<double> disk_;
};

}  // namespace halfspace::geom
