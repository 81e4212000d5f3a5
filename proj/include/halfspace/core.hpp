#pragma once

// Vector geometry shared by every other module: dense vectors, angles,
// projections onto the ball and onto the warm-start halfspace, and sign
// prediction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace halfspace {

/// Dense real vector. Used for both feature points and weight vectors.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
    Vector(std::initializer_list<double> init) : data_(init) {}
    explicit Vector(std::vector<double> coords) : data_(std::move(coords)) {}

    static Vector unit(std::size_t dim, std::size_t axis) {
        Vector v(dim);
        v[axis] = 1.0;
        return v;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    [[nodiscard]] std::span<const double> coords() const noexcept { return data_; }
    [[nodiscard]] std::span<double> coords() noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    Vector& operator+=(const Vector& o) {
        require_same_dim(o);
        for (std::size_t i = 0; i < dim(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vector& operator-=(const Vector& o) {
        require_same_dim(o);
        for (std::size_t i = 0; i < dim(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vector& operator*=(double c) noexcept {
        for (double& x : data_) x *= c;
        return *this;
    }

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(Vector a, double c) { return a *= c; }
    friend Vector operator*(double c, Vector a) { return a *= c; }
    friend Vector operator-(Vector a) { return a *= -1.0; }

    friend bool operator==(const Vector&, const Vector&) = default;

    [[nodiscard]] bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

private:
    void require_same_dim(const Vector& o) const {
        if (o.dim() != dim()) throw std::domain_error("vector dimension mismatch");
    }

    std::vector<double> data_;
};

using FeatureVector = Vector;
using WeightVector = Vector;

/// Binary label in {-1, +1}.
class Label {
public:
    constexpr Label() = default;
    constexpr explicit Label(int v) : value_(v) {
        if (v != 1 && v != -1) throw std::domain_error("label must be -1 or +1");
    }
    static constexpr Label positive() { return Label(1); }
    static constexpr Label negative() { return Label(-1); }

    [[nodiscard]] constexpr int value() const noexcept { return value_; }
    [[nodiscard]] constexpr double as_real() const noexcept { return static_cast<double>(value_); }
    [[nodiscard]] constexpr Label flipped() const noexcept { return value_ > 0 ? negative() : positive(); }

    friend constexpr bool operator==(Label, Label) = default;

private:
    int value_ = 1;
};

struct LabeledExample {
    FeatureVector x;
    Label y;
};

/// Angle between two vectors, in [0, pi].
class Radians {
public:
    constexpr Radians() = default;
    constexpr explicit Radians(double v) : value_(v) {}
    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    friend constexpr auto operator<=>(Radians, Radians) = default;

private:
    double value_ = 0.0;
};

inline double dot(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw std::domain_error("vector dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vector& a) {
    // hypot-style scaling keeps huge and tiny coordinates finite
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double x : a) {
        const double r = x / scale;
        s += r * r;
    }
    return scale * std::sqrt(s);
}

inline Vector normalized(const Vector& a) {
    const double n = norm(a);
    if (!(n > 0.0)) throw std::domain_error("cannot normalize a zero vector");
    return a * (1.0 / n);
}

/// Angle between u and v. Uses the chord length of the normalized vectors
/// so that nearly parallel (or antiparallel) inputs keep full relative accuracy.
inline Radians angle_between(const Vector& u, const Vector& v) {
    if (u.dim() != v.dim()) throw std::domain_error("vector dimension mismatch");
    const double nu = norm(u);
    const double nv = norm(v);
    if (!(nu > 0.0) || !(nv > 0.0)) throw std::domain_error("angle_between: zero vector");
    double diff2 = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        const double a = u[i] / nu;
        const double b = v[i] / nv;
        diff2 += (a - b) * (a - b);
        sum2 += (a + b) * (a + b);
    }
    const double diff = std::sqrt(diff2);
    const double sum = std::sqrt(sum2);
    if (diff <= sum) return Radians(2.0 * std::asin(std::min(1.0, diff / 2.0)));
    return Radians(std::numbers::pi - 2.0 * std::asin(std::min(1.0, sum / 2.0)));
}

/// Euclidean projection onto the closed ball of the given radius.
inline Vector project_ball(const Vector& w, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("project_ball: radius must be positive");
    const double n = norm(w);
    if (n <= radius) return w;
    double c = radius / n;
    Vector out = w * c;
    while (norm(out) > radius) {
        c = std::nextafter(c, 0.0);
        out = w * c;
    }
    return out;
}

/// Euclidean projection onto D = {w : <w, v> >= 1}; v must be a unit vector.
inline Vector project_halfspace(const Vector& w, const Vector& v) {
    if (std::abs(norm(v) - 1.0) > 1e-12) throw std::domain_error("project_halfspace: anchor must be a unit vector");
    const double ip = dot(w, v);
    if (ip >= 1.0) return w;
    Vector out = w;
    const double shift = 1.0 - ip;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] += shift * v[i];
    return out;
}

/// sign(<w, x>) with the convention sign(0) = +1.
inline Label sign_predict(const Vector& w, const Vector& x) {
    return dot(w, x) >= 0.0 ? Label::positive() : Label::negative();
}

inline double sign_of(double z) noexcept { return z >= 0.0 ? 1.0 : -1.0; }

}  // namespace halfspace
