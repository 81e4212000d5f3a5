#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace halfspace {

/// Surrogate loss applied to the margin z = y<w, x>.
class LossKind {
public:
    enum class Tag { Logistic, Hinge, TruncatedLogistic };

    static constexpr LossKind logistic() { return LossKind(Tag::Logistic, 0.0); }
    static constexpr LossKind hinge() { return LossKind(Tag::Hinge, 0.0); }
    /// Logistic loss clamped to its value at `threshold` for z <= threshold.
    static LossKind truncated_logistic(double threshold) {
        if (!(threshold < 0.0)) throw std::domain_error("truncated logistic threshold must be negative");
        return LossKind(Tag::TruncatedLogistic, threshold);
    }

    [[nodiscard]] constexpr Tag tag() const noexcept { return tag_; }
    [[nodiscard]] constexpr double threshold() const noexcept { return threshold_; }
    [[nodiscard]] constexpr bool is_hinge() const noexcept { return tag_ == Tag::Hinge; }

    [[nodiscard]] std::string name() const {
        switch (tag_) {
            case Tag::Logistic: return "logistic";
            case Tag::Hinge: return "hinge";
            case Tag::TruncatedLogistic: return "truncated_logistic";
        }
        return "unknown";
    }

    friend constexpr bool operator==(LossKind, LossKind) = default;

private:
    constexpr LossKind(Tag t, double th) : tag_(t), threshold_(th) {}
    Tag tag_;
    double threshold_;
};

/// ln(1 + e^{-z}) without overflow.
inline double logistic_loss(double z) noexcept {
    if (z < -30.0) return -z + std::log1p(std::exp(z));
    return std::log1p(std::exp(-z));
}

/// d/dz ln(1 + e^{-z}) = -1 / (1 + e^{z}).
inline double logistic_deriv(double z) noexcept {
    if (z > 30.0) {
        const double e = std::exp(-z);
        return -e / (1.0 + e);
    }
    return -1.0 / (1.0 + std::exp(z));
}

inline double hinge_loss(double z) noexcept { return z < 0.0 ? -z : 0.0; }

/// Hinge subgradient with l'(0) = -1.
inline double hinge_deriv(double z) noexcept { return z <= 0.0 ? -1.0 : 0.0; }

inline double loss_value(LossKind kind, double z) noexcept {
    switch (kind.tag()) {
        case LossKind::Tag::Logistic: return logistic_loss(z);
        case LossKind::Tag::Hinge: return hinge_loss(z);
        case LossKind::Tag::TruncatedLogistic: return logistic_loss(z < kind.threshold() ? kind.threshold() : z);
    }
    return 0.0;
}

inline double loss_deriv(LossKind kind, double z) noexcept {
    switch (kind.tag()) {
        case LossKind::Tag::Logistic: return logistic_deriv(z);
        case LossKind::Tag::Hinge: return hinge_deriv(z);
        case LossKind::Tag::TruncatedLogistic: return z < kind.threshold() ? 0.0 : logistic_deriv(z);
    }
    return 0.0;
}

}  // namespace halfspace
