#pragma once

// Risk functionals: exact (quadrature / closed-form geometry) risks of planar
// layered densities, empirical risks and gradients, Monte Carlo zero-one
// estimates, and the three-term decomposition of a risk gap.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "halfspace/cell_integration.hpp"
#include "halfspace/core.hpp"
#include "halfspace/distributions.hpp"
#include "halfspace/losses.hpp"

namespace halfspace {

struct RiskReport {
    double logistic = 0.0;
    double hinge = 0.0;
    double zero_one = 0.0;
    double angle = 0.0;  // to the ground truth, radians
    double norm = 0.0;
};

inline void to_json(nlohmann::json& j, const RiskReport& r) {
    j = nlohmann::json{{"logistic", r.logistic}, {"hinge", r.hinge}, {"zero_one", r.zero_one}, {"angle", r.angle},
                       {"norm", r.norm}};
}

inline void from_json(const nlohmann::json& j, RiskReport& r) {
    r.logistic = j.at("logistic").get<double>();
    r.hinge = j.at("hinge").get<double>();
    r.zero_one = j.at("zero_one").get<double>();
    r.angle = j.at("angle").get<double>();
    r.norm = j.at("norm").get<double>();
}

struct QuadOptions {
    int order = 12;
    bool estimate_error = false;
};

struct QuadValue {
    double value = 0.0;
    double error = 0.0;  // |I(order) - I(2 order)| when estimated
};

namespace detail {

inline geom::Point2 to_point(const Vector& w) {
    if (w.dim() != 2) throw std::domain_error("planar risk: weight vector must be 2D");
    return {w[0], w[1]};
}

/// Unit direction of w (e1 for w = 0) and its norm.
inline std::pair<geom::Point2, double> direction_and_scale(const Vector& w) {
    const geom::Point2 p = to_point(w);
    const double n = std::hypot(p.x, p.y);
    if (n == 0.0) return {{1.0, 0.0}, 0.0};
    return {{p.x / n, p.y / n}, n};
}

inline double layered_risk(const LayeredDensity& ld, LossKind kind, const Vector& w, int order) {
    const auto [d, scale] = direction_and_scale(w);
    double total = 0.0;
    for (const Layer& l : ld.layers) {
        const double s = l.label.as_real();
        geom::SliceRule rule;
        rule.order = order;
        rule.feature_scale = scale;
        if (kind.tag() == LossKind::Tag::TruncatedLogistic && scale > 0.0) {
            rule.extra_breaks.push_back(kind.threshold() / (s * scale));
        }
        auto f = [&](double t, double) { return loss_value(kind, s * scale * t); };
        total += l.density * geom::integrate_cell<double>(l.cell, d, f, rule);
    }
    return total;
}

inline Vector layered_grad(const LayeredDensity& ld, LossKind kind, const Vector& w, int order) {
    const auto [d, scale] = direction_and_scale(w);
    const geom::Point2 p = geom::perp(d);
    double gt = 0.0;
    double gu = 0.0;
    for (const Layer& l : ld.layers) {
        const double s = l.label.as_real();
        geom::SliceRule rule;
        rule.order = order;
        rule.feature_scale = scale;
        if (kind.tag() == LossKind::Tag::TruncatedLogistic && scale > 0.0) {
            rule.extra_breaks.push_back(kind.threshold() / (s * scale));
        }
        auto f = [&](double t, double u) {
            const double c = loss_deriv(kind, s * scale * t) * s;
            return geom::Accum<2>{{c * t, c * u}};
        };
        const auto acc = geom::integrate_cell<geom::Accum<2>>(l.cell, d, f, rule) * l.density;
        gt += acc[0];
        gu += acc[1];
    }
    return Vector{gt * d.x + gu * p.x, gt * d.y + gu * p.y};
}

}  // namespace detail

/// Population risk E[l(y <w, x>)] of a planar layered density.
inline QuadValue population_risk(const LayeredDensity& ld, LossKind kind, const Vector& w, const QuadOptions& o = {}) {
    QuadValue out;
    out.value = detail::layered_risk(ld, kind, w, o.estimate_error ? 2 * o.order : o.order);
    if (o.estimate_error) out.error = std::abs(out.value - detail::layered_risk(ld, kind, w, o.order));
    return out;
}

inline Vector population_grad(const LayeredDensity& ld, LossKind kind, const Vector& w, const QuadOptions& o = {}) {
    return detail::layered_grad(ld, kind, w, o.order);
}

inline double population_risk_q(const LowerBoundParams& p, LossKind kind, const WeightVector& w) {
    return population_risk(p.layers(), kind, w).value;
}

/// Gradient of the population logistic risk of Q.
inline WeightVector population_grad_q(const LowerBoundParams& p, const WeightVector& w) {
    return population_grad(p.layers(), LossKind::logistic(), w);
}

/// Exact zero-one risk by halfplane/cell intersection areas.
inline double zero_one_risk(const LayeredDensity& ld, const Vector& w) {
    const geom::Point2 wp = detail::to_point(w);
    if (wp.x == 0.0 && wp.y == 0.0) throw std::domain_error("zero_one_risk: w must be nonzero");
    double total = 0.0;
    for (const Layer& l : ld.layers) {
        const double s = l.label.as_real();
        // mistakes: s * <w, x> < 0
        total += l.density * l.cell.clipped({s * wp, 0.0}).area();
    }
    return total;
}

inline double zero_one_risk_q(const LowerBoundParams& p, const WeightVector& w) { return zero_one_risk(p.layers(), w); }

/// Marginal mass where sign(<a, x>) != sign(<b, x>).
inline double disagreement_mass(const LayeredDensity& ld, const Vector& a, const Vector& b) {
    const geom::Point2 pa = detail::to_point(a);
    const geom::Point2 pb = detail::to_point(b);
    double total = 0.0;
    for (const Layer& l : ld.layers) {
        const geom::ConvexCell pos_a = l.cell.clipped({-1.0 * pa, 0.0});
        const geom::ConvexCell neg_a = l.cell.clipped({pa, 0.0});
        total += l.density * (pos_a.clipped({pb, 0.0}).area() + neg_a.clipped({-1.0 * pb, 0.0}).area());
    }
    return total;
}

/// Mean loss over the sample, summed sequentially in index order.
inline double empirical_risk(const std::vector<LabeledExample>& data, LossKind kind, const WeightVector& w) {
    if (data.empty()) throw std::domain_error("empirical_risk: empty sample");
    double s = 0.0;
    for (const auto& ex : data) s += loss_value(kind, ex.y.as_real() * dot(w, ex.x));
    return s / static_cast<double>(data.size());
}

inline WeightVector empirical_grad(const std::vector<LabeledExample>& data, LossKind kind, const WeightVector& w) {
    if (data.empty()) throw std::domain_error("empirical_grad: empty sample");
    const std::size_t d = w.dim();
    std::vector<double> g(d, 0.0);
    for (const auto& ex : data) {
        const double y = ex.y.as_real();
        double z = 0.0;
        for (std::size_t i = 0; i < d; ++i) z += w[i] * ex.x[i];
        const double c = loss_deriv(kind, y * z) * y;
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < d; ++i) g[i] += c * ex.x[i];
    }
    const double inv = 1.0 / static_cast<double>(data.size());
    for (double& v : g) v *= inv;
    return Vector(std::move(g));
}

inline double empirical_zero_one(const std::vector<LabeledExample>& data, const WeightVector& w) {
    if (data.empty()) throw std::domain_error("empirical_zero_one: empty sample");
    std::size_t wrong = 0;
    for (const auto& ex : data) wrong += sign_predict(w, ex.x) != ex.y;
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

/// Fraction of disagreements on n fresh evaluation-stream examples.
inline McEstimate mc_zero_one(const DistributionModel& m, const WeightVector& w, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("mc_zero_one: n must be >= 1");
    if (!(norm(w) > 0.0)) throw std::domain_error("mc_zero_one: w must be nonzero");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledExample ex = draw_one(m, seed, i, rng::Stream::Evaluation);
        wrong += sign_predict(w, ex.x) != ex.y;
    }
    McEstimate e;
    e.n = n;
    e.estimate = static_cast<double>(wrong) / static_cast<double>(n);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
    return e;
}

/// Monte Carlo estimate of M(w) = E[-l_h'(y <w, x>)] on the same stream as mc_zero_one.
inline McEstimate hinge_m(const DistributionModel& m, const WeightVector& w, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("hinge_m: n must be >= 1");
    if (!(norm(w) > 0.0)) throw std::domain_error("hinge_m: w must be nonzero");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledExample ex = draw_one(m, seed, i, rng::Stream::Evaluation);
        s += -hinge_deriv(ex.y.as_real() * dot(w, ex.x));
    }
    McEstimate e;
    e.n = n;
    e.estimate = s / static_cast<double>(n);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
    return e;
}

/// R(w_hat) - R(w_bar) with w_bar = |w_hat| u_bar, split into
///   label_swap : E[1{y != sign<w_bar,x>} y <w_bar - w_hat, x>]
///   angle_gap  : E[l(sign<w_bar,x> <w_hat,x>) - l(|<w_hat,x>|)]
///   rotation   : E[l(|<w_hat,x>|) - l(|<w_bar,x>|)]
struct DecompositionReport {
    double term_label_swap = 0.0;
    double term_angle_gap = 0.0;
    double term_rotation = 0.0;
    double total_gap = 0.0;
    double epsilon_ell = 0.0;

    [[nodiscard]] double sum_of_terms() const { return term_label_swap + term_angle_gap + term_rotation; }
};

inline void to_json(nlohmann::json& j, const DecompositionReport& r) {
    j = nlohmann::json{{"term_label_swap", r.term_label_swap}, {"term_angle_gap", r.term_angle_gap},
                       {"term_rotation", r.term_rotation},     {"total_gap", r.total_gap},
                       {"epsilon_ell", r.epsilon_ell}};
}

/// Quadrature decomposition for a planar layered density with ground truth u_bar.
inline DecompositionReport decomposition_terms(const LayeredDensity& ld, const Vector& u_bar, LossKind kind,
                                               const WeightVector& w_hat, int order = 24) {
    const double nh = norm(w_hat);
    if (!(nh > 0.0)) throw std::domain_error("decomposition_terms: w_hat must be nonzero");
    const Vector u = normalized(u_bar);
    const Vector w_bar = u * nh;
    const geom::Point2 up = detail::to_point(u);
    const geom::Point2 dh{w_hat[0] / nh, w_hat[1] / nh};
    const geom::Point2 diff = detail::to_point(w_bar - w_hat);

    DecompositionReport r;
    r.total_gap = detail::layered_risk(ld, kind, w_hat, order) - detail::layered_risk(ld, kind, w_bar, order);

    geom::SliceRule lin;
    lin.order = order;
    geom::SliceRule graded = lin;
    graded.feature_scale = nh;

    for (const Layer& l : ld.layers) {
        const double s = l.label.as_real();
        // label disagrees with sign(<u, x>) where s <u, x> < 0
        const geom::ConvexCell wrong = l.cell.clipped({s * up, 0.0});
        auto lin_f = [&](double t, double v) {
            const geom::Point2 x = t * up + v * geom::perp(up);
            return s * geom::dot(diff, x);
        };
        r.term_label_swap += l.density * geom::integrate_cell<double>(wrong, up, lin_f, lin);

        const geom::ConvexCell upper = l.cell.clipped({-1.0 * up, 0.0});  // <u, x> >= 0
        const geom::ConvexCell lower = l.cell.clipped({up, 0.0});         // <u, x> <= 0
        auto gap_f = [&](double sigma) {
            return [&, sigma](double t, double) {
                const double z = nh * t;
                return loss_value(kind, sigma * z) - loss_value(kind, std::abs(z));
            };
        };
        r.term_angle_gap += l.density * (geom::integrate_cell<double>(upper, dh, gap_f(1.0), graded) +
                                         geom::integrate_cell<double>(lower, dh, gap_f(-1.0), graded));

        auto abs_f = [&](double t, double) { return loss_value(kind, nh * std::abs(t)); };
        r.term_rotation += l.density * (geom::integrate_cell<double>(l.cell, dh, abs_f, graded) -
                                        geom::integrate_cell<double>(l.cell, up, abs_f, graded));
    }
    r.epsilon_ell = std::max(0.0, r.total_gap);
    return r;
}

inline DecompositionReport decomposition_terms(const DistributionModel& m, LossKind kind, const WeightVector& w_hat) {
    return decomposition_terms(m.require_layers(), m.ground_truth, kind, w_hat);
}

inline DecompositionReport decomposition_terms(const LowerBoundParams& p, LossKind kind, const WeightVector& w_hat) {
    return decomposition_terms(p.layers(), Vector{1.0, 0.0}, kind, w_hat);
}

/// E[1{y != sign<u, x>} |<w, x>|] for a planar layered density.
inline double mislabeled_abs_margin(const LayeredDensity& ld, const Vector& u, const Vector& w) {
    const geom::Point2 up = detail::to_point(normalized(u));
    const geom::Point2 wp = detail::to_point(w);
    const double nw = std::hypot(wp.x, wp.y);
    if (nw == 0.0) return 0.0;
    const geom::Point2 d{wp.x / nw, wp.y / nw};
    geom::SliceRule rule;
    rule.order = 24;
    double total = 0.0;
    for (const Layer& l : ld.layers) {
        const geom::ConvexCell wrong = l.cell.clipped({l.label.as_real() * up, 0.0});
        total += l.density * geom::integrate_cell<double>(wrong, d, [&](double t, double) { return nw * std::abs(t); }, rule);
    }
    return total;
}

/// Sample version of the decomposition; the identity holds exactly on the sample.
inline DecompositionReport decomposition_terms_mc(const std::vector<LabeledExample>& data, const Vector& u_bar,
                                                  LossKind kind, const WeightVector& w_hat) {
    if (data.empty()) throw std::domain_error("decomposition_terms_mc: empty sample");
    const double nh = norm(w_hat);
    if (!(nh > 0.0)) throw std::domain_error("decomposition_terms_mc: w_hat must be nonzero");
    const Vector w_bar = normalized(u_bar) * nh;
    DecompositionReport r;
    double t4 = 0.0;
    double t5 = 0.0;
    double t6 = 0.0;
    double gap = 0.0;
    for (const auto& ex : data) {
        const double y = ex.y.as_real();
        const double zb = dot(w_bar, ex.x);
        const double zh = dot(w_hat, ex.x);
        const double sb = sign_of(zb);
        if (y != sb) t4 += y * (zb - zh);
        t5 += loss_value(kind, sb * zh) - loss_value(kind, std::abs(zh));
        t6 += loss_value(kind, std::abs(zh)) - loss_value(kind, std::abs(zb));
        gap += loss_value(kind, y * zh) - loss_value(kind, y * zb);
    }
    const double inv = 1.0 / static_cast<double>(data.size());
    r.term_label_swap = t4 * inv;
    r.term_angle_gap = t5 * inv;
    r.term_rotation = t6 * inv;
    r.total_gap = gap * inv;
    r.epsilon_ell = std::max(0.0, r.total_gap);
    return r;
}

/// Exact report for planar layered models.
inline RiskReport exact_risk_report(const DistributionModel& m, const WeightVector& w) {
    const LayeredDensity& ld = m.require_layers();
    RiskReport r;
    r.logistic = population_risk(ld, LossKind::logistic(), w).value;
    r.hinge = population_risk(ld, LossKind::hinge(), w).value;
    r.norm = norm(w);
    r.zero_one = r.norm > 0.0 ? zero_one_risk(ld, w) : 1.0;
    r.angle = r.norm > 0.0 ? angle_between(w, m.ground_truth).value() : std::numbers::pi / 2.0;
    return r;
}

/// Report estimated on n evaluation-stream examples.
inline RiskReport mc_risk_report(const DistributionModel& m, const WeightVector& w, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("mc_risk_report: n must be >= 1");
    RiskReport r;
    double lg = 0.0;
    double hg = 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledExample ex = draw_one(m, seed, i, rng::Stream::Evaluation);
        const double z = ex.y.as_real() * dot(w, ex.x);
        lg += logistic_loss(z);
        hg += hinge_loss(z);
        wrong += sign_predict(w, ex.x) != ex.y;
    }
    r.logistic = lg / static_cast<double>(n);
    r.hinge = hg / static_cast<double>(n);
    r.zero_one = static_cast<double>(wrong) / static_cast<double>(n);
    r.norm = norm(w);
    r.angle = r.norm > 0.0 ? angle_between(w, m.ground_truth).value() : std::numbers::pi / 2.0;
    return r;
}

/// Exact report when the model has layers, else Monte Carlo with n examples.
inline RiskReport risk_report(const DistributionModel& m, const WeightVector& w, std::size_t mc_n = 200'000,
                              std::uint64_t seed = 0) {
    if (m.has_exact_layers() && w.dim() == 2) return exact_risk_report(m, w);
    return mc_risk_report(m, w, mc_n, seed);
}

}  // namespace halfspace
