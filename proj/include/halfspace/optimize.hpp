#pragma once

// Projected gradient descent on empirical logistic risk over a ball,
// projected SGD on hinge loss over {w : <w, v> >= 1}, the two-phase driver,
// and the quadrature-backed global minimizer of the population logistic risk.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halfspace/core.hpp"
#include "halfspace/distributions.hpp"
#include "halfspace/losses.hpp"
#include "halfspace/oracle.hpp"
#include "halfspace/risk.hpp"

namespace halfspace {

struct PgdConfig {
    double epsilon = 0.01;
    std::optional<double> eta;  // defaults to 4/B^2, or 1/(d ln(d/eps)^2) without a support bound
    std::size_t T = 2000;
    std::size_t n = 100'000;
    std::uint64_t seed = 0;
    LossKind loss = LossKind::logistic();
    std::size_t eval_n = 20'000;  // Monte Carlo size for reports on models without layers

    [[nodiscard]] double radius() const { return 1.0 / std::sqrt(epsilon); }

    [[nodiscard]] double step_size(const DistributionModel& m) const {
        if (eta) return *eta;
        if (m.support_bound) return 4.0 / (*m.support_bound * *m.support_bound);
        const double d = static_cast<double>(m.dim);
        const double l = std::log(d / epsilon);
        return 1.0 / (d * l * l);
    }

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("PgdConfig: epsilon must lie in (0, 1)");
        if (eta && !(*eta > 0.0)) throw std::domain_error("PgdConfig: eta must be positive");
        if (T < 1) throw std::domain_error("PgdConfig: T must be >= 1");
        if (n < 1) throw std::domain_error("PgdConfig: n must be >= 1");
        if (loss.is_hinge()) throw std::domain_error("PgdConfig: loss must be logistic or truncated logistic");
    }
};

struct SgdConfig {
    double eta = 0.01 / 8.0;
    std::size_t T = 100'000;
    WeightVector v;
    std::size_t eval_every = 100;
    std::size_t eval_n = 20'000;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(eta > 0.0)) throw std::domain_error("SgdConfig: eta must be positive");
        if (T < 1) throw std::domain_error("SgdConfig: T must be >= 1");
        if (eval_every < 1) throw std::domain_error("SgdConfig: eval_every must be >= 1");
        if (eval_n < 1) throw std::domain_error("SgdConfig: eval_n must be >= 1");
        if (v.dim() == 0 || std::abs(norm(v) - 1.0) > 1e-12) throw std::domain_error("SgdConfig: anchor must be a unit vector");
    }
};

struct TrajectoryPoint {
    std::size_t step = 0;
    WeightVector w;
    RiskReport report;
    double empirical_risk = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    std::size_t best_iterate = 0;   // index into points
    std::vector<double> empirical_path;  // PGD: empirical risk at every step 0..T
    double min_anchor_inner = std::numeric_limits<double>::quiet_NaN();  // phase 2: min_t <w_t, v>
    bool exact_evaluation = false;
    double eta = 0.0;

    [[nodiscard]] const TrajectoryPoint& best() const { return points.at(best_iterate); }
    [[nodiscard]] const TrajectoryPoint& last() const { return points.back(); }

    /// Largest increase R(w_{t+1}) - R(w_t) along the empirical path (<= 0 when monotone).
    [[nodiscard]] double max_empirical_increase() const {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < empirical_path.size(); ++i) {
            worst = std::max(worst, empirical_path[i] - empirical_path[i - 1]);
        }
        return worst;
    }
};

namespace detail {

inline std::size_t thin_stride(std::size_t T) { return std::max<std::size_t>(1, T / 1000); }

/// Mean loss and gradient in one pass.
inline double empirical_risk_and_grad(const std::vector<LabeledExample>& data, LossKind kind, const WeightVector& w,
                                      std::vector<double>& g) {
    const std::size_t d = w.dim();
    g.assign(d, 0.0);
    double risk = 0.0;
    for (const auto& ex : data) {
        const double y = ex.y.as_real();
        double z = 0.0;
        for (std::size_t i = 0; i < d; ++i) z += w[i] * ex.x[i];
        risk += loss_value(kind, y * z);
        const double c = loss_deriv(kind, y * z) * y;
        for (std::size_t i = 0; i < d; ++i) g[i] += c * ex.x[i];
    }
    const double inv = 1.0 / static_cast<double>(data.size());
    for (double& v : g) v *= inv;
    return risk * inv;
}

inline void pick_best(Trajectory& tr) {
    tr.best_iterate = 0;
    for (std::size_t i = 1; i < tr.points.size(); ++i) {
        if (tr.points[i].report.zero_one < tr.points[tr.best_iterate].report.zero_one) tr.best_iterate = i;
    }
}

}  // namespace detail

/// Full-batch projected gradient descent from w0 = 0 on n training samples.
inline Trajectory pgd_logistic(const DistributionModel& m, const PgdConfig& cfg) {
    cfg.validate();
    const std::vector<LabeledExample> data = sample(m, cfg.n, cfg.seed, rng::Stream::Training);
    const double eta = cfg.step_size(m);
    const double radius = cfg.radius();
    const bool exact = m.has_exact_layers() && m.dim == 2;
    const std::size_t stride = detail::thin_stride(cfg.T);

    Trajectory tr;
    tr.exact_evaluation = exact;
    tr.eta = eta;
    tr.empirical_path.reserve(cfg.T + 1);
    auto report = [&](const WeightVector& w) {
        return exact ? exact_risk_report(m, w) : mc_risk_report(m, w, cfg.eval_n, cfg.seed);
    };

    WeightVector w(m.dim);
    std::vector<double> g;
    for (std::size_t t = 0;; ++t) {
        const double r = detail::empirical_risk_and_grad(data, cfg.loss, w, g);
        tr.empirical_path.push_back(r);
        if (t % stride == 0 || t == cfg.T) tr.points.push_back({t, w, report(w), r});
        if (t == cfg.T) break;
        for (std::size_t i = 0; i < m.dim; ++i) w[i] -= eta * g[i];
        w = project_ball(w, radius);
    }
    detail::pick_best(tr);
    return tr;
}

/// Projected SGD on hinge loss over {<w, v> >= 1}, one fresh sample per step.
/// Zero-one risk is evaluated every eval_every steps: exactly for planar
/// layered models, otherwise on a fixed held-out batch.
inline Trajectory sgd_hinge_phase2(const DistributionModel& m, const SgdConfig& cfg) {
    cfg.validate();
    if (cfg.v.dim() != m.dim) throw std::domain_error("sgd_hinge_phase2: anchor dimension mismatch");
    const bool exact = m.has_exact_layers() && m.dim == 2;
    std::vector<LabeledExample> held_out;
    if (!exact) held_out = sample(m, cfg.eval_n, cfg.seed, rng::Stream::Evaluation);

    Trajectory tr;
    tr.exact_evaluation = exact;
    tr.eta = cfg.eta;
    auto report = [&](const WeightVector& w) {
        if (exact) return exact_risk_report(m, w);
        RiskReport r;
        r.logistic = empirical_risk(held_out, LossKind::logistic(), w);
        r.hinge = empirical_risk(held_out, LossKind::hinge(), w);
        r.zero_one = empirical_zero_one(held_out, w);
        r.norm = norm(w);
        r.angle = angle_between(w, m.ground_truth).value();
        return r;
    };

    const std::size_t d = m.dim;
    WeightVector w = cfg.v;
    double min_inner = dot(w, cfg.v);
    for (std::size_t t = 0;; ++t) {
        if (t % cfg.eval_every == 0 || t == cfg.T) tr.points.push_back({t, w, report(w)});
        if (t == cfg.T) break;
        const LabeledExample ex = draw_one(m, cfg.seed, t, rng::Stream::SgdSteps);
        const double y = ex.y.as_real();
        double z = 0.0;
        for (std::size_t i = 0; i < d; ++i) z += w[i] * ex.x[i];
        const double c = hinge_deriv(y * z) * y;
        if (c != 0.0) {
            for (std::size_t i = 0; i < d; ++i) w[i] -= cfg.eta * c * ex.x[i];
            double inner = 0.0;
            for (std::size_t i = 0; i < d; ++i) inner += w[i] * cfg.v[i];
            if (inner < 1.0) {
                for (std::size_t i = 0; i < d; ++i) w[i] += (1.0 - inner) * cfg.v[i];
            }
            min_inner = std::min(min_inner, dot(w, cfg.v));
        }
    }
    tr.min_anchor_inner = min_inner;
    detail::pick_best(tr);
    return tr;
}

enum class EpsilonEllRule { SqrtEpsilon, EpsilonThreeHalves };

struct TwoPhaseOptions {
    EpsilonEllRule eps_ell = EpsilonEllRule::SqrtEpsilon;
    double samples_per_inverse_eps = 20.0;  // phase-1 n = ceil(c / eps)
    std::size_t max_samples = 200'000;
    std::size_t max_pgd_steps = 50'000;
    double eta_factor = 1.0 / 8.0;     // phase-2 eta = eta_factor * eps
    double steps_factor = 16.0;        // phase-2 T = ceil(c / eps^2)
    std::size_t evaluations = 1000;    // phase-2 evaluation points
    std::size_t eval_n = 20'000;
};

struct TwoPhaseResult {
    WeightVector v;
    Trajectory phase1;
    Trajectory phase2;
    RiskReport best;
    double phase1_angle = 0.0;
    double epsilon_ell = 0.0;
};

/// Phase-1 step count from the projected-GD rate radius^2 / (2 eta T) <= eps_ell.
inline std::size_t phase1_steps(double epsilon, double eta, double eps_ell, std::size_t cap) {
    const double T = std::ceil(1.0 / (epsilon * 2.0 * eta * eps_ell));
    return std::clamp<std::size_t>(static_cast<std::size_t>(T), 1, cap);
}

inline TwoPhaseResult two_phase(const DistributionModel& m, double epsilon, std::uint64_t seed,
                                const TwoPhaseOptions& o = {}) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / std::numbers::e)) throw std::domain_error("two_phase: epsilon must lie in (0, 1/e)");
    TwoPhaseResult res;
    res.epsilon_ell = o.eps_ell == EpsilonEllRule::SqrtEpsilon ? std::sqrt(epsilon) : std::pow(epsilon, 1.5);

    PgdConfig p;
    p.epsilon = epsilon;
    p.seed = seed;
    p.eval_n = o.eval_n;
    p.n = std::min<std::size_t>(o.max_samples, static_cast<std::size_t>(std::ceil(o.samples_per_inverse_eps / epsilon)));
    p.T = phase1_steps(epsilon, p.step_size(m), res.epsilon_ell, o.max_pgd_steps);
    res.phase1 = pgd_logistic(m, p);
    const WeightVector& w1 = res.phase1.last().w;
    if (!(norm(w1) > 0.0)) throw std::runtime_error("two_phase: phase 1 returned the zero vector");
    res.v = normalized(w1);
    res.phase1_angle = angle_between(res.v, m.ground_truth).value();

    SgdConfig s;
    s.eta = o.eta_factor * epsilon;
    s.T = static_cast<std::size_t>(std::ceil(o.steps_factor / (epsilon * epsilon)));
    s.v = res.v;
    s.eval_every = std::max<std::size_t>(1, s.T / std::max<std::size_t>(1, o.evaluations));
    s.eval_n = o.eval_n;
    s.seed = seed;
    res.phase2 = sgd_hinge_phase2(m, s);
    res.best = res.phase2.best().report;
    return res;
}

struct OracleReport {
    WeightVector w;
    double r = 0.0;
    double theta = 0.0;
    double logistic = 0.0;
    double zero_one = 0.0;
    double grad_norm = 0.0;
    double best_grid_value = 0.0;
    bool converged = false;
    bool grid_dominance = false;
    std::string message;
};

inline void to_json(nlohmann::json& j, const OracleReport& o) {
    j = nlohmann::json{{"w", std::vector<double>(o.w.begin(), o.w.end())},
                       {"r", o.r},
                       {"theta", o.theta},
                       {"logistic", o.logistic},
                       {"zero_one", o.zero_one},
                       {"grad_norm", o.grad_norm},
                       {"best_grid_value", o.best_grid_value},
                       {"converged", o.converged},
                       {"grid_dominance", o.grid_dominance},
                       {"message", o.message}};
}

/// Global minimizer of the population risk of a planar layered density by
/// polar grid scan plus local descent.
inline OracleReport oracle_global_min(const LayeredDensity& ld, LossKind kind, double r_max, double tol,
                                      int radial = 200, int angular = 720) {
    oracle::PolarBox box;
    box.r_max = r_max;
    box.radial_nodes = radial;
    box.angular_nodes = angular;
    oracle::MinimizeOptions mo;
    mo.grad_tol = tol;
    auto f = [&](const Vector& w) { return population_risk(ld, kind, w).value; };
    auto g = [&](const Vector& w) { return population_grad(ld, kind, w); };
    const oracle::MinimizeResult mr = oracle::grid_refine_minimize(f, g, box, mo);
    OracleReport o;
    o.w = mr.argmin;
    o.r = norm(o.w);
    o.theta = std::atan2(o.w[1], o.w[0]);
    o.logistic = mr.value;
    o.zero_one = o.r > 0.0 ? zero_one_risk(ld, o.w) : 1.0;
    o.grad_norm = mr.grad_norm;
    o.best_grid_value = mr.best_grid_value;
    o.converged = mr.converged;
    o.grid_dominance = mr.value <= mr.best_grid_value;
    o.message = mr.message;
    return o;
}

inline OracleReport oracle_global_min_q(const LowerBoundParams& p, double tol = 1e-9) {
    if (!(p.opt > 0.0 && p.opt <= 0.01)) throw std::domain_error("oracle_global_min_q: requires 0 < opt <= 1/100");
    return oracle_global_min(p.layers(), LossKind::logistic(), 20.0 / std::sqrt(p.opt), tol);
}

/// Minimum of a unimodal f on [a, b] by golden-section search.
template <class F>
std::pair<double, double> golden_section_min(F&& f, double a, double b, double tol = 1e-10) {
    if (!(b >= a)) throw std::domain_error("golden_section_min: empty interval");
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    return {x, fx};
}

/// min over 0 <= rho <= 1/sqrt(eps) of R(rho u).
inline std::pair<double, double> reference_ray_min(const LayeredDensity& ld, LossKind kind, const Vector& u,
                                                   double epsilon) {
    const Vector dir = normalized(u);
    auto f = [&](double rho) { return population_risk(ld, kind, dir * rho).value; };
    return golden_section_min(f, 0.0, 1.0 / std::sqrt(epsilon));
}

namespace detail {

inline void csv_number(std::ostream& os, double v) {
    if (std::isfinite(v)) os << v;
}

}  // namespace detail

/// step,r,theta|coords,logistic_risk,hinge_risk,zero_one,angle,empirical_risk
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    const bool planar = !tr.points.empty() && tr.points.front().w.dim() == 2;
    os << "step,r," << (planar ? "theta" : "coords") << ",logistic_risk,hinge_risk,zero_one,angle,empirical_risk\n";
    os.precision(17);
    for (const auto& p : tr.points) {
        os << p.step << ',' << norm(p.w) << ',';
        if (planar) {
            os << std::atan2(p.w[1], p.w[0]);
        } else {
            for (std::size_t i = 0; i < p.w.dim(); ++i) os << (i ? " " : "") << p.w[i];
        }
        os << ',' << p.report.logistic << ',' << p.report.hinge << ',' << p.report.zero_one << ',' << p.report.angle
           << ',';
        detail::csv_number(os, p.empirical_risk);
        os << '\n';
    }
}

inline nlohmann::json trajectory_summary(const Trajectory& tr) {
    nlohmann::json j;
    j["points"] = tr.points.size();
    j["eta"] = tr.eta;
    j["exact_evaluation"] = tr.exact_evaluation;
    j["best_step"] = tr.best().step;
    j["best"] = tr.best().report;
    j["last_step"] = tr.last().step;
    j["last"] = tr.last().report;
    if (!tr.empirical_path.empty()) j["max_empirical_increase"] = tr.max_empirical_increase();
    if (std::isfinite(tr.min_anchor_inner)) j["min_anchor_inner"] = tr.min_anchor_inner;
    return j;
}

}  // namespace halfspace
