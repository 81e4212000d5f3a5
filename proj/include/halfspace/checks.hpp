#pragma once

// Numerical checks of distributional assumptions: isotropy moments (exact or
// Monte Carlo), sub-exponential tails along random directions, and the
// density floor / radial envelope condition for planar densities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include "halfspace/cell_integration.hpp"
#include "halfspace/distributions.hpp"

namespace halfspace {

struct QuadratureMethod {};
struct MonteCarloMethod {
    std::size_t n = 1'000'000;
    std::uint64_t seed = 0;
};
using MomentMethod = std::variant<QuadratureMethod, MonteCarloMethod>;

struct MomentReport {
    double mass = 0.0;
    double mean_x1 = 0.0;
    double mean_x2 = 0.0;
    double cross = 0.0;         // E[x1 x2]
    double anisotropy = 0.0;    // E[x1^2 - x2^2]
    double mean_x1_err = 0.0;
    double mean_x2_err = 0.0;
    double cross_err = 0.0;
    double anisotropy_err = 0.0;
    bool exact = false;

    /// Largest moment magnitude.
    [[nodiscard]] double worst() const {
        return std::max({std::abs(mean_x1), std::abs(mean_x2), std::abs(cross), std::abs(anisotropy)});
    }
};

namespace detail {

inline geom::Accum<5> layered_moments(const LayeredDensity& ld, int order) {
    geom::Accum<5> total;
    geom::SliceRule rule;
    rule.order = order;
    rule.inner_nodes = 2;
    for (const Layer& l : ld.layers) {
        auto f = [](double t, double u) { return geom::Accum<5>{{1.0, t, u, t * u, t * t - u * u}}; };
        total += geom::integrate_cell<geom::Accum<5>>(l.cell, {1.0, 0.0}, f, rule) * l.density;
    }
    return total;
}

}  // namespace detail

/// E[x1], E[x2], E[x1 x2], E[x1^2 - x2^2] over the marginal. The quadrature
/// path needs the exact layered density; its error estimate is the change
/// under doubled panel order.
inline MomentReport check_moments(const DistributionModel& m, const MomentMethod& method) {
    if (m.dim < 2) throw std::domain_error("check_moments: needs at least two coordinates");
    MomentReport rep;
    if (std::holds_alternative<QuadratureMethod>(method)) {
        const LayeredDensity& ld = m.require_layers();
        const auto coarse = detail::layered_moments(ld, 12);
        const auto fine = detail::layered_moments(ld, 24);
        rep.exact = true;
        rep.mass = fine[0];
        rep.mean_x1 = fine[1];
        rep.mean_x2 = fine[2];
        rep.cross = fine[3];
        rep.anisotropy = fine[4];
        rep.mean_x1_err = std::abs(fine[1] - coarse[1]);
        rep.mean_x2_err = std::abs(fine[2] - coarse[2]);
        rep.cross_err = std::abs(fine[3] - coarse[3]);
        rep.anisotropy_err = std::abs(fine[4] - coarse[4]);
        return rep;
    }
    const auto& mc = std::get<MonteCarloMethod>(method);
    if (mc.n < 2) throw std::domain_error("check_moments: Monte Carlo needs n >= 2");
    double s[4] = {0, 0, 0, 0};
    double s2[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < mc.n; ++i) {
        const LabeledExample ex = draw_one(m, mc.seed, i, rng::Stream::Evaluation);
        const double v[4] = {ex.x[0], ex.x[1], ex.x[0] * ex.x[1], ex.x[0] * ex.x[0] - ex.x[1] * ex.x[1]};
        for (int k = 0; k < 4; ++k) {
            s[k] += v[k];
            s2[k] += v[k] * v[k];
        }
    }
    const double n = static_cast<double>(mc.n);
    double mean[4];
    double se[4];
    for (int k = 0; k < 4; ++k) {
        mean[k] = s[k] / n;
        se[k] = std::sqrt(std::max(0.0, s2[k] / n - mean[k] * mean[k]) / (n - 1.0));
    }
    rep.mass = 1.0;
    rep.mean_x1 = mean[0];
    rep.mean_x2 = mean[1];
    rep.cross = mean[2];
    rep.anisotropy = mean[3];
    rep.mean_x1_err = se[0];
    rep.mean_x2_err = se[1];
    rep.cross_err = se[2];
    rep.anisotropy_err = se[3];
    return rep;
}

struct SubExponentialReport {
    bool pass = true;
    double worst_margin = -std::numeric_limits<double>::infinity();  // > 0 means violated
    double worst_t = 0.0;
    Vector worst_direction;
    std::size_t directions = 0;
    std::size_t samples = 0;
};

/// Compares Pr(|<v, x>| >= t) with alpha1 * exp(-t / alpha2) for random unit
/// directions v on a grid of t up to the 0.999 empirical quantile. A grid point
/// violates the envelope when the empirical tail exceeds it by more than three
/// binomial standard errors.
inline SubExponentialReport check_sub_exponential(const std::vector<LabeledExample>& samples, std::size_t directions,
                                                  double alpha1, double alpha2, std::uint64_t seed = 0) {
    if (samples.size() < 10'000) throw std::domain_error("check_sub_exponential: needs at least 1e4 samples");
    if (!(alpha1 > 0.0 && alpha2 > 0.0)) throw std::domain_error("check_sub_exponential: constants must be positive");
    const std::size_t d = samples.front().x.dim();
    const double n = static_cast<double>(samples.size());
    SubExponentialReport rep;
    rep.directions = directions;
    rep.samples = samples.size();
    std::vector<double> proj(samples.size());
    constexpr int kGrid = 64;
    for (std::size_t k = 0; k < directions; ++k) {
        rng::CounterRng g(seed, rng::Stream::Directions, k);
        Vector v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = g.normal();
        v = normalized(v);
        for (std::size_t i = 0; i < samples.size(); ++i) proj[i] = std::abs(dot(v, samples[i].x));
        std::sort(proj.begin(), proj.end());
        const double tmax = proj[static_cast<std::size_t>(0.999 * (n - 1.0))];
        for (int j = 1; j <= kGrid; ++j) {
            const double t = tmax * j / kGrid;
            const auto it = std::lower_bound(proj.begin(), proj.end(), t);
            const double p = static_cast<double>(proj.end() - it) / n;
            const double margin = p - 3.0 * std::sqrt(p * (1.0 - p) / n) - alpha1 * std::exp(-t / alpha2);
            if (margin > rep.worst_margin) {
                rep.worst_margin = margin;
                rep.worst_t = t;
                rep.worst_direction = v;
            }
        }
    }
    rep.pass = rep.worst_margin <= 0.0;
    return rep;
}

namespace detail {

/// Composite Gauss-Legendre integral of f on [a, b], split at `breaks`.
template <class F>
double composite_1d(F&& f, double a, double b, std::vector<double> breaks = {}, int panels = 256) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::max(a, breaks[i]);
        const double hi = std::min(b, breaks[i + 1]);
        if (!(hi > lo)) continue;
        const double h = (hi - lo) / panels;
        for (int k = 0; k < panels; ++k) s += oracle::gauss_1d(f, lo + k * h, lo + (k + 1) * h, 8);
    }
    return s;
}

}  // namespace detail

/// Constants of the well-behavedness condition with an explicit radial envelope.
struct WellBehavedParams {
    double U = 0.0;
    double R = 0.0;
    std::function<double(double)> sigma;
    double sigma_integral = 0.0;
    double sigma_r_integral = 0.0;

    /// Integrates sigma on [0, outer] (split at `breaks`) and rejects
    /// envelopes with int sigma > U or int r sigma > U.
    static WellBehavedParams make(double U, double R, std::function<double(double)> sigma, double outer,
                                  std::vector<double> breaks = {}) {
        if (!(U > 0.0 && R > 0.0 && outer > 0.0)) throw std::domain_error("WellBehavedParams: U, R, outer must be positive");
        if (!sigma) throw std::domain_error("WellBehavedParams: missing envelope");
        WellBehavedParams p;
        p.U = U;
        p.R = R;
        p.sigma = std::move(sigma);
        p.sigma_integral = detail::composite_1d(p.sigma, 0.0, outer, breaks);
        p.sigma_r_integral = detail::composite_1d([&](double r) { return r * p.sigma(r); }, 0.0, outer, breaks);
        if (p.sigma_integral > U || p.sigma_r_integral > U) throw std::domain_error("WellBehavedParams: envelope integrals exceed U");
        return p;
    }
};

/// Angular Lipschitz profile kappa(r) and C_kappa = int_0^B kappa.
struct RadialLipschitzParams {
    std::function<double(double)> kappa;
    double c_kappa = 0.0;

    static RadialLipschitzParams make(std::function<double(double)> kappa, double B, std::vector<double> breaks = {}) {
        if (!kappa) throw std::domain_error("RadialLipschitzParams: missing profile");
        if (!(B > 0.0)) throw std::domain_error("RadialLipschitzParams: B must be positive");
        RadialLipschitzParams p;
        p.kappa = std::move(kappa);
        for (int i = 0; i <= 64; ++i) {
            if (p.kappa(B * i / 64.0) < 0.0) throw std::domain_error("RadialLipschitzParams: kappa must be nonnegative");
        }
        p.c_kappa = detail::composite_1d(p.kappa, 0.0, B, std::move(breaks));
        if (!std::isfinite(p.c_kappa)) throw std::domain_error("RadialLipschitzParams: C_kappa is not finite");
        return p;
    }

    static RadialLipschitzParams radially_symmetric() { return {[](double) { return 0.0; }, 0.0}; }
};

struct WellBehavedReport {
    bool pass = false;
    bool floor_ok = false;
    bool envelope_ok = false;
    double min_density = 0.0;     // over the grid with r <= R
    double sigma_integral = 0.0;  // int sigma(r) dr
    double sigma_r_integral = 0.0;  // int r sigma(r) dr
    double outer_radius = 0.0;
    int grid = 512;
};

/// Density floor p(r, theta) >= 1/U for r <= R and the envelope integrals
/// int sigma <= U, int r sigma <= U with sigma(r) = max over the angular grid.
/// The envelope is integrated up to the support bound (10 when unbounded).
inline WellBehavedReport check_well_behaved(const DistributionModel& m, double U, double R, int grid = 512) {
    if (!m.has_density()) throw CapabilityError("check_well_behaved: model '" + m.id + "' has no exact planar density");
    if (!(U > 0.0 && R > 0.0)) throw std::domain_error("check_well_behaved: U and R must be positive");
    WellBehavedReport rep;
    rep.grid = grid;
    const double two_pi = 2.0 * std::numbers::pi;
    double min_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double r = R * (i + 0.5) / grid;
        for (int j = 0; j < grid; ++j) {
            const double t = two_pi * j / grid;
            min_d = std::min(min_d, m.density2d(r * std::cos(t), r * std::sin(t)));
        }
    }
    rep.min_density = min_d;
    rep.floor_ok = min_d >= 1.0 / U;

    const double outer = m.support_bound.value_or(10.0) * (1.0 + 1e-9);
    rep.outer_radius = outer;
    const double dr = outer / grid;
    for (int i = 0; i < grid; ++i) {
        const double r = outer * (i + 0.5) / grid;
        double sigma = 0.0;
        for (int j = 0; j < grid; ++j) {
            const double t = two_pi * j / grid;
            sigma = std::max(sigma, m.density2d(r * std::cos(t), r * std::sin(t)));
        }
        rep.sigma_integral += sigma * dr;
        rep.sigma_r_integral += r * sigma * dr;
    }
    rep.envelope_ok = rep.sigma_integral <= U && rep.sigma_r_integral <= U;
    rep.pass = rep.floor_ok && rep.envelope_ok;
    return rep;
}

}  // namespace halfspace
