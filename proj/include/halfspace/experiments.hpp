#pragma once

// Named experiments behind the halfspace-lab driver. Each returns buffered
// rows in deterministic (opt, seed) order plus a JSON summary whose
// assertions decide the process exit code.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "halfspace/checks.hpp"
#include "halfspace/distributions.hpp"
#include "halfspace/optimize.hpp"
#include "halfspace/risk.hpp"

namespace halfspace::exp {

inline constexpr const char* kVersion = "1.0.0";

/// Invalid experiment parameters (maps to the usage exit code).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SweepRow {
    std::string experiment;
    double opt = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double zero_one_risk = 0.0;
    double angle = 0.0;
    double norm = 0.0;
    double logistic_risk = 0.0;
    double hinge_risk = 0.0;
    double wall_time_ms = 0.0;
    std::vector<std::pair<std::string, double>> extra;  // experiment-specific columns
};

struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double lower = -INFINITY;
    double upper = INFINITY;
};

inline void to_json(nlohmann::json& j, const Assertion& a) {
    j = nlohmann::json{{"name", a.name}, {"pass", a.pass}, {"value", a.value}};
    if (std::isfinite(a.lower)) j["lower"] = a.lower;
    if (std::isfinite(a.upper)) j["upper"] = a.upper;
}

struct SweepOutput {
    std::string experiment;
    std::vector<SweepRow> rows;
    std::vector<Assertion> assertions;
    nlohmann::json aggregates = nlohmann::json::object();
    nlohmann::json config = nlohmann::json::object();

    [[nodiscard]] bool pass() const {
        return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
    }

    void check(std::string name, double value, double lower, double upper) {
        assertions.push_back({std::move(name), value >= lower && value <= upper && std::isfinite(value), value, lower, upper});
    }
    void check_bool(std::string name, bool ok) { assertions.push_back({std::move(name), ok, ok ? 1.0 : 0.0, 1.0, 1.0}); }
};

/// Least-squares slope of ln y against ln x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::domain_error("loglog_slope: needs two or more points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Runs job(i) for i in [0, n) on `jobs` threads.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& job) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, n))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline void fill_report(SweepRow& row, const RiskReport& r) {
    row.zero_one_risk = r.zero_one;
    row.angle = r.angle;
    row.norm = r.norm;
    row.logistic_risk = r.logistic;
    row.hinge_risk = r.hinge;
}

inline void require_opts(const std::vector<double>& opts) {
    if (opts.empty()) throw UsageError("no opt values given");
}

}  // namespace detail

struct LowerBoundSweepConfig {
    std::vector<double> opts = {1.0 / 100, 1.0 / 400, 1.0 / 2500};
    double tol = 1e-9;
    unsigned jobs = 1;
};

inline SweepOutput lowerbound_sweep(const LowerBoundSweepConfig& cfg) {
    detail::require_opts(cfg.opts);
    for (double o : cfg.opts) {
        if (!(o > 0.0 && o <= 0.01)) throw UsageError("lowerbound-sweep: every opt must lie in (0, 1/100]");
    }
    SweepOutput out;
    out.experiment = "lowerbound";
    out.config = {{"opts", cfg.opts}, {"tol", cfg.tol}};
    out.rows.resize(cfg.opts.size());
    std::vector<OracleReport> reports(cfg.opts.size());
    parallel_for(cfg.opts.size(), cfg.jobs, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        const double opt = cfg.opts[i];
        const LowerBoundParams p = LowerBoundParams::make(opt);
        const OracleReport o = oracle_global_min_q(p, cfg.tol);
        reports[i] = o;
        SweepRow& row = out.rows[i];
        row.experiment = out.experiment;
        row.opt = opt;
        row.epsilon = 0.0;
        row.seed = 0;
        row.algorithm = "oracle";
        row.zero_one_risk = o.zero_one;
        row.angle = std::abs(o.theta);
        row.norm = o.r;
        row.logistic_risk = o.logistic;
        row.hinge_risk = population_risk_q(p, LossKind::hinge(), o.w);
        const double root = std::sqrt(opt);
        const double floor = root / (60.0 * std::numbers::pi);
        row.extra = {{"r_star", o.r},
                     {"theta_star", o.theta},
                     {"floor", floor},
                     {"floor_ok", o.zero_one >= floor ? 1.0 : 0.0},
                     {"norm_ok", o.r <= 10.0 / root ? 1.0 : 0.0},
                     {"angle_ok", o.theta > root / 30.0 ? 1.0 : 0.0},
                     {"grad_norm", o.grad_norm}};
        row.wall_time_ms = detail::elapsed_ms(t0);
    });
    std::vector<double> risks;
    for (std::size_t i = 0; i < cfg.opts.size(); ++i) {
        const double opt = cfg.opts[i];
        const double root = std::sqrt(opt);
        const OracleReport& o = reports[i];
        std::ostringstream tag;
        tag << "opt=" << opt;
        out.check(tag.str() + ": zero_one >= sqrt(opt)/(60 pi)", o.zero_one, root / (60.0 * std::numbers::pi), 1.0);
        out.check(tag.str() + ": r* <= 10/sqrt(opt)", o.r, 0.0, 10.0 / root);
        out.check(tag.str() + ": theta* > sqrt(opt)/30", o.theta, std::nextafter(root / 30.0, INFINITY), INFINITY);
        out.check_bool(tag.str() + ": oracle converged", o.converged && o.grid_dominance);
        risks.push_back(o.zero_one);
    }
    if (cfg.opts.size() >= 2) {
        const double slope = loglog_slope(cfg.opts, risks);
        out.aggregates["zero_one_slope"] = slope;
        out.check("log-log slope of zero_one vs opt", slope, 0.4, 0.6);
    }
    return out;
}

struct TwoPhaseSweepConfig {
    std::vector<double> opts = {1.0 / 100, 1.0 / 225, 1.0 / 400, 1.0 / 900};
    std::optional<double> fixed_epsilon;  // empty: epsilon = opt
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    unsigned jobs = 1;
    TwoPhaseOptions options;
};

inline SweepOutput twophase_sweep(const TwoPhaseSweepConfig& cfg) {
    detail::require_opts(cfg.opts);
    if (cfg.seeds.empty()) throw UsageError("twophase-sweep: no seeds given");
    for (double o : cfg.opts) {
        if (!(o > 0.0 && o <= 1.0 / 16.0)) throw UsageError("twophase-sweep: every opt must lie in (0, 1/16]");
    }
    const auto eps_of = [&](double opt) { return cfg.fixed_epsilon.value_or(opt); };
    for (double o : cfg.opts) {
        const double e = eps_of(o);
        if (!(e > 0.0 && e < 1.0 / std::numbers::e)) throw UsageError("twophase-sweep: epsilon must lie in (0, 1/e)");
    }
    SweepOutput out;
    out.experiment = "twophase";
    out.config = {{"opts", cfg.opts},
                  {"epsilon", cfg.fixed_epsilon ? nlohmann::json(*cfg.fixed_epsilon) : nlohmann::json("opt")},
                  {"seeds", cfg.seeds},
                  {"eta_factor", cfg.options.eta_factor},
                  {"steps_factor", cfg.options.steps_factor},
                  {"samples_per_inverse_eps", cfg.options.samples_per_inverse_eps}};
    const std::size_t ns = cfg.seeds.size();
    out.rows.resize(cfg.opts.size() * ns);
    parallel_for(out.rows.size(), cfg.jobs, [&](std::size_t k) {
        const auto t0 = std::chrono::steady_clock::now();
        const double opt = cfg.opts[k / ns];
        const std::uint64_t seed = cfg.seeds[k % ns];
        const double eps = eps_of(opt);
        const DistributionModel m = make_lower_bound_q(opt);
        const TwoPhaseResult r = two_phase(m, eps, seed, cfg.options);
        SweepRow& row = out.rows[k];
        row.experiment = out.experiment;
        row.opt = opt;
        row.epsilon = eps;
        row.seed = seed;
        row.algorithm = "two_phase";
        detail::fill_report(row, r.best);
        row.extra = {{"phase1_angle", r.phase1_angle},
                     {"phase1_steps", static_cast<double>(r.phase1.last().step)},
                     {"phase2_steps", static_cast<double>(r.phase2.last().step)},
                     {"best_step", static_cast<double>(r.phase2.best().step)},
                     {"min_anchor_inner", r.phase2.min_anchor_inner}};
        row.wall_time_ms = detail::elapsed_ms(t0);
    });
    std::vector<double> mean_risk(cfg.opts.size(), 0.0);
    std::vector<double> mean_angle(cfg.opts.size(), 0.0);
    nlohmann::json per_opt = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.opts.size(); ++i) {
        for (std::size_t s = 0; s < ns; ++s) {
            mean_risk[i] += out.rows[i * ns + s].zero_one_risk / static_cast<double>(ns);
            mean_angle[i] += out.rows[i * ns + s].extra[0].second / static_cast<double>(ns);
        }
        per_opt.push_back({{"opt", cfg.opts[i]}, {"mean_zero_one", mean_risk[i]}, {"mean_phase1_angle", mean_angle[i]}});
        for (std::size_t s = 0; s < ns; ++s) {
            const SweepRow& row = out.rows[i * ns + s];
            std::ostringstream tag;
            tag << "opt=" << row.opt << " seed=" << row.seed << ": phase-2 feasibility";
            out.check(tag.str(), row.extra[4].second, 1.0 - 1e-12, INFINITY);
        }
    }
    out.aggregates["per_opt"] = per_opt;
    if (cfg.opts.size() >= 2) {
        const double slope = loglog_slope(cfg.opts, mean_risk);
        out.aggregates["mean_zero_one_slope"] = slope;
        out.aggregates["phase1_angle_slope"] = loglog_slope(cfg.opts, mean_angle);
        out.check("log-log slope of mean zero_one vs opt", slope, 0.8, 1.2);
    }
    return out;
}

struct RadialSweepConfig {
    std::vector<double> opts = {1.0 / 100, 1.0 / 400, 1.0 / 2500};
    std::vector<std::uint64_t> seeds = {0};
    double tol = 1e-9;
    unsigned jobs = 1;
};

inline SweepOutput radial_lipschitz_sweep(const RadialSweepConfig& cfg) {
    detail::require_opts(cfg.opts);
    for (double o : cfg.opts) {
        if (!(o > 0.0 && o <= 1.0 / 16.0)) throw UsageError("radial-lipschitz-sweep: every opt must lie in (0, 1/16]");
    }
    const std::uint64_t seed = cfg.seeds.empty() ? 0 : cfg.seeds.front();
    SweepOutput out;
    out.experiment = "radial_lipschitz";
    out.config = {{"opts", cfg.opts}, {"tol", cfg.tol}, {"seed", seed}};
    out.rows.resize(cfg.opts.size());
    std::vector<OracleReport> reports(cfg.opts.size());
    parallel_for(cfg.opts.size(), cfg.jobs, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        const double opt = cfg.opts[i];
        const DistributionModel m = make_smooth_benchmark(opt);
        const LayeredDensity& ld = m.require_layers();
        const OracleReport o = oracle_global_min(ld, LossKind::logistic(), 20.0 / std::sqrt(opt), cfg.tol);
        reports[i] = o;
        SweepRow& row = out.rows[i];
        row.experiment = out.experiment;
        row.opt = opt;
        row.seed = seed;
        row.algorithm = "oracle";
        row.zero_one_risk = o.zero_one;
        row.angle = std::abs(o.theta);
        row.norm = o.r;
        row.logistic_risk = o.logistic;
        row.hinge_risk = population_risk(ld, LossKind::hinge(), o.w).value;
        row.extra = {{"c_kappa", m.c_kappa.value_or(NAN)}, {"ratio", o.zero_one / opt}, {"grad_norm", o.grad_norm}};
        row.wall_time_ms = detail::elapsed_ms(t0);
    });
    std::vector<double> risks;
    double rmin = INFINITY;
    double rmax = 0.0;
    for (std::size_t i = 0; i < cfg.opts.size(); ++i) {
        const SweepRow& row = out.rows[i];
        risks.push_back(row.zero_one_risk);
        rmin = std::min(rmin, row.extra[1].second);
        rmax = std::max(rmax, row.extra[1].second);
        std::ostringstream tag;
        tag << "opt=" << row.opt;
        out.check(tag.str() + ": c_kappa = 0", row.extra[0].second, 0.0, 0.0);
        out.check_bool(tag.str() + ": oracle converged", reports[i].converged && reports[i].grid_dominance);
    }
    out.aggregates["ratio_max_over_min"] = rmax / rmin;
    out.check("max/min of zero_one/opt", rmax / rmin, 1.0, 3.0);
    if (cfg.opts.size() >= 2) {
        const double slope = loglog_slope(cfg.opts, risks);
        out.aggregates["zero_one_slope"] = slope;
        out.check("log-log slope of zero_one vs opt", slope, 0.8, 1.2);
    }
    return out;
}

/// Built-in models by id: q, smooth, gaussian, realizable.
inline DistributionModel make_model(const std::string& id, double opt, std::size_t dim) {
    try {
        if (id == "q") return make_lower_bound_q(opt);
        if (id == "smooth") return make_smooth_benchmark(opt);
        if (id == "gaussian") return make_gaussian_noisy(opt, dim);
        if (id == "realizable") return make_realizable_disk();
    } catch (const std::domain_error& e) {
        throw UsageError(std::string("construction error: ") + e.what());
    }
    throw UsageError("unknown distribution '" + id + "' (expected q, smooth, gaussian or realizable)");
}

struct VerifyConfig {
    std::string distribution = "q";
    double opt = 0.01;
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    std::size_t samples = 1'000'000;
};

inline nlohmann::json moments_json(const MomentReport& r) {
    return {{"exact", r.exact},        {"mass", r.mass},          {"mean_x1", r.mean_x1},
            {"mean_x2", r.mean_x2},    {"cross", r.cross},        {"anisotropy", r.anisotropy},
            {"mean_x1_err", r.mean_x1_err}, {"mean_x2_err", r.mean_x2_err}, {"cross_err", r.cross_err},
            {"anisotropy_err", r.anisotropy_err}};
}

inline SweepOutput verify(const VerifyConfig& cfg) {
    const DistributionModel m = make_model(cfg.distribution, cfg.opt, cfg.dim);
    SweepOutput out;
    out.experiment = "verify";
    out.config = {{"distribution", m.id}, {"opt", cfg.opt}, {"dim", m.dim}, {"seed", cfg.seed}, {"samples", cfg.samples}};
    const std::vector<LabeledExample> data = sample(m, cfg.samples, cfg.seed, rng::Stream::Training);

    if (m.has_exact_layers()) {
        const MomentReport mr = check_moments(m, QuadratureMethod{});
        out.aggregates["moments"] = moments_json(mr);
        out.check("total mass = 1", mr.mass, 1.0 - 1e-12, 1.0 + 1e-12);
        out.check("|E[x1]|", std::abs(mr.mean_x1), 0.0, 1e-8);
        out.check("|E[x2]|", std::abs(mr.mean_x2), 0.0, 1e-8);
        out.check("|E[x1 x2]|", std::abs(mr.cross), 0.0, 1e-8);
        out.check("|E[x1^2 - x2^2]|", std::abs(mr.anisotropy), 0.0, 1e-8);
        const double z = zero_one_risk(m.require_layers(), m.ground_truth);
        out.check("zero_one(u) = opt", z, m.true_opt - 1e-10, m.true_opt + 1e-10);
    } else {
        const MomentReport mr = check_moments(m, MonteCarloMethod{cfg.samples, cfg.seed});
        out.aggregates["moments"] = moments_json(mr);
        out.check("|E[x1]| within 4 se", std::abs(mr.mean_x1) / mr.mean_x1_err, 0.0, 4.0);
        out.check("|E[x2]| within 4 se", std::abs(mr.mean_x2) / mr.mean_x2_err, 0.0, 4.0);
        out.check("|E[x1 x2]| within 4 se", std::abs(mr.cross) / mr.cross_err, 0.0, 4.0);
        const McEstimate e = mc_zero_one(m, m.ground_truth, cfg.samples, cfg.seed);
        const double se = std::max(e.stderr_, 1.0 / static_cast<double>(cfg.samples));
        out.check("zero_one(u) = opt within 4 se", std::abs(e.estimate - m.true_opt) / se, 0.0, 4.0);
    }

    if (m.support_bound) {
        double worst = 0.0;
        for (const auto& ex : data) worst = std::max(worst, norm(ex.x));
        out.aggregates["max_sample_norm"] = worst;
        out.check("sample norms <= B", worst, 0.0, *m.support_bound);
    }

    if (m.has_density()) {
        const double B = m.support_bound.value_or(4.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < 100'000; ++i) {
            rng::CounterRng g(cfg.seed, rng::Stream::Density, i);
            worst = std::max(worst, m.density2d(B * (2.0 * g.uniform() - 1.0), B * (2.0 * g.uniform() - 1.0)));
        }
        out.aggregates["max_density"] = worst;
        if (m.lower_bound && m.true_opt <= 0.01) out.check("density <= 2", worst, 0.0, 2.0);
        const double U = m.id == "gaussian" ? 11.0 : 2.0 * std::numbers::pi + 1.0;
        const WellBehavedReport wb = check_well_behaved(m, U, 1.0);
        out.aggregates["well_behaved"] = {{"U", U},
                                          {"min_density", wb.min_density},
                                          {"sigma_integral", wb.sigma_integral},
                                          {"sigma_r_integral", wb.sigma_r_integral},
                                          {"outer_radius", wb.outer_radius}};
        out.check_bool("well-behaved with R = 1", wb.pass);
    }

    const TailConstants tail = m.tail.value_or(TailConstants{std::numbers::e, m.support_bound.value_or(1.0)});
    const SubExponentialReport se = check_sub_exponential(data, 64, tail.alpha1, tail.alpha2, cfg.seed);
    out.aggregates["sub_exponential"] = {{"alpha1", tail.alpha1}, {"alpha2", tail.alpha2}, {"worst_margin", se.worst_margin},
                                         {"worst_t", se.worst_t}};
    out.check("sub-exponential tail margin <= 0", se.worst_margin, -INFINITY, 0.0);
    return out;
}

/// Column names of the sweep CSV.
inline std::vector<std::string> csv_columns(const SweepOutput& out, bool timing) {
    std::vector<std::string> cols = {"experiment", "opt",   "epsilon",       "seed",      "algorithm", "zero_one_risk",
                                     "angle",      "norm",  "logistic_risk", "hinge_risk"};
    if (timing) cols.push_back("wall_time_ms");
    if (!out.rows.empty()) {
        for (const auto& [k, v] : out.rows.front().extra) cols.push_back(k);
    }
    return cols;
}

/// `#` metadata lines, header, then rows. Timing and timestamps appear only with `timing`.
inline void write_csv(std::ostream& os, const SweepOutput& out, bool timing) {
    os << "# halfspace-lab " << kVersion << '\n';
    os << "# experiment " << out.experiment << '\n';
    os << "# config " << out.config.dump() << '\n';
    if (timing) {
        os << "# generated_unix " << std::chrono::duration_cast<std::chrono::seconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count()
           << '\n';
    }
    const auto cols = csv_columns(out, timing);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    os.precision(17);
    for (const SweepRow& r : out.rows) {
        os << r.experiment << ',' << r.opt << ',' << r.epsilon << ',' << r.seed << ',' << r.algorithm << ','
           << r.zero_one_risk << ',' << r.angle << ',' << r.norm << ',' << r.logistic_risk << ',' << r.hinge_risk;
        if (timing) os << ',' << r.wall_time_ms;
        for (const auto& [k, v] : r.extra) os << ',' << v;
        os << '\n';
    }
}

inline nlohmann::json summary_json(const SweepOutput& out, bool timing) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["experiment"] = out.experiment;
    j["config"] = out.config;
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& r : out.rows) {
        nlohmann::json row = {{"experiment", r.experiment}, {"opt", r.opt},
                              {"epsilon", r.epsilon},       {"seed", r.seed},
                              {"algorithm", r.algorithm},   {"zero_one_risk", r.zero_one_risk},
                              {"angle", r.angle},           {"norm", r.norm},
                              {"logistic_risk", r.logistic_risk}, {"hinge_risk", r.hinge_risk}};
        if (timing) row["wall_time_ms"] = r.wall_time_ms;
        for (const auto& [k, v] : r.extra) row[k] = v;
        rows.push_back(std::move(row));
    }
    j["rows"] = rows;
    j["aggregates"] = out.aggregates;
    j["assertions"] = out.assertions;
    j["pass"] = out.pass();
    return j;
}

}  // namespace halfspace::exp
