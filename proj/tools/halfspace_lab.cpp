// halfspace-lab: reproduction driver for the lower-bound, two-phase and
// radial-Lipschitz experiments.
//
// Exit codes: 0 all assertions pass, 1 assertion failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "halfspace/experiments.hpp"

namespace {

using halfspace::exp::UsageError;

struct Flags {
    std::string opt;
    std::string opts;
    std::string epsilon;
    std::string seeds;
    unsigned jobs = 1;
    std::string out;
    std::string config;
    double tol = 1e-9;
    std::size_t dim = 2;
    bool timing = false;
    std::string distribution;
    std::string algorithm = "oracle";
};

std::vector<double> parse_reals(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto slash = item.find('/');
        try {
            if (slash != std::string::npos) {
                v.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
            } else {
                v.push_back(std::stod(item));
            }
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "'");
        }
    }
    return v;
}

/// "0-4" or "0,2,5".
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> v;
    std::stringstream ss(s);
    std::string item;
    try {
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto dash = item.find('-');
            if (dash != std::string::npos && dash > 0) {
                const std::uint64_t a = std::stoull(item.substr(0, dash));
                const std::uint64_t b = std::stoull(item.substr(dash + 1));
                if (b < a) throw UsageError("bad seed range '" + item + "'");
                for (std::uint64_t k = a; k <= b; ++k) v.push_back(k);
            } else {
                v.push_back(std::stoull(item));
            }
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("cannot parse seeds '" + s + "'");
    }
    if (v.empty()) throw UsageError("no seeds given");
    return v;
}

/// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto l = s.find_first_not_of(" \t\r");
            const auto r = s.find_last_not_of(" \t\r");
            return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

/// Fills flags not given on the command line from the config file.
void apply_config(Flags& f, CLI::App& sub) {
    if (f.config.empty()) return;
    for (const auto& [k, v] : read_config(f.config)) {
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + k);
        } catch (const CLI::OptionNotFound&) {
            throw UsageError("unknown config key '" + k + "'");
        }
        if (opt->count() > 0) continue;
        if (k == "opt") f.opt = v;
        else if (k == "opts") f.opts = v;
        else if (k == "epsilon") f.epsilon = v;
        else if (k == "seeds") f.seeds = v;
        else if (k == "jobs") f.jobs = static_cast<unsigned>(std::stoul(v));
        else if (k == "out") f.out = v;
        else if (k == "tol") f.tol = std::stod(v);
        else if (k == "dim") f.dim = std::stoul(v);
        else if (k == "timing") f.timing = v == "1" || v == "true";
        else if (k == "distribution") f.distribution = v;
        else if (k == "algorithm") f.algorithm = v;
        else throw UsageError("config key '" + k + "' is not supported here");
    }
}

void emit(const halfspace::exp::SweepOutput& out, const Flags& f) {
    const nlohmann::json summary = halfspace::exp::summary_json(out, f.timing);
    if (f.out.empty()) {
        halfspace::exp::write_csv(std::cout, out, f.timing);
        std::cerr << summary.dump(2) << '\n';
        return;
    }
    std::ofstream csv(f.out + ".csv");
    std::ofstream js(f.out + ".json");
    if (!csv || !js) throw std::runtime_error("cannot write output with prefix '" + f.out + "'");
    halfspace::exp::write_csv(csv, out, f.timing);
    js << summary.dump(2) << '\n';
}

void print_assertions(const halfspace::exp::SweepOutput& out) {
    for (const auto& a : out.assertions) {
        if (!a.pass) std::cerr << "FAIL " << a.name << " (value " << a.value << ")\n";
    }
}

int finish(const halfspace::exp::SweepOutput& out, const Flags& f) {
    emit(out, f);
    print_assertions(out);
    return out.pass() ? 0 : 1;
}

double single_opt(const Flags& f, double fallback) {
    if (f.opt.empty()) return fallback;
    const auto v = parse_reals(f.opt);
    if (v.size() != 1) throw UsageError("--opt takes a single value");
    return v.front();
}

bool opts_given(const Flags& f, CLI::App& sub) {
    return sub.get_option("--opts")->count() > 0 || sub.get_option("--opt")->count() > 0 || !f.opts.empty() ||
           !f.opt.empty();
}

std::vector<double> opt_list(const Flags& f) {
    if (!f.opts.empty()) return parse_reals(f.opts);
    if (!f.opt.empty()) return parse_reals(f.opt);
    return {};
}

int run_minimize(const Flags& f) {
    using namespace halfspace;
    const double opt = single_opt(f, 0.01);
    const DistributionModel m = exp::make_model(f.distribution.empty() ? "q" : f.distribution, opt, f.dim);
    const std::uint64_t seed = f.seeds.empty() ? 0 : parse_seeds(f.seeds).front();
    double eps = opt;
    if (!f.epsilon.empty() && f.epsilon != "opt") eps = parse_reals(f.epsilon).at(0);

    nlohmann::json j;
    j["version"] = exp::kVersion;
    j["distribution"] = m.id;
    j["opt"] = opt;
    j["epsilon"] = eps;
    j["seed"] = seed;
    j["algorithm"] = f.algorithm;
    bool pass = true;
    std::optional<Trajectory> traj;

    if (f.algorithm == "oracle") {
        if (!m.has_exact_layers() || m.dim != 2) throw UsageError("oracle needs a planar model with an exact density");
        const OracleReport o = oracle_global_min(m.require_layers(), LossKind::logistic(), 20.0 / std::sqrt(std::max(opt, 1e-6)), f.tol);
        j["r_star"] = o.r;
        j["theta_star"] = o.theta;
        j["oracle"] = o;
        pass = o.converged && o.grid_dominance;
    } else if (f.algorithm == "pgd") {
        if (!(eps > 0.0 && eps < 1.0)) throw UsageError("epsilon must lie in (0, 1)");
        PgdConfig cfg;
        cfg.epsilon = eps;
        cfg.seed = seed;
        traj = pgd_logistic(m, cfg);
        j["trajectory"] = trajectory_summary(*traj);
        j["pgd"] = {{"n", cfg.n}, {"T", cfg.T}, {"radius", cfg.radius()}};
        pass = traj->max_empirical_increase() <= 1e-12;
    } else if (f.algorithm == "twophase") {
        if (!(eps > 0.0 && eps < 1.0 / std::numbers::e)) throw UsageError("epsilon must lie in (0, 1/e)");
        const TwoPhaseResult r = two_phase(m, eps, seed);
        j["v"] = std::vector<double>(r.v.begin(), r.v.end());
        j["phase1_angle"] = r.phase1_angle;
        j["phase1"] = trajectory_summary(r.phase1);
        j["phase2"] = trajectory_summary(r.phase2);
        j["best"] = r.best;
        traj = r.phase2;
        pass = r.phase2.min_anchor_inner >= 1.0 - 1e-12 && r.phase1.max_empirical_increase() <= 1e-12;
    } else {
        throw UsageError("unknown algorithm '" + f.algorithm + "' (expected pgd, twophase or oracle)");
    }
    j["pass"] = pass;

    if (f.out.empty()) {
        std::cout << j.dump(2) << '\n';
        if (traj) write_trajectory_csv(std::cerr, *traj);
    } else {
        std::ofstream(f.out + ".json") << j.dump(2) << '\n';
        if (traj) {
            std::ofstream csv(f.out + ".trajectory.csv");
            write_trajectory_csv(csv, *traj);
        }
    }
    return pass ? 0 : 1;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--opt", f.opt, "single OPT value (fractions like 1/400 accepted)");
    sub->add_option("--opts", f.opts, "comma-separated OPT values");
    sub->add_option("--epsilon", f.epsilon, "target error, or 'opt' to use epsilon = opt");
    sub->add_option("--seeds", f.seeds, "seed list, e.g. 0-4 or 0,3,7");
    sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "output prefix (writes PREFIX.csv and PREFIX.json)");
    sub->add_option("--config", f.config, "key=value file; flags override it");
    sub->add_option("--tol", f.tol, "oracle gradient tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--dim", f.dim, "dimension (gaussian model)");
    sub->add_flag("--timing", f.timing, "emit wall_time_ms and a timestamp line");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"halfspace-lab: agnostic halfspace learning experiments"};
    app.require_subcommand(1);
    Flags f;

    auto* lb = app.add_subcommand("lowerbound-sweep", "logistic global minimizer on Q across opt values");
    auto* tp = app.add_subcommand("twophase-sweep", "two-phase PGD + hinge SGD on Q across opt values and seeds");
    auto* rl = app.add_subcommand("radial-lipschitz-sweep", "logistic global minimizer on the smooth benchmark");
    auto* vf = app.add_subcommand("verify", "distribution checks for a built-in model");
    auto* mn = app.add_subcommand("minimize", "single run with full trajectory output");
    for (auto* s : {lb, tp, rl, vf, mn}) add_common(s, f);
    vf->add_option("distribution", f.distribution, "q, smooth, gaussian or realizable")->required();
    mn->add_option("--distribution", f.distribution, "q, smooth, gaussian or realizable");
    mn->add_option("--algorithm", f.algorithm, "pgd, twophase or oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        namespace hx = halfspace::exp;
        if (*lb) {
            apply_config(f, *lb);
            hx::LowerBoundSweepConfig c;
            if (opts_given(f, *lb)) c.opts = opt_list(f);
            c.tol = f.tol;
            c.jobs = f.jobs;
            return finish(hx::lowerbound_sweep(c), f);
        }
        if (*tp) {
            apply_config(f, *tp);
            hx::TwoPhaseSweepConfig c;
            if (opts_given(f, *tp)) c.opts = opt_list(f);
            if (!f.epsilon.empty() && f.epsilon != "opt") {
                const auto e = parse_reals(f.epsilon);
                if (e.size() != 1) throw UsageError("--epsilon takes a single value or 'opt'");
                c.fixed_epsilon = e.front();
            }
            if (!f.seeds.empty()) c.seeds = parse_seeds(f.seeds);
            c.jobs = f.jobs;
            return finish(hx::twophase_sweep(c), f);
        }
        if (*rl) {
            apply_config(f, *rl);
            hx::RadialSweepConfig c;
            if (opts_given(f, *rl)) c.opts = opt_list(f);
            if (!f.seeds.empty()) c.seeds = parse_seeds(f.seeds);
            c.tol = f.tol;
            c.jobs = f.jobs;
            return finish(hx::radial_lipschitz_sweep(c), f);
        }
        if (*vf) {
            apply_config(f, *vf);
            hx::VerifyConfig c;
            c.distribution = f.distribution;
            c.opt = single_opt(f, 0.01);
            c.dim = f.dim;
            if (!f.seeds.empty()) c.seed = parse_seeds(f.seeds).front();
            const hx::SweepOutput out = hx::verify(c);
            const nlohmann::json j = hx::summary_json(out, f.timing);
            if (f.out.empty()) {
                std::cout << j.dump(2) << '\n';
            } else {
                std::ofstream(f.out + ".json") << j.dump(2) << '\n';
            }
            print_assertions(out);
            return out.pass() ? 0 : 1;
        }
        if (*mn) {
            apply_config(f, *mn);
            return run_minimize(f);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
