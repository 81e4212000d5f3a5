#pragma once

// Built-in noisy-halfspace distributions: the four-part lower-bound
// construction Q, a radially symmetric benchmark with flipped squares, a
// Gaussian model with a noise band, and a realizable disk. Planar models
// also carry an exact piecewise-uniform representation (LayeredDensity)
// used by the quadrature paths.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "halfspace/core.hpp"
#include "halfspace/geometry.hpp"
#include "halfspace/rng.hpp"

namespace halfspace {

/// Raised when an operation needs a model capability (e.g. exact density) it lacks.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One uniform layer: `density` (may be negative to cancel another layer)
/// on `cell`, with a fixed label.
struct Layer {
    geom::ConvexCell cell;
    double density = 0.0;
    Label label;
    int part = 0;
};

struct LayeredDensity {
    std::vector<Layer> layers;

    [[nodiscard]] double mass() const {
        double m = 0.0;
        for (const Layer& l : layers) m += l.density * l.cell.area();
        return m;
    }
};

/// Parameters of Q; every derived quantity is computed from `opt`.
struct LowerBoundParams {
    double opt = 0.0;
    double q3 = 0.0;
    double q4 = 0.0;
    double q1_edge = 0.0;   // each of the two noisy squares
    double q2_width = 0.0;  // strips [0, w] x [0, 1] and [-w, 0] x [-1, 0]
    double q3_edge = 0.0;   // balancing squares centered at (+-1, 0)
    geom::Point2 q1_negative_center;  // label -1
    geom::Point2 q1_positive_center;  // label +1
    std::array<double, 4> part_mass{};

    static LowerBoundParams make(double opt) {
        if (!(opt > 0.0 && opt <= 1.0 / 16.0)) throw std::domain_error("lower-bound distribution requires 0 < opt <= 1/16");
        LowerBoundParams p;
        p.opt = opt;
        const double root = std::sqrt(opt);
        p.q3 = (2.0 / 3.0) * root * (1.0 - opt);
        p.q4 = (1.0 - opt - 2.0 * root - p.q3) / std::numbers::pi;
        p.q1_edge = std::sqrt(opt / 2.0);
        p.q2_width = root;
        p.q3_edge = std::sqrt(p.q3 / 2.0);
        const double c = std::numbers::sqrt2 / 2.0;
        p.q1_negative_center = {c, -c};
        p.q1_positive_center = {-c, c};
        p.part_mass = {opt, 2.0 * root, p.q3, 1.0 - opt - 2.0 * root - p.q3};
        return p;
    }

    [[nodiscard]] LayeredDensity layers() const {
        using geom::ConvexCell;
        LayeredDensity d;
        const Label pos = Label::positive();
        const Label neg = Label::negative();
        d.layers.push_back({ConvexCell::square(q1_negative_center, q1_edge), 1.0, neg, 1});
        d.layers.push_back({ConvexCell::square(q1_positive_center, q1_edge), 1.0, pos, 1});
        d.layers.push_back({ConvexCell::rectangle(0.0, q2_width, 0.0, 1.0), 1.0, pos, 2});
        d.layers.push_back({ConvexCell::rectangle(-q2_width, 0.0, -1.0, 0.0), 1.0, neg, 2});
        d.layers.push_back({ConvexCell::square({1.0, 0.0}, q3_edge), 1.0, pos, 3});
        d.layers.push_back({ConvexCell::square({-1.0, 0.0}, q3_edge), 1.0, neg, 3});
        d.layers.push_back({ConvexCell::half_disk(1.0, {-1.0, 0.0}), q4, pos, 4});
        d.layers.push_back({ConvexCell::half_disk(1.0, {1.0, 0.0}), q4, neg, 4});
        return d;
    }
};

/// Exact planar density of a model plus per-part label information.
struct PartContribution {
    int part = 0;
    double density = 0.0;
    Label label;
};

struct DensityEvaluation {
    double density = 0.0;
    std::vector<PartContribution> parts;

    /// The non-disk part if the point lies in one, else 4 for the disk, else 0 (none).
    [[nodiscard]] int part() const {
        int best = 0;
        for (const auto& c : parts) {
            if (c.part != 4) return c.part;
            best = 4;
        }
        return best;
    }
};

namespace detail {

inline bool in_square(geom::Point2 p, geom::Point2 center, double edge) {
    const double h = 0.5 * edge;
    return std::abs(p.x - center.x) <= h && std::abs(p.y - center.y) <= h;
}

}  // namespace detail

/// Density of Q at x and the parts that contribute to it. Q4 lies under the
/// other parts wherever they meet the unit disk.
inline DensityEvaluation density_q(const LowerBoundParams& p, const FeatureVector& x) {
    if (x.dim() != 2) throw std::domain_error("density_q: expects a 2D point");
    const geom::Point2 pt{x[0], x[1]};
    DensityEvaluation ev;
    auto add = [&](int part, double dens, Label label) {
        ev.parts.push_back({part, dens, label});
        ev.density += dens;
    };
    if (detail::in_square(pt, p.q1_negative_center, p.q1_edge)) add(1, 1.0, Label::negative());
    if (detail::in_square(pt, p.q1_positive_center, p.q1_edge)) add(1, 1.0, Label::positive());
    if (pt.x >= 0.0 && pt.x <= p.q2_width && pt.y >= 0.0 && pt.y <= 1.0) add(2, 1.0, Label::positive());
    if (pt.x <= 0.0 && pt.x >= -p.q2_width && pt.y <= 0.0 && pt.y >= -1.0) add(2, 1.0, Label::negative());
    if (detail::in_square(pt, {1.0, 0.0}, p.q3_edge)) add(3, 1.0, Label::positive());
    if (detail::in_square(pt, {-1.0, 0.0}, p.q3_edge)) add(3, 1.0, Label::negative());
    if (geom::norm2(pt) <= 1.0) add(4, p.q4, pt.x >= 0.0 ? Label::positive() : Label::negative());
    return ev;
}

struct TailConstants {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

/// A samplable noisy-halfspace distribution. Immutable once built; sampling
/// is a pure function of (seed, stream, index).
struct DistributionModel {
    std::string id;
    std::size_t dim = 0;
    WeightVector ground_truth;
    double true_opt = 0.0;
    std::optional<double> support_bound;
    std::optional<TailConstants> tail;
    std::optional<double> c_kappa;
    std::function<LabeledExample(rng::CounterRng&)> draw;
    std::optional<LayeredDensity> layers;
    std::function<double(double, double)> density2d;  // empty when unavailable
    std::optional<LowerBoundParams> lower_bound;

    [[nodiscard]] bool has_exact_layers() const { return layers.has_value(); }
    [[nodiscard]] bool has_density() const { return static_cast<bool>(density2d); }

    [[nodiscard]] const LayeredDensity& require_layers() const {
        if (!layers) throw CapabilityError("model '" + id + "' has no exact layered density");
        return *layers;
    }
};

inline LabeledExample draw_one(const DistributionModel& m, std::uint64_t seed, std::uint64_t index,
                               rng::Stream stream = rng::Stream::Training) {
    rng::CounterRng g(seed, stream, index);
    return m.draw(g);
}

/// n i.i.d. examples; example i depends only on (seed, stream, i).
inline std::vector<LabeledExample> sample(const DistributionModel& m, std::size_t n, std::uint64_t seed,
                                          rng::Stream stream = rng::Stream::Training) {
    if (n < 1) throw std::domain_error("sample: n must be >= 1");
    std::vector<LabeledExample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw_one(m, seed, i, stream));
    return out;
}

/// CSV dump with header `x1,...,xd,y`.
inline void write_samples_csv(std::ostream& os, const std::vector<LabeledExample>& samples) {
    if (samples.empty()) return;
    const std::size_t d = samples.front().x.dim();
    for (std::size_t i = 0; i < d; ++i) os << 'x' << (i + 1) << ',';
    os << "y\n";
    os.precision(17);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < d; ++i) os << s.x[i] << ',';
        os << s.y.value() << '\n';
    }
}

inline DistributionModel make_lower_bound_q(double opt) {
    const LowerBoundParams p = LowerBoundParams::make(opt);
    DistributionModel m;
    m.id = "q";
    m.dim = 2;
    m.ground_truth = Vector{1.0, 0.0};
    m.true_opt = opt;
    m.support_bound = 2.0;
    m.lower_bound = p;
    m.layers = p.layers();
    m.density2d = [p](double x1, double x2) { return density_q(p, Vector{x1, x2}).density; };
    const std::array<double, 4> cum = {p.part_mass[0], p.part_mass[0] + p.part_mass[1],
                                       p.part_mass[0] + p.part_mass[1] + p.part_mass[2], 1.0};
    m.draw = [p, cum](rng::CounterRng& g) {
        const double u = g.uniform();
        const bool first = g.uniform() < 0.5;
        const double a = g.uniform();
        const double b = g.uniform();
        if (u < cum[0]) {
            const geom::Point2 c = first ? p.q1_negative_center : p.q1_positive_center;
            const Vector x{c.x + (a - 0.5) * p.q1_edge, c.y + (b - 0.5) * p.q1_edge};
            return LabeledExample{x, first ? Label::negative() : Label::positive()};
        }
        if (u < cum[1]) {
            if (first) return LabeledExample{Vector{a * p.q2_width, b}, Label::positive()};
            return LabeledExample{Vector{-a * p.q2_width, -b}, Label::negative()};
        }
        if (u < cum[2]) {
            const double cx = first ? 1.0 : -1.0;
            const Vector x{cx + (a - 0.5) * p.q3_edge, (b - 0.5) * p.q3_edge};
            return LabeledExample{x, first ? Label::positive() : Label::negative()};
        }
        const double theta = 2.0 * std::numbers::pi * a;
        const double r = std::sqrt(b);
        const Vector x{r * std::cos(theta), r * std::sin(theta)};
        return LabeledExample{x, x[0] >= 0.0 ? Label::positive() : Label::negative()};
    };
    return m;
}

/// Edge of the axis-aligned square centered at (sqrt2/2, -sqrt2/2) whose
/// intersection with the unit disk has area `target_area`.
inline double flip_square_edge(double target_area) {
    const double c = std::numbers::sqrt2 / 2.0;
    double lo = 0.0;
    double hi = 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double area = geom::ConvexCell(geom::ConvexCell::square({c, -c}, mid).polygon(), 1.0).area();
        (area < target_area ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Uniform disk with labels sign(x1), flipped on two point-symmetric squares
/// (clipped to the disk) of total mass opt. Radially symmetric marginal, so
/// the radial Lipschitz constant is zero.
inline DistributionModel make_smooth_benchmark(double opt) {
    if (!(opt > 0.0 && opt <= 1.0 / 16.0)) throw std::domain_error("smooth benchmark requires 0 < opt <= 1/16");
    using geom::ConvexCell;
    const double dens = 1.0 / std::numbers::pi;
    const double edge = flip_square_edge(std::numbers::pi * opt / 2.0);
    const double c = std::numbers::sqrt2 / 2.0;
    const geom::Point2 neg_center{c, -c};
    const geom::Point2 pos_center{-c, c};
    const ConvexCell neg_flip(ConvexCell::square(neg_center, edge).polygon(), 1.0);
    const ConvexCell pos_flip(ConvexCell::square(pos_center, edge).polygon(), 1.0);

    DistributionModel m;
    m.id = "smooth";
    m.dim = 2;
    m.ground_truth = Vector{1.0, 0.0};
    m.true_opt = opt;
    m.support_bound = 1.0;
    m.c_kappa = 0.0;
    LayeredDensity ld;
    ld.layers.push_back({ConvexCell::half_disk(1.0, {-1.0, 0.0}), dens, Label::positive(), 4});
    ld.layers.push_back({ConvexCell::half_disk(1.0, {1.0, 0.0}), dens, Label::negative(), 4});
    ld.layers.push_back({neg_flip, dens, Label::negative(), 1});
    ld.layers.push_back({neg_flip, -dens, Label::positive(), 1});
    ld.layers.push_back({pos_flip, dens, Label::positive(), 1});
    ld.layers.push_back({pos_flip, -dens, Label::negative(), 1});
    m.layers = std::move(ld);
    m.density2d = [dens](double x1, double x2) { return x1 * x1 + x2 * x2 <= 1.0 ? dens : 0.0; };
    m.draw = [edge, neg_center, pos_center](rng::CounterRng& g) {
        const double theta = 2.0 * std::numbers::pi * g.uniform();
        const double r = std::sqrt(g.uniform());
        const geom::Point2 p{r * std::cos(theta), r * std::sin(theta)};
        Label y = p.x >= 0.0 ? Label::positive() : Label::negative();
        if (detail::in_square(p, neg_center, edge) || detail::in_square(p, pos_center, edge)) y = y.flipped();
        return LabeledExample{Vector{p.x, p.y}, y};
    };
    return m;
}

/// Uniform disk labelled exactly by sign(x1).
inline DistributionModel make_realizable_disk() {
    using geom::ConvexCell;
    const double dens = 1.0 / std::numbers::pi;
    DistributionModel m;
    m.id = "realizable";
    m.dim = 2;
    m.ground_truth = Vector{1.0, 0.0};
    m.true_opt = 0.0;
    m.support_bound = 1.0;
    m.c_kappa = 0.0;
    LayeredDensity ld;
    ld.layers.push_back({ConvexCell::half_disk(1.0, {-1.0, 0.0}), dens, Label::positive(), 4});
    ld.layers.push_back({ConvexCell::half_disk(1.0, {1.0, 0.0}), dens, Label::negative(), 4});
    m.layers = std::move(ld);
    m.density2d = [dens](double x1, double x2) { return x1 * x1 + x2 * x2 <= 1.0 ? dens : 0.0; };
    m.draw = [](rng::CounterRng& g) {
        const double theta = 2.0 * std::numbers::pi * g.uniform();
        const double r = std::sqrt(g.uniform());
        const Vector x{r * std::cos(theta), r * std::sin(theta)};
        return LabeledExample{x, x[0] >= 0.0 ? Label::positive() : Label::negative()};
    };
    return m;
}

inline double standard_normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

/// Width t of the noise band: Pr(-t < g < 0) = opt for g ~ N(0, 1); bisection to 1e-12.
inline double gaussian_noise_band(double opt) {
    if (!(opt > 0.0 && opt < 0.5)) throw std::domain_error("gaussian_noise_band: no band of that mass");
    double lo = 0.0;
    double hi = 40.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (standard_normal_cdf(mid) - 0.5 < opt ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Standard Gaussian features in R^d; labels sign(x1) except on the band
/// -t_opt < x1 < 0, where they are +1.
inline DistributionModel make_gaussian_noisy(double opt, std::size_t d) {
    if (d < 2) throw std::domain_error("gaussian model requires d >= 2");
    if (!(opt > 0.0 && opt < 0.25)) throw std::domain_error("gaussian model requires 0 < opt < 1/4");
    const double band = gaussian_noise_band(opt);
    DistributionModel m;
    m.id = "gaussian";
    m.dim = d;
    m.ground_truth = Vector::unit(d, 0);
    m.true_opt = opt;
    m.tail = TailConstants{2.0, 1.0};
    if (d == 2) {
        m.density2d = [](double x1, double x2) {
            return std::exp(-0.5 * (x1 * x1 + x2 * x2)) / (2.0 * std::numbers::pi);
        };
    }
    m.draw = [d, band](rng::CounterRng& g) {
        Vector x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = g.normal();
        Label y = x[0] >= 0.0 ? Label::positive() : Label::negative();
        if (x[0] < 0.0 && x[0] > -band) y = Label::positive();
        return LabeledExample{std::move(x), y};
    };
    return m;
}

}  // namespace halfspace
