#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "halfspace/distributions.hpp"
#include "halfspace/optimize.hpp"
#include "halfspace/oracle.hpp"
#include "halfspace/risk.hpp"

using namespace halfspace;
using namespace halfspace::oracle;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(GaussLegendre, WeightsSumToTwo) {
    for (int n : {1, 2, 5, 12, 64, 128}) {
        double s = 0.0;
        for (double w : gauss_legendre(n).weights) s += w;
        EXPECT_NEAR(s, 2.0, 1e-13) << n;
    }
}

TEST(Quad2d, ConstantOnUnitSquare) {
    const QuadResult r = quad2d({RectangleRegion{0, 1, 0, 1}}, [](double, double) { return 1.0; });
    EXPECT_NEAR(r.value, 1.0, 1e-14);
    EXPECT_TRUE(r.converged);
}

TEST(Quad2d, DiskAreaAndSecondMoment) {
    const QuadResult a = quad2d({DiskRegion{1.0}}, [](double, double) { return 1.0; });
    EXPECT_NEAR(a.value, kPi, 1e-10);
    const QuadResult b = quad2d({DiskRegion{1.0}}, [](double x, double) { return x * x; });
    EXPECT_NEAR(b.value, kPi / 4, 1e-10);
    EXPECT_LE(b.error_estimate, 1e-10);
}

TEST(Quad2d, AnnularSectorArea) {
    const QuadResult a = quad2d({AnnularSectorRegion{0.5, 2.0, 0.0, kPi / 3}}, [](double, double) { return 1.0; });
    EXPECT_NEAR(a.value, 0.5 * (4.0 - 0.25) * kPi / 3, 1e-12);
}

TEST(Quad2d, PolynomialExactness) {
    // degree 2n-1 = 31 per axis with 16 base nodes
    auto f = [](double x, double y) { return std::pow(x, 31) + std::pow(y, 30) * x; };
    QuadratureSpec s{RectangleRegion{0, 1, -1, 2}};
    s.refinement_cap = 1;
    const double exact = 3.0 / 32.0 + (std::pow(2.0, 31) + 1.0) / 31.0 * 0.5;
    EXPECT_NEAR(quad2d(s, f).value / exact, 1.0, 1e-12);
}

TEST(Quad2d, ValidatesSpec) {
    QuadratureSpec s{RectangleRegion{0, 1, 0, 1}};
    s.nodes_x = 4;
    EXPECT_THROW(quad2d(s, [](double, double) { return 1.0; }), std::domain_error);
    s.nodes_x = 16;
    s.refinement_cap = 0;
    EXPECT_THROW(quad2d(s, [](double, double) { return 1.0; }), std::domain_error);
}

TEST(Quad2d, FlagsNonconvergence) {
    QuadratureSpec s{RectangleRegion{0, 1, 0, 1}};
    s.refinement_cap = 1;
    s.tolerance = 1e-15;
    const QuadResult r = quad2d(s, [](double x, double) { return x < 0.3 ? 0.0 : 1.0; });
    EXPECT_FALSE(r.converged);
}

TEST(FiniteDiff, Quadratic) {
    auto f = [](const Vector& w) { return 0.5 * dot(w, w); };
    const Vector g = finite_diff_grad(f, Vector{1, 2}, 1e-5);
    EXPECT_NEAR(g[0], 1.0, 1e-9);
    EXPECT_NEAR(g[1], 2.0, 1e-9);
}

TEST(FiniteDiff, Constant) {
    const Vector g = finite_diff_grad([](const Vector&) { return 3.0; }, Vector{0.4, -7}, 1e-5);
    EXPECT_NEAR(norm(g), 0.0, 1e-12);
    EXPECT_THROW(finite_diff_grad([](const Vector&) { return 3.0; }, Vector{0, 0}, 0.0), std::domain_error);
}

TEST(GridRefine, Quadratic) {
    auto f = [](const Vector& w) { return std::pow(w[0] - 1, 2) + std::pow(w[1] - 1, 2); };
    auto g = [](const Vector& w) { return Vector{2 * (w[0] - 1), 2 * (w[1] - 1)}; };
    PolarBox box;
    box.r_max = 4.0;
    box.radial_nodes = 40;
    box.angular_nodes = 72;
    MinimizeOptions o;
    o.grad_tol = 1e-10;
    const MinimizeResult r = grid_refine_minimize(f, g, box, o);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.argmin[0], 1.0, 1e-10);
    EXPECT_NEAR(r.argmin[1], 1.0, 1e-10);
    EXPECT_LE(r.value, r.best_grid_value);
}

TEST(GridRefine, PicksLowerBasin) {
    // (x^2 - 1)^2 + y^2 + 0.3 x: basins near x = +1 and x = -1, the left one lower
    auto f = [](const Vector& w) { return std::pow(w[0] * w[0] - 1, 2) + w[1] * w[1] + 0.3 * w[0]; };
    auto g = [](const Vector& w) { return Vector{4 * w[0] * (w[0] * w[0] - 1) + 0.3, 2 * w[1]}; };
    // stationary points of 4x(x^2-1)+0.3 by bisection
    double lo = -2.0;
    double hi = -0.8;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (4 * m * (m * m - 1) + 0.3 < 0 ? lo : hi) = m;
    }
    PolarBox box;
    box.r_max = 3.0;
    box.radial_nodes = 30;
    box.angular_nodes = 90;
    const MinimizeResult r = grid_refine_minimize(f, g, box, {});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.argmin[0], lo, 1e-9);
    EXPECT_NEAR(r.argmin[1], 0.0, 1e-9);
}

TEST(GridRefine, NeverAboveBestGridNode) {
    // nonsmooth function: descent cannot improve on the grid, value must not get worse
    auto f = [](const Vector& w) { return std::abs(w[0] - 0.3) + std::abs(w[1] + 0.2); };
    auto g = [](const Vector& w) { return Vector{w[0] > 0.3 ? 1.0 : -1.0, w[1] > -0.2 ? 1.0 : -1.0}; };
    PolarBox box;
    box.r_max = 1.0;
    box.radial_nodes = 13;
    box.angular_nodes = 17;
    const MinimizeResult r = grid_refine_minimize(f, g, box, {});
    EXPECT_LE(r.value, r.best_grid_value);
}

TEST(GridRefine, EmptyBoxRejected) {
    PolarBox box;
    box.r_max = 0.0;
    auto f = [](const Vector&) { return 0.0; };
    auto g = [](const Vector&) { return Vector{0, 0}; };
    EXPECT_THROW(grid_refine_minimize(f, g, box, {}), std::domain_error);
}

// Dense pure-grid scan of the logistic risk of Q(0.01), independent of the
// descent stage; the refined minimizer must lie within one cell of the best
// dense node and not above its value.
TEST(GridRefine, MatchesDensePureGridOnQ) {
    const LowerBoundParams p = LowerBoundParams::make(0.01);
    const LayeredDensity ld = p.layers();
    const OracleReport o = oracle_global_min_q(p, 1e-9);
    const double rmax = 20.0 / std::sqrt(0.01);
    const int nr = 1000;
    const int nt = 2880;
    double best = INFINITY;
    double br = 0.0;
    double bt = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = rmax * (i + 1) / nr;
        for (int j = 0; j < nt; ++j) {
            const double t = -kPi + 2 * kPi * (j + 1) / nt;
            const double v = population_risk(ld, LossKind::logistic(), polar_point(r, t)).value;
            if (v < best) {
                best = v;
                br = r;
                bt = t;
            }
        }
    }
    EXPECT_LE(o.logistic, best);
    EXPECT_NEAR(o.r, br, rmax / nr);
    EXPECT_NEAR(o.theta, bt, 2 * kPi / nt);
}
