#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frozen_values.hpp"
#include "halfspace/core.hpp"

using namespace halfspace;

TEST(Angle, Orthogonal) { EXPECT_NEAR(angle_between(Vector{1, 0}, Vector{0, 1}).value(), std::numbers::pi / 2, 1e-15); }

TEST(Angle, Diagonal) { EXPECT_NEAR(angle_between(Vector{1, 0}, Vector{1, 1}).value(), std::numbers::pi / 4, 1e-15); }

TEST(Angle, NearParallelIsAccurate) {
    const double a = angle_between(Vector{2, 0}, Vector{1, 1e-8}).value();
    EXPECT_NEAR(a / frozen::kAngleNearParallel, 1.0, 1e-12);
}

TEST(Angle, Antiparallel) {
    EXPECT_NEAR(angle_between(Vector{1, 0}, Vector{-1, 1e-9}).value(), std::numbers::pi - 1e-9, 1e-15);
    EXPECT_DOUBLE_EQ(angle_between(Vector{1, 0}, Vector{-3, 0}).value(), std::numbers::pi);
}

TEST(Angle, ZeroVectorThrows) {
    EXPECT_THROW(angle_between(Vector{0, 0}, Vector{1, 0}), std::domain_error);
    EXPECT_THROW(angle_between(Vector{1, 0}, Vector{0, 0}), std::domain_error);
}

TEST(Angle, ScaleInvariant) {
    std::mt19937_64 g(3);
    std::normal_distribution<double> n;
    for (int i = 0; i < 200; ++i) {
        const Vector u{n(g), n(g), n(g)};
        const Vector v{n(g), n(g), n(g)};
        const double c = std::exp(n(g) * 3);
        EXPECT_NEAR(angle_between(u * c, v).value(), angle_between(u, v).value(), 1e-12);
    }
}

TEST(Angle, RangeIsZeroToPi) {
    std::mt19937_64 g(4);
    std::normal_distribution<double> n;
    for (int i = 0; i < 500; ++i) {
        const double a = angle_between(Vector{n(g), n(g)}, Vector{n(g), n(g)}).value();
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, std::numbers::pi);
    }
}

TEST(ProjectBall, Scales) {
    const Vector p = project_ball(Vector{3, 4}, 1.0);
    EXPECT_NEAR(p[0], 0.6, 1e-15);
    EXPECT_NEAR(p[1], 0.8, 1e-15);
}

TEST(ProjectBall, InteriorFixed) { EXPECT_EQ(project_ball(Vector{0.3, 0}, 1.0), (Vector{0.3, 0})); }

TEST(ProjectBall, FourDimensional) {
    const Vector p = project_ball(Vector{1, 1, 1, 1}, 1.0);
    for (double c : p) EXPECT_NEAR(c, 0.5, 1e-15);
}

TEST(ProjectBall, RejectsNonPositiveRadius) {
    EXPECT_THROW(project_ball(Vector{1, 0}, 0.0), std::domain_error);
    EXPECT_THROW(project_ball(Vector{1, 0}, -1.0), std::domain_error);
}

TEST(ProjectBall, IdempotentAndNonexpansive) {
    std::mt19937_64 g(5);
    std::normal_distribution<double> n(0.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Vector a{n(g), n(g), n(g)};
        const Vector b{n(g), n(g), n(g)};
        const Vector pa = project_ball(a, 1.5);
        EXPECT_LE(norm(pa), 1.5 * (1 + 1e-15));
        EXPECT_EQ(project_ball(pa, 1.5), pa);
        EXPECT_LE(norm(pa - project_ball(b, 1.5)), norm(a - b) * (1 + 1e-12));
    }
}

TEST(ProjectHalfspace, Examples) {
    EXPECT_EQ(project_halfspace(Vector{0.5, 2}, Vector{1, 0}), (Vector{1, 2}));
    EXPECT_EQ(project_halfspace(Vector{3, -1}, Vector{1, 0}), (Vector{3, -1}));
    EXPECT_EQ(project_halfspace(Vector{0, 0}, Vector{0, 1}), (Vector{0, 1}));
}

TEST(ProjectHalfspace, RejectsNonUnitAnchor) { EXPECT_THROW(project_halfspace(Vector{0, 0}, Vector{0, 2}), std::domain_error); }

TEST(ProjectHalfspace, NearestPointOfDomain) {
    std::mt19937_64 g(6);
    std::normal_distribution<double> n(0.0, 2.0);
    const Vector v = normalized(Vector{1, 2, -1});
    for (int i = 0; i < 20; ++i) {
        const Vector w{n(g), n(g), n(g)};
        const Vector p = project_halfspace(w, v);
        EXPECT_GE(dot(p, v), 1.0 - 1e-12);
        EXPECT_EQ(project_halfspace(p, v), p);
        for (int k = 0; k < 1000; ++k) {
            Vector z{n(g), n(g), n(g)};
            z = project_halfspace(z, v) + v * std::abs(n(g));
            EXPECT_LE(norm(w - p), norm(w - z) + 1e-12);
        }
    }
}

TEST(SignPredict, Examples) {
    EXPECT_EQ(sign_predict(Vector{1, 0}, Vector{-2, 5}), Label::negative());
    EXPECT_EQ(sign_predict(Vector{1, 0}, Vector{0, 3}), Label::positive());
    EXPECT_EQ(sign_predict(Vector{0.6, 0.8}, Vector{1, -1}), Label::negative());
}

TEST(SignPredict, DimensionMismatchThrows) { EXPECT_THROW(sign_predict(Vector{1, 0}, Vector{1, 0, 0}), std::domain_error); }

TEST(SignPredict, PositiveScaleInvariant) {
    std::mt19937_64 g(7);
    std::normal_distribution<double> n;
    for (int i = 0; i < 500; ++i) {
        const Vector w{n(g), n(g)};
        const Vector x{n(g), n(g)};
        EXPECT_EQ(sign_predict(w * std::exp(n(g)), x), sign_predict(w, x));
    }
}

TEST(Label, OnlyPlusMinusOne) {
    EXPECT_THROW(Label(0), std::domain_error);
    EXPECT_THROW(Label(2), std::domain_error);
    EXPECT_EQ(Label(-1).flipped(), Label::positive());
    EXPECT_EQ(Label::positive().as_real(), 1.0);
}

TEST(Vector, DimensionChecks) {
    EXPECT_THROW(dot(Vector{1, 2}, Vector{1}), std::domain_error);
    Vector a{1, 2};
    EXPECT_THROW(a += Vector{1}, std::domain_error);
    EXPECT_TRUE(a.all_finite());
    EXPECT_FALSE((Vector{1, NAN}).all_finite());
}

TEST(Vector, NormAvoidsOverflow) { EXPECT_DOUBLE_EQ(norm(Vector{3e200, 4e200}), 5e200); }
