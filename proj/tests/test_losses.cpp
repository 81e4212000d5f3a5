#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frozen_values.hpp"
#include "halfspace/losses.hpp"

using namespace halfspace;

TEST(LossValue, Examples) {
    EXPECT_NEAR(loss_value(LossKind::logistic(), 0.0), std::numbers::ln2, 1e-15);
    EXPECT_DOUBLE_EQ(loss_value(LossKind::hinge(), -1.5), 1.5);
    EXPECT_DOUBLE_EQ(loss_value(LossKind::hinge(), 2.0), 0.0);
    EXPECT_NEAR(loss_value(LossKind::truncated_logistic(-10.0), -50.0), frozen::kLogisticAtMinus10, 1e-13);
}

TEST(LossValue, LogisticIsOverflowSafe) {
    EXPECT_NEAR(loss_value(LossKind::logistic(), -1000.0), 1000.0, 1e-12);
    EXPECT_GE(loss_value(LossKind::logistic(), 1000.0), 0.0);
    EXPECT_LT(loss_value(LossKind::logistic(), 1000.0), 1e-300);
    EXPECT_TRUE(std::isfinite(loss_value(LossKind::logistic(), -1e6)));
}

TEST(LossDeriv, Examples) {
    EXPECT_DOUBLE_EQ(loss_deriv(LossKind::hinge(), 0.0), -1.0);
    EXPECT_DOUBLE_EQ(loss_deriv(LossKind::hinge(), 1e-300), 0.0);
    EXPECT_DOUBLE_EQ(loss_deriv(LossKind::logistic(), 0.0), -0.5);
    const double d = loss_deriv(LossKind::logistic(), 100.0);
    EXPECT_LT(std::abs(d), 1e-40);
    EXPECT_NEAR(d / frozen::kLogisticDerivAt100, 1.0, 1e-12);
}

TEST(LossDeriv, InUnitInterval) {
    for (double z = -60; z <= 60; z += 0.37) {
        for (LossKind k : {LossKind::logistic(), LossKind::hinge(), LossKind::truncated_logistic(-3.0)}) {
            EXPECT_LE(loss_deriv(k, z), 0.0);
            EXPECT_GE(loss_deriv(k, z), -1.0);
        }
    }
}

TEST(TruncatedLogistic, RejectsNonNegativeThreshold) {
    EXPECT_THROW(LossKind::truncated_logistic(0.0), std::domain_error);
    EXPECT_THROW(LossKind::truncated_logistic(1.0), std::domain_error);
}

TEST(TruncatedLogistic, BelowLogisticEqualAboveThreshold) {
    const LossKind t = LossKind::truncated_logistic(-4.0);
    for (double z = -20; z <= 20; z += 0.25) {
        EXPECT_LE(loss_value(t, z), loss_value(LossKind::logistic(), z));
        if (z >= -4.0) EXPECT_EQ(loss_value(t, z), loss_value(LossKind::logistic(), z));
        if (z < -4.0) EXPECT_EQ(loss_deriv(t, z), 0.0);
    }
}

TEST(LossProperties, ReflectionIdentity) {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = u(g);
        for (LossKind k : {LossKind::logistic(), LossKind::hinge()}) {
            EXPECT_NEAR(loss_value(k, -z) - loss_value(k, z), z, 1e-9);
        }
    }
}

TEST(LossProperties, DerivMatchesFiniteDifferences) {
    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    const double h = 1e-6;
    const LossKind trunc = LossKind::truncated_logistic(-5.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = u(g);
        for (LossKind k : {LossKind::logistic(), LossKind::hinge(), trunc}) {
            if (k.is_hinge() && std::abs(z) < 1e-3) continue;
            if (k.tag() == LossKind::Tag::TruncatedLogistic && std::abs(z + 5.0) < 1e-3) continue;
            const double fd = (loss_value(k, z + h) - loss_value(k, z - h)) / (2 * h);
            const double an = loss_deriv(k, z);
            if (std::abs(an) < 1e-8) {
                EXPECT_NEAR(fd, an, 1e-8);
            } else {
                EXPECT_NEAR(fd / an, 1.0, 1e-5) << "z=" << z << " loss=" << k.name();
            }
        }
    }
}

TEST(LossProperties, HingeDerivSquaredIsNegated) {
    for (double z = -5; z <= 5; z += 0.125) {
        const double d = loss_deriv(LossKind::hinge(), z);
        EXPECT_EQ(d * d, -d);
    }
}
