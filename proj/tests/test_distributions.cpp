#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "frozen_values.hpp"
#include "halfspace/distributions.hpp"
#include "halfspace/risk.hpp"

using namespace halfspace;

TEST(LowerBoundParams, FormulasAtOnePercent) {
    const LowerBoundParams p = LowerBoundParams::make(0.01);
    EXPECT_NEAR(p.q3, 0.066, 1e-15);
    EXPECT_NEAR(p.q4, frozen::kQ4At001, 1e-15);
    EXPECT_NEAR(p.part_mass[0], 0.01, 1e-15);
    EXPECT_NEAR(p.part_mass[1], 0.2, 1e-15);
    EXPECT_NEAR(p.part_mass[2], 0.066, 1e-15);
    EXPECT_NEAR(p.part_mass[3], 0.724, 1e-15);
    EXPECT_NEAR(p.part_mass[0] + p.part_mass[1] + p.part_mass[2] + p.part_mass[3], 1.0, 1e-12);
}

TEST(LowerBoundParams, Invariants) {
    for (double opt : {1e-4, 1.0 / 2500, 1.0 / 400, 1.0 / 100}) {
        const LowerBoundParams p = LowerBoundParams::make(opt);
        EXPECT_LE(p.q3, 1.0 / 15.0);
        EXPECT_GE(p.q4, 1.0 / (2 * std::numbers::pi));
        EXPECT_LE(p.q4, 1.0 / std::numbers::pi);
        for (double m : p.part_mass) EXPECT_GT(m, 0.0);
        EXPECT_NEAR(p.layers().mass(), 1.0, 1e-12);
    }
}

TEST(LowerBoundParams, RejectsOutOfRange) {
    EXPECT_THROW(make_lower_bound_q(0.2), std::domain_error);
    EXPECT_THROW(make_lower_bound_q(0.0), std::domain_error);
    EXPECT_NO_THROW(make_lower_bound_q(1.0 / 16));
}

TEST(DensityQ, Examples) {
    const LowerBoundParams p = LowerBoundParams::make(0.01);
    const DensityEvaluation a = density_q(p, Vector{0.5, 0.5});
    EXPECT_NEAR(a.density, p.q4, 1e-15);
    EXPECT_EQ(a.part(), 4);
    EXPECT_EQ(a.parts.at(0).label, Label::positive());

    // square center lies on the unit circle; step inward so the disk counts
    const double c = std::numbers::sqrt2 / 2 - 0.02;
    const DensityEvaluation b = density_q(p, Vector{c, -c});
    EXPECT_NEAR(b.density, 1.0 + p.q4, 1e-15);
    EXPECT_EQ(b.part(), 1);
    ASSERT_EQ(b.parts.size(), 2u);
    EXPECT_EQ(b.parts[0].label, Label::negative());
    EXPECT_EQ(b.parts[1].label, Label::positive());

    const DensityEvaluation z = density_q(p, Vector{5, 5});
    EXPECT_EQ(z.density, 0.0);
    EXPECT_EQ(z.part(), 0);
    EXPECT_THROW(density_q(p, Vector{1, 2, 3}), std::domain_error);
}

TEST(DensityQ, BoundedByTwoAndPartsDisjoint) {
    const LowerBoundParams p = LowerBoundParams::make(0.01);
    rng::CounterRng g(1, rng::Stream::Density, 0);
    for (int i = 0; i < 1'000'000; ++i) {
        const Vector x{4 * g.uniform() - 2, 4 * g.uniform() - 2};
        const DensityEvaluation e = density_q(p, x);
        EXPECT_LE(e.density, 2.0);
        int non_disk = 0;
        for (const auto& c : e.parts) non_disk += c.part != 4;
        ASSERT_LE(non_disk, 1) << x[0] << "," << x[1];
    }
}

TEST(SampleQ, PartFrequenciesAndSupport) {
    const DistributionModel m = make_lower_bound_q(0.01);
    const LowerBoundParams& p = *m.lower_bound;
    const std::size_t n = 1'000'000;
    const auto s = sample(m, n, 42);
    std::size_t in_q1 = 0;
    double worst = 0.0;
    for (const auto& ex : s) {
        worst = std::max(worst, norm(ex.x));
        const geom::Point2 pt{ex.x[0], ex.x[1]};
        if (detail::in_square(pt, p.q1_negative_center, p.q1_edge) || detail::in_square(pt, p.q1_positive_center, p.q1_edge)) ++in_q1;
    }
    // Q4 mass under the squares is counted too
    const double overlap = geom::ConvexCell(geom::ConvexCell::square(p.q1_negative_center, p.q1_edge).polygon(), 1.0).area();
    const double expected = 0.01 + p.q4 * 2 * overlap;
    const double se = std::sqrt(expected * (1 - expected) / n);
    EXPECT_NEAR(static_cast<double>(in_q1) / n, expected, 3 * se);
    EXPECT_LE(worst, 2.0);
}

TEST(SampleQ, Q1LabelFrequencyMatchesMass) {
    // labels disagreeing with sign(x1) come only from Q1
    const DistributionModel m = make_lower_bound_q(0.01);
    const std::size_t n = 1'000'000;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledExample ex = draw_one(m, 7, i);
        wrong += (ex.x[0] >= 0 ? 1 : -1) != ex.y.value();
    }
    EXPECT_NEAR(static_cast<double>(wrong) / n, 0.01, 3 * std::sqrt(0.01 * 0.99 / n));
}

TEST(Sample, Deterministic) {
    const DistributionModel m = make_lower_bound_q(0.01);
    std::ostringstream a;
    std::ostringstream b;
    write_samples_csv(a, sample(m, 1000, 5));
    write_samples_csv(b, sample(m, 1000, 5));
    EXPECT_EQ(a.str(), b.str());
    std::ostringstream c;
    write_samples_csv(c, sample(m, 1000, 6));
    EXPECT_NE(a.str(), c.str());
    EXPECT_THROW(sample(m, 0, 1), std::domain_error);
}

TEST(Sample, PrefixStable) {
    const DistributionModel m = make_gaussian_noisy(0.1, 3);
    const auto a = sample(m, 100, 9);
    const auto b = sample(m, 50, 9);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(a[i].x, b[i].x);
}

TEST(SmoothBenchmark, ZeroOneOfGroundTruthIsOpt) {
    for (double opt : {0.01, 1.0 / 400, 1.0 / 2500, 1.0 / 16}) {
        const DistributionModel m = make_smooth_benchmark(opt);
        EXPECT_NEAR(m.require_layers().mass(), 1.0, 1e-12);
        EXPECT_NEAR(zero_one_risk(m.require_layers(), m.ground_truth), opt, 1e-10);
        EXPECT_EQ(m.c_kappa.value(), 0.0);
    }
    EXPECT_THROW(make_smooth_benchmark(0.1), std::domain_error);
}

TEST(SmoothBenchmark, SamplerMatchesLayers) {
    const DistributionModel m = make_smooth_benchmark(0.01);
    const std::size_t n = 1'000'000;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledExample ex = draw_one(m, 3, i);
        wrong += sign_predict(m.ground_truth, ex.x) != ex.y;
    }
    EXPECT_NEAR(static_cast<double>(wrong) / n, 0.01, 3 * std::sqrt(0.01 * 0.99 / n));
}

TEST(Gaussian, BandWidth) {
    EXPECT_NEAR(gaussian_noise_band(0.1), frozen::kGaussianBand01, 1e-11);
    EXPECT_LT(gaussian_noise_band(1e-9), 1e-8);
    EXPECT_THROW(make_gaussian_noisy(0.3, 2), std::domain_error);
    EXPECT_THROW(make_gaussian_noisy(0.1, 1), std::domain_error);
}

TEST(Gaussian, GroundTruthRiskIsOpt) {
    const DistributionModel m = make_gaussian_noisy(0.1, 2);
    const McEstimate e = mc_zero_one(m, m.ground_truth, 1'000'000, 1);
    EXPECT_NEAR(e.estimate, 0.1, 3 * std::sqrt(0.09 / 1e6));
    const McEstimate c = mc_zero_one(m, m.ground_truth * -1.0, 1'000'000, 1);
    EXPECT_NEAR(c.estimate, 0.9, 3 * std::sqrt(0.09 / 1e6));
}

TEST(Models, GroundTruthIsUnit) {
    for (const DistributionModel& m : {make_lower_bound_q(0.01), make_smooth_benchmark(0.01), make_gaussian_noisy(0.1, 5),
                                       make_realizable_disk()}) {
        EXPECT_NEAR(norm(m.ground_truth), 1.0, 1e-12) << m.id;
    }
}

TEST(Models, CapabilityErrorWithoutLayers) {
    const DistributionModel m = make_gaussian_noisy(0.1, 3);
    EXPECT_FALSE(m.has_exact_layers());
    EXPECT_THROW((void)m.require_layers(), CapabilityError);
}
