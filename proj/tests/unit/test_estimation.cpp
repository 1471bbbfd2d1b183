#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "nlphase/errors.hpp"
#include "nlphase/estimation.hpp"
#include "nlphase/qfi.hpp"

using namespace nlphase;
using namespace nlphase::estimation;

TEST(Sensitivity, FromMoments) {
    QuadratureMoments m;
    m.mean = 0.5;
    m.second_moment = 4.25;  // variance 4
    EXPECT_DOUBLE_EQ(sensitivity_from_moments(m, -0.5), 4.0);
    EXPECT_THROW(sensitivity_from_moments(m, 0.0), InsensitivePoint);
    EXPECT_THROW(sensitivity_from_moments(m, 1e-10), InsensitivePoint);
}

TEST(Sensitivity, InsensitivePointOfTheFringe) {
    // The slope vanishes where 2 phi + (N/2) sin 2phi = pi/2; for N = 4 bisect for it.
    const AnalyticSensitivityModel model(4.0);
    double lo = 0.0, hi = 0.7;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (2 * mid + 2 * std::sin(2 * mid) < kPi / 2 ? lo : hi) = mid;
    }
    EXPECT_THROW(model.sensitivity(lo, 0.0), InsensitivePoint);
}

TEST(FindOptimum, AnalyticIsNToMinusThreeHalves) {
    const auto start = std::chrono::steady_clock::now();
    for (double n : {1.0, 5.0, 10.0, 20.0, 50.0}) {
        const auto r = find_optimum(n, MomentsSource::Analytic);
        EXPECT_NEAR(r.delta_phi / std::pow(n, -1.5), 1.0, 1e-6) << "N=" << n;
        EXPECT_NEAR(r.phi_star, 0.0, 1e-4);
        EXPECT_NEAR(r.theta_star, kPi / 2, 1e-4);
        EXPECT_TRUE(r.theta_degenerate);
        EXPECT_EQ(r.source, MomentsSource::Analytic);
        EXPECT_GE(r.delta_phi, qfi::qcrb(n));
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST(FindOptimum, OracleSearchOnCoarseGrid) {
    SearchOptions opts;
    opts.phi_points = 12;
    opts.theta_points = 8;
    const auto r = find_optimum(3.0, MomentsSource::Oracle, opts);
    EXPECT_EQ(r.source, MomentsSource::Oracle);
    EXPECT_NEAR(r.delta_phi / std::pow(3.0, -1.5), 1.0, 1e-6);
    EXPECT_NEAR(r.phi_star, 0.0, 1e-4);
    EXPECT_NEAR(r.theta_star, kPi / 2, 1e-4);
}

TEST(FindOptimum, RejectsNonPositiveN) {
    EXPECT_THROW(find_optimum(0.0, MomentsSource::Analytic), InvalidArgument);
    EXPECT_THROW(find_optimum(-2.0, MomentsSource::Analytic), InvalidArgument);
}

TEST(EvaluateAt, OracleMatchesAnalytic) {
    const OracleSensitivityModel oracle_model(10.0);
    const AnalyticSensitivityModel analytic_model(10.0);
    for (double phi : {0.0, 0.05, -0.12}) {
        const auto o = evaluate_at(oracle_model, phi, 1.0);
        const auto a = evaluate_at(analytic_model, phi, 1.0);
        EXPECT_NEAR(o.delta_phi / a.delta_phi, 1.0, 1e-6);
        EXPECT_NEAR(o.slope, a.slope, 1e-5 * std::abs(a.slope));
    }
    EXPECT_EQ(oracle_model.n_max(), 43);
}

TEST(Loss, BeforePhaseIsTNToMinusThreeHalves) {
    for (double n : {10.0, 20.0})
        for (double t : {0.3, 0.6, 0.9}) {
            const auto r = lossy_optimum(n, t, LossPlacement::BeforePhase);
            EXPECT_NEAR(r.delta_phi / std::pow(t * n, -1.5), 1.0, 1e-6) << n << " " << t;
        }
}

TEST(Loss, AfterPhaseScalesAsInverseRootT) {
    for (double t : {0.3, 0.6, 0.9}) {
        const auto r = lossy_optimum(20.0, t, LossPlacement::AfterPhase);
        EXPECT_NEAR(r.delta_phi * std::sqrt(t) * std::pow(20.0, 1.5), 1.0, 1e-6);
    }
}

TEST(Loss, OracleAgreesAfterPhase) {
    const auto a = lossy_optimum(10.0, 0.6, LossPlacement::AfterPhase);
    const auto o = lossy_optimum(10.0, 0.6, LossPlacement::AfterPhase, MomentsSource::Oracle);
    EXPECT_EQ(o.source, MomentsSource::Oracle);
    EXPECT_NEAR(o.delta_phi / a.delta_phi, 1.0, 1e-6);
}

TEST(Loss, OracleAgreesBeforePhase) {
    const auto o = lossy_optimum(10.0, 0.3, LossPlacement::BeforePhase, MomentsSource::Oracle);
    EXPECT_NEAR(o.delta_phi / std::pow(3.0, -1.5), 1.0, 1e-6);
}

TEST(AllowableLoss, Values) {
    EXPECT_NEAR(allowable_max_loss(20.0), 0.6316, 1e-4);
    EXPECT_NEAR(allowable_max_loss(8.0), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(allowable_max_loss(1.0), 0.0);
    EXPECT_THROW(allowable_max_loss(0.5), InvalidArgument);
    // At the bound the lossy optimum sits exactly on the Heisenberg limit.
    const double t = 1.0 - allowable_max_loss(27.0);
    EXPECT_NEAR(lossy_optimum(27.0, t, LossPlacement::BeforePhase).delta_phi, 1.0 / 27.0, 1e-9);
}

TEST(FisherRatio, Values) {
    EXPECT_NEAR(fisher_ratio(100.0), 0.98522, 1e-5);
    EXPECT_NEAR(fisher_ratio(1.5), 0.5, 1e-15);
    for (double n : {1.0, 7.0, 40.0}) {
        const double r = qfi::qcrb(n) / std::pow(n, -1.5);
        EXPECT_NEAR(fisher_ratio(n), r * r, 1e-13);
    }
}

TEST(MakeModel, Sources) {
    EXPECT_EQ(make_model(5.0, MomentsSource::Analytic)->source(), MomentsSource::Analytic);
    EXPECT_EQ(make_model(5.0, MomentsSource::Oracle)->source(), MomentsSource::Oracle);
    EXPECT_STREQ(to_string(MomentsSource::Oracle), "oracle");
}
