#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nlphase/analytic_model.hpp"
#include "nlphase/errors.hpp"
#include "nlphase/numerics.hpp"

using namespace nlphase;
using analytic::SecondMomentForm;

namespace {

struct RandomPoint {
    double n;
    double theta;
    double phi;
};

std::vector<RandomPoint> random_points(std::uint64_t seed, int count, double n_max = 40.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> n(0.1, n_max);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::vector<RandomPoint> out;
    for (int i = 0; i < count; ++i) out.push_back({n(rng), angle(rng), angle(rng)});
    return out;
}

}  // namespace

TEST(ExpectationX, FrozenValue) {
    // -2 [0 + exp(-4 sin^2 0.1) sin(2 sin 0.2)], evaluated in extended precision.
    EXPECT_NEAR(analytic::expectation_x({4.0, 0.0, 0.1, 2}), -0.7436841563160712, 1e-14);
}

TEST(ExpectationX, PhaseZeroIsMinusSqrtNAtQuarterTurn) {
    for (double n : {1.0, 5.0, 20.0, 100.0})
        EXPECT_NEAR(analytic::expectation_x({n, kPi / 2, 0.0, 2}), -std::sqrt(n), 1e-12);
}

TEST(ExpectationX, OddInPhiAtThetaZero) {
    for (const auto& p : random_points(11, 50)) {
        const double plus = analytic::expectation_x({p.n, 0.0, p.phi, 2});
        const double minus = analytic::expectation_x({p.n, 0.0, -p.phi, 2});
        EXPECT_NEAR(plus, -minus, 1e-12);
    }
}

TEST(SecondMoment, CorrectedVarianceIsVacuumAtZeroPhase) {
    for (const auto& p : random_points(12, 100))
        EXPECT_NEAR(analytic::moments({p.n, p.theta, 0.0, 2}).variance(), 1.0, 1e-10);
}

TEST(SecondMoment, AsPrintedIsOffByNAtOrigin) {
    for (double n : {1.0, 4.0, 10.0}) {
        const ProtocolParams p{n, 0.0, 0.0, 2};
        EXPECT_NEAR(analytic::second_moment_x(p, SecondMomentForm::AsPrinted), n + 1.0, 1e-12);
        EXPECT_NEAR(analytic::second_moment_x(p, SecondMomentForm::Corrected), 1.0, 1e-12);
    }
}

TEST(SecondMoment, VarianceAtLeastVacuumFreeAndThetaIndependent) {
    for (const auto& p : random_points(13, 100)) {
        const double v = analytic::moments({p.n, p.theta, p.phi, 2}).variance();
        EXPECT_GT(v, 1.0 - 1e-10);
        EXPECT_NEAR(v, analytic::moments({p.n, 0.3, p.phi, 2}).variance(), 1e-9 * v);
    }
}

TEST(Slope, MatchesCentralDifference) {
    for (const auto& p : random_points(14, 200, 30.0)) {
        const double fd = numerics::central_difference(
            [&](double x) { return analytic::expectation_x({p.n, p.theta, x, 2}); }, p.phi, 1e-6);
        EXPECT_NEAR(analytic::slope_x({p.n, p.theta, p.phi, 2}), fd, 1e-6 * std::pow(p.n, 1.5));
    }
}

TEST(Slope, PeakAtOrigin) {
    EXPECT_NEAR(analytic::slope_x({20.0, 1.0, 0.0, 2}), -std::pow(20.0, 1.5), 1e-10);
}

TEST(Validation, RejectsOtherOrdersAndBadInputs) {
    EXPECT_THROW(analytic::expectation_x({4.0, 0.0, 0.1, 3}), InvalidArgument);
    EXPECT_THROW(analytic::second_moment_x({4.0, 0.0, 0.1, 1}), InvalidArgument);
    EXPECT_THROW(analytic::slope_x({-1.0, 0.0, 0.1, 2}), InvalidArgument);
    EXPECT_THROW(analytic::expectation_x({NAN, 0.0, 0.1, 2}), InvalidArgument);
    EXPECT_THROW(analytic::expectation_x({4.0, INFINITY, 0.1, 2}), InvalidArgument);
}

TEST(Loss, BeforePhaseRescalesPhotonNumber) {
    for (const auto& p : random_points(15, 50)) {
        const double t = 0.25 + 0.5 * std::abs(std::sin(p.theta));
        const auto lossy = analytic::moments_with_loss({p.n, p.theta, p.phi, 2},
                                                       LossSpec::before_phase(t));
        const auto ref = analytic::moments({t * p.n, p.theta, p.phi, 2});
        EXPECT_DOUBLE_EQ(lossy.mean, ref.mean);
        EXPECT_DOUBLE_EQ(lossy.second_moment, ref.second_moment);
    }
}

TEST(Loss, AfterPhaseMixesInVacuum) {
    const ProtocolParams p{10.0, 0.4, 0.05, 2};
    const auto clean = analytic::moments(p);
    const auto lossy = analytic::moments_with_loss(p, LossSpec::after_phase(0.36));
    EXPECT_NEAR(lossy.mean, 0.6 * clean.mean, 1e-12);
    EXPECT_NEAR(lossy.variance(), 0.36 * clean.variance() + 0.64, 1e-12);
    EXPECT_NEAR(analytic::slope_with_loss(p, LossSpec::after_phase(0.36)), 0.6 * analytic::slope_x(p),
                1e-12);
}

TEST(Loss, NoneIsIdentity) {
    const ProtocolParams p{7.0, 1.1, -0.3, 2};
    EXPECT_DOUBLE_EQ(analytic::moments_with_loss(p, LossSpec::none()).mean, analytic::moments(p).mean);
}

TEST(Fringe, NormalizedMinusOneAtOrigin) {
    const std::vector<double> grid = numerics::linspace(-kPi / 2, kPi / 2, 2001);
    const auto scan = analytic::fringe_scan(20.0, kPi / 2, grid);
    ASSERT_EQ(scan.size(), 2001u);
    EXPECT_DOUBLE_EQ(scan[1000].phi, 0.0);
    EXPECT_NEAR(scan[1000].normalized_mean, -1.0, 1e-15);
    EXPECT_THROW(analytic::fringe_scan(20.0, 0.0, std::vector<double>{}), InvalidArgument);
}

TEST(Visibility, FrozenValuesAndMonotone) {
    // max over phi of exp(-N sin^2 phi) sin((N/2) sin 2phi), located by a dense scan in Python.
    const std::vector<std::pair<double, double>> frozen{
        {5, 0.69068}, {10, 0.81135}, {20, 0.89341}, {40, 0.94287}, {80, 0.97035}};
    double previous = 0.0;
    for (const auto& [n, v] : frozen) {
        const double got = analytic::visibility(n);
        EXPECT_NEAR(got, v, 1e-5) << "N=" << n;
        EXPECT_GT(got, previous);
        previous = got;
    }
}

TEST(Visibility, ExtremaAreConsistent) {
    const auto r = analytic::visibility_scan(20.0);
    EXPECT_NEAR(r.max_mean, analytic::expectation_x({20.0, kPi / 2, r.phi_at_max, 2}), 1e-14);
    EXPECT_NEAR(r.min_mean, -std::sqrt(20.0) * (1.0 + 0.89340571518), 1e-8);
    EXPECT_NEAR(r.visibility, (r.max_mean - r.min_mean) / (std::abs(r.max_mean) + std::abs(r.min_mean)),
                1e-15);
}
