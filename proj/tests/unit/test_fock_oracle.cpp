#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nlphase/analytic_model.hpp"
#include "nlphase/errors.hpp"
#include "nlphase/fock_oracle.hpp"

using namespace nlphase;
using namespace nlphase::oracle;

namespace {

PureState2M random_state(int n_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    PureState2M s(n_max);
    for (int m = 0; m <= n_max; ++m)
        for (int n = 0; m + n <= n_max; ++n) s.set_amplitude(m, n, {g(rng), g(rng)});
    s.coefficients().normalize();
    return s;
}

PureState2M fock(int m, int n, int n_max) {
    PureState2M s(n_max);
    s.set_amplitude(m, n, 1.0);
    return s;
}

}  // namespace

TEST(Basis, SectorOrdering) {
    TruncatedBasis b{3};
    EXPECT_EQ(b.dimension(), 10u);
    EXPECT_EQ(TruncatedBasis::index(0, 0), 0u);
    EXPECT_EQ(TruncatedBasis::index(0, 1), 1u);
    EXPECT_EQ(TruncatedBasis::index(1, 0), 2u);
    EXPECT_EQ(TruncatedBasis::index(0, 3), 6u);
    EXPECT_FALSE(b.contains(2, 2));
    PureState2M s(3);
    EXPECT_EQ(s.amplitude(3, 1), Complex(0.0));
}

TEST(BeamSplitter, SinglePhotonConvention) {
    const auto out = apply_bs_5050(fock(1, 0, 4));
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(out.amplitude(1, 0) - Complex(r, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(0, 1) - Complex(0.0, r)), 0.0, 1e-15);
}

TEST(BeamSplitter, HongOuMandel) {
    // |1,1> -> i(|2,0> + |0,2>)/sqrt(2): no coincidences.
    const auto out = apply_bs_5050(fock(1, 1, 4));
    EXPECT_NEAR(std::abs(out.amplitude(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude(2, 0)), 0.5, 1e-14);
    EXPECT_NEAR(std::norm(out.amplitude(0, 2)), 0.5, 1e-14);
}

TEST(BeamSplitter, SectorsAreUnitary) {
    for (int s = 0; s <= 80; s += 7) {
        const auto& u = beam_splitter_sector(s);
        ASSERT_EQ(u.rows(), s + 1);
        EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(s + 1, s + 1)).cwiseAbs().maxCoeff(),
                  1e-12);
    }
}

TEST(BeamSplitter, ConservesSectorWeightsAndNorm) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto in = random_state(25, seed);
        const auto out = apply_bs_5050(in);
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-13);
        for (int s = 0; s <= 25; ++s) EXPECT_NEAR(out.sector_weight(s), in.sector_weight(s), 1e-13);
    }
}

TEST(BeamSplitter, CoherentSplitsIntoCoherentPair) {
    const Complex alpha(2.0, 0.5);
    const int n_max = auto_truncation(std::norm(alpha));
    const auto out = apply_bs_5050(coherent_two_mode(alpha, 0.0, n_max));
    const auto expected =
        coherent_two_mode(alpha / std::sqrt(2.0), Complex(0.0, 1.0) * alpha / std::sqrt(2.0), n_max);
    EXPECT_NEAR(fidelity(out, expected), 1.0, 1e-12);
}

TEST(BeamSplitter, MixedMatchesPure) {
    const auto psi = random_state(12, 7);
    const MixedState2M rho(psi);
    const auto pure_out = apply_bs_5050(psi);
    const auto mixed_out = apply_bs_5050(rho);
    EXPECT_NEAR(fidelity(mixed_out, pure_out), 1.0, 1e-13);
    EXPECT_LT(mixed_out.max_hermiticity_error(), 1e-14);
}

TEST(Coherent, PoissonWeights) {
    const auto s = coherent_two_mode(std::sqrt(2.0), 0.0, 30);
    EXPECT_NEAR(std::norm(s.amplitude(2, 0)), 0.2706705664732254, 1e-15);  // 2 e^-2
    EXPECT_NEAR(s.sector_weight(0), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(mean_photon_number(s, Mode::A), 2.0, 1e-12);
    EXPECT_NEAR(mean_photon_number(s, Mode::B), 0.0, 1e-15);
}

TEST(Coherent, QuadratureAndNormalOrderedMoments) {
    const Complex beta(1.3, -0.4);
    const auto s = coherent_two_mode(0.0, beta, 40);
    const auto x = x_moments(s, Mode::B);
    EXPECT_NEAR(x.mean, 2.0 * beta.real(), 1e-12);
    EXPECT_NEAR(x.variance(), 1.0, 1e-12);
    EXPECT_NEAR(normal_ordered_expectation(s, Mode::B, 3), std::pow(std::norm(beta), 3), 1e-11);
}

TEST(Truncation, AutomaticValues) {
    EXPECT_EQ(auto_truncation(1.0), 17);
    EXPECT_EQ(auto_truncation(5.0), 32);
    EXPECT_EQ(auto_truncation(10.0), 43);
    EXPECT_EQ(auto_truncation(20.0), 63);
    EXPECT_EQ(auto_truncation(30.0), 81);
    for (double n : {1.0, 5.0, 10.0, 20.0, 30.0}) EXPECT_LT(poisson_tail(n, auto_truncation(n)), 1e-12);
}

TEST(Truncation, TooSmallThrowsWithNeglectedMass) {
    try {
        coherent_two_mode(std::sqrt(20.0), 0.0, 20);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_NEAR(e.neglected(), poisson_tail(20.0, 20), 1e-12);
        EXPECT_GT(e.neglected(), 0.4);
    }
}

TEST(Truncation, EdgeOccupationIsDetected) {
    EXPECT_THROW(x_moments(fock(0, 10, 10), Mode::B), TruncationError);
    EXPECT_NO_THROW(x_moments(fock(0, 9, 10), Mode::B));
}

TEST(Loss, KrausCompleteness) {
    for (double t : {0.0, 0.2, 0.5, 0.93, 1.0}) {
        const auto k = loss_kraus_operators(30, t);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(31, 31);
        for (const auto& op : k) sum += op.transpose() * op;
        EXPECT_LT((sum - Eigen::MatrixXd::Identity(31, 31)).cwiseAbs().maxCoeff(), 1e-13) << "T=" << t;
    }
}

TEST(Loss, TracePreservedAndHermitian) {
    const auto psi = random_state(15, 21);
    for (auto target : {LossTarget::A, LossTarget::B, LossTarget::Both}) {
        const auto rho = apply_loss(psi, target, 0.4);
        EXPECT_NEAR(rho.trace(), 1.0, 1e-13);
        EXPECT_LT(rho.max_hermiticity_error(), 1e-14);
    }
}

TEST(Loss, CoherentAmplitudeScalesAsSqrtT) {
    const Complex a(1.5, 0.7);
    const Complex b(-0.8, 1.1);
    const auto psi = coherent_two_mode(a, b, 40);
    for (double t : {0.1, 0.5, 0.9}) {
        const auto rho = apply_loss(psi, LossTarget::Both, t);
        const auto expected = coherent_two_mode(std::sqrt(t) * a, std::sqrt(t) * b, 40);
        EXPECT_NEAR(fidelity(rho, expected), 1.0, 1e-12);
        EXPECT_NEAR(mean_photon_number(rho, Mode::A), t * std::norm(a), 1e-12);
    }
}

TEST(Loss, SingleModeLeavesOtherModeAlone) {
    const auto psi = coherent_two_mode(1.0, 2.0, 40);
    const auto rho = apply_loss(psi, LossTarget::A, 0.25);
    EXPECT_NEAR(mean_photon_number(rho, Mode::A), 0.25, 1e-12);
    EXPECT_NEAR(mean_photon_number(rho, Mode::B), 4.0, 1e-12);
}

TEST(PsiP, OrthonormalAndInSector) {
    const int n_max = 16;
    for (int p = 0; p <= n_max; ++p) {
        const auto a = psi_p_state(p, n_max);
        EXPECT_NEAR(a.sector_weight(p), 1.0, 1e-14);
        for (int q = 0; q <= n_max; ++q) {
            const auto b = psi_p_state(q, n_max);
            EXPECT_NEAR(std::abs(inner_product(a, b)), p == q ? 1.0 : 0.0, 1e-14);
        }
    }
}

TEST(PsiP, IsBeamSplitterImageOfFockInput) {
    // |p, 0> through the splitter has binomial weights C(p, j) / 2^p.
    const auto out = apply_bs_5050(fock(6, 0, 8));
    const auto psi = psi_p_state(6, 8);
    for (int j = 0; j <= 6; ++j)
        EXPECT_NEAR(std::norm(out.amplitude(j, 6 - j)), std::norm(psi.amplitude(j, 6 - j)), 1e-14);
}

TEST(Phases, NonlinearPhaseCompensation) {
    const auto psi = random_state(10, 31);
    const double phi = 0.37;
    const auto comp = apply_nonlinear_phase(psi, Mode::A, phi, 2, true);
    const auto raw = apply_nonlinear_phase(psi, Mode::A, phi, 2, false);
    for (int m = 0; m <= 10; ++m)
        for (int n = 0; m + n <= 10; ++n) {
            EXPECT_NEAR(std::abs(raw.amplitude(m, n) - comp.amplitude(m, n) * std::polar(1.0, phi * m)),
                        0.0, 1e-14);
            EXPECT_NEAR(std::abs(comp.amplitude(m, n) -
                                 psi.amplitude(m, n) * std::polar(1.0, phi * (m * m - m))),
                        0.0, 1e-14);
        }
}

TEST(Phases, LinearPhaseOnB) {
    const auto psi = random_state(6, 41);
    const auto out = apply_linear_phase(psi, Mode::B, 0.9);
    EXPECT_NEAR(std::abs(out.amplitude(2, 3) - psi.amplitude(2, 3) * std::polar(1.0, 2.7)), 0.0, 1e-15);
}

TEST(Phases, MixedMatchesPure) {
    const auto psi = random_state(9, 51);
    const auto a = apply_nonlinear_phase(MixedState2M(psi), Mode::A, 0.2, 2);
    const auto b = apply_nonlinear_phase(psi, Mode::A, 0.2, 2);
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-13);
}

TEST(EndToEnd, MatchesClosedFormAtRandomPoints) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (double n : {0.5, 3.0, 12.0, 25.0}) {
        const ProtocolSimulator sim(n);
        for (int i = 0; i < 15; ++i) {
            const ProtocolParams p{n, angle(rng), angle(rng), 2};
            const auto o = sim.moments(p.phi, p.theta);
            const auto a = analytic::moments(p);
            EXPECT_NEAR(o.mean, a.mean, 1e-8);
            EXPECT_NEAR(o.second_moment, a.second_moment, 1e-8);
        }
    }
}

TEST(EndToEnd, FrozenMean) {
    EXPECT_NEAR(end_to_end_moments({4.0, 0.0, 0.1, 2}).mean, -0.7436841563160712, 1e-10);
}

TEST(EndToEnd, SimulatorMatchesOneShotPipeline) {
    const LossSpec loss = LossSpec::after_phase(0.7);
    const ProtocolSimulator sim(6.0, 2, loss);
    const auto a = sim.moments(0.2, 1.0);
    const auto b = end_to_end_moments({6.0, 1.0, 0.2, 2}, loss);
    EXPECT_NEAR(a.mean, b.mean, 1e-13);
    EXPECT_NEAR(a.second_moment, b.second_moment, 1e-12);
}

TEST(EndToEnd, LossBeforeIsPhotonNumberRescaling) {
    const ProtocolSimulator lossy(8.0, 2, LossSpec::before_phase(0.5));
    const ProtocolSimulator clean(4.0);
    for (double phi : {-0.4, 0.0, 0.13, 0.9}) {
        EXPECT_NEAR(lossy.moments(phi, 0.5).mean, clean.moments(phi, 0.5).mean, 1e-10);
        EXPECT_NEAR(lossy.moments(phi, 0.5).second_moment, clean.moments(phi, 0.5).second_moment, 1e-10);
    }
}

TEST(Debug, DumpJson) {
    PureState2M s(3);
    s.set_amplitude(1, 2, Complex(0.6, -0.8));
    const auto j = dump_json(s);
    EXPECT_EQ(j["n_max"], 3);
    ASSERT_EQ(j["amplitudes"].size(), 1u);
    EXPECT_EQ(j["amplitudes"][0][0], 1);
    EXPECT_EQ(j["amplitudes"][0][1], 2);
    EXPECT_DOUBLE_EQ(j["amplitudes"][0][3].get<double>(), -0.8);
}
