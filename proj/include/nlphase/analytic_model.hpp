#pragma once

#include <span>
#include <vector>

#include "nlphase/protocol.hpp"

/// Closed-form homodyne statistics of the second-order (k = 2) protocol.
///
/// All functions are pure. Every entry point rejects `order != 2` and
/// non-finite inputs with InvalidArgument.
namespace nlphase::analytic {

/// Which closed form to use for <X^2>.
///
/// `AsPrinted` is the published expression kept verbatim for comparison; it
/// fails the coherent-state check at phi = 0 (variance N + 1 instead of 1).
/// `Corrected` is the form obtained from U^dag a^2 U = e^{2i phi} e^{4i phi n} a^2
/// and agrees with the Fock-space simulation.
enum class SecondMomentForm { AsPrinted, Corrected };

/// <X_B> = -sqrt(N) { sin(theta) + exp(-N sin^2 phi) sin[(N/2) sin 2phi] }
double expectation_x(const ProtocolParams& params);

double second_moment_x(const ProtocolParams& params,
                       SecondMomentForm form = SecondMomentForm::Corrected);

/// d<X_B>/dphi = -N^{3/2} exp(-N sin^2 phi) cos(2phi + (N/2) sin 2phi)
double slope_x(const ProtocolParams& params);

QuadratureMoments moments(const ProtocolParams& params,
                          SecondMomentForm form = SecondMomentForm::Corrected);

/// Moments at the detector with equal loss in both arms.
///
/// BeforePhase: the arms carry coherent amplitudes scaled by sqrt(T), so the
/// lossless expressions hold with N -> TN. AfterPhase: the loss commutes with
/// the output beam splitter and acts on the detected mode only, giving
/// mean -> sqrt(T) mean and <X^2> -> T <X^2> + 1 - T.
QuadratureMoments moments_with_loss(const ProtocolParams& params, const LossSpec& loss,
                                    SecondMomentForm form = SecondMomentForm::Corrected);

/// d<X_B>/dphi under the same loss model as moments_with_loss.
double slope_with_loss(const ProtocolParams& params, const LossSpec& loss);

struct FringePoint {
    double phi;
    double raw_mean;
    double normalized_mean;  ///< raw_mean / sqrt(N)
};

std::vector<FringePoint> fringe_scan(double mean_photon_number, double theta,
                                     std::span<const double> phi_grid,
                                     const LossSpec& loss = LossSpec::none());

struct PhaseInterval {
    double lo = -kPi / 2;
    double hi = kPi / 2;
};

struct VisibilityResult {
    double visibility;
    double phi_at_max;
    double max_mean;
    double phi_at_min;
    double min_mean;
};

/// Fringe visibility (max - min) / (|max| + |min|) of <X_B> over phi in `domain`
/// at fixed theta. Extrema are located on a dense grid and polished by
/// golden-section search.
VisibilityResult visibility_scan(double mean_photon_number, double theta = kPi / 2,
                                 PhaseInterval domain = {}, const LossSpec& loss = LossSpec::none());

double visibility(double mean_photon_number, double theta = kPi / 2, PhaseInterval domain = {},
                  const LossSpec& loss = LossSpec::none());

}  // namespace nlphase::analytic
