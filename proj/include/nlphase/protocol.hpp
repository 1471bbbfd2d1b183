#pragma once

#include <numbers>

namespace nlphase {

inline constexpr double kPi = std::numbers::pi;

/// Operating parameters of the interferometer.
///
/// The input is |alpha>_A |0>_B with alpha real and positive, so the mean
/// photon number is N = alpha^2. `theta` is the compensated linear phase on
/// mode B and `phi` the nonlinear phase generated by (a^dag a)^order on mode A.
struct ProtocolParams {
    double mean_photon_number = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    int order = 2;

    /// Throws InvalidArgument unless N >= 0, all angles finite and order >= 1.
    void validate() const;
};

/// First and second moment of the measured quadrature X = b + b^dag.
/// Vacuum has mean 0 and second moment 1 in this convention.
struct QuadratureMoments {
    double mean = 0.0;
    double second_moment = 1.0;

    double variance() const noexcept { return second_moment - mean * mean; }
};

enum class LossPlacement { None, BeforePhase, AfterPhase };

/// Equal photon loss in both interferometer arms, modelled as a fictitious
/// beam splitter of transmissivity T placed before or after the phase elements.
struct LossSpec {
    double transmissivity = 1.0;
    LossPlacement placement = LossPlacement::None;

    static LossSpec none() { return {}; }
    static LossSpec before_phase(double t) { return {t, LossPlacement::BeforePhase}; }
    static LossSpec after_phase(double t) { return {t, LossPlacement::AfterPhase}; }

    double loss_ratio() const noexcept { return 1.0 - transmissivity; }
    bool active() const noexcept { return placement != LossPlacement::None; }

    /// Transmissivity seen by the photons; 1 when placement is None.
    double effective_transmissivity() const noexcept { return active() ? transmissivity : 1.0; }

    /// Throws InvalidArgument unless 0 <= T <= 1.
    void validate() const;
};

const char* to_string(LossPlacement placement) noexcept;

}  // namespace nlphase
