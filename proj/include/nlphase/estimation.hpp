#pragma once

#include <memory>

#include "nlphase/analytic_model.hpp"
#include "nlphase/fock_oracle.hpp"
#include "nlphase/protocol.hpp"

namespace nlphase::estimation {

enum class MomentsSource { Analytic, Oracle };

const char* to_string(MomentsSource source) noexcept;

/// |d<X>/dphi| at or below this is treated as an insensitive operating point.
inline constexpr double kSlopeFloor = 1e-9;
/// Central-difference step for oracle slopes, which have no closed form.
inline constexpr double kOracleSlopeStep = 1e-5;

struct SensitivityReport {
    double delta_phi = 0.0;
    double phi_star = 0.0;
    double theta_star = 0.0;
    MomentsSource source = MomentsSource::Analytic;
    double slope = 0.0;
    QuadratureMoments moments;
    /// True when the sensitivity does not depend on theta at phi_star; theta_star is
    /// then the point in [0, pi] where <X> is stationary in theta.
    bool theta_degenerate = false;
};

/// sqrt(variance) / |slope|. Throws InsensitivePoint when |slope| <= kSlopeFloor.
double sensitivity_from_moments(const QuadratureMoments& moments, double slope);

struct OperatingPoint {
    QuadratureMoments moments;
    double slope;
};

/// Source of homodyne statistics as a function of the operating point (phi, theta).
class SensitivityModel {
public:
    virtual ~SensitivityModel() = default;
    virtual OperatingPoint evaluate(double phi, double theta) const = 0;
    virtual double mean(double phi, double theta) const = 0;
    virtual MomentsSource source() const noexcept = 0;

    double sensitivity(double phi, double theta) const;
};

class AnalyticSensitivityModel final : public SensitivityModel {
public:
    explicit AnalyticSensitivityModel(double mean_photon_number, const LossSpec& loss = {},
                                      analytic::SecondMomentForm form =
                                          analytic::SecondMomentForm::Corrected);

    OperatingPoint evaluate(double phi, double theta) const override;
    double mean(double phi, double theta) const override;
    MomentsSource source() const noexcept override { return MomentsSource::Analytic; }

private:
    double n_;
    LossSpec loss_;
    analytic::SecondMomentForm form_;
};

/// Fock-space moments; slope by central difference of the oracle mean.
class OracleSensitivityModel final : public SensitivityModel {
public:
    explicit OracleSensitivityModel(double mean_photon_number, const LossSpec& loss = {},
                                    const oracle::OracleOptions& options = {});

    OperatingPoint evaluate(double phi, double theta) const override;
    double mean(double phi, double theta) const override;
    MomentsSource source() const noexcept override { return MomentsSource::Oracle; }

    int n_max() const noexcept { return simulator_.n_max(); }

private:
    oracle::ProtocolSimulator simulator_;
};

std::unique_ptr<SensitivityModel> make_model(double mean_photon_number, MomentsSource source,
                                             const LossSpec& loss = {});

struct SearchOptions {
    analytic::PhaseInterval phi{-kPi / 4, kPi / 4};
    double theta_lo = 0.0;
    double theta_hi = 2.0 * kPi;
    std::size_t phi_points = 256;
    std::size_t theta_points = 256;
    double tolerance = 1e-10;
    int max_sweeps = 50;
    /// Relative spread of the sensitivity across theta below which theta counts as flat.
    double degeneracy_tolerance = 1e-9;
};

/// Report for a fixed operating point.
SensitivityReport evaluate_at(const SensitivityModel& model, double phi, double theta);

/// Coarse grid over (phi, theta) followed by coordinate-wise golden-section
/// refinement. Grid points where the slope is below the floor are skipped.
SensitivityReport optimize(const SensitivityModel& model, const SearchOptions& options = {});

/// Lossless optimum for mean photon number N (> 0).
SensitivityReport find_optimum(double mean_photon_number, MomentsSource source,
                               const SearchOptions& options = {});

/// Optimum with equal loss in both arms. The analytic source runs the full
/// search on the lossy closed forms. The oracle source evaluates the Fock-space
/// sensitivity at the analytic optimum, since a full search on density matrices
/// is prohibitively slow; the optimum is stationary so the location error
/// enters only at second order.
SensitivityReport lossy_optimum(double mean_photon_number, double transmissivity,
                                LossPlacement placement,
                                MomentsSource source = MomentsSource::Analytic);

/// 1 - N^{-1/3}: the largest loss ratio for which the lossy optimum (TN)^{-3/2}
/// still reaches the Heisenberg limit 1/N. Requires N >= 1.
double allowable_max_loss(double mean_photon_number);

/// (qcrb / N^{-3/2})^2 = N / (N + 3/2), the fraction of the QFI that homodyne
/// detection attains at its optimum.
double fisher_ratio(double mean_photon_number);

}  // namespace nlphase::estimation
