#include "nlphase/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlphase/errors.hpp"
#include "nlphase/numerics.hpp"
#include "nlphase/qfi.hpp"

namespace nlphase::estimation {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kThetaDriftStep = 1e-5;

double wrap_angle(double theta) {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

double safe_sensitivity(const SensitivityModel& model, double phi, double theta) {
    try {
        return model.sensitivity(phi, theta);
    } catch (const InsensitivePoint&) {
        return kInf;
    }
}

// Point in [0, pi] where <X> is stationary in theta; first-order immune to
// drifts of the linear phase.
double stationary_theta(const SensitivityModel& model, double phi, std::size_t points,
                        double tolerance) {
    auto drift = [&](double theta) {
        return std::abs(numerics::central_difference(
            [&](double t) { return model.mean(phi, t); }, theta, kThetaDriftStep));
    };
    const auto grid = numerics::linspace(0.0, kPi, points / 2 + 1);
    std::size_t best = 0;
    double best_value = kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = drift(grid[i]);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    return numerics::golden_section_minimize(drift, lo, hi, tolerance).x;
}

}  // namespace

const char* to_string(MomentsSource source) noexcept {
    return source == MomentsSource::Analytic ? "analytic" : "oracle";
}

double sensitivity_from_moments(const QuadratureMoments& moments, double slope) {
    if (!(std::abs(slope) > kSlopeFloor))
        throw InsensitivePoint("slope |d<X>/dphi| = " + std::to_string(std::abs(slope)) +
                               " is below the floor; the operating point is insensitive");
    return std::sqrt(std::max(moments.variance(), 0.0)) / std::abs(slope);
}

double SensitivityModel::sensitivity(double phi, double theta) const {
    const auto point = evaluate(phi, theta);
    return sensitivity_from_moments(point.moments, point.slope);
}

AnalyticSensitivityModel::AnalyticSensitivityModel(double mean_photon_number, const LossSpec& loss,
                                                   analytic::SecondMomentForm form)
    : n_(mean_photon_number), loss_(loss), form_(form) {
    ProtocolParams{n_, 0.0, 0.0, 2}.validate();
    loss_.validate();
}

OperatingPoint AnalyticSensitivityModel::evaluate(double phi, double theta) const {
    const ProtocolParams params{n_, theta, phi, 2};
    return {analytic::moments_with_loss(params, loss_, form_),
            analytic::slope_with_loss(params, loss_)};
}

double AnalyticSensitivityModel::mean(double phi, double theta) const {
    return analytic::moments_with_loss({n_, theta, phi, 2}, loss_, form_).mean;
}

OracleSensitivityModel::OracleSensitivityModel(double mean_photon_number, const LossSpec& loss,
                                               const oracle::OracleOptions& options)
    : simulator_(mean_photon_number, 2, loss, options) {}

OperatingPoint OracleSensitivityModel::evaluate(double phi, double theta) const {
    const auto centre = simulator_.moments(phi, theta);
    const double slope = numerics::central_difference(
        [&](double p) { return simulator_.moments(p, theta).mean; }, phi, kOracleSlopeStep);
    return {centre, slope};
}

double OracleSensitivityModel::mean(double phi, double theta) const {
    return simulator_.moments(phi, theta).mean;
}

std::unique_ptr<SensitivityModel> make_model(double mean_photon_number, MomentsSource source,
                                             const LossSpec& loss) {
    if (source == MomentsSource::Analytic)
        return std::make_unique<AnalyticSensitivityModel>(mean_photon_number, loss);
    return std::make_unique<OracleSensitivityModel>(mean_photon_number, loss);
}

SensitivityReport evaluate_at(const SensitivityModel& model, double phi, double theta) {
    const auto point = model.evaluate(phi, theta);
    SensitivityReport report;
    report.delta_phi = sensitivity_from_moments(point.moments, point.slope);
    report.phi_star = phi;
    report.theta_star = theta;
    report.source = model.source();
    report.slope = point.slope;
    report.moments = point.moments;
    return report;
}

SensitivityReport optimize(const SensitivityModel& model, const SearchOptions& options) {
    if (options.phi_points < 2 || options.theta_points < 2)
        throw InvalidArgument("search grid needs at least two points per angle");
    if (!(options.phi.hi > options.phi.lo) || !(options.theta_hi > options.theta_lo))
        throw InvalidArgument("search domain must have positive width");

    const auto phis = numerics::linspace(options.phi.lo, options.phi.hi, options.phi_points);
    const auto thetas =
        numerics::periodic_grid(options.theta_lo, options.theta_hi, options.theta_points);

    const auto rows = numerics::parallel_map(phis.size(), [&](std::size_t i) {
        std::vector<double> row(thetas.size());
        for (std::size_t j = 0; j < thetas.size(); ++j)
            row[j] = safe_sensitivity(model, phis[i], thetas[j]);
        return row;
    });

    std::size_t bi = 0, bj = 0;
    double best = kInf;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < thetas.size(); ++j)
            if (rows[i][j] < best) {
                best = rows[i][j];
                bi = i;
                bj = j;
            }
    if (!std::isfinite(best))
        throw InsensitivePoint("every grid point of the search domain is insensitive");

    const double phi_step = phis[1] - phis[0];
    const double theta_step = thetas[1] - thetas[0];
    double phi = phis[bi];
    double theta = thetas[bj];
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        const auto along_phi = numerics::golden_section_minimize(
            [&](double p) { return safe_sensitivity(model, p, theta); },
            std::max(options.phi.lo, phi - phi_step), std::min(options.phi.hi, phi + phi_step),
            options.tolerance);
        const auto along_theta = numerics::golden_section_minimize(
            [&](double t) { return safe_sensitivity(model, along_phi.x, t); }, theta - theta_step,
            theta + theta_step, options.tolerance);
        const bool converged = std::abs(along_phi.x - phi) < options.tolerance &&
                               std::abs(along_theta.x - theta) < options.tolerance;
        phi = along_phi.x;
        theta = along_theta.x;
        if (converged) break;
    }

    double lo = kInf, hi = 0.0;
    for (double t : thetas) {
        const double v = safe_sensitivity(model, phi, t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool degenerate = std::isfinite(hi) && hi - lo <= options.degeneracy_tolerance * lo;

    if (degenerate) {
        theta = stationary_theta(model, phi, options.theta_points, options.tolerance);
    } else {
        theta = wrap_angle(theta);
        if (theta > kPi) {
            const double mirrored = theta - kPi;
            if (safe_sensitivity(model, phi, mirrored) <=
                safe_sensitivity(model, phi, theta) * (1.0 + options.degeneracy_tolerance))
                theta = mirrored;
        }
    }

    auto report = evaluate_at(model, phi, theta);
    report.theta_degenerate = degenerate;
    return report;
}

SensitivityReport find_optimum(double mean_photon_number, MomentsSource source,
                               const SearchOptions& options) {
    if (!(mean_photon_number > 0.0)) throw InvalidArgument("optimum search requires N > 0");
    return optimize(*make_model(mean_photon_number, source), options);
}

SensitivityReport lossy_optimum(double mean_photon_number, double transmissivity,
                                LossPlacement placement, MomentsSource source) {
    if (!(mean_photon_number > 0.0)) throw InvalidArgument("optimum search requires N > 0");
    if (!(transmissivity > 0.0 && transmissivity <= 1.0))
        throw InvalidArgument("lossy optimum requires 0 < T <= 1, got " +
                              std::to_string(transmissivity));
    const LossSpec loss{transmissivity, placement};
    const auto analytic = optimize(AnalyticSensitivityModel(mean_photon_number, loss));
    if (source == MomentsSource::Analytic) return analytic;

    const OracleSensitivityModel model(mean_photon_number, loss);
    auto report = evaluate_at(model, analytic.phi_star, analytic.theta_star);
    report.theta_degenerate = analytic.theta_degenerate;
    return report;
}

double allowable_max_loss(double mean_photon_number) {
    if (!std::isfinite(mean_photon_number) || mean_photon_number < 1.0)
        throw InvalidArgument("allowable maximum loss needs N >= 1 (the bound is negative below)");
    return 1.0 - 1.0 / std::cbrt(mean_photon_number);
}

double fisher_ratio(double mean_photon_number) {
    if (!(mean_photon_number > 0.0) || !std::isfinite(mean_photon_number))
        throw InvalidArgument("Fisher ratio requires N > 0");
    const double bhd = std::pow(mean_photon_number, -1.5);
    const double ratio = qfi::qcrb(mean_photon_number) / bhd;
    return ratio * ratio;
}

}  // namespace nlphase::estimation
