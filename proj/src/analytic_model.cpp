#include "nlphase/analytic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlphase/errors.hpp"
#include "nlphase/numerics.hpp"

namespace nlphase::analytic {
namespace {

constexpr std::size_t kVisibilityGridPoints = 4096;
constexpr double kVisibilityTolerance = 1e-10;

void require_second_order(const ProtocolParams& params) {
    params.validate();
    if (params.order != 2)
        throw InvalidArgument("closed forms exist only for order 2, got order " +
                              std::to_string(params.order));
}

// exp(-N sin^2 phi) sin[(N/2) sin 2phi], the fringe term of <X_B>.
double fringe_term(double n, double phi) {
    const double s = std::sin(phi);
    return std::exp(-n * s * s) * std::sin(0.5 * n * std::sin(2.0 * phi));
}

double as_printed_second_moment(double n, double theta, double phi) {
    const double s = std::sin(phi);
    return n -
           0.5 * n *
               (std::cos(2.0 * theta) -
                std::exp(-2.0 * n * s * s) * std::cos(n * std::sin(2.0 * phi))) +
           1.0 + 2.0 * n * fringe_term(n, phi) * std::sin(theta);
}

double corrected_second_moment(double n, double theta, double phi) {
    const double s2 = std::sin(2.0 * phi);
    const double a2 = std::exp(-n * s2 * s2) * std::cos(2.0 * phi + 0.5 * n * std::sin(4.0 * phi));
    return 1.0 + n - 0.5 * n * (std::cos(2.0 * theta) + a2) +
           2.0 * n * std::sin(theta) * fringe_term(n, phi);
}

}  // namespace

double expectation_x(const ProtocolParams& params) {
    require_second_order(params);
    const double n = params.mean_photon_number;
    return -std::sqrt(n) * (std::sin(params.theta) + fringe_term(n, params.phi));
}

double second_moment_x(const ProtocolParams& params, SecondMomentForm form) {
    require_second_order(params);
    const double n = params.mean_photon_number;
    return form == SecondMomentForm::AsPrinted
               ? as_printed_second_moment(n, params.theta, params.phi)
               : corrected_second_moment(n, params.theta, params.phi);
}

double slope_x(const ProtocolParams& params) {
    require_second_order(params);
    const double n = params.mean_photon_number;
    const double phi = params.phi;
    const double s = std::sin(phi);
    return -n * std::sqrt(n) * std::exp(-n * s * s) *
           std::cos(2.0 * phi + 0.5 * n * std::sin(2.0 * phi));
}

QuadratureMoments moments(const ProtocolParams& params, SecondMomentForm form) {
    return {expectation_x(params), second_moment_x(params, form)};
}

QuadratureMoments moments_with_loss(const ProtocolParams& params, const LossSpec& loss,
                                    SecondMomentForm form) {
    loss.validate();
    const double t = loss.transmissivity;
    switch (loss.placement) {
        case LossPlacement::None:
            return moments(params, form);
        case LossPlacement::BeforePhase: {
            ProtocolParams reduced = params;
            reduced.mean_photon_number = t * params.mean_photon_number;
            return moments(reduced, form);
        }
        case LossPlacement::AfterPhase: {
            const QuadratureMoments lossless = moments(params, form);
            return {std::sqrt(t) * lossless.mean, t * lossless.second_moment + 1.0 - t};
        }
    }
    return moments(params, form);
}

double slope_with_loss(const ProtocolParams& params, const LossSpec& loss) {
    loss.validate();
    const double t = loss.transmissivity;
    switch (loss.placement) {
        case LossPlacement::None:
            return slope_x(params);
        case LossPlacement::BeforePhase: {
            ProtocolParams reduced = params;
            reduced.mean_photon_number = t * params.mean_photon_number;
            return slope_x(reduced);
        }
        case LossPlacement::AfterPhase:
            return std::sqrt(t) * slope_x(params);
    }
    return slope_x(params);
}

std::vector<FringePoint> fringe_scan(double mean_photon_number, double theta,
                                     std::span<const double> phi_grid, const LossSpec& loss) {
    if (!(mean_photon_number > 0.0)) throw InvalidArgument("fringe scan requires N > 0");
    if (phi_grid.empty()) throw InvalidArgument("fringe scan requires a nonempty phi grid");
    const double norm = std::sqrt(mean_photon_number);
    std::vector<FringePoint> out;
    out.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        const double raw =
            moments_with_loss({mean_photon_number, theta, phi, 2}, loss).mean;
        out.push_back({phi, raw, raw / norm});
    }
    return out;
}

VisibilityResult visibility_scan(double mean_photon_number, double theta, PhaseInterval domain,
                                 const LossSpec& loss) {
    if (!(mean_photon_number > 0.0)) throw InvalidArgument("visibility requires N > 0");
    if (!(domain.hi > domain.lo))
        throw InvalidArgument("visibility domain must have positive width");

    auto mean_at = [&](double phi) {
        return moments_with_loss({mean_photon_number, theta, phi, 2}, loss).mean;
    };

    const auto grid = numerics::linspace(domain.lo, domain.hi, kVisibilityGridPoints);
    std::vector<double> values(grid.size());
    std::transform(grid.begin(), grid.end(), values.begin(), mean_at);
    const auto imax = static_cast<std::size_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
    const auto imin = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());

    auto bracket = [&](std::size_t i) {
        return std::pair{grid[i == 0 ? 0 : i - 1], grid[std::min(i + 1, grid.size() - 1)]};
    };

    const auto [max_lo, max_hi] = bracket(imax);
    const auto top = numerics::golden_section_minimize([&](double p) { return -mean_at(p); },
                                                       max_lo, max_hi, kVisibilityTolerance);
    const auto [min_lo, min_hi] = bracket(imin);
    const auto bottom =
        numerics::golden_section_minimize(mean_at, min_lo, min_hi, kVisibilityTolerance);

    VisibilityResult result{0.0, top.x, -top.value, bottom.x, bottom.value};
    // Never report a refined extremum worse than the grid one.
    if (values[imax] > result.max_mean) {
        result.max_mean = values[imax];
        result.phi_at_max = grid[imax];
    }
    if (values[imin] < result.min_mean) {
        result.min_mean = values[imin];
        result.phi_at_min = grid[imin];
    }
    const double denom = std::abs(result.max_mean) + std::abs(result.min_mean);
    result.visibility = denom > 0.0 ? (result.max_mean - result.min_mean) / denom : 0.0;
    return result;
}

double visibility(double mean_photon_number, double theta, PhaseInterval domain,
                  const LossSpec& loss) {
    return visibility_scan(mean_photon_number, theta, domain, loss).visibility;
}

}  // namespace nlphase::analytic
