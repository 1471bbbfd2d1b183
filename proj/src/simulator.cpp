#include <cmath>

#include "nlphase/errors.hpp"
#include "nlphase/fock_oracle.hpp"

namespace nlphase::oracle {
namespace {

int choose_truncation(double mean_photon_number, const OracleOptions& options) {
    return options.n_max > 0 ? options.n_max : auto_truncation(mean_photon_number);
}

PureState2M split_input(double mean_photon_number, int n_max) {
    return apply_bs_5050(coherent_two_mode(std::sqrt(mean_photon_number), 0.0, n_max));
}

template <typename State>
State apply_phases(const State& state, double phi, double theta, int order, bool compensated) {
    return apply_linear_phase(apply_nonlinear_phase(state, Mode::A, phi, order, compensated),
                              Mode::B, theta);
}

}  // namespace

QuadratureMoments end_to_end_moments(const ProtocolParams& params, const LossSpec& loss,
                                     const OracleOptions& options) {
    params.validate();
    loss.validate();
    const int n_max = choose_truncation(params.mean_photon_number, options);
    const PureState2M split = split_input(params.mean_photon_number, n_max);
    const double t = loss.transmissivity;

    switch (loss.placement) {
        case LossPlacement::None: {
            const auto shifted =
                apply_phases(split, params.phi, params.theta, params.order, options.compensated);
            return x_moments(apply_bs_5050(shifted), Mode::B);
        }
        case LossPlacement::BeforePhase: {
            const auto damped = apply_loss(split, LossTarget::Both, t);
            const auto shifted =
                apply_phases(damped, params.phi, params.theta, params.order, options.compensated);
            return x_moments(apply_bs_5050(shifted), Mode::B);
        }
        case LossPlacement::AfterPhase: {
            const auto shifted =
                apply_phases(split, params.phi, params.theta, params.order, options.compensated);
            return x_moments(apply_bs_5050(apply_loss(shifted, LossTarget::Both, t)), Mode::B);
        }
    }
    throw InvalidArgument("unknown loss placement");
}

ProtocolSimulator::ProtocolSimulator(double mean_photon_number, int order, const LossSpec& loss,
                                     const OracleOptions& options)
    : mean_photon_number_(mean_photon_number), order_(order), loss_(loss), options_(options) {
    ProtocolParams{mean_photon_number, 0.0, 0.0, order}.validate();
    loss_.validate();
    n_max_ = choose_truncation(mean_photon_number, options);
    split_ = std::make_shared<const PureState2M>(split_input(mean_photon_number, n_max_));
    if (loss_.placement == LossPlacement::BeforePhase)
        split_lossy_ = std::make_shared<const MixedState2M>(
            apply_loss(*split_, LossTarget::Both, loss_.transmissivity));
}

QuadratureMoments ProtocolSimulator::moments(double phi, double theta) const {
    const bool comp = options_.compensated;
    switch (loss_.placement) {
        case LossPlacement::None:
            return x_moments(apply_bs_5050(apply_phases(*split_, phi, theta, order_, comp)), Mode::B);
        case LossPlacement::BeforePhase:
            return x_moments(apply_bs_5050(apply_phases(*split_lossy_, phi, theta, order_, comp)),
                             Mode::B);
        case LossPlacement::AfterPhase:
            return x_moments(apply_bs_5050(apply_loss(apply_phases(*split_, phi, theta, order_, comp),
                                                      LossTarget::Both, loss_.transmissivity)),
                             Mode::B);
    }
    throw InvalidArgument("unknown loss placement");
}

}  // namespace nlphase::oracle
