#include "nlphase/protocol.hpp"

#include <cmath>
#include <string>

#include "nlphase/errors.hpp"

namespace nlphase {

void ProtocolParams::validate() const {
    if (!std::isfinite(mean_photon_number) || mean_photon_number < 0.0)
        throw InvalidArgument("mean photon number must be finite and >= 0, got " +
                              std::to_string(mean_photon_number));
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw InvalidArgument("phases must be finite");
    if (order < 1)
        throw InvalidArgument("nonlinearity order must be >= 1, got " + std::to_string(order));
}

void LossSpec::validate() const {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
        throw InvalidArgument("transmissivity must lie in [0, 1], got " +
                              std::to_string(transmissivity));
}

const char* to_string(LossPlacement placement) noexcept {
    switch (placement) {
        case LossPlacement::None: return "none";
        case LossPlacement::BeforePhase: return "before";
        case LossPlacement::AfterPhase: return "after";
    }
    return "unknown";
}

}  // namespace nlphase
