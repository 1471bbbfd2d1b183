#include "nlphase/sweep/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlphase/numerics.hpp"

namespace nlphase::sweep {
namespace {

constexpr const char* kDefaultNRange = "1:100:1";
constexpr const char* kDefaultFringeN = "20";
constexpr const char* kDefaultPhiRange = "-pi/2:pi/2:2001";
constexpr const char* kDefaultTheta = "pi/2";

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& field) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError(field, "'" + text + "' is not a number");
    }
    if (used != t.size()) throw ConfigError(field, "'" + text + "' has trailing characters");
    if (!std::isfinite(value)) throw ConfigError(field, "'" + text + "' is not finite");
    return value;
}

std::vector<std::string> split_colon(const std::string& text, const std::string& field,
                                     const char* shape) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3)
        throw ConfigError(field, "expected " + std::string(shape) + ", got '" + text + "'");
    return parts;
}

}  // namespace

const char* to_string(Command command) noexcept {
    switch (command) {
        case Command::Fringe: return "fringe";
        case Command::Visibility: return "visibility";
        case Command::Sensitivity: return "sensitivity";
        case Command::FisherRatio: return "fisher-ratio";
        case Command::LossBound: return "loss-bound";
        case Command::Validate: return "validate";
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::Fringe, Command::Visibility, Command::Sensitivity,
                      Command::FisherRatio, Command::LossBound, Command::Validate})
        if (name == to_string(c)) return c;
    throw ConfigError("command", "unknown subcommand '" + name + "'");
}

double parse_angle(const std::string& text) {
    const std::string t = trim(text);
    const auto pos = t.find("pi");
    if (pos == std::string::npos) return parse_number(t, "angle");

    std::string coeff = trim(t.substr(0, pos));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    double factor = 1.0;
    if (coeff == "-")
        factor = -1.0;
    else if (coeff == "+")
        factor = 1.0;
    else if (!coeff.empty())
        factor = parse_number(coeff, "angle");

    const std::string rest = trim(t.substr(pos + 2));
    double divisor = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("angle", "cannot parse '" + text + "'");
        divisor = parse_number(rest.substr(1), "angle");
        if (divisor == 0.0) throw ConfigError("angle", "division by zero in '" + text + "'");
    }
    return factor * kPi / divisor;
}

std::vector<double> parse_n_range(const std::string& text) {
    const auto parts = split_colon(text, "n-range", "a:b:step");
    const double a = parse_number(parts[0], "n-range");
    const double b = parse_number(parts[1], "n-range");
    const double step = parse_number(parts[2], "n-range");
    if (!(step > 0.0)) throw ConfigError("n-range", "step must be positive");
    if (b < a) throw ConfigError("n-range", "upper bound is below lower bound");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("n-range", "more than 10^6 points");
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + step * static_cast<double>(i));
    return out;
}

std::vector<double> parse_phi_range(const std::string& text) {
    const auto parts = split_colon(text, "phi-range", "a:b:points");
    double a = 0.0, b = 0.0;
    try {
        a = parse_angle(parts[0]);
        b = parse_angle(parts[1]);
    } catch (const ConfigError& e) {
        throw ConfigError("phi-range", e.what());
    }
    const double points = parse_number(parts[2], "phi-range");
    if (points < 1.0 || points != std::floor(points) || points > 1e7)
        throw ConfigError("phi-range", "point count must be a positive integer");
    if (points > 1.0 && !(b > a))
        throw ConfigError("phi-range", "upper bound must exceed lower bound");
    return numerics::linspace(a, b, static_cast<std::size_t>(points));
}

LossPlacement parse_placement(const std::string& text) {
    if (text == "none") return LossPlacement::None;
    if (text == "before") return LossPlacement::BeforePhase;
    if (text == "after") return LossPlacement::AfterPhase;
    throw ConfigError("loss-placement", "expected before, after or none, got '" + text + "'");
}

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ConfigError("format", "expected csv or json, got '" + text + "'");
}

void SweepConfig::validate() const {
    if (command == Command::Validate) return;
    if (n_values.empty()) throw ConfigError("n", "photon-number grid is empty");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (!(n_values[i] > n_values[i - 1]))
            throw ConfigError("n-range", "photon-number grid must be strictly increasing");
    const double n_floor = command == Command::LossBound ? 1.0 : 0.0;
    for (double n : n_values) {
        if (command == Command::LossBound ? n < n_floor : !(n > n_floor))
            throw ConfigError("n", command == Command::LossBound
                                       ? "loss-bound needs N >= 1"
                                       : "mean photon number must be positive");
    }
    if (command == Command::Fringe) {
        if (phi_values.empty()) throw ConfigError("phi-range", "phase grid is empty");
        for (std::size_t i = 1; i < phi_values.size(); ++i)
            if (!(phi_values[i] > phi_values[i - 1]))
                throw ConfigError("phi-range", "phase grid must be strictly increasing");
    }
    if (!std::isfinite(theta)) throw ConfigError("theta", "must be finite");
    if (!(loss.transmissivity >= 0.0 && loss.transmissivity <= 1.0))
        throw ConfigError("loss-T", "transmissivity must lie in [0, 1]");
    if (loss.active() && command == Command::Sensitivity && loss.transmissivity == 0.0)
        throw ConfigError("loss-T", "sensitivity is undefined at T = 0");
    if (n_max < 0) throw ConfigError("n-max", "truncation override must be >= 0");
}

SweepConfig build_config(Command command, const RawOptions& raw) {
    SweepConfig cfg;
    cfg.command = command;
    cfg.with_oracle = raw.with_oracle;
    cfg.n_max = raw.n_max;
    cfg.format = raw.format.empty() ? OutputFormat::Csv : parse_format(raw.format);

    if (!raw.n.empty() && !raw.n_range.empty())
        throw ConfigError("n", "--n and --n-range are mutually exclusive");
    if (!raw.n.empty()) {
        cfg.n_values = {parse_number(raw.n, "n")};
        cfg.n_spec = "n=" + trim(raw.n);
    } else {
        const std::string range =
            !raw.n_range.empty() ? raw.n_range
                                 : (command == Command::Fringe ? std::string() : kDefaultNRange);
        if (range.empty()) {
            cfg.n_values = {parse_number(kDefaultFringeN, "n")};
            cfg.n_spec = std::string("n=") + kDefaultFringeN;
        } else {
            cfg.n_values = parse_n_range(range);
            cfg.n_spec = "n_range=" + range;
        }
    }

    cfg.phi_spec = raw.phi_range.empty() ? kDefaultPhiRange : raw.phi_range;
    if (command == Command::Fringe) cfg.phi_values = parse_phi_range(cfg.phi_spec);

    cfg.theta_spec = raw.theta.empty() ? kDefaultTheta : raw.theta;
    try {
        cfg.theta = parse_angle(cfg.theta_spec);
    } catch (const ConfigError& e) {
        throw ConfigError("theta", e.what());
    }

    if (!raw.loss_placement.empty()) cfg.loss.placement = parse_placement(raw.loss_placement);
    if (!raw.loss_t.empty()) {
        cfg.loss.transmissivity = parse_number(raw.loss_t, "loss-T");
        if (raw.loss_placement.empty())
            throw ConfigError("loss-placement", "required when --loss-T is given");
    }
    cfg.validate();
    return cfg;
}

}  // namespace nlphase::sweep
