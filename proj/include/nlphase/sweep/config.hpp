#pragma once

#include <string>
#include <vector>

#include "nlphase/errors.hpp"
#include "nlphase/protocol.hpp"

namespace nlphase::sweep {

enum class Command { Fringe, Visibility, Sensitivity, FisherRatio, LossBound, Validate };
enum class OutputFormat { Csv, Json };

const char* to_string(Command command) noexcept;
Command parse_command(const std::string& name);

/// Invalid sweep configuration. `field()` names the offending option.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Option values as given on the command line or in a config file; empty
/// strings mean "not given".
struct RawOptions {
    std::string n;
    std::string n_range;
    std::string phi_range;
    std::string theta;
    std::string loss_t;
    std::string loss_placement;
    std::string format;
    bool with_oracle = false;
    int n_max = 0;
};

struct SweepConfig {
    Command command = Command::Validate;
    std::vector<double> n_values;
    std::vector<double> phi_values;
    double theta = kPi / 2;
    LossSpec loss;
    bool with_oracle = false;
    OutputFormat format = OutputFormat::Csv;
    int n_max = 0;  ///< oracle truncation override, 0 = automatic

    // Echoed into output metadata.
    std::string n_spec;
    std::string phi_spec;
    std::string theta_spec;

    /// Throws ConfigError on empty or non-increasing grids and out-of-range values.
    void validate() const;
};

/// Applies per-command defaults to unset fields and validates.
SweepConfig build_config(Command command, const RawOptions& raw);

/// Angle literal: a number, or a multiple/fraction of pi ("pi/2", "-pi/4", "0.5*pi", "2pi").
double parse_angle(const std::string& text);

/// "a:b:step" -> a, a + step, ... <= b
std::vector<double> parse_n_range(const std::string& text);

/// "a:b:points" -> `points` evenly spaced angles from a to b inclusive
std::vector<double> parse_phi_range(const std::string& text);

LossPlacement parse_placement(const std::string& text);
OutputFormat parse_format(const std::string& text);

}  // namespace nlphase::sweep
