#pragma once

#include "nlphase/sweep/config.hpp"
#include "nlphase/sweep/table.hpp"

/// Figure-data suites. Every suite echoes its configuration as metadata and,
/// with `with_oracle`, adds a Fock-space column next to each analytic one plus
/// a per-row deviation column; the largest deviation is also recorded in the
/// metadata as max_oracle_deviation.
namespace nlphase::sweep {

inline constexpr const char* kVersion = "0.1.0";

/// Columns: N, phi, raw_mean, normalized_mean
///          [, oracle_mean, oracle_normalized_mean, oracle_deviation]
Table run_fringe(const SweepConfig& config);

/// Columns: N, theta, visibility, phi_at_max, max_mean, phi_at_min, min_mean
///          [, oracle_visibility, oracle_deviation]
Table run_visibility(const SweepConfig& config);

/// Columns: N, delta_phi, phi_star, theta_star, n_scaling, heisenberg, qcrb,
///          lossy_reference [, oracle_delta_phi, oracle_deviation]
/// n_scaling = N^{-3/2}; lossy_reference = (TN)^{-3/2} (equal to n_scaling without loss).
Table run_sensitivity(const SweepConfig& config);

/// Columns: N, fisher_ratio, qfi, qfi_series, bhd_fisher
///          [, oracle_fisher_ratio, oracle_deviation]
Table run_fisher_ratio(const SweepConfig& config);

/// Columns: N, allowable_max_loss, heisenberg, delta_phi_at_max_loss
///          [, oracle_delta_phi_at_max_loss, oracle_deviation]
Table run_loss_bound(const SweepConfig& config);

/// Dispatches to the suite named by config.command (not Validate).
Table run_figure_suite(const SweepConfig& config);

}  // namespace nlphase::sweep
