#include "nlphase/sweep/figures.hpp"

#include <algorithm>
#include <cmath>

#include "nlphase/analytic_model.hpp"
#include "nlphase/estimation.hpp"
#include "nlphase/fock_oracle.hpp"
#include "nlphase/numerics.hpp"
#include "nlphase/qfi.hpp"

namespace nlphase::sweep {
namespace {

using estimation::MomentsSource;

Table with_config_meta(const SweepConfig& config) {
    Table t;
    t.add_meta("command", to_string(config.command));
    t.add_meta("version", kVersion);
    t.add_meta("grid", config.n_spec);
    if (config.command == Command::Fringe) t.add_meta("phi_range", config.phi_spec);
    t.add_meta("theta", config.theta_spec);
    t.add_meta("loss_placement", to_string(config.loss.placement));
    t.add_meta("loss_T", format_number(config.loss.transmissivity));
    t.add_meta("with_oracle", config.with_oracle ? "true" : "false");
    t.add_meta("truncation", config.n_max > 0 ? std::to_string(config.n_max) : "auto");
    return t;
}

oracle::OracleOptions oracle_options(const SweepConfig& config) {
    oracle::OracleOptions o;
    o.n_max = config.n_max;
    return o;
}

void record_truncation(Table& table, const std::vector<double>& ns, const SweepConfig& config) {
    if (!config.with_oracle || config.n_max > 0) return;
    std::string used;
    for (double n : ns) {
        if (!used.empty()) used += ';';
        used += format_number(n) + ":" + std::to_string(oracle::auto_truncation(n));
    }
    table.add_meta("oracle_n_max", used);
}

void record_max_deviation(Table& table, const SweepConfig& config) {
    if (!config.with_oracle) return;
    double worst = 0.0;
    const auto col = table.column_index("oracle_deviation");
    for (const auto& row : table.rows) worst = std::max(worst, std::get<double>(row[col]));
    table.add_meta("max_oracle_deviation", format_number(worst));
}

double relative_deviation(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

}  // namespace

Table run_fringe(const SweepConfig& config) {
    Table table = with_config_meta(config);
    table.columns = {"N", "phi", "raw_mean", "normalized_mean"};
    if (config.with_oracle)
        table.columns.insert(table.columns.end(),
                             {"oracle_mean", "oracle_normalized_mean", "oracle_deviation"});
    record_truncation(table, config.n_values, config);

    for (double n : config.n_values) {
        const auto scan = analytic::fringe_scan(n, config.theta, config.phi_values, config.loss);
        std::vector<double> oracle_means;
        if (config.with_oracle) {
            const oracle::ProtocolSimulator sim(n, 2, config.loss, oracle_options(config));
            oracle_means = numerics::parallel_map(scan.size(), [&](std::size_t i) {
                return sim.moments(scan[i].phi, config.theta).mean;
            });
        }
        const double norm = std::sqrt(n);
        for (std::size_t i = 0; i < scan.size(); ++i) {
            const auto& p = scan[i];
            std::vector<Cell> row{n, p.phi, p.raw_mean, p.normalized_mean};
            if (config.with_oracle) {
                const double on = oracle_means[i] / norm;
                row.insert(row.end(), {oracle_means[i], on, std::abs(p.normalized_mean - on)});
            }
            table.add_row(std::move(row));
        }
    }
    record_max_deviation(table, config);
    return table;
}

Table run_visibility(const SweepConfig& config) {
    Table table = with_config_meta(config);
    table.add_meta("phi_domain", "-pi/2:pi/2");
    table.columns = {"N", "theta", "visibility", "phi_at_max", "max_mean", "phi_at_min", "min_mean"};
    if (config.with_oracle)
        table.columns.insert(table.columns.end(), {"oracle_visibility", "oracle_deviation"});
    record_truncation(table, config.n_values, config);

    const auto results = numerics::parallel_map(config.n_values.size(), [&](std::size_t i) {
        return analytic::visibility_scan(config.n_values[i], config.theta, {}, config.loss);
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double n = config.n_values[i];
        const auto& v = results[i];
        std::vector<Cell> row{n, config.theta, v.visibility, v.phi_at_max, v.max_mean, v.phi_at_min,
                              v.min_mean};
        if (config.with_oracle) {
            const oracle::ProtocolSimulator sim(n, 2, config.loss, oracle_options(config));
            const double hi = sim.moments(v.phi_at_max, config.theta).mean;
            const double lo = sim.moments(v.phi_at_min, config.theta).mean;
            const double denom = std::abs(hi) + std::abs(lo);
            const double ov = denom > 0.0 ? (hi - lo) / denom : 0.0;
            row.insert(row.end(), {ov, std::abs(ov - v.visibility)});
        }
        table.add_row(std::move(row));
    }
    record_max_deviation(table, config);
    return table;
}

Table run_sensitivity(const SweepConfig& config) {
    Table table = with_config_meta(config);
    table.columns = {"N",          "delta_phi",  "phi_star", "theta_star",
                     "n_scaling",  "heisenberg", "qcrb",     "lossy_reference"};
    if (config.with_oracle)
        table.columns.insert(table.columns.end(), {"oracle_delta_phi", "oracle_deviation"});
    record_truncation(table, config.n_values, config);

    const double t = config.loss.effective_transmissivity();
    const auto reports = numerics::parallel_map(config.n_values.size(), [&](std::size_t i) {
        const double n = config.n_values[i];
        return config.loss.active()
                   ? estimation::lossy_optimum(n, t, config.loss.placement)
                   : estimation::find_optimum(n, MomentsSource::Analytic);
    });
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const double n = config.n_values[i];
        const auto& r = reports[i];
        std::vector<Cell> row{n,
                              r.delta_phi,
                              r.phi_star,
                              r.theta_star,
                              std::pow(n, -1.5),
                              1.0 / n,
                              qfi::qcrb(n),
                              std::pow(t * n, -1.5)};
        if (config.with_oracle) {
            const estimation::OracleSensitivityModel model(n, config.loss, oracle_options(config));
            const double od = estimation::evaluate_at(model, r.phi_star, r.theta_star).delta_phi;
            row.insert(row.end(), {od, relative_deviation(od, r.delta_phi)});
        }
        table.add_row(std::move(row));
    }
    record_max_deviation(table, config);
    return table;
}

Table run_fisher_ratio(const SweepConfig& config) {
    Table table = with_config_meta(config);
    table.columns = {"N", "fisher_ratio", "qfi", "qfi_series", "bhd_fisher"};
    if (config.with_oracle)
        table.columns.insert(table.columns.end(), {"oracle_fisher_ratio", "oracle_deviation"});
    record_truncation(table, config.n_values, config);

    for (double n : config.n_values) {
        const double f = qfi::qfi_closed_form(n);
        const double ratio = estimation::fisher_ratio(n);
        std::vector<Cell> row{n, ratio, f, qfi::phase_averaged_qfi(n, 1e-12 * std::max(1.0, f)).value,
                              std::pow(n, 3.0)};
        if (config.with_oracle) {
            // Homodyne Fisher information 1/dphi^2 at the optimum, from the oracle.
            const estimation::OracleSensitivityModel model(n, {}, oracle_options(config));
            const double dphi = estimation::evaluate_at(model, 0.0, kPi / 2).delta_phi;
            const double oracle_ratio = 1.0 / (dphi * dphi * f);
            row.insert(row.end(), {oracle_ratio, std::abs(oracle_ratio - ratio)});
        }
        table.add_row(std::move(row));
    }
    record_max_deviation(table, config);
    return table;
}

Table run_loss_bound(const SweepConfig& config) {
    Table table = with_config_meta(config);
    table.columns = {"N", "allowable_max_loss", "heisenberg", "delta_phi_at_max_loss"};
    if (config.with_oracle)
        table.columns.insert(table.columns.end(),
                             {"oracle_delta_phi_at_max_loss", "oracle_deviation"});
    record_truncation(table, config.n_values, config);

    for (double n : config.n_values) {
        const double l_max = estimation::allowable_max_loss(n);
        const double t = 1.0 - l_max;
        const auto report = estimation::lossy_optimum(n, t, LossPlacement::BeforePhase);
        std::vector<Cell> row{n, l_max, 1.0 / n, report.delta_phi};
        if (config.with_oracle) {
            const estimation::OracleSensitivityModel model(n, LossSpec::before_phase(t),
                                                           oracle_options(config));
            const double od =
                estimation::evaluate_at(model, report.phi_star, report.theta_star).delta_phi;
            row.insert(row.end(), {od, relative_deviation(od, report.delta_phi)});
        }
        table.add_row(std::move(row));
    }
    record_max_deviation(table, config);
    return table;
}

Table run_figure_suite(const SweepConfig& config) {
    switch (config.command) {
        case Command::Fringe: return run_fringe(config);
        case Command::Visibility: return run_visibility(config);
        case Command::Sensitivity: return run_sensitivity(config);
        case Command::FisherRatio: return run_fisher_ratio(config);
        case Command::LossBound: return run_loss_bound(config);
        case Command::Validate: break;
    }
    throw ConfigError("command", "validate is not a figure suite");
}

}  // namespace nlphase::sweep
