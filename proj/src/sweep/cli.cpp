#include "nlphase/sweep/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <sstream>

#include "nlphase/sweep/config.hpp"
#include "nlphase/sweep/figures.hpp"
#include "nlphase/sweep/validate.hpp"

namespace nlphase::sweep {
namespace {

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
    if (format == OutputFormat::Json)
        write_json(out, table);
    else
        write_csv(out, table);
}

void emit(const Table& table, OutputFormat format, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        write_table(out, table, format);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + path + "'");
    write_table(file, table, format);
    file.flush();
    if (!file) throw Error("failed writing output file '" + path + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlinear phase estimation: figure data and validation against a Fock-space oracle",
                 "nlphase"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option values (flags on the command line win)");

    RawOptions raw;
    std::string out_path;
    app.add_option("--n", raw.n, "single mean photon number");
    app.add_option("--n-range", raw.n_range, "N grid a:b:step");
    app.add_option("--phi-range", raw.phi_range, "phi grid a:b:points (fringe)");
    app.add_option("--theta", raw.theta, "linear phase, e.g. 1.2 or pi/2");
    app.add_option("--loss-T", raw.loss_t, "transmissivity in (0, 1]");
    app.add_option("--loss-placement", raw.loss_placement, "before, after or none");
    app.add_flag("--with-oracle", raw.with_oracle, "add Fock-space oracle columns");
    app.add_option("--format", raw.format, "csv or json");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--n-max", raw.n_max, "oracle truncation override (0 = automatic)");

    const std::map<std::string, std::string> descriptions{
        {"fringe", "normalized <X> against phi"},
        {"visibility", "fringe visibility against N"},
        {"sensitivity", "optimal homodyne sensitivity with Heisenberg and QCRB references"},
        {"fisher-ratio", "homodyne Fisher information over the phase-averaged QFI"},
        {"loss-bound", "largest loss that still reaches the Heisenberg limit"},
        {"validate", "closed forms vs oracle, structural properties and findings"}};
    for (const auto& [name, text] : descriptions) app.add_subcommand(name, text)->fallthrough();

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    const auto* sub = app.get_subcommands().front();
    try {
        const Command command = parse_command(sub->get_name());
        const SweepConfig config = build_config(command, raw);
        if (command == Command::Validate) {
            const auto report = run_validate();
            emit(report.table(), config.format, out_path, out);
            if (!report.passed()) {
                err << "validate: hard invariant failure\n";
                return kExitInvariantFailure;
            }
            return kExitOk;
        }
        emit(run_figure_suite(config), config.format, out_path, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace nlphase::sweep
