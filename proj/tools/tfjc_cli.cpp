// tfjc: figure data and validation runs for the thermal l-photon JCM.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tfjc/cli/commands.hpp"
#include "tfjc/cli/config.hpp"
#include "tfjc/cli/presets.hpp"

namespace {

using namespace tfjc;
using namespace tfjc::cli;

struct Flags {
    std::string preset;
    std::string config;
    std::string out;
    std::string format;
    bool with_oracle = false;
    long long nmax = 0;
    double dt = 0.0;
    bool full_density = false;
    bool print_config = false;
    std::string corrupt_tilde;
};

RunConfig load(const std::string& command, const Flags& f) {
    if (!f.preset.empty() && !f.config.empty()) throw ConfigError("give either --preset or --config, not both");
    RunConfig c;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot read config file '" + f.config + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        c = parse_config(ss.str());
    } else {
        c = preset(f.preset.empty() ? default_preset(command) : f.preset);
    }
    if (c.command != command)
        throw ConfigError("config is for '" + c.command + "', not '" + command + "'");
    if (!f.out.empty()) c.output.path = f.out;
    if (!f.format.empty()) c.output.format = f.format;
    if (f.with_oracle) c.oracle.enabled = true;
    if (f.nmax != 0) {
        if (f.nmax < 1) throw ConfigError("--nmax must be >= 1");
        c.truncation.n_max = static_cast<std::size_t>(f.nmax);
        c.truncation.adaptive = false;
    }
    if (f.dt != 0.0) c.grid.dt = f.dt;
    validate(c);
    return c;
}

ValidateOptions parse_corruption(const std::string& s) {
    ValidateOptions o;
    if (s.empty()) return o;
    int j = 0, k = 0;
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> j >> comma >> k) || comma != ',' || j < 1 || j > 2 || k < 0 || k > 5)
        throw ConfigError("--corrupt-tilde expects j,k with j in {1,2} and k in 0..5");
    o.corrupt_tilde = std::make_pair(j, k);
    return o;
}

int run(const std::string& command, const Flags& f) {
    const RunConfig c = load(command, f);
    if (f.print_config) {
        std::cout << serialize(c);
        return kExitOk;
    }
    CommandResult r;
    if (command == "pe-series")
        r = cmd_pe_series(c);
    else if (command == "period-sweep")
        r = cmd_period_sweep(c);
    else if (command == "coherence-map")
        r = cmd_coherence_map(c, f.full_density);
    else if (command == "oracle-validate")
        r = cmd_oracle_validate(c, parse_corruption(f.corrupt_tilde));
    else
        r = cmd_approx_check(c);

    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";

    std::ofstream file;
    if (!c.output.path.empty()) {
        file.open(c.output.path);
        if (!file) throw ConfigError("cannot write output file '" + c.output.path + "'");
    }
    std::ostream& os = c.output.path.empty() ? std::cout : file;
    if (r.report)
        os << r.report->dump(2) << "\n";
    else
        write_table(os, r.table, c.output.format);

    if (r.exit_code == kExitValidation) std::cerr << "error: validation failed\n";
    if (r.exit_code == kExitNoRevival) std::cerr << "error: no revival detected at any temperature\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal multiphoton Jaynes-Cummings dynamics"};
    app.require_subcommand(1);
    Flags f;

    const std::pair<const char*, const char*> subs[] = {
        {"pe-series", "Excitation probability P_e(t) at one temperature"},
        {"period-sweep", "Revival period against temperature"},
        {"coherence-map", "Relative entropy of coherence over (t, 1/beta)"},
        {"oracle-validate", "Check the series against the exact oracle (JSON report)"},
        {"approx-check", "Cosine-sum approximation, both sides"},
    };
    for (const auto& [name, desc] : subs) {
        auto* s = app.add_subcommand(name, desc);
        s->add_option("--preset", f.preset, "Built-in configuration name");
        s->add_option("--config", f.config, "JSON configuration file");
        s->add_option("--out", f.out, "Output path (default stdout)");
        s->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        s->add_flag("--with-oracle", f.with_oracle, "Add the exact oracle column");
        s->add_option("--nmax", f.nmax, "Series truncation n_max");
        s->add_option("--dt", f.dt, "Time step")->check(CLI::PositiveNumber);
        s->add_flag("--print-config", f.print_config, "Print the canonical configuration and exit");
        if (std::string(name) == "coherence-map")
            s->add_flag("--full-density", f.full_density, "Sample at a fortieth of the Rabi quantum");
        if (std::string(name) == "oracle-validate")
            s->add_option("--corrupt-tilde", f.corrupt_tilde, "Perturb one series, as j,k (negative control)");
    }
    app.add_flag_callback("--list-presets", [] {
        for (const auto& [name, c] : presets()) std::cout << name << "\t" << c.command << "\n";
        std::exit(0);
    }, "List built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), f);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NoRevivalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoRevival;
    } catch (const LeakageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
