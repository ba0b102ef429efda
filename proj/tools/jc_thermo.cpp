// jc_thermo: run a configured experiment and write a CSV/JSON table
//
// exit codes: 0 ok, 2 bad config or command line, 3 solver or runtime failure

#include "jcthermo/runner/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace jcthermo;
using namespace jcthermo::runner;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dressed-state steady states and thermal negativity for a Jaynes-Cummings system"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path, out_path, format;
    int truncation = 0;
    app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (default: config 'output', else stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--truncation", truncation, "override n_d")->check(CLI::PositiveNumber);

    using Command = std::function<ResultTable(const ExperimentConfig&)>;
    const std::vector<std::tuple<std::string, std::string, Command, bool>> commands = {
        {"steady", "steady-state populations and thermalization verdict", cmd_steady, true},
        {"teff", "effective temperature of every level pair", cmd_teff, true},
        {"tracedist", "trace distance to Gibbs states along a T_ref sweep", cmd_tracedist, true},
        {"negativity", "logarithmic negativity of the resonant thermal state", cmd_negativity, true},
        {"table1", "n_0 + 2 and n_max at s = 11", [](const ExperimentConfig& c) { return cmd_table1(c); }, false},
        {"crossover", "F_n(g_r) curves", cmd_crossover, true},
        {"thermal", "thermal populations versus g_r", cmd_thermal, true},
    };
    std::map<CLI::App*, std::pair<Command, bool>> dispatch;
    for (const auto& [name, help, fn, needs_config] : commands)
        dispatch[app.add_subcommand(name, help)] = {fn, needs_config};

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    const auto& [fn, needs_config] = dispatch.at(sub);
    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        else if (needs_config) throw ConfigError("--config is required for '" + sub->get_name() + "'");
        if (truncation > 0) cfg.n_d = truncation;
        if (!format.empty()) cfg.format = parse_format(format);
        if (!out_path.empty()) cfg.output = out_path;

        ResultTable table = fn(cfg);
        table.metadata["timestamp"] = utc_timestamp();
        if (table.metadata.contains("warnings"))
            for (const auto& w : table.metadata["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';

        if (cfg.output.empty() || cfg.output == "-") {
            write_table(std::cout, table, cfg.format);
            std::cout.flush();
        } else {
            std::ofstream out(cfg.output);
            if (!out) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
            write_table(out, table, cfg.format);
            if (!out) throw std::runtime_error("write to '" + cfg.output + "' failed");
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
