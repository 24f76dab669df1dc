// Command-line driver for the experiments. Every experiment parameter is
// exposed as a long flag taking a JSON value (e.g. --taus '[0.5,0.25]'); a
// --config file, when given, is applied on top of the flags.
//
// Exit codes: 0 all checks pass, 2 configuration error, 3 check failure.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sclab/experiments.hpp"

namespace {

using nlohmann::json;
namespace ex = sclab::experiments;

constexpr int exit_config = 2;
constexpr int exit_failed = 3;

std::string flag_name(std::string key)
{
    for (auto& c : key)
        if (c == '_')
            c = '-';
    return "--" + key;
}

json parse_value(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);
    }
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ex::ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ex::ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

// Applies a LevelSpec file to the parameters the experiment actually has.
void apply_level_spec(const ex::Experiment& e, const json& spec_json, json& overrides)
{
    sclab::LevelSpec spec;
    try {
        spec = sclab::io::level_spec_from_json(spec_json);
    } catch (const std::exception& err) {
        throw ex::ConfigError(std::string("level spec: ") + err.what());
    }
    if (e.defaults.contains("p"))
        overrides["p"] = spec.p;
    if (e.defaults.contains("weight"))
        overrides["weight"] = sclab::io::to_json(*spec.weight);
    if (e.defaults.contains("delta") && spec.deltas.size() > 1)
        overrides["delta"] = spec.deltas[1];
}

struct Outputs {
    std::string out;
    std::string csv;
    std::string format = "json";
};

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw ex::ConfigError("cannot write '" + path + "'");
    f << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sc-lab: numerical experiments on scale structures, shift maps and fractal Hilbert scales"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every experiment");

    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    Outputs outputs;
    std::string config_path, level_spec_path;

    struct Bound {
        const ex::Experiment* experiment;
        CLI::App* command;
        std::map<std::string, std::string> raw;
    };
    std::vector<Bound> bound;
    bound.reserve(ex::registry().size());

    auto* list = app.add_subcommand("list", "List experiments and their default parameters");

    for (const auto& e : ex::registry()) {
        auto* sub = app.add_subcommand(e.name, e.summary);
        bound.push_back({&e, sub, {}});
        auto& b = bound.back();
        for (const auto& [key, value] : e.defaults.items())
            sub->add_option(flag_name(key), b.raw[key], "JSON value (default " + value.dump() + ")");
        sub->add_option("--config", config_path, "JSON parameter file; overrides flags")->check(CLI::ExistingFile);
        sub->add_option("--level-spec", level_spec_path, "LevelSpec JSON file {p, deltas, weight, K}")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", outputs.out, "Report path (default stdout)");
        sub->add_option("--csv", outputs.csv, "Also write the CSV mirror to this path");
        sub->add_option("--format", outputs.format, "Report format written to --out")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    if (list->parsed()) {
        for (const auto& e : ex::registry())
            std::cout << e.name << "  " << e.defaults.dump() << "\n";
        return 0;
    }

    const Bound* chosen = nullptr;
    for (const auto& b : bound)
        if (b.command->parsed())
            chosen = &b;
    if (!chosen)
        return exit_config;

    try {
        json overrides = json::object();
        for (const auto& [key, text] : chosen->raw)
            if (chosen->command->count(flag_name(key)) > 0)
                overrides[key] = parse_value(text);
        if (!level_spec_path.empty())
            apply_level_spec(*chosen->experiment, read_json_file(level_spec_path), overrides);
        if (!config_path.empty()) {
            const json file = read_json_file(config_path);
            if (!file.is_object())
                throw ex::ConfigError("config file must hold a JSON object");
            for (const auto& [key, value] : file.items())
                overrides[key] = value;
        }

        const auto report = ex::run(chosen->experiment->name, overrides, jobs);
        const std::string json_text = report.to_json().dump(2) + "\n";
        write_text(outputs.out, outputs.format == "csv" ? report.csv : json_text);
        if (!outputs.csv.empty())
            write_text(outputs.csv, report.csv);
        for (const auto& c : report.checks)
            std::cerr << (c.pass ? "PASS  " : "FAIL  ") << c.name << "\n";
        return report.pass() ? 0 : exit_failed;
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
}
