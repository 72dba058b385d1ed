#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"ptkit: time-dependent non-Hermitian two-level systems"};
    app.require_subcommand(1);

    const std::map<std::string, std::string> about = {
        {"simulate", "propagate a state in the original or effective frame"},
        {"effective", "sample Gamma(t) and the effective generator"},
        {"analytic", "closed-form effective-frame solution next to numerics"},
        {"floquet", "monodromy sweep over one parameter"},
        {"ep", "distance to exceptional points along t"},
    };
    std::string config, out, format = "csv";
    for (const char* const* name = ptkit::cli::command_names(); *name; ++name) {
        const auto it = about.find(*name);
        CLI::App* sub = app.add_subcommand(*name, it == about.end() ? "" : it->second);
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--out", out, "output file; metadata goes to <out>.meta.json")->required();
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ptkit::cli::kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const auto fmt = format == "json" ? ptkit::cli::Format::json : ptkit::cli::Format::csv;
    return ptkit::cli::run(command, config, out, fmt, std::cerr);
}
