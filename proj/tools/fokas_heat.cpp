// fokas_heat solve|verify|steady --config FILE [--out FILE]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fokas_heat/cli.hpp"

int main(int argc, char** argv) {
    using fokas_heat::Command;
    CLI::App app{"Heat flow in composite rods"};
    app.require_subcommand(1);

    std::string config, out;
    auto add = [&](const char* name, const char* help, bool has_out) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
        if (has_out) sub->add_option("--out", out, "output file (default: stdout)");
        return sub;
    };
    auto* solve = add("solve", "evaluate u on grid.x x grid.t and write CSV", true);
    auto* verify = add("verify", "run the oracle checks and write a report", true);
    auto* steady = add("steady", "print the long-time limit", false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : fokas_heat::cli::ConfigFailure;
    }

    Command cmd = Command::Solve;
    if (verify->parsed()) cmd = Command::Verify;
    if (steady->parsed()) cmd = Command::Steady;
    (void)solve;
    return fokas_heat::cli::run(cmd, config, out, std::cout, std::cerr);
}
