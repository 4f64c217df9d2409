// Command-line driver: solve | verify | classical | ndim.
#include <iostream>

#include <CLI11.hpp>

#include "virial/cli/commands.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Radial Schrodinger solver and virial relation checks"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    double tol = 0.0, grid_h = 0.0;
    for (const char* name : {"solve", "verify", "classical", "ndim"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "INI or JSON run configuration")->required();
        sub->add_option("--out", out, "output directory (overrides [output] dir)");
        sub->add_option("--tol", tol, "relative residual tolerance");
        sub->add_option("--grid-h", grid_h, "radial grid step");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return virial::cli::exit_config;
    }

    const CLI::App* sub = app.get_subcommands().front();
    virial::cli::Overrides o;
    if (sub->count("--out")) o.out = out;
    if (sub->count("--tol")) o.tol = tol;
    if (sub->count("--grid-h")) o.grid_h = grid_h;
    return virial::cli::run(sub->get_name(), config, o, std::cout, std::cerr);
}
