#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Stationary channel flows in flow-line coordinates"};
    app.require_subcommand(1);

    std::string config, solution;
    double sigma = 0.1;

    auto* solve = app.add_subcommand("solve", "Solve the problem described by a config file");
    solve->add_option("config", config, "Configuration file")->required();

    auto* verify = app.add_subcommand("verify", "Check a stored solution in physical coordinates");
    verify->add_option("solution", solution, "Solution JSON")->required();
    verify->add_option("config", config, "Configuration file")->required();

    auto* diag = app.add_subcommand("diag", "Norms, strip estimates and ellipticity of a solution");
    diag->add_option("solution", solution, "Solution JSON")->required();
    diag->add_option("--sigma", sigma, "Strip half-width for the norms")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : flowlines::cli::kError;
    }

    using namespace flowlines::cli;
    if (*solve) return cmd_solve(config, std::cout, std::cerr);
    if (*verify) return cmd_verify(solution, config, std::cout, std::cerr);
    return cmd_diag(solution, sigma, std::cout, std::cerr);
}
