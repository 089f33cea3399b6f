#include "mechquot/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    CLI::App app{"Exact checks for mechanical quotients of affine connection control systems"};
    app.require_subcommand(1);

    mechquot::CommandOptions options;
    std::string file;
    std::string format = "text";
    std::size_t max_level = 0;
    double dt = 0, tol = 0;

    for (const auto &name : mechquot::command_names()) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("FILE", file, "system description (JSON)")->required();
        sub->add_option("--point", options.point, "named point or x1=0,x2=1/2");
        sub->add_option("--distribution", options.distribution, "distribution name");
        sub->add_option("--scenario", options.scenario, "scenario name");
        sub->add_option("--out", options.out, "output path");
        sub->add_option("--seed", options.seed, "random seed for verify-identities");
        sub->add_option("--max-level", max_level, "nu-sequence level cap")->check(CLI::Range(2, 1000));
        sub->add_option("--dt", dt, "integration step")->check(CLI::PositiveNumber);
        sub->add_option("--tol", tol, "commutation tolerance")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mechquot::kExitInput;
    }

    CLI::App *sub = app.get_subcommands().front();
    if (sub->count("--max-level"))
        options.max_level = max_level;
    if (sub->count("--dt"))
        options.dt = dt;
    if (sub->count("--tol"))
        options.tol = tol;
    options.machine = format == "machine";

    mechquot::CommandResult r = mechquot::run_command(sub->get_name(), file, options);
    std::cout << r.rendered(options.machine);
    return r.exit_code;
}
