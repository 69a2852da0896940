#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bsnet/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace bsnet::cli;

    CLI::App app{"Collocation-network solver for ordinary and time-fractional Black-Scholes problems"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool no_plots = false;

    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "initialization seed (overrides network.seed)");
        sub->add_flag("--no-plots", no_plots, "skip SVG output");
    };

    CLI::App* solve = app.add_subcommand("solve", "march all time steps and write the CSV set");
    CLI::App* compare = app.add_subcommand("compare", "Adam, SGD and RMSprop on the first step");
    CLI::App* sweep = app.add_subcommand("sweep-alpha", "one solve per alpha in sweep.alphas");
    CLI::App* lr = app.add_subcommand("lr-search", "grid search over lr_search.candidates");
    CLI::App* selftest = app.add_subcommand("selftest", "run the fast invariant checks");
    for (CLI::App* sub : {solve, compare, sweep, lr}) add_run_flags(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    Overrides ov;
    if (!out_dir.empty()) ov.out_dir = out_dir;
    for (CLI::App* sub : {solve, compare, sweep, lr})
        if (sub->parsed() && sub->count("--seed")) ov.seed = seed;
    ov.no_plots = no_plots;

    try {
        if (solve->parsed()) return cmd_solve(config, ov, std::cout, std::cerr);
        if (compare->parsed()) return cmd_compare(config, ov, std::cout, std::cerr);
        if (sweep->parsed()) return cmd_sweep_alpha(config, ov, std::cout, std::cerr);
        if (lr->parsed()) return cmd_lr_search(config, ov, std::cout, std::cerr);
        if (selftest->parsed()) return cmd_selftest(std::cout);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
    }
    return exit_failure;
}
