#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "costep/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"co-simulation step-size discrepancy toolkit"};
    app.require_subcommand(1);

    std::string run_target;
    std::string run_out = costep::default_output_dir();
    CLI::App* run_cmd = app.add_subcommand("run", "run a builtin experiment or a config file");
    run_cmd->add_option("experiment", run_target, "builtin name or config file path")
        ->required();
    run_cmd->add_option("--out", run_out, "output directory");

    std::string predict_csv;
    std::string predict_out = costep::default_output_dir();
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "predict the discrepancy series from a (t, q) CSV");
    predict_cmd->add_option("flow_csv", predict_csv, "CSV of (t, q) samples")->required();
    predict_cmd->add_option("--out", predict_out, "output directory");

    CLI::App* list_cmd = app.add_subcommand("list", "list builtin experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints usage, exits 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (run_cmd->parsed()) {
        return costep::cmd_run(run_target, run_out, std::cerr);
    }
    if (predict_cmd->parsed()) {
        return costep::cmd_predict(predict_csv, predict_out, std::cerr);
    }
    if (list_cmd->parsed()) {
        return costep::cmd_list(std::cout);
    }
    std::cerr << app.help();
    return 2;
}
