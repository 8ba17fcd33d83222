#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dltune/common/csv.hpp"
#include "dltune/experiment/runner.hpp"

int main(int argc, char** argv) {
    using namespace dltune;

    CLI::App app{"Hyperparameter search benchmark for FFNN, RNN, SAE and DBN classifiers"};
    app.require_subcommand(1);

    std::string config_path;
    RunOverrides overrides;
    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Experiment JSON file")->required();
        cmd->add_option("--seed", overrides.seed, "Master seed (overrides the config)");
        cmd->add_option("--jobs", overrides.jobs, "Parallel trials")->check(CLI::PositiveNumber);
        cmd->add_option("--strategy", overrides.strategy, "none, grid, random or nelder_mead");
        cmd->add_option("--out", overrides.output_dir, "Output directory");
    };

    auto* profile_cmd = app.add_subcommand("profile", "Sparsity and class profile of every dataset");
    add_run_options(profile_cmd);
    auto* tune_cmd = app.add_subcommand("tune", "Run the configured searches and write trial logs and reports");
    add_run_options(tune_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep-lr", "Learning-rate curves from repeated cross-validation");
    add_run_options(sweep_cmd);

    auto* report_cmd = app.add_subcommand("report", "Merge trial logs and recompute the reports");
    std::vector<std::string> logs;
    std::string report_out = "report";
    std::string stream = "test";
    bool no_tie_correction = false;
    report_cmd->add_option("logs", logs, "trials.csv files")->required();
    report_cmd->add_option("--out", report_out, "Output directory");
    report_cmd->add_option("--stream", stream, "Accuracy stream for boxes, rankings and tests")
        ->check(CLI::IsMember({"test", "validation"}));
    report_cmd->add_flag("--no-tie-correction", no_tie_correction, "Kruskal-Wallis without tie correction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (report_cmd->parsed()) {
            ReportOptions options;
            options.stream = parse_accuracy_stream(stream);
            options.tie_correction = !no_tie_correction;
            return cmd_report(logs, report_out, options, std::cerr);
        }
        ExperimentConfig config = load_experiment_config(config_path);
        apply_overrides(config, overrides);
        if (profile_cmd->parsed()) return cmd_profile(config, std::cerr);
        if (tune_cmd->parsed()) return cmd_tune(config, std::cerr);
        return cmd_sweep_lr(config, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_partial_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_partial_failure;
    }
}
