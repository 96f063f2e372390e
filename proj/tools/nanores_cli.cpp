// Command-line front end: run / trace / sweep / schedule-check.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "nanores/config.hpp"
#include "nanores/format.hpp"
#include "nanores/harness.hpp"

namespace fs = std::filesystem;
using namespace nanores;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
}

std::string weights_filename(const TaskSpec& t) {
    return "weights_" + std::string(to_string(t.function)) + "_" + std::to_string(t.delay) + ".txt";
}

void print_results(const std::vector<ResultRow>& rows) {
    std::printf("%-5s %3s  %-11s  %-10s %-10s\n", "task", "n", "mode", "mean", "std");
    for (const ResultRow& r : rows)
        std::printf("%-5s %3zu  %-11s  %-10.4f %-10.4f\n", std::string(to_string(r.task.function)).c_str(),
                    r.task.delay, std::string(to_string(r.mode)).c_str(), r.error_mean, r.error_std);
}

int cmd_run(const std::string& config_path, const fs::path& out_dir, std::size_t threads) {
    ExperimentConfig config = load_config(config_path);
    if (threads > 0) config.threads = threads;
    fs::create_directories(out_dir);
    write_text(out_dir / "effective_config.txt", to_text(config));

    const ExperimentResult result = run_experiment(config);
    emit_results_csv(result.rows, out_dir / "results.csv");
    emit_trace_csv(result.train.trace, out_dir / "train_trace.csv");
    for (std::size_t s = 0; s < result.tests.size(); ++s)
        emit_trace_csv(result.tests[s].trace, out_dir / ("test_trace_" + std::to_string(s + 1) + ".csv"));
    for (std::size_t t = 0; t < result.weights.size(); ++t)
        write_weights(out_dir / weights_filename(config.tasks[t]), result.weights[t]);

    print_results(result.rows);
    std::printf("non-converged stages: %zu\nresults written to %s\n", result.nonconverged, out_dir.string().c_str());
    return 0;
}

int cmd_trace(const std::string& config_path, const fs::path& out) {
    const ExperimentConfig config = load_config(config_path);
    const ClockedReservoir reservoir = make_reservoir(config);
    const auto bits = generate_bits(config.warmup + config.n_train, derive_seed(config.seed, 0));
    const SequenceRun run = run_driven_sequence(reservoir, config, bits, 0);
    emit_trace_csv(run.trace, out);
    std::printf("%zu steps written to %s (non-converged stages: %zu)\n", run.trace.size(), out.string().c_str(),
                run.nonconverged);
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& range, std::size_t threads) {
    ExperimentConfig config = load_config(config_path);
    if (threads > 0) config.threads = threads;
    config.tasks = parse_tasks("AND:" + range + ",OR:" + range + ",XOR:" + range);
    const ExperimentResult result = run_experiment(config);

    std::map<std::size_t, std::map<std::string, const ResultRow*>> table;
    for (const ResultRow& r : result.rows)
        table[r.task.delay][std::string(to_string(r.task.function)) + "/" + std::string(to_string(r.mode))] = &r;
    std::printf("%3s  %-15s %-15s %-15s %-15s %-15s %-15s\n", "n", "AND raw", "OR raw", "XOR raw", "AND thr",
                "OR thr", "XOR thr");
    for (const auto& [n, cells] : table) {
        std::printf("%3zu", n);
        for (const char* key : {"AND/raw", "OR/raw", "XOR/raw", "AND/thresholded", "OR/thresholded", "XOR/thresholded"}) {
            const ResultRow* r = cells.at(key);
            std::printf("  %.3f +- %.3f", r->error_mean, r->error_std);
        }
        std::printf("\n");
    }
    std::printf("non-converged stages: %zu\n", result.nonconverged);
    return 0;
}

int cmd_schedule_check(const std::string& config_path) {
    const ExperimentConfig config = load_config(config_path);
    std::cout << schedule_table(config);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dipole-coupled nanomagnet reservoir simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::string trace_out = "trace.csv";
    std::string range = "0-6";
    std::size_t threads = 0;

    auto* run = app.add_subcommand("run", "Full train/test experiment; writes CSVs, weights and the effective config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", out_dir, "Output directory");
    run->add_option("-j,--threads", threads, "Worker threads for independent sequences (overrides run.threads)");

    auto* trace = app.add_subcommand("trace", "Simulate the training sequence and emit its feature trace");
    trace->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    trace->add_option("-o,--out", trace_out, "Trace CSV path");

    auto* sweep = app.add_subcommand("sweep", "Error table for AND/OR/XOR over a delay range");
    sweep->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--n", range, "Delay range, e.g. 0..6 or 0-6");
    sweep->add_option("-j,--threads", threads, "Worker threads");

    auto* check = app.add_subcommand("schedule-check", "Print the per-stage K_u table");
    check->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, threads);
        if (trace->parsed()) return cmd_trace(config_path, trace_out);
        if (sweep->parsed()) {
            if (const auto dots = range.find(".."); dots != std::string::npos) range.replace(dots, 2, "-");
            return cmd_sweep(config_path, range, threads);
        }
        if (check->parsed()) return cmd_schedule_check(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
