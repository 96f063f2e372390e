#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nanores/clocking.hpp"
#include "nanores/config.hpp"
#include "nanores/readout.hpp"

namespace nanores {

/// Derives an independent stream seed from a master seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// n i.i.d. uniform bits from a seeded mt19937_64 (top bit of each draw).
std::vector<int> generate_bits(std::size_t n, std::uint64_t seed);

int target(BoolFunction fn, int current, int delayed);

/// Target per step, or nullopt where it is undefined: step k (0-based) is
/// scored only when k >= delay and k >= warmup.
std::vector<std::optional<int>> build_targets(std::span<const int> bits, const TaskSpec& task,
                                              std::size_t warmup);

struct ResultRow {
    TaskSpec task;
    ErrorMode mode = ErrorMode::Raw;
    double error_mean = 0.0;
    double error_std = 0.0;
    std::size_t nonconverged = 0;
    std::uint64_t seed = 0;
};

/// One driven sequence: bits, feature rows (unrounded) and convergence bookkeeping.
struct SequenceRun {
    ReservoirTrace trace;
    std::size_t nonconverged = 0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<ReadoutWeights> weights;  // one per task, same order as config.tasks
    SequenceRun train;
    std::vector<SequenceRun> tests;
    std::size_t nonconverged = 0;
};

ClockedReservoir make_reservoir(const ExperimentConfig& config);

/// Initial spin state per the configured policy.
SpinState initial_state(const ExperimentConfig& config, std::size_t n_mag, std::uint64_t stream);

/// Drives the reservoir with `bits` from the configured initial state and
/// records one feature row per step.
SequenceRun run_driven_sequence(const ClockedReservoir& reservoir, const ExperimentConfig& config,
                                const std::vector<int>& bits, std::uint64_t stream);

/// Full train/test experiment. Throws if a task has no defined targets.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Scores precomputed sequences (used by run_experiment and by tests that
/// want to rescore one simulation under different readout settings).
ExperimentResult score_experiment(const ExperimentConfig& config, SequenceRun train,
                                  std::vector<SequenceRun> tests);

void emit_trace_csv(const ReservoirTrace& trace, const std::filesystem::path& path);
ReservoirTrace read_trace_csv(const std::filesystem::path& path);
void emit_results_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);

/// Human-readable K_u table: one line per stage, one column per magnet.
std::string schedule_table(const ExperimentConfig& config);

}  // namespace nanores
