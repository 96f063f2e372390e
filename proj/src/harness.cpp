#include "nanores/harness.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nanores/format.hpp"

namespace nanores {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<int> generate_bits(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_bits: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<int> bits(n);
    for (int& b : bits) b = static_cast<int>(rng() >> 63);
    return bits;
}

int target(BoolFunction fn, int current, int delayed) {
    if ((current != 0 && current != 1) || (delayed != 0 && delayed != 1))
        throw std::invalid_argument("target: bits must be 0 or 1");
    switch (fn) {
        case BoolFunction::And: return current & delayed;
        case BoolFunction::Or: return current | delayed;
        case BoolFunction::Xor: return current ^ delayed;
    }
    return 0;
}

std::vector<std::optional<int>> build_targets(std::span<const int> bits, const TaskSpec& task,
                                              std::size_t warmup) {
    std::vector<std::optional<int>> out(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (k >= task.delay && k >= warmup) out[k] = target(task.function, bits[k], bits[k - task.delay]);
    return out;
}

ClockedReservoir make_reservoir(const ExperimentConfig& config) {
    const GeometryConfig& g = config.geometry;
    ArrayGeometry geom = build_grid_array(g.rows, g.cols, g.radius, g.thickness, g.gap);
    MaterialParams material = config.material;
    material.volume = geom.volume();
    return ClockedReservoir(std::move(geom), material, config.integrator, config.schedule);
}

SpinState initial_state(const ExperimentConfig& config, std::size_t n_mag, std::uint64_t stream) {
    if (config.initial == InitialPolicy::AllUp) return SpinState::uniform(n_mag, {0.0, 0.0, 1.0});
    std::mt19937_64 rng(derive_seed(config.seed, 1000 + stream));
    std::normal_distribution<double> normal;
    SpinState s;
    s.m.reserve(n_mag);
    while (s.m.size() < n_mag) {
        const Vec3 v{normal(rng), normal(rng), normal(rng)};
        if (norm(v) > 1e-6) s.m.push_back(normalized(v));
    }
    return s;
}

SequenceRun run_driven_sequence(const ClockedReservoir& reservoir, const ExperimentConfig& config,
                                const std::vector<int>& bits, std::uint64_t stream) {
    SequenceRun run;
    SpinState state = initial_state(config, reservoir.geometry().size(), stream);
    run.trace.rows.reserve(bits.size());
    for (int bit : bits) {
        StepResult step = reservoir.run_step(state, bit);
        run.trace.rows.push_back(extract_features(step.snapshot));
        run.trace.bits.push_back(bit);
        run.nonconverged += step.nonconverged_count();
        state = std::move(step.final_state);
    }
    return run;
}

namespace {

struct Dataset {
    std::vector<FeatureVector> rows;
    std::vector<double> targets;
};

// round_digits == 0 keeps full precision.
Dataset select_rows(const SequenceRun& run, const TaskSpec& task, std::size_t warmup, int round_digits) {
    Dataset d;
    const auto targets = build_targets(run.trace.bits, task, warmup);
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (!targets[k]) continue;
        d.rows.push_back(round_digits > 0 ? round_features(run.trace.rows[k], round_digits) : run.trace.rows[k]);
        d.targets.push_back(static_cast<double>(*targets[k]));
    }
    return d;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

ExperimentResult score_experiment(const ExperimentConfig& config, SequenceRun train,
                                  std::vector<SequenceRun> tests) {
    ExperimentResult result;
    result.nonconverged = train.nonconverged;
    for (const SequenceRun& t : tests) result.nonconverged += t.nonconverged;

    const int train_round = config.round_train ? config.round_digits : 0;
    const int test_round = config.round_test ? config.round_digits : 0;

    for (const TaskSpec& task : config.tasks) {
        const Dataset fit = select_rows(train, task, config.warmup, train_round);
        if (fit.rows.empty())
            throw std::runtime_error("task " + task.id() + " has no defined training targets");
        ReadoutWeights w = train_readout(fit.rows, fit.targets, config.ridge, task.id());

        std::vector<double> raw, thresholded;
        for (const SequenceRun& test : tests) {
            const Dataset scored = select_rows(test, task, config.warmup, test_round);
            if (scored.rows.empty())
                throw std::runtime_error("task " + task.id() + " has no defined test targets");
            const std::vector<double> outputs = evaluate(scored.rows, w);
            raw.push_back(error_rate(outputs, scored.targets, ErrorMode::Raw));
            thresholded.push_back(error_rate(outputs, scored.targets, ErrorMode::Thresholded));
        }
        for (auto [mode, errors] : {std::pair{ErrorMode::Raw, &raw}, std::pair{ErrorMode::Thresholded, &thresholded}}) {
            const auto [mean, sd] = mean_std(*errors);
            result.rows.push_back({task, mode, mean, sd, result.nonconverged, config.seed});
        }
        result.weights.push_back(std::move(w));
    }
    result.train = std::move(train);
    result.tests = std::move(tests);
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const ClockedReservoir reservoir = make_reservoir(config);

    // Stream 0 is training; stream 1 + s is test set s. Every sequence carries its own warmup.
    const std::size_t n_seq = 1 + config.n_test_sets;
    std::vector<std::vector<int>> bits(n_seq);
    for (std::size_t s = 0; s < n_seq; ++s) {
        const std::size_t scored = s == 0 ? config.n_train : config.n_test;
        bits[s] = generate_bits(config.warmup + scored, derive_seed(config.seed, s));
    }

    std::vector<SequenceRun> runs(n_seq);
    const std::size_t workers = std::min(config.threads, n_seq);
    if (workers <= 1) {
        for (std::size_t s = 0; s < n_seq; ++s) runs[s] = run_driven_sequence(reservoir, config, bits[s], s);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t s = w; s < n_seq; s += workers)
                        runs[s] = run_driven_sequence(reservoir, config, bits[s], s);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (std::thread& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    SequenceRun train = std::move(runs.front());
    std::vector<SequenceRun> tests(std::make_move_iterator(runs.begin() + 1), std::make_move_iterator(runs.end()));
    return score_experiment(config, std::move(train), std::move(tests));
}

void emit_trace_csv(const ReservoirTrace& trace, const std::filesystem::path& path) {
    trace.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "k,bit";
    for (std::size_t i = 1; i <= trace.magnet_count(); ++i) out << ",mu_x" << i;
    out << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << (k + 1) << ',' << trace.bits[k];
        const FeatureVector& row = trace.rows[k];
        for (std::size_t i = 0; i + 1 < row.size(); ++i) out << ',' << format_double(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ReservoirTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,bit", 0) != 0)
        throw std::runtime_error("'" + path.string() + "': missing trace header");
    ReservoirTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        std::vector<std::string> fields;
        while (std::getline(cells, cell, ',')) fields.push_back(cell);
        if (fields.size() < 2)
            throw std::runtime_error("'" + path.string() + "' line " + std::to_string(line_no) + ": too few columns");
        trace.bits.push_back(static_cast<int>(parse_double(fields[1])));
        FeatureVector row;
        for (std::size_t i = 2; i < fields.size(); ++i) row.push_back(parse_double(fields[i]));
        row.push_back(1.0);
        trace.rows.push_back(std::move(row));
    }
    trace.validate();
    return trace;
}

void emit_results_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "task,n,mode,error_mean,error_std,nonconverged,seed\n";
    for (const ResultRow& r : rows)
        out << to_string(r.task.function) << ',' << r.task.delay << ',' << to_string(r.mode) << ','
            << format_double(r.error_mean) << ',' << format_double(r.error_std) << ',' << r.nonconverged << ','
            << r.seed << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string schedule_table(const ExperimentConfig& config) {
    const ClockedReservoir reservoir = make_reservoir(config);
    const ArrayGeometry& geom = reservoir.geometry();
    std::ostringstream out;
    out << "stage  off-groups    ";
    for (std::size_t i = 0; i < geom.size(); ++i) {
        const std::string label = std::to_string(i + 1);
        out << std::string(4 - label.size(), ' ') << label;
    }
    out << "\n                     ";
    for (std::size_t i = 0; i < geom.size(); ++i) {
        const std::string_view g = to_string(geom.groups[i]);
        out << std::string(4 - g.size(), ' ') << g;
    }
    out << '\n';
    for (std::size_t p = 1; p <= kStagesPerStep; ++p) {
        const std::string off = config.schedule.stage(p).to_string();
        std::string label = off.empty() ? "-" : off;
        label.resize(12, ' ');
        out << "p" << p << "     " << label << "  ";
        const AnisotropyVector ku = ku_vector_for_stage(config.schedule, geom, p, reservoir.material().ku0);
        for (double k : ku.ku) out << (k == 0.0 ? "   0" : "   K");
        out << '\n';
    }
    out << "K = Ku0 = " << format_double(reservoir.material().ku0) << " J/m^3; snapshot after p"
        << kSnapshotStage << '\n';
    return out.str();
}

}  // namespace nanores
