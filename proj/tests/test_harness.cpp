#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nanores/config.hpp"
#include "nanores/harness.hpp"

using namespace nanores;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("nanores_harness_" + name); }

// Hand-built trace: features are the last four bits and b_k xor b_{k-1}.
SequenceRun synthetic_run(const std::vector<int>& bits) {
    SequenceRun run;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        auto past = [&](std::size_t d) { return k >= d ? static_cast<double>(bits[k - d]) : 0.0; };
        run.trace.rows.push_back({past(0), past(1), past(2), past(3), std::abs(past(0) - past(1)), 1.0});
        run.trace.bits.push_back(bits[k]);
    }
    return run;
}

}  // namespace

TEST_CASE("seed derivation gives distinct streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(42, s));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("input bits are seeded, balanced and reproducible") {
    const auto a = generate_bits(10000, 5);
    const auto b = generate_bits(10000, 5);
    CHECK(a == b);
    CHECK(generate_bits(64, 6) != generate_bits(64, 5));
    double mean = 0;
    for (int v : a) {
        CHECK((v == 0 || v == 1));
        mean += v;
    }
    mean /= static_cast<double>(a.size());
    CHECK(std::abs(mean - 0.5) < 0.02);
    CHECK_THROWS_AS(generate_bits(0, 1), std::invalid_argument);
}

TEST_CASE("boolean targets") {
    const int table[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const int and_out[4] = {0, 0, 0, 1}, or_out[4] = {0, 1, 1, 1}, xor_out[4] = {0, 1, 1, 0};
    for (int r = 0; r < 4; ++r) {
        CHECK(target(BoolFunction::And, table[r][0], table[r][1]) == and_out[r]);
        CHECK(target(BoolFunction::Or, table[r][0], table[r][1]) == or_out[r]);
        CHECK(target(BoolFunction::Xor, table[r][0], table[r][1]) == xor_out[r]);
    }
    CHECK_THROWS_AS(target(BoolFunction::And, 2, 0), std::invalid_argument);
}

TEST_CASE("targets are defined only past the delay and the warmup") {
    const auto bits = generate_bits(100, 3);
    auto defined = [](const std::vector<std::optional<int>>& t) {
        return std::count_if(t.begin(), t.end(), [](const auto& v) { return v.has_value(); });
    };
    CHECK(defined(build_targets(bits, {BoolFunction::Xor, 0}, 10)) == 90);
    CHECK(defined(build_targets(bits, {BoolFunction::Xor, 3}, 10)) == 90);
    CHECK(defined(build_targets(bits, {BoolFunction::Xor, 3}, 0)) == 97);
    CHECK(defined(build_targets(bits, {BoolFunction::And, 20}, 10)) == 80);

    const auto t = build_targets(bits, {BoolFunction::Xor, 2}, 4);
    for (std::size_t k = 0; k < bits.size(); ++k) {
        CHECK(t[k].has_value() == (k >= 4));
        if (t[k]) CHECK(*t[k] == (bits[k] ^ bits[k - 2]));
    }
}

TEST_CASE("task lists") {
    const auto tasks = parse_tasks("AND:0-4, XOR:2");
    REQUIRE(tasks.size() == 6);
    CHECK(tasks[0] == TaskSpec{BoolFunction::And, 0});
    CHECK(tasks[4] == TaskSpec{BoolFunction::And, 4});
    CHECK(tasks[5] == TaskSpec{BoolFunction::Xor, 2});
    CHECK(tasks[5].id() == "XOR:2");
    CHECK(parse_tasks("or:1").front() == TaskSpec{BoolFunction::Or, 1});
    CHECK_THROWS_AS(parse_tasks("NAND:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tasks("AND"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tasks("AND:3-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tasks("AND:x"), std::invalid_argument);
}

TEST_CASE("config defaults match the paper array") {
    const ExperimentConfig c;
    CHECK(c.geometry.rows == 10);
    CHECK(c.geometry.cols == 2);
    CHECK(c.geometry.radius == 20e-9);
    CHECK(c.geometry.thickness == 1e-9);
    CHECK(c.geometry.gap == 20e-9);
    CHECK(c.material.ms == 1.3e6);
    CHECK(c.material.alpha == 0.5);
    CHECK(c.material.ku0 == doctest::Approx(2.1237e5).epsilon(1e-4));
    CHECK(c.n_train == 100);
    CHECK(c.n_test == 1000);
    CHECK(c.n_test_sets == 4);
    CHECK(c.warmup == 10);
    CHECK(c.round_digits == 3);
    CHECK_FALSE(c.round_train);
    CHECK(c.round_test);
    CHECK(c.tasks.size() == 15);
    CHECK(c.schedule.off == default_schedule().off);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config(R"(
# comment line
geometry.rows = 4   # trailing comment
material.ms = 1e6
material.ku0_fraction = 0.2
integrator.dt = 5e-12
schedule.stage5 = II, III
run.tasks = XOR:1-2
run.seed = 99
run.round_train = true
run.initial_state = random
)");
    CHECK(c.geometry.rows == 4);
    CHECK(c.material.ms == 1e6);
    CHECK(c.material.ku0 == doctest::Approx(0.2 * kMu0 * 1e12));
    CHECK(c.integrator.dt == 5e-12);
    CHECK(c.schedule.stage(5) == GroupSet{Group::II, Group::III});
    CHECK(c.tasks.size() == 2);
    CHECK(c.seed == 99);
    CHECK(c.round_train);
    CHECK(c.initial == InitialPolicy::Random);

    CHECK_THROWS_AS(parse_config("geometry.bogus = 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("geometry.rows 4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("geometry.rows = -4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("material.alpha = fast"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("run.threads = 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("schedule.stage1 = I"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("run.initial_state = sideways"), std::invalid_argument);
    CHECK_THROWS_AS(load_config(scratch("missing.cfg")), std::runtime_error);
}

TEST_CASE("tilt convenience key sets the easy axis in the xz plane") {
    const ExperimentConfig c = parse_config("material.easy_axis_tilt_deg = 30");
    CHECK(c.material.easy_axis.x == doctest::Approx(0.5));
    CHECK(c.material.easy_axis.y == 0.0);
    CHECK(c.material.easy_axis.z == doctest::Approx(std::sqrt(3.0) / 2));
}

TEST_CASE("effective config text round-trips") {
    ExperimentConfig c;
    c.seed = 7;
    c.material.easy_axis = {0.1, 0.0, 0.99};
    c.schedule.off[6] = GroupSet{Group::I, Group::III};
    c.tasks = parse_tasks("AND:1, XOR:0-2");
    c.initial = InitialPolicy::Random;
    const std::string text = to_text(c);
    const ExperimentConfig back = parse_config(text);
    CHECK(to_text(back) == text);
    CHECK(back.tasks == c.tasks);
    CHECK(back.schedule.off == c.schedule.off);
}

TEST_CASE("initial states") {
    ExperimentConfig c;
    const SpinState up = initial_state(c, 20, 0);
    for (const Vec3& m : up.m) CHECK(m == Vec3{0, 0, 1});

    c.initial = InitialPolicy::Random;
    const SpinState a = initial_state(c, 20, 0);
    CHECK(a == initial_state(c, 20, 0));
    CHECK_FALSE(a == initial_state(c, 20, 1));
    for (const Vec3& m : a.m) CHECK(std::abs(norm(m) - 1) < 1e-12);
}

TEST_CASE("trace CSV round-trip and layout") {
    const SequenceRun run = synthetic_run({1, 0, 1, 1});
    ReservoirTrace t = run.trace;
    t.rows[2][1] = 0.123456789012345678;
    const fs::path p = scratch("trace.csv");
    emit_trace_csv(t, p);
    const std::string text = slurp(p);
    CHECK(text.rfind("k,bit,mu_x1,mu_x2,mu_x3,mu_x4,mu_x5\n1,1,", 0) == 0);
    const ReservoirTrace back = read_trace_csv(p);
    CHECK(back.bits == t.bits);
    CHECK(back.rows == t.rows);
    fs::remove(p);
}

TEST_CASE("results CSV layout") {
    const fs::path p = scratch("results.csv");
    emit_results_csv({}, p);
    CHECK(slurp(p) == "task,n,mode,error_mean,error_std,nonconverged,seed\n");
    const std::vector<ResultRow> rows{{{BoolFunction::Xor, 3}, ErrorMode::Thresholded, 0.25, 0.01, 2, 9}};
    emit_results_csv(rows, p);
    CHECK(slurp(p) == "task,n,mode,error_mean,error_std,nonconverged,seed\nXOR,3,thresholded,0.25,0.01,2,9\n");
    fs::remove(p);
}

TEST_CASE("scoring hand-built traces") {
    ExperimentConfig c;
    c.tasks = parse_tasks("AND:0-3, OR:0-3, XOR:0-1, XOR:3");
    c.warmup = 5;
    c.n_test_sets = 2;
    const SequenceRun train = synthetic_run(generate_bits(105, 1));
    std::vector<SequenceRun> tests{synthetic_run(generate_bits(205, 2)), synthetic_run(generate_bits(205, 3))};
    const ExperimentResult r = score_experiment(c, train, tests);
    REQUIRE(r.rows.size() == 2 * c.tasks.size());
    REQUIRE(r.weights.size() == c.tasks.size());
    for (const ResultRow& row : r.rows) {
        CHECK(row.seed == c.seed);
        const bool xor3 = row.task == TaskSpec{BoolFunction::Xor, 3};
        if (row.mode == ErrorMode::Thresholded && !xor3) CHECK(row.error_mean == 0.0);
        if (row.mode == ErrorMode::Thresholded && xor3) CHECK(row.error_mean > 0.3);
    }
    // raw and thresholded rows alternate per task
    CHECK(r.rows[0].mode == ErrorMode::Raw);
    CHECK(r.rows[1].mode == ErrorMode::Thresholded);
    CHECK(r.weights[0].target_id == "AND:0");

    c.n_test_sets = 1;
    const ExperimentResult single = score_experiment(c, train, {tests[0]});
    for (const ResultRow& row : single.rows) CHECK(row.error_std == 0.0);

    c.tasks = parse_tasks("AND:500");
    CHECK_THROWS_AS(score_experiment(c, train, tests), std::runtime_error);
}

TEST_CASE("shuffled targets carry no information") {
    const auto train_bits = generate_bits(2000, 11);
    const auto test_bits = generate_bits(4000, 12);
    const SequenceRun train = synthetic_run(train_bits);
    const SequenceRun test = synthetic_run(test_bits);
    const TaskSpec task{BoolFunction::Xor, 1};

    auto collect = [&](const SequenceRun& run, const std::vector<int>& bits) {
        std::pair<std::vector<FeatureVector>, std::vector<double>> out;
        const auto t = build_targets(bits, task, 10);
        for (std::size_t k = 0; k < bits.size(); ++k)
            if (t[k]) {
                out.first.push_back(run.trace.rows[k]);
                out.second.push_back(*t[k]);
            }
        return out;
    };
    auto [xtr, ftr] = collect(train, train_bits);
    const auto [xte, fte] = collect(test, test_bits);

    const ReadoutWeights honest = train_readout(xtr, ftr);
    CHECK(error_rate(evaluate(xte, honest), fte, ErrorMode::Thresholded) == 0.0);

    std::mt19937_64 rng(13);
    std::shuffle(ftr.begin(), ftr.end(), rng);
    const ReadoutWeights shuffled = train_readout(xtr, ftr);
    CHECK(std::abs(error_rate(evaluate(xte, shuffled), fte, ErrorMode::Thresholded) - 0.5) <= 0.05);
}
