#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nanores/clocking.hpp"
#include "nanores/dynamics.hpp"

namespace nanores {

enum class BoolFunction { And, Or, Xor };

std::string_view to_string(BoolFunction fn);
BoolFunction parse_bool_function(std::string_view text);

/// f(u_k, u_{k-delay}).
struct TaskSpec {
    BoolFunction function = BoolFunction::Xor;
    std::size_t delay = 0;

    std::string id() const;  // e.g. "XOR:3"
    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Parses "XOR:3", or a list such as "AND:0-4, XOR:2" (ranges expand inclusively).
std::vector<TaskSpec> parse_tasks(std::string_view text);

enum class InitialPolicy { AllUp, Random };

struct GeometryConfig {
    std::size_t rows = 10;
    std::size_t cols = 2;
    double radius = 20e-9;
    double thickness = 1e-9;
    double gap = 20e-9;
};

/// Default easy-axis tilt from +z toward +x. With a perfectly perpendicular
/// axis and in-plane neighbours, m_x = 0 is invariant under the dynamics and
/// the x-component readout sees nothing.
inline constexpr double kDefaultTiltDeg = 5.0;

struct ExperimentConfig {
    GeometryConfig geometry;
    MaterialParams material;  // volume is filled from the geometry
    IntegratorParams integrator;
    StageSchedule schedule = default_schedule();

    std::size_t n_train = 100;
    std::size_t n_test = 1000;
    std::size_t n_test_sets = 4;
    std::size_t warmup = 10;
    std::vector<TaskSpec> tasks;
    std::uint64_t seed = 1;
    int round_digits = 3;
    bool round_train = false;
    bool round_test = true;
    double ridge = 1e-8;
    InitialPolicy initial = InitialPolicy::AllUp;
    std::size_t threads = 1;

    ExperimentConfig();
    void validate() const;
};

/// Parses "section.key = value" lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full effective configuration in the same key = value format.
std::string to_text(const ExperimentConfig& config);

}  // namespace nanores
