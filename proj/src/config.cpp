#include "nanores/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nanores/format.hpp"

namespace nanores {

std::string_view to_string(BoolFunction fn) {
    switch (fn) {
        case BoolFunction::And: return "AND";
        case BoolFunction::Or: return "OR";
        case BoolFunction::Xor: return "XOR";
    }
    return "?";
}

BoolFunction parse_bool_function(std::string_view text) {
    if (text == "AND" || text == "and") return BoolFunction::And;
    if (text == "OR" || text == "or") return BoolFunction::Or;
    if (text == "XOR" || text == "xor") return BoolFunction::Xor;
    throw std::invalid_argument("unknown task function '" + std::string(text) + "'");
}

std::string TaskSpec::id() const {
    return std::string(to_string(function)) + ":" + std::to_string(delay);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument("not a boolean: '" + std::string(text) + "'");
}

}  // namespace

std::vector<TaskSpec> parse_tasks(std::string_view text) {
    std::vector<TaskSpec> out;
    std::string buf(text);
    for (char& c : buf)
        if (c == ';') c = ',';
    std::istringstream in(buf);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string_view entry = trim(item);
        if (entry.empty()) continue;
        const auto colon = entry.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("task '" + std::string(entry) + "' must look like FN:delay");
        const BoolFunction fn = parse_bool_function(trim(entry.substr(0, colon)));
        const std::string_view delays = trim(entry.substr(colon + 1));
        const auto dash = delays.find('-');
        std::size_t lo = 0, hi = 0;
        if (dash == std::string_view::npos) {
            lo = hi = parse_u64(delays);
        } else {
            lo = parse_u64(delays.substr(0, dash));
            hi = parse_u64(delays.substr(dash + 1));
        }
        if (hi < lo) throw std::invalid_argument("task delay range is reversed in '" + std::string(entry) + "'");
        for (std::size_t n = lo; n <= hi; ++n) out.push_back({fn, n});
    }
    return out;
}

ExperimentConfig::ExperimentConfig() {
    const double tilt = kDefaultTiltDeg * std::numbers::pi / 180.0;
    material.easy_axis = {std::sin(tilt), 0.0, std::cos(tilt)};
    integrator.max_stage_time = 600e-9;
    for (BoolFunction fn : {BoolFunction::And, BoolFunction::Or, BoolFunction::Xor})
        for (std::size_t n = 0; n <= 4; ++n) tasks.push_back({fn, n});
}

void ExperimentConfig::validate() const {
    if (geometry.rows == 0 || geometry.cols == 0) throw std::invalid_argument("config: geometry needs rows and cols >= 1");
    if (n_train == 0 || n_test == 0 || n_test_sets == 0)
        throw std::invalid_argument("config: n_train, n_test and n_test_sets must be positive");
    if (tasks.empty()) throw std::invalid_argument("config: no tasks");
    if (round_digits < 1) throw std::invalid_argument("config: round_digits must be >= 1");
    if (threads == 0) throw std::invalid_argument("config: threads must be >= 1");
    if (!(ridge >= 0.0)) throw std::invalid_argument("config: ridge must be non-negative");
    integrator.validate();
    schedule.validate();
}

namespace {

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto real = [&t](const char* key, auto member) {
            t[key] = [member](ExperimentConfig& c, std::string_view v) { member(c) = parse_double(v); };
        };
        auto count = [&t](const char* key, auto member) {
            t[key] = [member](ExperimentConfig& c, std::string_view v) {
                member(c) = static_cast<std::size_t>(parse_u64(v));
            };
        };
        count("geometry.rows", [](ExperimentConfig& c) -> std::size_t& { return c.geometry.rows; });
        count("geometry.cols", [](ExperimentConfig& c) -> std::size_t& { return c.geometry.cols; });
        real("geometry.radius", [](ExperimentConfig& c) -> double& { return c.geometry.radius; });
        real("geometry.thickness", [](ExperimentConfig& c) -> double& { return c.geometry.thickness; });
        real("geometry.gap", [](ExperimentConfig& c) -> double& { return c.geometry.gap; });

        real("material.ms", [](ExperimentConfig& c) -> double& { return c.material.ms; });
        real("material.gamma", [](ExperimentConfig& c) -> double& { return c.material.gamma; });
        real("material.alpha", [](ExperimentConfig& c) -> double& { return c.material.alpha; });
        real("material.ku0", [](ExperimentConfig& c) -> double& { return c.material.ku0; });
        real("material.bias_x", [](ExperimentConfig& c) -> double& { return c.material.bias_field.x; });
        real("material.bias_y", [](ExperimentConfig& c) -> double& { return c.material.bias_field.y; });
        real("material.bias_z", [](ExperimentConfig& c) -> double& { return c.material.bias_field.z; });
        real("material.easy_axis_x", [](ExperimentConfig& c) -> double& { return c.material.easy_axis.x; });
        real("material.easy_axis_y", [](ExperimentConfig& c) -> double& { return c.material.easy_axis.y; });
        real("material.easy_axis_z", [](ExperimentConfig& c) -> double& { return c.material.easy_axis.z; });
        // Convenience: easy axis tilted from +z toward +x by the given angle in degrees.
        t["material.easy_axis_tilt_deg"] = [](ExperimentConfig& c, std::string_view v) {
            const double rad = parse_double(v) * std::numbers::pi / 180.0;
            c.material.easy_axis = {std::sin(rad), 0.0, std::cos(rad)};
        };
        // Convenience: Ku0 = fraction * mu0 * Ms^2, evaluated with the Ms known at that line.
        t["material.ku0_fraction"] = [](ExperimentConfig& c, std::string_view v) {
            c.material.ku0 = MaterialParams::ku0_from_fraction(parse_double(v), c.material.ms);
        };

        real("integrator.dt", [](ExperimentConfig& c) -> double& { return c.integrator.dt; });
        real("integrator.torque_tol", [](ExperimentConfig& c) -> double& { return c.integrator.torque_tol; });
        real("integrator.max_stage_time", [](ExperimentConfig& c) -> double& { return c.integrator.max_stage_time; });
        real("integrator.field_floor", [](ExperimentConfig& c) -> double& { return c.integrator.field_floor; });

        for (std::size_t p = 1; p <= kStagesPerStep; ++p)
            t["schedule.stage" + std::to_string(p)] = [p](ExperimentConfig& c, std::string_view v) {
                c.schedule.off[p - 1] = GroupSet::parse(std::string(v));
            };

        t["run.seed"] = [](ExperimentConfig& c, std::string_view v) { c.seed = parse_u64(v); };
        count("run.n_train", [](ExperimentConfig& c) -> std::size_t& { return c.n_train; });
        count("run.n_test", [](ExperimentConfig& c) -> std::size_t& { return c.n_test; });
        count("run.n_test_sets", [](ExperimentConfig& c) -> std::size_t& { return c.n_test_sets; });
        count("run.warmup", [](ExperimentConfig& c) -> std::size_t& { return c.warmup; });
        count("run.threads", [](ExperimentConfig& c) -> std::size_t& { return c.threads; });
        t["run.tasks"] = [](ExperimentConfig& c, std::string_view v) { c.tasks = parse_tasks(v); };
        t["run.round_digits"] = [](ExperimentConfig& c, std::string_view v) {
            c.round_digits = static_cast<int>(parse_u64(v));
        };
        t["run.round_train"] = [](ExperimentConfig& c, std::string_view v) { c.round_train = parse_bool(v); };
        t["run.round_test"] = [](ExperimentConfig& c, std::string_view v) { c.round_test = parse_bool(v); };
        real("run.ridge", [](ExperimentConfig& c) -> double& { return c.ridge; });
        t["run.initial_state"] = [](ExperimentConfig& c, std::string_view v) {
            v = trim(v);
            if (v == "up") c.initial = InitialPolicy::AllUp;
            else if (v == "random") c.initial = InitialPolicy::Random;
            else throw std::invalid_argument("run.initial_state must be 'up' or 'random'");
        };
        return t;
    }();
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        try {
            it->second(config, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + " (" + std::string(key) + "): " + e.what());
        }
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
    std::ostringstream out;
    auto kv = [&out](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
    kv("geometry.rows", std::to_string(c.geometry.rows));
    kv("geometry.cols", std::to_string(c.geometry.cols));
    kv("geometry.radius", format_double(c.geometry.radius));
    kv("geometry.thickness", format_double(c.geometry.thickness));
    kv("geometry.gap", format_double(c.geometry.gap));
    kv("material.ms", format_double(c.material.ms));
    kv("material.gamma", format_double(c.material.gamma));
    kv("material.alpha", format_double(c.material.alpha));
    kv("material.ku0", format_double(c.material.ku0));
    kv("material.bias_x", format_double(c.material.bias_field.x));
    kv("material.bias_y", format_double(c.material.bias_field.y));
    kv("material.bias_z", format_double(c.material.bias_field.z));
    kv("material.easy_axis_x", format_double(c.material.easy_axis.x));
    kv("material.easy_axis_y", format_double(c.material.easy_axis.y));
    kv("material.easy_axis_z", format_double(c.material.easy_axis.z));
    kv("integrator.dt", format_double(c.integrator.dt));
    kv("integrator.torque_tol", format_double(c.integrator.torque_tol));
    kv("integrator.max_stage_time", format_double(c.integrator.max_stage_time));
    kv("integrator.field_floor", format_double(c.integrator.field_floor));
    for (std::size_t p = 1; p <= kStagesPerStep; ++p) {
        const std::string groups = c.schedule.off[p - 1].to_string();
        kv("schedule.stage" + std::to_string(p), groups.empty() ? "none" : groups);
    }
    kv("run.seed", std::to_string(c.seed));
    kv("run.n_train", std::to_string(c.n_train));
    kv("run.n_test", std::to_string(c.n_test));
    kv("run.n_test_sets", std::to_string(c.n_test_sets));
    kv("run.warmup", std::to_string(c.warmup));
    std::string tasks;
    for (const TaskSpec& t : c.tasks) tasks += (tasks.empty() ? "" : ", ") + t.id();
    kv("run.tasks", tasks);
    kv("run.round_digits", std::to_string(c.round_digits));
    kv("run.round_train", c.round_train ? "true" : "false");
    kv("run.round_test", c.round_test ? "true" : "false");
    kv("run.ridge", format_double(c.ridge));
    kv("run.initial_state", c.initial == InitialPolicy::AllUp ? "up" : "random");
    kv("run.threads", std::to_string(c.threads));
    return out.str();
}

}  // namespace nanores
