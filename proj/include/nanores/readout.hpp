#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nanores/dynamics.hpp"

namespace nanores {

/// mu_x of every magnet followed by a constant 1 (bias input of the readout).
using FeatureVector = std::vector<double>;

/// Feature rows harvested step by step, with the input bit that drove each step.
struct ReservoirTrace {
    std::vector<FeatureVector> rows;
    std::vector<int> bits;

    std::size_t size() const { return rows.size(); }
    /// Number of magnets (row width minus the bias entry).
    std::size_t magnet_count() const { return rows.empty() ? 0 : rows.front().size() - 1; }
    void validate() const;
};

struct ReadoutWeights {
    std::vector<double> w;
    std::string target_id;
};

enum class ErrorMode { Raw, Thresholded };

std::string_view to_string(ErrorMode mode);

inline constexpr double kDefaultRidge = 1e-8;

/// mu_i = (m_x,i + 1) / 2, then a trailing 1.
FeatureVector extract_features(const SpinState& snapshot);

/// Rounds to `digits` significant decimal digits (decimal semantics, so
/// 0.12345 -> 0.123 exactly as printed). Zero and non-finite values pass through.
double round_sig_figs(double x, int digits = 3);

/// Rounds the underlying m_x = 2 mu - 1 of every entry (not the trailing
/// bias) to `digits` significant figures and maps back to mu.
FeatureVector round_features(FeatureVector features, int digits);

/// Minimizes sum_k (f_k - x_k . w)^2 + ridge |w|^2. Rows and targets must be
/// non-empty and of equal length.
ReadoutWeights train_readout(std::span<const FeatureVector> rows, std::span<const double> targets,
                             double ridge = kDefaultRidge, std::string target_id = {});

/// o_k = x_k . w for every row.
std::vector<double> evaluate(std::span<const FeatureVector> rows, const ReadoutWeights& weights);

/// Mean |f_k - o_k|; in thresholded mode o_k is first mapped to (o_k >= 0.5).
double error_rate(std::span<const double> outputs, std::span<const double> targets, ErrorMode mode);

/// Plain text: one header line "# <task_id>" followed by one weight per line.
void write_weights(const std::filesystem::path& path, const ReadoutWeights& weights);
ReadoutWeights read_weights(const std::filesystem::path& path);

}  // namespace nanores
