#include "nanores/readout.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "nanores/format.hpp"

namespace nanores {

void ReservoirTrace::validate() const {
    if (rows.size() != bits.size()) throw std::invalid_argument("trace: rows and bits differ in length");
    for (const FeatureVector& r : rows)
        if (r.size() != rows.front().size()) throw std::invalid_argument("trace: ragged feature rows");
}

std::string_view to_string(ErrorMode mode) {
    return mode == ErrorMode::Raw ? "raw" : "thresholded";
}

FeatureVector extract_features(const SpinState& snapshot) {
    FeatureVector f;
    f.reserve(snapshot.size() + 1);
    for (const Vec3& m : snapshot.m) f.push_back(0.5 * m.x + 0.5);
    f.push_back(1.0);
    return f;
}

double round_sig_figs(double x, int digits) {
    if (digits < 1) throw std::invalid_argument("round_sig_figs: digits must be >= 1");
    if (x == 0.0 || !std::isfinite(x)) return x;
    // Scientific formatting rounds on the exact decimal expansion, which
    // avoids the double-rounding of scale-multiply-round schemes.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, digits - 1);
    double out = 0.0;
    std::from_chars(buf, res.ptr, out);
    return out;
}

FeatureVector round_features(FeatureVector features, int digits) {
    for (std::size_t i = 0; i + 1 < features.size(); ++i) {
        const double mx = round_sig_figs(2.0 * features[i] - 1.0, digits);
        features[i] = 0.5 * mx + 0.5;
    }
    return features;
}

ReadoutWeights train_readout(std::span<const FeatureVector> rows, std::span<const double> targets,
                             double ridge, std::string target_id) {
    if (rows.empty()) throw std::invalid_argument("train_readout: no training rows");
    if (rows.size() != targets.size()) throw std::invalid_argument("train_readout: rows and targets differ in length");
    if (!(ridge >= 0.0)) throw std::invalid_argument("train_readout: ridge must be non-negative");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows.front().size());
    if (d == 0) throw std::invalid_argument("train_readout: empty feature rows");

    // Ridge problem as an ordinary least-squares problem on [X; sqrt(ridge) I].
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + d, d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + d);
    for (Eigen::Index k = 0; k < n; ++k) {
        const FeatureVector& row = rows[static_cast<std::size_t>(k)];
        if (static_cast<Eigen::Index>(row.size()) != d) throw std::invalid_argument("train_readout: ragged rows");
        for (Eigen::Index j = 0; j < d; ++j) a(k, j) = row[static_cast<std::size_t>(j)];
        b(k) = targets[static_cast<std::size_t>(k)];
    }
    a.bottomRows(d).diagonal().setConstant(std::sqrt(ridge));

    const Eigen::VectorXd w = a.colPivHouseholderQr().solve(b);
    ReadoutWeights out;
    out.w.assign(w.data(), w.data() + w.size());
    out.target_id = std::move(target_id);
    for (double v : out.w)
        if (!std::isfinite(v)) throw std::runtime_error("train_readout: non-finite weight");
    return out;
}

std::vector<double> evaluate(std::span<const FeatureVector> rows, const ReadoutWeights& weights) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const FeatureVector& row : rows) {
        if (row.size() != weights.w.size()) throw std::invalid_argument("evaluate: feature/weight dimension mismatch");
        double o = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) o += row[j] * weights.w[j];
        out.push_back(o);
    }
    return out;
}

double error_rate(std::span<const double> outputs, std::span<const double> targets, ErrorMode mode) {
    if (outputs.empty()) throw std::invalid_argument("error_rate: empty input");
    if (outputs.size() != targets.size()) throw std::invalid_argument("error_rate: length mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        const double o = mode == ErrorMode::Thresholded ? (outputs[k] >= 0.5 ? 1.0 : 0.0) : outputs[k];
        sum += std::abs(targets[k] - o);
    }
    return sum / static_cast<double>(outputs.size());
}

void write_weights(const std::filesystem::path& path, const ReadoutWeights& weights) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "# " << weights.target_id << '\n';
    for (double v : weights.w) out << format_double(v) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ReadoutWeights read_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    ReadoutWeights w;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("'" + path.string() + "': missing '# <task>' header");
    w.target_id = line.substr(2);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        w.w.push_back(parse_double(line));
    }
    return w;
}

}  // namespace nanores
