#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "nanores/geometry.hpp"
#include "nanores/vec3.hpp"

namespace nanores {

inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;  // T*m/A

/// Unit magnetization direction m_i = M_i / Ms of every magnet.
struct SpinState {
    std::vector<Vec3> m;

    std::size_t size() const { return m.size(); }
    static SpinState uniform(std::size_t n, const Vec3& dir) { return {std::vector<Vec3>(n, normalized(dir))}; }
    friend bool operator==(const SpinState&, const SpinState&) = default;
};

struct MaterialParams {
    double ms = 1.3e6;         // saturation magnetization, A/m
    double gamma = 2.211e5;    // LLG-form gyromagnetic ratio, m/(A*s)
    double alpha = 0.5;        // Gilbert damping
    double ku0 = 0.1 * kMu0 * 1.3e6 * 1.3e6;  // anisotropy energy density at zero bias, J/m^3
    double volume = 0.0;       // magnet volume, m^3
    Vec3 bias_field{};         // uniform applied field, A/m
    Vec3 easy_axis{0.0, 0.0, 1.0};  // uniaxial anisotropy axis (unit)

    /// Landau-Lifshitz form gamma / (1 + alpha^2).
    double gamma_ll() const { return gamma / (1.0 + alpha * alpha); }
    /// Ku0 = fraction * mu0 * Ms^2.
    static double ku0_from_fraction(double fraction, double ms) { return fraction * kMu0 * ms * ms; }

    void validate() const;
};

/// Per-magnet uniaxial anisotropy (J/m^3). Entries are either 0 or Ku0.
struct AnisotropyVector {
    std::vector<double> ku;

    static AnisotropyVector uniform(std::size_t n, double value) { return {std::vector<double>(n, value)}; }
    std::size_t size() const { return ku.size(); }
};

/// Point-dipole kernel (1/m^3): (3 r r^T - |r|^2 I) / (4 pi |r|^5). Throws for r = 0.
SymTensor3 dipole_tensor(const Vec3& r);

/// Pairwise dipole kernels w[j][i] for an array. Diagonal blocks are zero.
class DipoleCouplingTable {
public:
    DipoleCouplingTable() = default;
    explicit DipoleCouplingTable(std::size_t n) : n_(n), w_(n * n) {}

    std::size_t size() const { return n_; }
    const SymTensor3& operator()(std::size_t j, std::size_t i) const { return w_[j * n_ + i]; }
    SymTensor3& operator()(std::size_t j, std::size_t i) { return w_[j * n_ + i]; }

private:
    std::size_t n_ = 0;
    std::vector<SymTensor3> w_;
};

DipoleCouplingTable build_coupling_table(const ArrayGeometry& geom);

struct IntegratorParams {
    double dt = 20e-12;              // s
    double torque_tol = 1e-4;        // max |m x h_hat|
    double max_stage_time = 200e-9;  // s
    double field_floor = 1e-3;      // A/m; magnets in weaker fields count as relaxed

    void validate() const;
};

/// Effective field (A/m): applied bias, uniaxial anisotropy along the easy axis, plus dipole fields of
/// all other magnets, each carrying moment Ms * V.
std::vector<Vec3> effective_field(const SpinState& state, const AnisotropyVector& ku,
                                  const DipoleCouplingTable& table, const MaterialParams& params);

/// dm/dt for unit spins: -gamma_LL m x H - alpha gamma_LL m x (m x H).
std::vector<Vec3> llg_rhs(const SpinState& state, std::span<const Vec3> fields,
                          const MaterialParams& params);

/// E = -sum ku V (m.n)^2 - mu0 Ms V sum m.H_bias - (mu0 Ms^2 V^2 / 2) sum_{i != j} m_i . w[j][i] m_j  (J).
double total_energy(const SpinState& state, const AnisotropyVector& ku,
                    const DipoleCouplingTable& table, const MaterialParams& params);

/// One classical RK4 step with all four stages re-evaluating the field,
/// followed by renormalization of every spin.
SpinState rk4_step(const SpinState& state, const AnisotropyVector& ku,
                   const DipoleCouplingTable& table, const MaterialParams& params, double dt);

struct RelaxResult {
    SpinState state;
    bool converged = false;
    double elapsed = 0.0;  // simulated seconds
    std::size_t steps = 0;
};

/// Integrates until every magnet is parallel (not antiparallel) to its
/// effective field within torque_tol, or max_stage_time has passed.
RelaxResult relax(const SpinState& state, const AnisotropyVector& ku, const DipoleCouplingTable& table,
                  const MaterialParams& params, const IntegratorParams& ip);

/// True when every magnet with |h| >= field_floor has m.h > 0 and
/// |m x h| / |h| < torque_tol.
bool is_relaxed(std::span<const Vec3> m, std::span<const Vec3> h, double torque_tol, double field_floor);

/// max_i |m_i x h_i| / |h_i|, skipping magnets whose field is below `field_floor`.
double max_torque(std::span<const Vec3> m, std::span<const Vec3> h, double field_floor);

/// Reusable LLG integrator for a fixed coupling table and anisotropy vector.
/// Holds scratch buffers so repeated stepping does not allocate; not thread-safe,
/// one instance per trajectory.
class LlgSystem {
public:
    LlgSystem(const DipoleCouplingTable& table, const MaterialParams& params);

    std::size_t size() const { return n_; }
    void set_anisotropy(const AnisotropyVector& ku);

    void field(std::span<const Vec3> m, std::span<Vec3> h) const;
    void rhs(std::span<const Vec3> m, std::span<const Vec3> h, std::span<Vec3> dmdt) const;

    /// Advances `m` in place by dt. `h` must hold the field at `m` on entry.
    void step(std::span<Vec3> m, std::span<const Vec3> h, double dt);

    RelaxResult relax(SpinState state, const IntegratorParams& ip);

private:
    struct Pair {
        std::size_t j, i;
        SymTensor3 w;  // scaled by Ms * V
    };

    std::size_t n_;
    double gamma_ll_;
    double alpha_;
    double anis_scale_;              // 2 / (mu0 Ms)
    std::vector<double> anis_coef_;  // 2 ku_i / (mu0 Ms)
    Vec3 bias_;
    Vec3 axis_;
    std::vector<Pair> pairs_;
    std::vector<Vec3> k1_, k2_, k3_, k4_, tmp_, h_;
};

}  // namespace nanores
