#include "nanores/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nanores {

void MaterialParams::validate() const {
    if (!(ms > 0.0)) throw std::invalid_argument("material: Ms must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("material: gamma must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("material: alpha must be positive");
    if (!(ku0 >= 0.0)) throw std::invalid_argument("material: Ku0 must be non-negative");
    if (!(volume > 0.0)) throw std::invalid_argument("material: volume must be positive");
}

void IntegratorParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("integrator: dt must be positive");
    if (!(torque_tol > 0.0)) throw std::invalid_argument("integrator: torque_tol must be positive");
    if (!(max_stage_time >= dt)) throw std::invalid_argument("integrator: max_stage_time must be >= dt");
    if (!(field_floor >= 0.0)) throw std::invalid_argument("integrator: field_floor must be non-negative");
}

SymTensor3 dipole_tensor(const Vec3& r) {
    const double r2 = dot(r, r);
    if (!(r2 > 0.0)) throw std::invalid_argument("dipole_tensor: zero separation");
    const double r1 = std::sqrt(r2);
    const double c = 1.0 / (4.0 * std::numbers::pi * r2 * r2 * r1);
    return {c * (3.0 * r.x * r.x - r2), c * (3.0 * r.y * r.y - r2), c * (3.0 * r.z * r.z - r2),
            c * 3.0 * r.x * r.y,        c * 3.0 * r.x * r.z,        c * 3.0 * r.y * r.z};
}

DipoleCouplingTable build_coupling_table(const ArrayGeometry& geom) {
    geom.validate();
    const std::size_t n = geom.size();
    DipoleCouplingTable table(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) table(j, i) = dipole_tensor(displacement(geom, j, i));
    return table;
}

namespace {

void check_sizes(const SpinState& state, const AnisotropyVector& ku, const DipoleCouplingTable& table) {
    if (state.size() != table.size() || ku.size() != table.size())
        throw std::invalid_argument("state, anisotropy and coupling table sizes differ");
}

}  // namespace

std::vector<Vec3> effective_field(const SpinState& state, const AnisotropyVector& ku,
                                  const DipoleCouplingTable& table, const MaterialParams& params) {
    check_sizes(state, ku, table);
    LlgSystem sys(table, params);
    sys.set_anisotropy(ku);
    std::vector<Vec3> h(state.size());
    sys.field(state.m, h);
    return h;
}

std::vector<Vec3> llg_rhs(const SpinState& state, std::span<const Vec3> fields,
                          const MaterialParams& params) {
    if (fields.size() != state.size()) throw std::invalid_argument("llg_rhs: field count mismatch");
    const double g = params.gamma_ll();
    std::vector<Vec3> out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Vec3 mxh = cross(state.m[i], fields[i]);
        out[i] = -g * mxh - params.alpha * g * cross(state.m[i], mxh);
    }
    return out;
}

double total_energy(const SpinState& state, const AnisotropyVector& ku,
                    const DipoleCouplingTable& table, const MaterialParams& params) {
    check_sizes(state, ku, table);
    const std::size_t n = state.size();
    const double v = params.volume;
    const Vec3 axis = normalized(params.easy_axis);
    double anis = 0.0;
    double zeeman = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = dot(state.m[i], axis);
        anis -= ku.ku[i] * v * c * c;
        zeeman -= kMu0 * params.ms * v * dot(state.m[i], params.bias_field);
    }
    double dip = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) dip += dot(state.m[i], table(j, i).apply(state.m[j]));
    return anis + zeeman - 0.5 * kMu0 * params.ms * params.ms * v * v * dip;
}

SpinState rk4_step(const SpinState& state, const AnisotropyVector& ku,
                   const DipoleCouplingTable& table, const MaterialParams& params, double dt) {
    check_sizes(state, ku, table);
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    LlgSystem sys(table, params);
    sys.set_anisotropy(ku);
    SpinState out = state;
    std::vector<Vec3> h(state.size());
    sys.field(out.m, h);
    sys.step(out.m, h, dt);
    return out;
}

RelaxResult relax(const SpinState& state, const AnisotropyVector& ku, const DipoleCouplingTable& table,
                  const MaterialParams& params, const IntegratorParams& ip) {
    check_sizes(state, ku, table);
    LlgSystem sys(table, params);
    sys.set_anisotropy(ku);
    return sys.relax(state, ip);
}

bool is_relaxed(std::span<const Vec3> m, std::span<const Vec3> h, double torque_tol, double field_floor) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double hn = norm(h[i]);
        if (hn < field_floor) continue;
        if (dot(m[i], h[i]) <= 0.0 || norm(cross(m[i], h[i])) >= torque_tol * hn) return false;
    }
    return true;
}

double max_torque(std::span<const Vec3> m, std::span<const Vec3> h, double field_floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double hn = norm(h[i]);
        if (hn < field_floor) continue;
        worst = std::max(worst, norm(cross(m[i], h[i])) / hn);
    }
    return worst;
}

LlgSystem::LlgSystem(const DipoleCouplingTable& table, const MaterialParams& params)
    : n_(table.size()),
      gamma_ll_(params.gamma_ll()),
      alpha_(params.alpha),
      anis_scale_(2.0 / (kMu0 * params.ms)),
      anis_coef_(n_, 0.0),
      bias_(params.bias_field),
      axis_(normalized(params.easy_axis)),
      k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_), h_(n_) {
    params.validate();
    const double moment = params.ms * params.volume;
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = j + 1; i < n_; ++i) {
            const SymTensor3& w = table(j, i);
            if (w == SymTensor3{}) continue;
            pairs_.push_back({j, i, w.scaled(moment)});
        }
}

void LlgSystem::set_anisotropy(const AnisotropyVector& ku) {
    if (ku.size() != n_) throw std::invalid_argument("anisotropy vector size mismatch");
    for (std::size_t i = 0; i < n_; ++i) anis_coef_[i] = anis_scale_ * ku.ku[i];
}

void LlgSystem::field(std::span<const Vec3> m, std::span<Vec3> h) const {
    for (std::size_t i = 0; i < n_; ++i) h[i] = bias_ + (anis_coef_[i] * dot(m[i], axis_)) * axis_;
    // w[j][i] = w[i][j], so each pair feeds both magnets.
    for (const Pair& p : pairs_) {
        h[p.i] += p.w.apply(m[p.j]);
        h[p.j] += p.w.apply(m[p.i]);
    }
}

void LlgSystem::rhs(std::span<const Vec3> m, std::span<const Vec3> h, std::span<Vec3> dmdt) const {
    const double damp = alpha_ * gamma_ll_;
    for (std::size_t i = 0; i < n_; ++i) {
        const Vec3 mxh = cross(m[i], h[i]);
        dmdt[i] = -gamma_ll_ * mxh - damp * cross(m[i], mxh);
    }
}

void LlgSystem::step(std::span<Vec3> m, std::span<const Vec3> h, double dt) {
    const double half = 0.5 * dt;
    rhs(m, h, k1_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = m[i] + half * k1_[i];
    field(tmp_, h_);
    rhs(tmp_, h_, k2_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = m[i] + half * k2_[i];
    field(tmp_, h_);
    rhs(tmp_, h_, k3_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = m[i] + dt * k3_[i];
    field(tmp_, h_);
    rhs(tmp_, h_, k4_);
    const double sixth = dt / 6.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const Vec3 next = m[i] + sixth * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        m[i] = normalized(next);
    }
}

RelaxResult LlgSystem::relax(SpinState state, const IntegratorParams& ip) {
    ip.validate();
    if (state.size() != n_) throw std::invalid_argument("relax: state size mismatch");
    const auto max_steps = static_cast<std::size_t>(std::ceil(ip.max_stage_time / ip.dt - 1e-9));
    std::vector<Vec3> h(n_);
    RelaxResult out;
    for (;;) {
        field(state.m, h);
        if (is_relaxed(state.m, h, ip.torque_tol, ip.field_floor)) {
            out.converged = true;
            break;
        }
        if (out.steps >= max_steps) break;
        step(state.m, h, ip.dt);
        ++out.steps;
    }
    out.elapsed = static_cast<double>(out.steps) * ip.dt;
    out.state = std::move(state);
    return out;
}

}  // namespace nanores
