#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "nanores/dynamics.hpp"
#include "nanores/geometry.hpp"

namespace nanores {

/// Small set of clocking groups.
class GroupSet {
public:
    constexpr GroupSet() = default;
    constexpr GroupSet(std::initializer_list<Group> groups) {
        for (Group g : groups) insert(g);
    }

    constexpr void insert(Group g) { bits_ |= bit(g); }
    constexpr bool contains(Group g) const { return (bits_ & bit(g)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t bits() const { return bits_; }

    /// Space-separated group names, e.g. "I III"; empty set gives "".
    std::string to_string() const;
    /// Inverse of to_string; also accepts commas and "-" / "none" for the empty set.
    static GroupSet parse(const std::string& text);

    friend constexpr bool operator==(GroupSet, GroupSet) = default;

private:
    static constexpr std::uint8_t bit(Group g) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(g)); }
    std::uint8_t bits_ = 0;
};

inline constexpr std::size_t kStagesPerStep = 7;
inline constexpr std::size_t kSnapshotStage = 3;  // 1-based

/// For each of the seven stages (index 0 = stage 1), the groups whose
/// anisotropy is switched off. All other groups sit at Ku0.
struct StageSchedule {
    std::array<GroupSet, kStagesPerStep> off;

    const GroupSet& stage(std::size_t p) const;  // 1-based, throws outside 1..7
    void validate() const;
};

StageSchedule default_schedule();

/// Sets the input magnet to +z (bit 0) or -z (bit 1).
SpinState inject_input(SpinState state, const ArrayGeometry& geom, int bit);

AnisotropyVector ku_vector_for_stage(const StageSchedule& schedule, const ArrayGeometry& geom,
                                     std::size_t p, double ku0);

struct StepResult {
    SpinState final_state;
    SpinState snapshot;  // end of stage 3
    std::array<bool, kStagesPerStep> converged{};
    std::array<double, kStagesPerStep> elapsed{};

    std::size_t nonconverged_count() const;
};

/// The physical reservoir: array, couplings, clock schedule and integrator
/// settings. Immutable once built; run_step / run_sequence are pure.
class ClockedReservoir {
public:
    ClockedReservoir(ArrayGeometry geom, MaterialParams material, IntegratorParams integrator,
                     StageSchedule schedule);

    const ArrayGeometry& geometry() const { return geom_; }
    const MaterialParams& material() const { return material_; }
    const IntegratorParams& integrator() const { return integrator_; }
    const StageSchedule& schedule() const { return schedule_; }
    const DipoleCouplingTable& couplings() const { return table_; }

    StepResult run_step(const SpinState& state, int bit) const;
    std::vector<StepResult> run_sequence(const SpinState& initial, const std::vector<int>& bits) const;

private:
    ArrayGeometry geom_;
    MaterialParams material_;
    IntegratorParams integrator_;
    StageSchedule schedule_;
    DipoleCouplingTable table_;
    std::array<AnisotropyVector, kStagesPerStep> stage_ku_;
};

}  // namespace nanores
