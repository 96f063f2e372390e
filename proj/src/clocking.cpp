#include "nanores/clocking.hpp"

#include <sstream>
#include <stdexcept>

namespace nanores {

std::string GroupSet::to_string() const {
    std::string out;
    for (Group g : {Group::I, Group::II, Group::III}) {
        if (!contains(g)) continue;
        if (!out.empty()) out += ' ';
        out += nanores::to_string(g);
    }
    return out;
}

GroupSet GroupSet::parse(const std::string& text) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',') c = ' ';
    std::istringstream in(cleaned);
    GroupSet set;
    std::string token;
    while (in >> token) {
        if (token == "-" || token == "none") continue;
        set.insert(parse_group(token));
    }
    return set;
}

const GroupSet& StageSchedule::stage(std::size_t p) const {
    if (p < 1 || p > kStagesPerStep) throw std::out_of_range("stage index must be in 1..7");
    return off[p - 1];
}

void StageSchedule::validate() const {
    if (!off[0].empty()) throw std::invalid_argument("schedule: stage 1 must keep every group at Ku0");
}

StageSchedule default_schedule() {
    using enum Group;
    return {{GroupSet{}, GroupSet{II, III}, GroupSet{III}, GroupSet{I, III}, GroupSet{I},
             GroupSet{I, II}, GroupSet{II}}};
}

SpinState inject_input(SpinState state, const ArrayGeometry& geom, int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("input bit must be 0 or 1");
    if (geom.input_index >= state.size()) throw std::invalid_argument("input index outside state");
    state.m[geom.input_index] = {0.0, 0.0, bit == 0 ? 1.0 : -1.0};
    return state;
}

AnisotropyVector ku_vector_for_stage(const StageSchedule& schedule, const ArrayGeometry& geom,
                                     std::size_t p, double ku0) {
    const GroupSet& off = schedule.stage(p);
    AnisotropyVector ku;
    ku.ku.reserve(geom.size());
    for (Group g : geom.groups) ku.ku.push_back(off.contains(g) ? 0.0 : ku0);
    return ku;
}

std::size_t StepResult::nonconverged_count() const {
    std::size_t n = 0;
    for (bool c : converged) n += c ? 0 : 1;
    return n;
}

ClockedReservoir::ClockedReservoir(ArrayGeometry geom, MaterialParams material,
                                   IntegratorParams integrator, StageSchedule schedule)
    : geom_(std::move(geom)),
      material_(material),
      integrator_(integrator),
      schedule_(schedule) {
    geom_.validate();
    material_.validate();
    integrator_.validate();
    schedule_.validate();
    table_ = build_coupling_table(geom_);
    for (std::size_t p = 1; p <= kStagesPerStep; ++p)
        stage_ku_[p - 1] = ku_vector_for_stage(schedule_, geom_, p, material_.ku0);
}

StepResult ClockedReservoir::run_step(const SpinState& state, int bit) const {
    if (state.size() != geom_.size()) throw std::invalid_argument("run_step: state size mismatch");
    LlgSystem sys(table_, material_);
    StepResult out;
    SpinState current = inject_input(state, geom_, bit);
    for (std::size_t p = 1; p <= kStagesPerStep; ++p) {
        sys.set_anisotropy(stage_ku_[p - 1]);
        RelaxResult r = sys.relax(std::move(current), integrator_);
        out.converged[p - 1] = r.converged;
        out.elapsed[p - 1] = r.elapsed;
        current = std::move(r.state);
        if (p == kSnapshotStage) out.snapshot = current;
    }
    out.final_state = std::move(current);
    return out;
}

std::vector<StepResult> ClockedReservoir::run_sequence(const SpinState& initial,
                                                       const std::vector<int>& bits) const {
    if (bits.empty()) throw std::invalid_argument("run_sequence: empty bit sequence");
    std::vector<StepResult> out;
    out.reserve(bits.size());
    SpinState state = initial;
    for (int bit : bits) {
        out.push_back(run_step(state, bit));
        state = out.back().final_state;
    }
    return out;
}

}  // namespace nanores
