#include "nanores/geometry.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace nanores {

std::string_view to_string(Group g) {
    switch (g) {
        case Group::I: return "I";
        case Group::II: return "II";
        case Group::III: return "III";
    }
    return "?";
}

Group parse_group(std::string_view text) {
    if (text == "I") return Group::I;
    if (text == "II") return Group::II;
    if (text == "III") return Group::III;
    throw std::invalid_argument("unknown group '" + std::string(text) + "'");
}

double ArrayGeometry::volume() const {
    return std::numbers::pi * radius * radius * thickness;
}

void ArrayGeometry::validate() const {
    if (positions.empty()) throw std::invalid_argument("geometry has no magnets");
    if (groups.size() != positions.size())
        throw std::invalid_argument("geometry: groups and positions differ in length");
    if (!(radius > 0.0) || !(thickness > 0.0))
        throw std::invalid_argument("geometry: radius and thickness must be positive");
    if (!(gap >= 0.0)) throw std::invalid_argument("geometry: gap must be non-negative");
    if (input_index >= positions.size())
        throw std::invalid_argument("geometry: input index out of range");
}

ArrayGeometry build_grid_array(std::size_t rows, std::size_t cols, double radius,
                               double thickness, double gap) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("grid needs at least one row and column");
    if (!(radius > 0.0)) throw std::invalid_argument("grid radius must be positive");
    if (!(thickness > 0.0)) throw std::invalid_argument("grid thickness must be positive");
    if (!(gap >= 0.0)) throw std::invalid_argument("grid gap must be non-negative");

    ArrayGeometry g;
    g.radius = radius;
    g.thickness = thickness;
    g.gap = gap;
    g.input_index = 0;

    const double pitch = 2.0 * radius + gap;
    const std::size_t n = rows * cols;
    g.positions.reserve(n);
    g.groups.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t row = k / cols;
        const std::size_t col = k % cols;
        g.positions.push_back({static_cast<double>(col) * pitch, static_cast<double>(row) * pitch, 0.0});
        g.groups.push_back(static_cast<Group>(row % kGroupCount));
    }
    return g;
}

Vec3 displacement(const ArrayGeometry& geom, std::size_t j, std::size_t i) {
    if (i >= geom.size() || j >= geom.size())
        throw std::out_of_range("displacement: magnet index out of range");
    if (i == j) throw std::invalid_argument("displacement: self-displacement is undefined");
    return geom.positions[i] - geom.positions[j];
}

}  // namespace nanores
