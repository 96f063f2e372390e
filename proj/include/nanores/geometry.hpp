#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nanores/vec3.hpp"

namespace nanores {

/// Clocking group. Every magnet belongs to exactly one group; the stage
/// schedule switches anisotropy group-wise.
enum class Group { I = 0, II = 1, III = 2 };

inline constexpr std::size_t kGroupCount = 3;

std::string_view to_string(Group g);
Group parse_group(std::string_view text);

/// Layout of a nanomagnet array: disk centers, disk dimensions and group labels.
///
/// Magnet indices are 0-based in code. Index 0 is "magnet 1" in the usual
/// 1-based numbering (and in CSV column names).
struct ArrayGeometry {
    std::vector<Vec3> positions;  // m
    double radius = 0.0;          // m
    double thickness = 0.0;       // m
    double gap = 0.0;             // m
    std::vector<Group> groups;
    std::size_t input_index = 0;

    std::size_t size() const { return positions.size(); }
    double volume() const;

    /// Throws std::invalid_argument if the fields are inconsistent.
    void validate() const;
};

/// Rectangular grid in the x-y plane, pitch 2*radius + gap along both axes.
/// Magnet k (0-based) sits at row k / cols, column k % cols; rows advance
/// along +y and columns along +x. Row r belongs to group [I, II, III][r % 3].
/// The input magnet is index 0.
ArrayGeometry build_grid_array(std::size_t rows, std::size_t cols, double radius,
                               double thickness, double gap);

/// r_ji = position(i) - position(j). Throws if i == j or either index is out of range.
Vec3 displacement(const ArrayGeometry& geom, std::size_t j, std::size_t i);

}  // namespace nanores
