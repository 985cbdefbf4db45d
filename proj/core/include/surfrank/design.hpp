#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "surfrank/rng.hpp"
#include "surfrank/types.hpp"

namespace surfrank {

enum class DesignKind { uniform_grid, latin_hypercube, from_file };

std::string_view to_string(DesignKind kind);
/// Accepts "unif"/"uniform-grid", "lhs"/"latin-hypercube", "file"/"from-file".
DesignKind parse_design_kind(std::string_view name);

/// Regular lattice with `per_axis` points on every axis, box corners
/// included. The last coordinate varies fastest. A single point per axis
/// sits at the box center.
PointSet uniform_grid(const Box& box, std::size_t per_axis);

/// Number of points per axis for a uniform grid of m points in `dim`
/// dimensions. Throws std::invalid_argument unless m is a perfect
/// dim-th power.
std::size_t grid_side(std::size_t m, std::size_t dim);

/// Latin hypercube: every axis is cut into m equal bins and each bin holds
/// exactly one point; bin-to-point assignment is a seeded permutation per axis.
PointSet latin_hypercube(const Box& box, std::size_t m, Rng& rng);

/// Plain-text design-point file: one point per line, `dim` whitespace
/// separated decimals, lines starting with '#' (or blank) ignored.
PointSet read_point_file(const std::filesystem::path& path, std::size_t dim);
void write_point_file(const std::filesystem::path& path, const PointSet& points);

/// Dispatch over the three design kinds. For from_file the point count is
/// whatever the file holds; `m` is ignored.
PointSet generate_design(DesignKind kind, std::size_t m, const Box& box, std::uint64_t seed,
                         const std::filesystem::path& file = {});

}  // namespace surfrank
