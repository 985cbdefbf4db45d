#pragma once

#include <compare>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace surfrank {

/// Index of a response surface, 1-based: {1, ..., L}.
struct Label {
    int value = 1;

    constexpr Label() = default;
    constexpr explicit Label(int v) : value(v) {}

    /// 0-based position, for indexing probability columns.
    constexpr std::size_t index() const { return static_cast<std::size_t>(value - 1); }

    friend constexpr auto operator<=>(const Label&, const Label&) = default;
};

inline std::ostream& operator<<(std::ostream& os, Label l) { return os << l.value; }

/// Axis-aligned box in R^d with strictly positive side lengths.
class Box {
public:
    Box() = default;
    Box(std::vector<double> lower, std::vector<double> upper);

    static Box cube(std::size_t dim, double lo, double hi);

    std::size_t dimension() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    double side(std::size_t axis) const { return upper_[axis] - lower_[axis]; }

    /// Inclusive containment with a relative slack of 1e-12 per axis so that
    /// grid points computed in floating point at the faces still count.
    bool contains(std::span<const double> x) const;

    /// Affine map of the box onto [-1, 1]^d (points outside map outside).
    void to_unit(std::span<const double> x, std::span<double> out) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// M points in R^d stored row-major.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::size_t dim, std::vector<double> coords);
    PointSet(std::size_t dim, std::size_t count) : dim_(dim), coords_(dim * count, 0.0) {}

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return size() == 0; }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

    const std::vector<double>& coords() const { return coords_; }
    void push_back(std::span<const double> x);

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

}  // namespace surfrank
