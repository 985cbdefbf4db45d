#include "surfrank/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace surfrank {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.empty())
        throw std::invalid_argument("box bounds must be non-empty and of equal dimension");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(upper_[i] > lower_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
            throw std::invalid_argument("box side " + std::to_string(i) +
                                        " must have strictly positive finite length");
    }
}

Box Box::cube(std::size_t dim, double lo, double hi) {
    return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double slack = 1e-12 * side(i);
        if (!(x[i] >= lower_[i] - slack && x[i] <= upper_[i] + slack)) return false;
    }
    return true;
}

void Box::to_unit(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < dimension(); ++i)
        out[i] = 2.0 * (x[i] - lower_[i]) / side(i) - 1.0;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw std::invalid_argument("point dimension must be positive");
    if (coords_.size() % dim_ != 0)
        throw std::invalid_argument("coordinate count is not a multiple of the dimension");
}

void PointSet::push_back(std::span<const double> x) {
    if (dim_ == 0) dim_ = x.size();
    if (x.size() != dim_) throw std::invalid_argument("point has wrong dimension");
    coords_.insert(coords_.end(), x.begin(), x.end());
}

}  // namespace surfrank
