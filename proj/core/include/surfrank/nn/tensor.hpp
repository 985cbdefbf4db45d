#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace surfrank::nn {

/// Dense row-major array of doubles with up to four axes. Flat batches are
/// (batch, features); image batches are (batch, height, width, channels).
/// The last axis is always the feature/channel axis, so a tensor can be
/// viewed as rows() x channels() regardless of rank.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> values);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::size_t channels() const { return shape_.empty() ? 0 : shape_.back(); }
    std::size_t rows() const { return channels() == 0 ? 0 : size() / channels(); }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> row(std::size_t r) { return {values_.data() + r * channels(), channels()}; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * channels(), channels()};
    }

    void fill(double v);
    bool all_finite() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

}  // namespace surfrank::nn
