#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "zetalat/errors.hpp"

namespace zetalat {

/// Largest spatial dimension supported by the fixed-capacity vector types.
inline constexpr std::size_t kMaxDim = 6;

/// Real vector of runtime length 1..kMaxDim stored inline, so lattice loops
/// never touch the heap.
class RealVec {
public:
    RealVec() = default;

    explicit RealVec(std::size_t dim, double fill = 0.0) : dim_(dim) {
        check_dim(dim);
        std::fill_n(data_.begin(), dim, fill);
    }

    RealVec(std::initializer_list<double> values) : RealVec(std::span<const double>(values.begin(), values.size())) {}

    explicit RealVec(std::span<const double> values) : dim_(values.size()) {
        check_dim(dim_);
        std::copy(values.begin(), values.end(), data_.begin());
    }

    std::size_t size() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    double* begin() noexcept { return data_.data(); }
    double* end() noexcept { return data_.data() + dim_; }
    const double* begin() const noexcept { return data_.data(); }
    const double* end() const noexcept { return data_.data() + dim_; }

    std::span<const double> view() const noexcept { return {data_.data(), dim_}; }

    double norm2() const noexcept {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += data_[i] * data_[i];
        return s;
    }
    double norm() const noexcept { return std::sqrt(norm2()); }
    double norm_inf() const noexcept {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s = std::max(s, std::abs(data_[i]));
        return s;
    }

    bool is_zero() const noexcept {
        return std::all_of(begin(), end(), [](double v) { return v == 0.0; });
    }
    bool all_finite() const noexcept {
        return std::all_of(begin(), end(), [](double v) { return std::isfinite(v); });
    }

    RealVec& operator+=(const RealVec& o) {
        for (std::size_t i = 0; i < dim_; ++i) data_[i] += o.data_[i];
        return *this;
    }
    RealVec& operator-=(const RealVec& o) {
        for (std::size_t i = 0; i < dim_; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    RealVec& operator*=(double s) {
        for (std::size_t i = 0; i < dim_; ++i) data_[i] *= s;
        return *this;
    }
    friend RealVec operator+(RealVec a, const RealVec& b) { return a += b; }
    friend RealVec operator-(RealVec a, const RealVec& b) { return a -= b; }
    friend RealVec operator*(RealVec a, double s) { return a *= s; }
    friend RealVec operator-(RealVec a) { return a *= -1.0; }

    friend bool operator==(const RealVec& a, const RealVec& b) {
        return a.dim_ == b.dim_ && std::equal(a.begin(), a.end(), b.begin());
    }

private:
    static void check_dim(std::size_t dim) {
        if (dim == 0 || dim > kMaxDim)
            throw DomainError("vector dimension must be in 1.." + std::to_string(kMaxDim) + ", got " +
                              std::to_string(dim));
    }

    std::array<double, kMaxDim> data_{};
    std::size_t dim_ = 0;
};

}  // namespace zetalat
