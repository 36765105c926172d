#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "zetalat/errors.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

/// Largest total derivative order |α| accepted by the derivative formulas.
inline constexpr int kMaxDerivOrder = 24;

/// d-tuple of non-negative integers.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::size_t dim) : dim_(dim) { check_dim(dim); }

    MultiIndex(std::initializer_list<int> values) : MultiIndex(std::span<const int>(values.begin(), values.size())) {}

    explicit MultiIndex(std::span<const int> values) : dim_(values.size()) {
        check_dim(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (values[i] < 0) throw DomainError("multi-index entries must be non-negative");
            v_[i] = values[i];
        }
    }

    std::size_t size() const noexcept { return dim_; }
    int operator[](std::size_t i) const noexcept { return v_[i]; }
    void set(std::size_t i, int value) {
        if (value < 0) throw DomainError("multi-index entries must be non-negative");
        v_[i] = value;
    }
    const int* begin() const noexcept { return v_.data(); }
    const int* end() const noexcept { return v_.data() + dim_; }

    /// |α|
    int order() const noexcept {
        int s = 0;
        for (std::size_t i = 0; i < dim_; ++i) s += v_[i];
        return s;
    }

    /// χ(α): 1 if every entry is even.
    bool all_even() const noexcept {
        return std::all_of(begin(), end(), [](int a) { return a % 2 == 0; });
    }

    bool is_zero() const noexcept { return order() == 0; }

    /// α! as a double (exact up to 22! per entry).
    double factorial() const noexcept {
        double f = 1.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (int k = 2; k <= v_[i]; ++k) f *= k;
        return f;
    }

    /// Componentwise β ≤ α.
    bool leq(const MultiIndex& o) const noexcept {
        if (dim_ != o.dim_) return false;
        for (std::size_t i = 0; i < dim_; ++i)
            if (v_[i] > o.v_[i]) return false;
        return true;
    }

    /// Entry-wise half; requires every entry to be even.
    MultiIndex half() const {
        if (!all_even()) throw DomainError("MultiIndex::half requires even entries");
        MultiIndex h(dim_);
        for (std::size_t i = 0; i < dim_; ++i) h.v_[i] = v_[i] / 2;
        return h;
    }

    /// Componentwise product with a non-negative integer.
    MultiIndex scaled(int f) const {
        MultiIndex h(dim_);
        for (std::size_t i = 0; i < dim_; ++i) h.set(i, v_[i] * f);
        return h;
    }

    /// Sub-index of the entries [first, first + count).
    MultiIndex slice(std::size_t first, std::size_t count) const {
        MultiIndex h(count);
        for (std::size_t i = 0; i < count; ++i) h.v_[i] = v_[first + i];
        return h;
    }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        check_same(a, b);
        MultiIndex c(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) c.v_[i] = a.v_[i] + b.v_[i];
        return c;
    }
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        check_same(a, b);
        MultiIndex c(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) c.set(i, a.v_[i] - b.v_[i]);
        return c;
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.dim_ == b.dim_ && std::equal(a.begin(), a.end(), b.begin());
    }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (i) s += ',';
            s += std::to_string(v_[i]);
        }
        return s;
    }

private:
    static void check_dim(std::size_t dim) {
        if (dim == 0 || dim > kMaxDim)
            throw DomainError("multi-index dimension must be in 1.." + std::to_string(kMaxDim));
    }
    static void check_same(const MultiIndex& a, const MultiIndex& b) {
        if (a.dim_ != b.dim_) throw DomainError("multi-index dimension mismatch");
    }

    std::array<int, kMaxDim> v_{};
    std::size_t dim_ = 0;
};

/// Binomial coefficient, exact in 64 bits or OverflowError.
inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) throw DomainError("binomial: need 0 <= k <= n");
    k = std::min(k, n - k);
    __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > INT64_MAX) throw OverflowError("binomial coefficient overflows int64");
    }
    return static_cast<std::int64_t>(r);
}

/// (α choose β) = Π binom(α_i, β_i).
inline std::int64_t multinomial(const MultiIndex& alpha, const MultiIndex& beta) {
    if (!beta.leq(alpha)) throw DomainError("multinomial: need β <= α componentwise");
    std::int64_t r = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (__builtin_mul_overflow(r, binomial(alpha[i], beta[i]), &r))
            throw OverflowError("multinomial coefficient overflows int64");
    }
    return r;
}

/// All multi-indices of dimension d with |α| <= max_order, ordered by |α|
/// then lexicographically.
inline std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int max_order) {
    std::vector<MultiIndex> out;
    for (int total = 0; total <= max_order; ++total) {
        MultiIndex a(d);
        auto rec = [&](auto&& self, std::size_t i, int left) -> void {
            if (i + 1 == d) {
                a.set(i, left);
                out.push_back(a);
                return;
            }
            for (int v = left; v >= 0; --v) {
                a.set(i, v);
                self(self, i + 1, left - v);
            }
        };
        rec(rec, 0, total);
    }
    return out;
}

}  // namespace zetalat
