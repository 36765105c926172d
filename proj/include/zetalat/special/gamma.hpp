#pragma once

// Scaled incomplete gamma functions for arbitrary real order.
//
//   upper_gamma_scaled(a, x) = Γ(a, x) / x^a
//   lower_gamma_scaled(a, x) = γ(a, x) / x^a

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "zetalat/errors.hpp"

namespace zetalat::special {

namespace detail {

inline constexpr int kMaxSeriesTerms = 4000;

inline bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

// γ(a,x)/x^a as e^{-x} Σ x^n / (a (a+1) ... (a+n)); positive terms for a > 0.
inline double lower_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxSeriesTerms; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) return std::exp(-x) * sum;
    }
    throw ConvergenceError("lower incomplete gamma series did not converge (a=" + std::to_string(a) +
                           ", x=" + std::to_string(x) + ")");
}

// Γ(a,x) e^{x} x^{-a} by the Legendre continued fraction. Lentz picks the
// depth, then the fraction is re-evaluated bottom-up.
inline double upper_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    int depth = -1;
    for (int i = 1; i < kMaxSeriesTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        if (std::abs(d * c - 1.0) < 1e-17) {
            depth = i + 8;
            break;
        }
    }
    if (depth < 0)
        throw ConvergenceError("upper incomplete gamma continued fraction did not converge (a=" +
                               std::to_string(a) + ", x=" + std::to_string(x) + ")");
    double tail = x + 1.0 - a + 2.0 * depth;
    for (int i = depth; i >= 1; --i) tail = (x + 1.0 - a + 2.0 * (i - 1)) - i * (i - a) / tail;
    return 1.0 / tail;
}

// Γ(a,x) for |a| < 1 and small x, free of the 1/a cancellation near a = 0:
//   Γ(a,x) = (Γ(1+a) - 1 - (x^a - 1)) / a - x^a Σ_{n≥1} (-x)^n / (n! (a+n)).
inline double upper_small_x(double a, double x) {
    double tail = 0.0;
    double term = 1.0;
    for (int n = 1; n < kMaxSeriesTerms; ++n) {
        term *= -x / n;
        const double t = term / (a + n);
        tail += t;
        if (std::abs(t) < 1e-18 * (1.0 + std::abs(tail))) break;
    }
    const double lx = std::log(x);
    double head;
    if (a == 0.0) {
        head = -std::numbers::egamma - lx;
        return head - tail;
    }
    head = (boost::math::tgamma1pm1(a) - std::expm1(a * lx)) / a;
    return head - std::exp(a * lx) * tail;
}

}  // namespace detail

/// Γ(a, x) / x^a for real a and x ≥ 0. At x = 0 the meromorphic value -1/a is
/// returned (the continuation used for the upper Crandall function at zero).
inline double upper_gamma_scaled(double a, double x) {
    if (!(x >= 0.0) || !std::isfinite(a)) throw DomainError("upper_gamma_scaled: need x >= 0 and finite a");
    if (x == 0.0) {
        if (a == 0.0) throw PoleError("upper_gamma_scaled: pole at a = 0, x = 0");
        return -1.0 / a;
    }
    if (std::isinf(x)) return 0.0;

    if (a >= 1.0) {
        if (x >= a + 1.0) return std::exp(-x) * detail::upper_continued_fraction(a, x);
        return std::tgamma(a) * std::pow(x, -a) - detail::lower_series(a, x);
    }
    if (x >= 1.5 || (a < 0.0 && x >= 1.0)) return std::exp(-x) * detail::upper_continued_fraction(a, x);
    if (a > -0.5) return detail::upper_small_x(a, x) * std::pow(x, -a);

    // a <= -1/2, x < 1: start at the nearest |a_s| <= 1/2 and step down with
    // G(b) = (x G(b+1) - e^{-x}) / b, whose error gain x/|b| stays below one.
    const double start = a - std::round(a);
    double g = detail::upper_small_x(start, x) * std::pow(x, -start);
    const double ex = std::exp(-x);
    const int steps = static_cast<int>(std::round(start - a));
    double b = start;
    for (int i = 0; i < steps; ++i) {
        b -= 1.0;
        g = (x * g - ex) / b;
    }
    return g;
}

/// γ(a, x) / x^a for real a and x ≥ 0. The continuation to negative
/// non-integer a is the one given by the power series; nonpositive integer a
/// is a pole for every x.
inline double lower_gamma_scaled(double a, double x) {
    if (!(x >= 0.0) || !std::isfinite(a)) throw DomainError("lower_gamma_scaled: need x >= 0 and finite a");
    if (detail::is_nonpositive_integer(a))
        throw PoleError("lower_gamma_scaled: pole at nonpositive integer order a=" + std::to_string(a));
    if (x == 0.0) return 1.0 / a;
    if (x > std::max(a + 1.0, 1.5)) {
        return std::tgamma(a) * std::pow(x, -a) - upper_gamma_scaled(a, x);
    }
    return detail::lower_series(a, x);
}

/// Exponential integral E1(x) = Γ(0, x), x > 0.
inline double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw DomainError("exp_integral_e1: need x > 0");
    return upper_gamma_scaled(0.0, x);
}

}  // namespace zetalat::special
