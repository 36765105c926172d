#pragma once

// Dirichlet beta and Riemann zeta at real arguments via accelerated
// alternating series (Cohen, Rodriguez Villegas, Zagier).

#include <cmath>

#include "zetalat/errors.hpp"

namespace zetalat::special {

namespace detail {

// Σ_{k≥0} (-1)^k a(k) for a totally monotone sequence a.
template <class F>
double alternating_sum(F&& a, int n = 40) {
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * a(k);
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

}  // namespace detail

/// β(s) = Σ_{k≥0} (-1)^k (2k+1)^{-s}, s > 0.
inline double dirichlet_beta(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("dirichlet_beta: need finite s > 0");
    return detail::alternating_sum([s](int k) { return std::pow(2.0 * k + 1.0, -s); });
}

/// ζ(s) = η(s) / (1 - 2^{1-s}), s > 1.
inline double riemann_zeta(double s) {
    if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("riemann_zeta: need finite s > 1");
    const double eta = detail::alternating_sum([s](int k) { return std::pow(k + 1.0, -s); });
    return eta / -std::expm1((1.0 - s) * std::log(2.0));
}

}  // namespace zetalat::special
