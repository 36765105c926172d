#pragma once

// Quad-precision quadrature references for the special functions. Needs
// GNU extensions (-std=gnu++20 -fext-numeric-literals) and libquadmath.

#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/float128.hpp>

namespace zetalat::reference {

using f128 = boost::multiprecision::float128;

inline constexpr unsigned kDepth = 40;

inline f128 tol128() { return f128(1e-30); }

/// 2 ∫_0^1 t^{-ν-1} e^{-πk²/t²} e^{-πr²t²} dt
inline f128 incomplete_bessel(double nu, double k, double r) {
    const f128 pi = boost::math::constants::pi<f128>();
    const f128 x = pi * f128(k) * f128(k), y = pi * f128(r) * f128(r), n = nu;
    auto f = [&](f128 t) -> f128 {
        if (t == 0) return f128(0);
        return 2 * pow(t, -n - 1) * exp(-x / (t * t) - y * t * t);
    };
    f128 err;
    return boost::math::quadrature::gauss_kronrod<f128, 61>::integrate(f, f128(0), f128(1), kDepth, tol128(), &err);
}

/// 2 ∫_1^∞ t^{ν-1} e^{-πz²t²} dt
inline f128 upper_crandall(double nu, double z) {
    const f128 pi = boost::math::constants::pi<f128>();
    const f128 y = pi * f128(z) * f128(z), n = nu;
    auto f = [&](f128 t) -> f128 { return 2 * pow(t, n - 1) * exp(-y * t * t); };
    f128 err;
    return boost::math::quadrature::gauss_kronrod<f128, 61>::integrate(
        f, f128(1), std::numeric_limits<f128>::infinity(), kDepth, tol128(), &err);
}

/// 2 ∫_0^1 t^{ν-1} e^{-πz²t²} dt, ν > 0; tanh-sinh for the endpoint singularity.
inline f128 lower_crandall(double nu, double z) {
    const f128 pi = boost::math::constants::pi<f128>();
    const f128 y = pi * f128(z) * f128(z), n = nu;
    auto f = [&](f128 t) -> f128 { return 2 * pow(t, n - 1) * exp(-y * t * t); };
    static boost::math::quadrature::tanh_sinh<f128> rule(15);
    return rule.integrate(f, f128(0), f128(1), tol128());
}

}  // namespace zetalat::reference
