#pragma once

// Incomplete Bessel function
//   G_ν(k, r) = 2 ∫₀¹ t^{-ν-1} e^{-πk²/t²} e^{-πr²t²} dt
// together with the modified Bessel function K_s and the reflection formula.

#include <cmath>
#include <numbers>
#include <string_view>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "zetalat/errors.hpp"
#include "zetalat/special/crandall.hpp"
#include "zetalat/special/gamma.hpp"
#include "zetalat/vec.hpp"

namespace zetalat::special {

enum class BesselBranch { VanishingBoth, VanishingFirst, VanishingSecond, TailZero, Series, Recursive, Quadrature };

inline std::string_view to_string(BesselBranch b) {
    switch (b) {
        case BesselBranch::VanishingBoth: return "vanishing-both";
        case BesselBranch::VanishingFirst: return "vanishing-first";
        case BesselBranch::VanishingSecond: return "vanishing-second";
        case BesselBranch::TailZero: return "tail-zero";
        case BesselBranch::Series: return "series";
        case BesselBranch::Recursive: return "recursive";
        case BesselBranch::Quadrature: return "quadrature";
    }
    return "unknown";
}

struct BesselEvalReport {
    double value = 0.0;
    BesselBranch branch = BesselBranch::VanishingBoth;
    bool swapped = false;
};

struct BesselOptions {
    int series_terms = 20;
    int recursion_depth = 100;
    /// Largest |reflection term / result| accepted from the swapped branch
    /// before the defining integral is evaluated directly.
    double max_reflection_ratio = 100.0;
};

/// K_s(x), x > 0.
inline double modified_bessel_k(double s, double x) {
    if (!(x > 0.0)) throw DomainError("modified_bessel_k: need x > 0");
    return boost::math::cyl_bessel_k(std::abs(s), x);
}

/// 2√π x^{-(ν+1)/4} y^{(ν-1)/4} exp((ν²/16 - 2xy)/√(xy)) with x = πk², y = πr².
inline double bessel_tail_bound_xy(double nu, double x, double y) {
    const double sxy = std::sqrt(x * y);
    return 2.0 * std::sqrt(std::numbers::pi) *
           std::exp(-(nu + 1.0) / 4.0 * std::log(x) + (nu - 1.0) / 4.0 * std::log(y) +
                    (nu * nu / 16.0 - 2.0 * x * y) / sxy);
}

inline double bessel_tail_bound(double nu, const RealVec& k, const RealVec& r) {
    if (k.is_zero() || r.is_zero()) throw DomainError("bessel_tail_bound: k and r must be nonzero");
    return bessel_tail_bound_xy(nu, std::numbers::pi * k.norm2(), std::numbers::pi * r.norm2());
}

/// 2 ∫₀¹ t^{-ν-1} e^{-x/t² - yt²} dt by adaptive Gauss-Kronrod, x > 0.
inline double incomplete_bessel_quadrature(double nu, double x, double y) {
    auto f = [&](double t) {
        const double e = (-nu - 1.0) * std::log(t) - x / (t * t) - y * t * t;
        return e < -745.0 ? 0.0 : 2.0 * std::exp(e);
    };
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-15, &err);
    if (!std::isfinite(v)) throw ConvergenceError("incomplete_bessel: quadrature fallback failed");
    return v;
}

/// Algorithm for G_ν(k, r) in terms of x = πk², y = πr².
inline BesselEvalReport incomplete_bessel_xy(double nu, double x, double y, const BesselOptions& opt = {}) {
    if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(nu))
        throw DomainError("incomplete_bessel: need finite ν and nonnegative arguments");
    double s = -0.5 * nu;
    BesselEvalReport rep;

    if (x + y == 0.0) {
        if (nu == 0.0) throw DomainError("incomplete_bessel: G_0(0,0) is a pole");
        rep.value = 1.0 / s;
        rep.branch = BesselBranch::VanishingBoth;
        return rep;
    }
    if (x == 0.0) {
        if (nu >= 0.0 && 0.5 * nu == std::floor(0.5 * nu))
            throw DomainError("incomplete_bessel: G_ν(0,r) undefined for ν in 2N");
        rep.value = lower_gamma_scaled(-0.5 * nu, y);
        rep.branch = BesselBranch::VanishingFirst;
        return rep;
    }
    if (y == 0.0) {
        rep.value = upper_gamma_scaled(0.5 * nu, x);
        rep.branch = BesselBranch::VanishingSecond;
        return rep;
    }
    if (bessel_tail_bound_xy(nu, x, y) < 1e-16) {
        rep.value = 0.0;
        rep.branch = BesselBranch::TailZero;
        return rep;
    }
    if (x + 0.2 < y) {
        rep.swapped = true;
        s = -s;
        std::swap(x, y);
    }

    double result;
    if (x + y < 1.5) {
        rep.branch = BesselBranch::Series;
        result = upper_gamma_scaled(-s, x);
        double pw = 1.0;
        for (int j = 1; j <= opt.series_terms; ++j) {
            pw *= -y / j;
            result += upper_gamma_scaled(-(s + j), x) * pw;
        }
    } else {
        rep.branch = BesselBranch::Recursive;
        double n1 = 0.0, n2 = 0.0, n3 = 1.0;
        double d1 = 0.0, d2 = std::exp(x + y), d3 = (x - y + s + 1.0) * d2;
        double num = n3, den = d3;
        for (int j = 2; j <= opt.recursion_depth; ++j) {
            const double p = x - y + s + 1.0 + 2.0 * (j - 1);
            const double q = 2.0 * y - s - (j - 1);
            num = (p * n3 + q * n2 - y * n1) / j;
            den = (p * d3 + q * d2 - y * d1) / j;
            n1 = n2;
            n2 = n3;
            n3 = num;
            d1 = d2;
            d2 = d3;
            d3 = den;
            if (std::abs(d3) > 1e250) {
                constexpr double f = 1e-250;
                n1 *= f, n2 *= f, n3 *= f, d1 *= f, d2 *= f, d3 *= f;
                num = n3;
                den = d3;
            }
        }
        result = num / den;
    }

    if (rep.swapped) {
        const double refl = 2.0 * std::pow(x / y, 0.5 * s) * modified_bessel_k(s, 2.0 * std::sqrt(x * y));
        result = refl - result;
        // Large |ν| makes the reflection term dwarf the result.
        if (!(std::abs(refl) <= opt.max_reflection_ratio * std::abs(result))) {
            rep.branch = BesselBranch::Quadrature;
            result = incomplete_bessel_quadrature(nu, y, x);
        }
    }
    rep.value = result;
    return rep;
}

inline BesselEvalReport incomplete_bessel(double nu, const RealVec& k, const RealVec& r,
                                          const BesselOptions& opt = {}) {
    return incomplete_bessel_xy(nu, std::numbers::pi * k.norm2(), std::numbers::pi * r.norm2(), opt);
}

/// Value of G_ν(k, r) from squared norms.
inline double incomplete_bessel_r2(double nu, double k2, double r2, const BesselOptions& opt = {}) {
    return incomplete_bessel_xy(nu, std::numbers::pi * k2, std::numbers::pi * r2, opt).value;
}

/// 2 (r²/k²)^{ν/4} K_{ν/2}(2π|k||r|) - G_{-ν}(r, k).
inline double bessel_reflection(double nu, const RealVec& k, const RealVec& r) {
    if (k.is_zero() || r.is_zero()) throw DomainError("bessel_reflection: k and r must be nonzero");
    const double k2 = k.norm2(), r2 = r.norm2();
    return 2.0 * std::pow(r2 / k2, nu / 4.0) * modified_bessel_k(0.5 * nu, 2.0 * std::numbers::pi * std::sqrt(k2 * r2)) -
           incomplete_bessel_r2(-nu, r2, k2);
}

}  // namespace zetalat::special
