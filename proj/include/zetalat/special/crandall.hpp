#pragma once

// Upper and lower Crandall functions
//   G_ν(z) = Γ(ν/2, πz²) / (πz²)^{ν/2},   g_ν(z) = γ(ν/2, πz²) / (πz²)^{ν/2}.
// Both depend on z only through z², so every routine has a *_r2 form taking
// the squared norm directly.

#include <cmath>
#include <numbers>
#include <string>

#include "zetalat/errors.hpp"
#include "zetalat/special/gamma.hpp"
#include "zetalat/vec.hpp"

namespace zetalat::special {

/// G_ν at squared radius r2. G_ν(0) = -2/ν.
inline double upper_crandall_r2(double nu, double r2) {
    if (!(r2 >= 0.0)) throw DomainError("upper_crandall: squared radius must be >= 0");
    if (r2 == 0.0 && nu == 0.0) throw DomainError("upper_crandall: G_0(0) is a pole");
    return upper_gamma_scaled(0.5 * nu, std::numbers::pi * r2);
}

/// g_ν at squared radius r2. g_ν(0) = 2/ν; nonpositive even ν is a pole.
inline double lower_crandall_r2(double nu, double r2) {
    if (!(r2 >= 0.0)) throw DomainError("lower_crandall: squared radius must be >= 0");
    const double a = 0.5 * nu;
    if (a <= 0.0 && a == std::floor(a)) {
        if (r2 == 0.0) throw DomainError("lower_crandall: g_ν(0) undefined for nonpositive even ν");
        throw PoleError("lower_crandall: pole at nonpositive even ν=" + std::to_string(nu));
    }
    return lower_gamma_scaled(a, std::numbers::pi * r2);
}

inline double upper_crandall(double nu, const RealVec& z) { return upper_crandall_r2(nu, z.norm2()); }
inline double lower_crandall(double nu, const RealVec& z) { return lower_crandall_r2(nu, z.norm2()); }

/// G_ν(z/λ) + g_ν(z/λ) - Γ(ν/2) (πz²/λ²)^{-ν/2}, divided by max(1, |Γ(ν/2) (πz²/λ²)^{-ν/2}|).
inline double fundamental_relation_residual(double nu, const RealVec& z, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("fundamental_relation_residual: λ must be > 0");
    if (z.is_zero()) throw DomainError("fundamental_relation_residual: z must be nonzero");
    const double a = 0.5 * nu;
    if (a <= 0.0 && a == std::floor(a)) throw DomainError("fundamental_relation_residual: Γ(ν/2) has a pole");
    const double r2 = z.norm2() / (lambda * lambda);
    const double closed = std::tgamma(a) * std::pow(std::numbers::pi * r2, -a);
    const double lhs = upper_crandall_r2(nu, r2) + lower_crandall_r2(nu, r2);
    return (lhs - closed) / std::max(1.0, std::abs(closed));
}

}  // namespace zetalat::special
