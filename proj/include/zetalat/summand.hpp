#pragma once

// Single cuboid summand for a general Riesz exponent ν,
//
//   S^(m)(r) = ∂_r^m ∫_Ω ∫_{Ω+r} |r' - r''|^{-ν} dr' dr''
//            = 2 π^{ν/2}/Γ(ν/2) Π c_ℓ² ∫_0^∞ t^{-ν} Π ψ_{m_ℓ}(r_ℓ, t, c_ℓ) dt/t,
//
//   ψ_m(r, t, c) = t^{-m} (t/c)² [f^(m)((r-c)/t) - 2 f^(m)(r/t) + f^(m)((r+c)/t)],
//   f(u) = e^{-πu²}/(2π) + u erf(√π u)/2,
//
// integrated in u = ln t. Sums over product sets of images factor axis-wise.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "zetalat/cuboid.hpp"
#include "zetalat/errors.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

struct SummandOptions {
    double tol = 1e-14;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// e^{-πu²}/(2π) - |u| erfc(√π|u|)/2, the smooth part of f.
inline double f_smooth(double u) {
    const double a = std::abs(u);
    return std::exp(-std::numbers::pi * u * u) / (2.0 * std::numbers::pi) -
           0.5 * a * std::erfc(std::sqrt(std::numbers::pi) * a);
}

inline double sgn(double u) { return (u > 0.0) - (u < 0.0); }

// Σ_{k≥1} 2 ε^{2k-2}/(2k)! h^{(2k-2+m)}(x), h(u) = e^{-πu²}; equals
// ε^{-2} Δ_ε f^(m)(x).
inline double psi_taylor(int m, double x, double eps) {
    const double g = std::exp(-std::numbers::pi * x * x);
    if (g == 0.0) return 0.0;
    const double tp = 2.0 * std::numbers::pi;
    // P_n with h^{(n)} = P_n e^{-πx²}: P_{n+1} = -2πx P_n - 2πn P_{n-1}.
    double p_prev = 0.0, p = 1.0;
    int n = 0;
    auto advance = [&] {
        const double next = -tp * x * p - tp * n * p_prev;
        p_prev = p;
        p = next;
        ++n;
    };
    while (n < m) advance();
    const double e2 = eps * eps;
    double sum = 0.0, w = 1.0, fact = 2.0;  // w = ε^{2k-2}, fact = (2k)!
    int small = 0;
    for (int k = 1; k <= 40; ++k) {
        const double term = 2.0 * w / fact * p;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small == 2) break;
        } else {
            small = 0;
        }
        advance();
        advance();
        w *= e2;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum * g;
}

// Δ_ε f^(m)(x) from the three-point formula with the non-smooth parts of
// f and f' separated out.
inline double psi_direct(int m, double x, double eps) {
    const double a = x - eps, b = x, c = x + eps;
    if (m == 0) {
        const double kink = std::max(eps - std::abs(x), 0.0);
        return kink + f_smooth(a) - 2.0 * f_smooth(b) + f_smooth(c);
    }
    if (m == 1) {
        const double sp = std::sqrt(std::numbers::pi);
        const double jump = 0.5 * (sgn(a) - 2.0 * sgn(b) + sgn(c));
        const double tail = -0.5 * (sgn(a) * std::erfc(sp * std::abs(a)) - 2.0 * sgn(b) * std::erfc(sp * std::abs(b)) +
                                    sgn(c) * std::erfc(sp * std::abs(c)));
        return jump + tail;
    }
    const double pi = std::numbers::pi;
    return std::exp(-pi * a * a) - 2.0 * std::exp(-pi * b * b) + std::exp(-pi * c * c);
}

/// ψ_m(r, t, c) for m ∈ {0, 1, 2}.
inline double psi(int m, double r, double t, double c) {
    const double eps = c / t, x = r / t;
    if (std::abs(x) - eps > 40.0) return 0.0;
    if (eps < 0.5 && eps * std::abs(x) < 1.0) {
        const double v = psi_taylor(m, x, eps);
        return m == 0 ? v : v / (m == 1 ? t : t * t);
    }
    const double v = psi_direct(m, x, eps) / (c * c);
    return m == 2 ? v : v * (m == 1 ? t : t * t);
}

// Power E with ψ_m(r, t, c) ~ t^E as t → 0; ∞ for superexponential decay
// or an identically vanishing factor.
inline double small_t_exponent(int m, double r, double c) {
    const double a = std::abs(r);
    if (a > c) return kInf;
    if (m == 0) return a < c ? 1.0 : 2.0;
    if (m == 1) return a == 0.0 ? kInf : 1.0;
    return (a == 0.0 || a == c) ? 0.0 : kInf;
}

inline double reciprocal_gamma_half(double nu) {
    const double s = 0.5 * nu;
    if (s <= 0.0 && s == std::floor(s)) return 0.0;
    return 1.0 / std::tgamma(s);
}

inline void check_summand_args(double nu, const MultiIndex& m, const RealVec& r, const Cuboid& box) {
    if (!std::isfinite(nu)) throw DomainError("summand: ν must be finite");
    if (m.size() != box.dim() || r.size() != box.dim()) throw DomainError("summand: dimension mismatch");
    if (!r.all_finite()) throw DomainError("summand: r must be finite");
    for (int v : m)
        if (v > 2) throw DomainError("summand: each m_ℓ must be 0, 1 or 2");
}

inline boost::math::quadrature::exp_sinh<double>& half_line_rule() {
    static boost::math::quadrature::exp_sinh<double> rule(12);
    return rule;
}

// 2 N_ν Π c_ℓ² ∫ e^{-νu} Π Ψ_ℓ(e^u) du, Ψ_ℓ given by axis(ℓ, t).
template <class Axis>
double integrate_summand(double nu, std::size_t d, const Cuboid& box, double split, Axis&& axis,
                         const SummandOptions& opt) {
    const double rg = reciprocal_gamma_half(nu);
    if (rg == 0.0) return 0.0;
    auto f = [&](double u) -> double {
        if (std::abs(u) > 700.0) return 0.0;
        const double t = std::exp(u);
        double prod = 1.0;
        for (std::size_t l = 0; l < d; ++l) {
            prod *= axis(l, t);
            if (prod == 0.0) return 0.0;
        }
        return std::copysign(std::exp(std::log(std::abs(prod)) - nu * u), prod);
    };
    auto& rule = half_line_rule();
    const double u0 = std::log(split);
    double err_r = 0.0, l1_r = 0.0, err_l = 0.0, l1_l = 0.0;
    double val = 0.0;
    try {
        val = rule.integrate(f, u0, kInf, opt.tol, &err_r, &l1_r) + rule.integrate(f, -kInf, u0, opt.tol, &err_l, &l1_l);
    } catch (const std::exception& e) {
        throw ConvergenceError(std::string("summand quadrature failed: ") + e.what());
    }
    const double l1 = l1_r + l1_l;
    if (!std::isfinite(val) || err_r + err_l > 1e-9 * std::max(l1, 1e-300))
        throw ConvergenceError("summand quadrature did not converge (error estimate " + std::to_string(err_r + err_l) +
                               ", L1 " + std::to_string(l1) + ")");
    double pref = 2.0 * std::pow(std::numbers::pi, 0.5 * nu) * rg;
    for (double c : box.c) pref *= c * c;
    return pref * val;
}

inline void check_convergence(double nu, const MultiIndex& m, double e_small) {
    int moving = 0;
    for (int v : m) moving += v != 0;
    if (!(nu + 2.0 * moving > 0.0))
        throw DivergentConfigurationError("summand integral diverges at large t for ν=" + std::to_string(nu) +
                                          " and m=(" + m.str() + ")");
    if (!(nu < e_small))
        throw DivergentConfigurationError("overlapping bodies: summand integral diverges at small t for ν=" +
                                          std::to_string(nu) + " and m=(" + m.str() + ")");
}

}  // namespace detail

/// Throws DivergentConfigurationError unless the summand integral converges.
inline void check_summand_config(double nu, const MultiIndex& m, const RealVec& r, const Cuboid& box) {
    detail::check_summand_args(nu, m, r, box);
    double e = 0.0;
    for (std::size_t l = 0; l < r.size(); ++l) e += detail::small_t_exponent(m[l], r[l], box.c[l]);
    detail::check_convergence(nu, m, e);
}

/// S^(m)(r) for the box and exponent ν.
inline double summand_general(double nu, const MultiIndex& m, const RealVec& r, const Cuboid& box,
                              const SummandOptions& opt = {}) {
    check_summand_config(nu, m, r, box);
    const std::size_t d = r.size();
    for (std::size_t l = 0; l < d; ++l)
        if (m[l] == 1 && r[l] == 0.0) return 0.0;
    double split = 0.0;
    for (std::size_t l = 0; l < d; ++l) split = std::max(split, std::abs(r[l]) + box.c[l]);
    auto axis = [&](std::size_t l, double t) { return detail::psi(m[l], r[l], t, box.c[l]); };
    return detail::integrate_summand(nu, d, box, split, axis, opt);
}

/// Σ S^(m)(r + z) over the product set z ∈ shifts[0] × ... × shifts[d-1].
inline double summand_grid_sum(double nu, const MultiIndex& m, const RealVec& r, const Cuboid& box,
                               const std::vector<std::vector<double>>& shifts, const SummandOptions& opt = {}) {
    detail::check_summand_args(nu, m, r, box);
    const std::size_t d = r.size();
    if (shifts.size() != d) throw DomainError("summand_grid_sum: need one shift list per axis");
    std::vector<std::vector<double>> pos(d);
    double split = 0.0;
    double e_min = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
        if (shifts[l].empty()) return 0.0;
        double near = detail::kInf, e = detail::kInf;
        for (double z : shifts[l]) {
            const double x = r[l] + z;
            if (!std::isfinite(x)) throw DomainError("summand_grid_sum: non-finite shift");
            pos[l].push_back(x);
            near = std::min(near, std::abs(x));
            e = std::min(e, detail::small_t_exponent(m[l], x, box.c[l]));
        }
        split = std::max(split, near + box.c[l]);
        e_min += e;
    }
    detail::check_convergence(nu, m, e_min);
    auto axis = [&](std::size_t l, double t) {
        double s = 0.0;
        for (double x : pos[l]) s += detail::psi(m[l], x, t, box.c[l]);
        return s;
    };
    return detail::integrate_summand(nu, d, box, split, axis, opt);
}

}  // namespace zetalat
