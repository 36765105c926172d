#pragma once

// Derivatives of the set zeta function
//   Z_{L_far,ν}(r) = Σ_{z ∈ L \ L_near} |z - r|^{-ν}
// for L = A Z^n × {0}^{d-n}, by the Crandall representation
//
//   Z^(α)(r) = (π/λ²)^{ν/2} / Γ(ν/2) [ λ^{-|α|} Σ_{z∈L_far}  G_ν^(α)((r - z)/λ)
//                                     - λ^{-|α|} Σ_{z∈L_near} g_ν^(α)((r - z)/λ)
//                                     + λ^n/V Σ_{k∈Λ*} (2πik)^{α∥} e^{2πik·r∥}
//                                                 λ^{-|α⊥|} G_{n-ν}^(α⊥)(λk, r⊥/λ) ].
//
// Both infinite sums are enumerated in ∞-norm shells of integer coordinates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zetalat/derivatives.hpp"
#include "zetalat/errors.hpp"
#include "zetalat/lattice.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/special/bessel.hpp"
#include "zetalat/special/crandall.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

struct ZetaOptions {
    /// Relative tail tolerance for both lattice sums.
    double eps_trunc = 1e-16;
    /// Splitting parameter; defaults to default_lambda().
    std::optional<double> lambda;
    int max_shells = 64;
    special::BesselOptions bessel;
};

struct ZetaQuery {
    Lattice lattice;
    NearFieldSpec near;
    double nu;
    MultiIndex alpha;
    RealVec r;
    ZetaOptions options;
};

struct ZetaBatchResult {
    std::vector<double> values;
    int real_shells = 0;
    int recip_shells = 0;
    /// max over α of |Im| / (1 + |Z|) of the reciprocal sum
    double max_imag = 0.0;
};

namespace detail {

inline bool nonpositive_even(double nu) { return nu <= 0.0 && 0.5 * nu == std::floor(0.5 * nu); }

// Σ_terms |c| ρ^{|e|} G_{base + sign*2 shift}(ρ²): dominates |G^(α)| at radius ρ.
inline double crandall_envelope(const DerivExpansion& ex, double base, int sign, double rho) {
    double s = 0.0;
    for (const auto& t : ex.terms)
        s += std::abs(t.coefficient) * std::pow(rho, t.exponent.order()) *
             special::upper_crandall_r2(base + sign * 2.0 * t.shift, rho * rho);
    return s;
}

inline double envelope_peak(int degree) { return std::sqrt(std::max(degree, 1) / (2.0 * std::numbers::pi)) + 1.0; }

inline void check_distance(const Lattice& L, const NearFieldSpec& near, const RealVec& r) {
    for (std::size_t i = L.n(); i < L.d(); ++i)
        if (r[i] != 0.0) return;
    const auto m = L.coordinates_of(r);
    LatticeCoord mi(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double rounded = std::round(m[i]);
        if (std::abs(m[i] - rounded) > 1e-12 * std::max(1.0, std::abs(m[i]))) return;
        mi[i] = static_cast<int>(rounded);
    }
    if (!near.contains(mi))
        throw InvariantError("evaluation point coincides with a far-field lattice point (dist_∞(r, L_far) = 0)");
}

}  // namespace detail

/// Shell radii (R, K) for the real- and reciprocal-space sums at r = 0 and an
/// empty near field such that the envelope of each discarded tail is below ε.
inline std::pair<int, int> truncation_radii(double eps, double lambda, double nu, const MultiIndex& alpha,
                                            const Lattice& lattice, int max_shells = 64) {
    if (!(eps > 0.0 && eps <= 1e-2)) throw DomainError("truncation_radii: ε must lie in (0, 1e-2]");
    if (!(lambda > 0.0)) throw DomainError("truncation_radii: λ must be > 0");
    if (alpha.size() != lattice.d()) throw DomainError("truncation_radii: α dimension must equal d");
    const std::size_t n = lattice.n(), d = lattice.d();
    const auto& ex = deriv_expansion(alpha);
    const double peak = detail::envelope_peak(alpha.order());

    auto radius = [&](auto&& tail_term) {
        for (int s = 0; s <= max_shells; ++s) {
            const double b = tail_term(s + 1);
            if (b >= 0.0 && b < eps) return s;
        }
        throw ConvergenceError("truncation_radii: more than " + std::to_string(max_shells) + " shells required");
    };
    const int R = radius([&](int s) {
        const double rho = lattice.sigma_min() * s / lambda;
        if (rho < peak) return -1.0;
        return 2.0 * shell_count(n, s) * std::pow(lambda, -alpha.order()) * detail::crandall_envelope(ex, nu, 1, rho);
    });

    const MultiIndex a_par = alpha.slice(0, n);
    const int perp_order = alpha.order() - a_par.order();
    const auto& ex_perp = d > n ? deriv_expansion(alpha.slice(n, d - n)) : deriv_expansion(MultiIndex(1));
    const double pref = lattice.volume() > 0 ? std::pow(lambda, static_cast<double>(n)) / lattice.volume() : 1.0;
    const int K = radius([&](int s) {
        const double rho = lambda * lattice.sigma_min_reciprocal() * s;
        if (rho < detail::envelope_peak(a_par.order())) return -1.0;
        // r⊥ = 0 keeps only the β = α⊥/2 term.
        double perp = 0.0;
        for (const auto& t : ex_perp.terms)
            if (t.exponent.order() == 0)
                perp += std::abs(t.coefficient) * special::upper_crandall_r2(n - nu - 2.0 * t.shift, rho * rho);
        if (perp_order > 0 && !alpha.slice(n, d - n).all_even()) perp = 0.0;
        return 2.0 * shell_count(n, s) * pref * std::pow(2.0 * std::numbers::pi * rho / lambda, a_par.order()) *
               std::pow(lambda, -perp_order) * perp;
    });
    return {R, K};
}

/// Z^(α)_{L_far,ν}(r) for every α in `alphas`, sharing all special-function
/// evaluations.
/// Splitting scale V^{1/n} max(1, √((ν + |α|)/(2π))).
inline double default_lambda(const Lattice& L, double nu, int max_order) {
    const double grow = std::sqrt(std::max(0.0, nu + max_order) / (2.0 * std::numbers::pi));
    return std::pow(L.volume(), 1.0 / static_cast<double>(L.n())) * std::max(1.0, grow);
}

inline ZetaBatchResult set_zeta_derivs(const Lattice& L, const NearFieldSpec& near, double nu,
                                       std::span<const MultiIndex> alphas, const RealVec& r,
                                       const ZetaOptions& opt = {}) {
    const std::size_t n = L.n(), d = L.d();
    if (r.size() != d) throw DomainError("set_zeta: r must have the embedding dimension d");
    if (!r.all_finite() || !std::isfinite(nu)) throw DomainError("set_zeta: non-finite input");
    if (!(opt.eps_trunc > 0.0 && opt.eps_trunc <= 1e-10)) throw DomainError("set_zeta: ε_trunc must lie in (0, 1e-10]");
    for (const auto& a : alphas)
        if (a.size() != d) throw DomainError("set_zeta: α dimension must equal d");
    near.check_dimension(n);
    if (detail::nonpositive_even(nu)) throw PoleError("set_zeta: pole of the representation at ν=" + std::to_string(nu));
    detail::check_distance(L, near, r);

    int max_order = 0;
    for (const auto& a : alphas) max_order = std::max(max_order, a.order());
    const double lambda = opt.lambda.value_or(default_lambda(L, nu, max_order));
    if (!(lambda > 0.0)) throw DomainError("set_zeta: λ must be > 0");
    const double eps = opt.eps_trunc;
    const std::size_t na = alphas.size();

    std::vector<const DerivExpansion*> ex(na), ex_perp(na, nullptr);
    std::vector<MultiIndex> a_par(na);
    std::vector<int> perp_order(na, 0);
    int J = 0, Jperp = 0;
    for (std::size_t i = 0; i < na; ++i) {
        ex[i] = &deriv_expansion(alphas[i]);
        J = std::max(J, ex[i]->max_shift);
        a_par[i] = alphas[i].slice(0, n);
        if (d > n) {
            const MultiIndex ap = alphas[i].slice(n, d - n);
            ex_perp[i] = &deriv_expansion(ap);
            perp_order[i] = ap.order();
            Jperp = std::max(Jperp, ex_perp[i]->max_shift);
        }
    }

    RealVec rperp_s(std::max<std::size_t>(d - n, 1));
    for (std::size_t i = n; i < d; ++i) rperp_s[i - n] = r[i] / lambda;
    const double y2 = d > n ? rperp_s.norm2() : 0.0;
    double rpar_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) rpar_norm += r[i] * r[i];
    rpar_norm = std::sqrt(rpar_norm);

    std::vector<double> scale_real(na), scale_recip(na);
    for (std::size_t i = 0; i < na; ++i) {
        scale_real[i] = std::pow(lambda, -alphas[i].order());
        scale_recip[i] = std::pow(lambda, static_cast<double>(n)) / L.volume() * std::pow(lambda, -perp_order[i]);
    }

    std::vector<double> near_sum(na, 0.0), far_sum(na, 0.0), recip_re(na, 0.0), recip_im(na, 0.0);
    std::vector<double> abs_sum(na, 0.0);
    std::vector<double> table(J + 1);

    // Near field: Σ g^(α)((r - z)/λ).
    for (const auto& m : near.points()) {
        RealVec x = r - L.point(m);
        x *= 1.0 / lambda;
        const double x2 = x.norm2();
        for (int j = 0; j <= J; ++j) table[j] = special::lower_crandall_r2(nu + 2.0 * j, x2);
        for (std::size_t i = 0; i < na; ++i) {
            double v = 0.0;
            for (const auto& t : ex[i]->terms) v += t.eval(x.view()) * table[t.shift];
            near_sum[i] += v;
            abs_sum[i] += std::abs(v) * scale_real[i];
        }
    }

    auto current_scale = [&](std::size_t i) {
        const double total = std::abs(scale_real[i] * (far_sum[i] - near_sum[i]) + scale_recip[i] * recip_re[i]);
        return std::max({total, 1e-2 * abs_sum[i], 1e-300});
    };

    ZetaBatchResult res;
    res.values.assign(na, 0.0);

    // Real space.
    const int near_max = near.max_shell();
    std::vector<double> shell_part(na);
    for (int s = 0;; ++s) {
        if (s > opt.max_shells + std::max(near_max, 0))
            throw ConvergenceError("set_zeta: real-space sum needs more than " + std::to_string(opt.max_shells) +
                                   " shells beyond the near field");
        std::fill(shell_part.begin(), shell_part.end(), 0.0);
        for_each_in_shell(n, s, [&](const LatticeCoord& m) {
            if (near.contains(m)) return;
            RealVec x = r - L.point(m);
            x *= 1.0 / lambda;
            const double x2 = x.norm2();
            for (int j = 0; j <= J; ++j) table[j] = special::upper_crandall_r2(nu + 2.0 * j, x2);
            for (std::size_t i = 0; i < na; ++i) {
                double v = 0.0;
                for (const auto& t : ex[i]->terms) v += t.eval(x.view()) * table[t.shift];
                shell_part[i] += v;
                abs_sum[i] += std::abs(v) * scale_real[i];
            }
        });
        for (std::size_t i = 0; i < na; ++i) far_sum[i] += shell_part[i];
        if (s <= near_max) continue;
        const double rho = (L.sigma_min() * (s + 1) - rpar_norm) / lambda;
        bool done = true;
        for (std::size_t i = 0; i < na && done; ++i) {
            const double sc = eps * current_scale(i);
            if (rho < detail::envelope_peak(alphas[i].order())) {
                done = false;
                break;
            }
            const double tail =
                2.0 * shell_count(n, s + 1) * scale_real[i] * detail::crandall_envelope(*ex[i], nu, 1, rho);
            if (!(tail < sc) || !(std::abs(shell_part[i]) * scale_real[i] < sc)) done = false;
        }
        if (done) {
            res.real_shells = s;
            break;
        }
    }

    // Reciprocal space.
    std::vector<double> btable(Jperp + 1);
    const bool perp_zero = (d == n) || y2 == 0.0;
    std::vector<double> shell_re(na), shell_im(na);
    for (int s = 0;; ++s) {
        if (s > opt.max_shells)
            throw ConvergenceError("set_zeta: reciprocal sum needs more than " + std::to_string(opt.max_shells) +
                                   " shells");
        std::fill(shell_re.begin(), shell_re.end(), 0.0);
        std::fill(shell_im.begin(), shell_im.end(), 0.0);
        for_each_in_shell(n, s, [&](const LatticeCoord& m) {
            const RealVec k = L.reciprocal_point(m);
            if (s == 0) {
                // k = 0: only α∥ = 0 survives; G_{n-ν}^(α⊥)(0, r⊥/λ).
                for (std::size_t i = 0; i < na; ++i) {
                    if (!a_par[i].is_zero()) continue;
                    double v;
                    if (perp_zero) {
                        const double den = n - nu - perp_order[i];
                        if (d == n) {
                            if (den == 0.0) throw PoleError("set_zeta: pole of the k = 0 term at ν = n");
                            v = -2.0 / den;
                        } else if (!ex_perp[i] || ex_perp[i]->zero_value == 0.0) {
                            v = 0.0;
                        } else {
                            if (den == 0.0) throw PoleError("set_zeta: pole of the k = 0 term at ν = n - |α⊥|");
                            v = -2.0 * ex_perp[i]->zero_value / den;
                        }
                    } else {
                        v = 0.0;
                        for (const auto& t : ex_perp[i]->terms) {
                            const double p = t.eval(rperp_s.view());
                            if (p == 0.0) continue;
                            v += p * special::lower_crandall_r2(nu - n + 2.0 * t.shift, y2);
                        }
                    }
                    shell_re[i] += v;
                    abs_sum[i] += std::abs(v) * scale_recip[i];
                }
                return;
            }
            const double k2 = k.norm2() * lambda * lambda;
            for (int j = 0; j <= Jperp; ++j)
                btable[j] = special::incomplete_bessel_xy(n - nu - 2.0 * j, std::numbers::pi * k2,
                                                          std::numbers::pi * y2, opt.bessel)
                                .value;
            double theta = 0.0;
            for (std::size_t c = 0; c < n; ++c) theta += k[c] * r[c];
            theta *= 2.0 * std::numbers::pi;
            for (std::size_t i = 0; i < na; ++i) {
                double perp;
                if (d == n) {
                    perp = btable[0];
                } else {
                    perp = 0.0;
                    for (const auto& t : ex_perp[i]->terms) perp += t.eval(rperp_s.view()) * btable[t.shift];
                }
                if (perp == 0.0) continue;
                const int ap = a_par[i].order();
                double mono = std::pow(2.0 * std::numbers::pi, ap);
                for (std::size_t c = 0; c < n; ++c)
                    for (int e = 0; e < a_par[i][c]; ++e) mono *= k[c];
                const double phase = theta + 0.5 * std::numbers::pi * (ap % 4);
                const double re = mono * perp * std::cos(phase);
                const double im = mono * perp * std::sin(phase);
                shell_re[i] += re;
                shell_im[i] += im;
                abs_sum[i] += std::abs(mono * perp) * scale_recip[i];
            }
        });
        for (std::size_t i = 0; i < na; ++i) {
            recip_re[i] += shell_re[i];
            recip_im[i] += shell_im[i];
        }
        if (s == 0) continue;
        const double rho = lambda * L.sigma_min_reciprocal() * (s + 1);
        bool done = true;
        for (std::size_t i = 0; i < na && done; ++i) {
            const int ap = a_par[i].order();
            if (rho < detail::envelope_peak(ap)) {
                done = false;
                break;
            }
            double perp = 0.0;
            if (d == n) {
                perp = special::upper_crandall_r2(n - nu, rho * rho);
            } else {
                const double ry = std::sqrt(y2);
                for (const auto& t : ex_perp[i]->terms)
                    perp += std::abs(t.coefficient) * std::pow(ry, t.exponent.order()) *
                            special::upper_crandall_r2(n - nu - 2.0 * t.shift, rho * rho);
            }
            const double tail = 2.0 * shell_count(n, s + 1) * scale_recip[i] *
                                std::pow(2.0 * std::numbers::pi * rho / lambda, ap) * perp;
            const double sc = eps * current_scale(i);
            const double last = std::hypot(shell_re[i], shell_im[i]) * scale_recip[i];
            if (!(tail < sc) || !(last < sc)) done = false;
        }
        if (done) {
            res.recip_shells = s;
            break;
        }
    }

    const double pref = std::pow(std::numbers::pi / (lambda * lambda), 0.5 * nu) / std::tgamma(0.5 * nu);
    for (std::size_t i = 0; i < na; ++i) {
        const double bracket = scale_real[i] * (far_sum[i] - near_sum[i]) + scale_recip[i] * recip_re[i];
        const double z = pref * bracket;
        const double imag = std::abs(pref * scale_recip[i] * recip_im[i]) / (1.0 + std::abs(z));
        res.max_imag = std::max(res.max_imag, imag);
        const double bound = 1e-12 * std::max(1.0, 1e-2 * abs_sum[i] / std::max(std::abs(bracket), 1e-300));
        if (!(imag < bound))
            throw InvariantError("set_zeta: imaginary part of the reciprocal sum does not vanish (" +
                                 std::to_string(imag) + ")");
        res.values[i] = z;
    }
    return res;
}

/// Z^(α)_{L_far,ν}(r)
inline double set_zeta_deriv(const ZetaQuery& q) {
    const MultiIndex a[1] = {q.alpha};
    return set_zeta_derivs(q.lattice, q.near, q.nu, a, q.r, q.options).values[0];
}

}  // namespace zetalat
