#pragma once

// Derivatives of the Crandall and incomplete Bessel functions as finite sums
// of the same functions with shifted order:
//
//   G_ν^(α)(r)   = Σ_β p_{α,β}(r) G_{ν+2|α|-2|β|}(r)
//   g_ν^(α)(r)   = Σ_β p_{α,β}(r) g_{ν+2|α|-2|β|}(r)
//   G_ν^(α)(k,r) = Σ_β p_{α,β}(r) G_{ν-2|α|+2|β|}(k,r)      (derivative in r)
//
// with p_{α,β}(r) = (-π)^{|α-β|} (α choose β) (α-β)!/(α-2β)! (2r)^{α-2β},
// summed over all β with 2β <= α componentwise.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "zetalat/errors.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/special/bessel.hpp"
#include "zetalat/special/crandall.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

struct DerivTerm {
    MultiIndex beta;
    MultiIndex exponent;  // α - 2β
    double coefficient;   // p_{α,β}(r) / r^{α-2β}
    int shift;            // |α| - |β|

    /// p_{α,β}(r)
    double eval(std::span<const double> r) const noexcept {
        double v = coefficient;
        for (std::size_t i = 0; i < exponent.size(); ++i)
            for (int e = 0; e < exponent[i]; ++e) v *= r[i];
        return v;
    }
};

struct DerivExpansion {
    MultiIndex alpha;
    std::vector<DerivTerm> terms;
    int max_shift = 0;
    /// χ(α) p_{α,α/2}(0)
    double zero_value = 0.0;
};

namespace detail {

inline void check_alpha(const MultiIndex& alpha) {
    if (alpha.order() > kMaxDerivOrder)
        throw DomainError("derivative order |α|=" + std::to_string(alpha.order()) + " exceeds the supported maximum " +
                          std::to_string(kMaxDerivOrder));
}

inline DerivExpansion build_expansion(const MultiIndex& alpha) {
    check_alpha(alpha);
    const std::size_t d = alpha.size();
    DerivExpansion ex;
    ex.alpha = alpha;
    MultiIndex beta(d);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == d) {
            const MultiIndex amb = alpha - beta;
            const MultiIndex e = amb - beta;
            double c = std::pow(-std::numbers::pi, amb.order()) * static_cast<double>(multinomial(alpha, beta)) *
                       std::ldexp(1.0, e.order());
            for (std::size_t j = 0; j < d; ++j)
                for (int k = e[j] + 1; k <= amb[j]; ++k) c *= k;
            ex.terms.push_back({beta, e, c, amb.order()});
            ex.max_shift = std::max(ex.max_shift, amb.order());
            return;
        }
        for (int b = 0; 2 * b <= alpha[i]; ++b) {
            beta.set(i, b);
            self(self, i + 1);
        }
        beta.set(i, 0);
    };
    rec(rec, 0);
    if (alpha.all_even()) {
        const MultiIndex h = alpha.half();
        for (const auto& t : ex.terms)
            if (t.beta == h) ex.zero_value = t.coefficient;
    }
    return ex;
}

}  // namespace detail

/// Cached term list for α; safe for concurrent callers.
inline const DerivExpansion& deriv_expansion(const MultiIndex& alpha) {
    static std::mutex mu;
    static std::map<MultiIndex, std::unique_ptr<const DerivExpansion>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(alpha);
    if (it == cache.end())
        it = cache.emplace(alpha, std::make_unique<const DerivExpansion>(detail::build_expansion(alpha))).first;
    return *it->second;
}

/// p_{α,β}(r)
inline double monomial_p(const MultiIndex& alpha, const MultiIndex& beta, const RealVec& r) {
    if (alpha.size() != beta.size() || alpha.size() != r.size()) throw DomainError("monomial_p: dimension mismatch");
    if (!beta.scaled(2).leq(alpha)) throw DomainError("monomial_p: need 2β <= α componentwise");
    for (const auto& t : deriv_expansion(alpha).terms)
        if (t.beta == beta) return t.eval(r.view());
    throw DomainError("monomial_p: β not in the expansion of α");
}

/// G_ν^(α)(r)
inline double deriv_upper_crandall(double nu, const MultiIndex& alpha, const RealVec& r) {
    if (alpha.size() != r.size()) throw DomainError("deriv_upper_crandall: dimension mismatch");
    const auto& ex = deriv_expansion(alpha);
    const int a = alpha.order();
    if (r.is_zero()) {
        if (nu + a == 0.0) throw PoleError("deriv_upper_crandall: pole at ν = -|α|, r = 0");
        return -2.0 * ex.zero_value / (nu + a);
    }
    const double r2 = r.norm2();
    double s = 0.0;
    for (const auto& t : ex.terms) s += t.eval(r.view()) * special::upper_crandall_r2(nu + 2.0 * t.shift, r2);
    return s;
}

/// g_ν^(α)(r)
inline double deriv_lower_crandall(double nu, const MultiIndex& alpha, const RealVec& r) {
    if (alpha.size() != r.size()) throw DomainError("deriv_lower_crandall: dimension mismatch");
    const auto& ex = deriv_expansion(alpha);
    const int a = alpha.order();
    if (r.is_zero()) {
        if (nu + a == 0.0) throw PoleError("deriv_lower_crandall: pole at ν = -|α|, r = 0");
        return 2.0 * ex.zero_value / (nu + a);
    }
    const double r2 = r.norm2();
    double s = 0.0;
    for (const auto& t : ex.terms) s += t.eval(r.view()) * special::lower_crandall_r2(nu + 2.0 * t.shift, r2);
    return s;
}

/// G_ν^(α)(k, r), derivative acting on r.
inline double deriv_incomplete_bessel(double nu, const MultiIndex& alpha, const RealVec& k, const RealVec& r,
                                      const special::BesselOptions& opt = {}) {
    if (alpha.size() != r.size()) throw DomainError("deriv_incomplete_bessel: dimension mismatch");
    const auto& ex = deriv_expansion(alpha);
    const int a = alpha.order();
    if (k.is_zero() && r.is_zero()) {
        if (nu - a == 0.0) throw PoleError("deriv_incomplete_bessel: pole at ν = |α|, k = r = 0");
        return -2.0 * ex.zero_value / (nu - a);
    }
    const double k2 = k.norm2(), r2 = r.norm2();
    double s = 0.0;
    for (const auto& t : ex.terms) {
        const double p = t.eval(r.view());
        if (p == 0.0) continue;
        s += p * special::incomplete_bessel_r2(nu - 2.0 * t.shift, k2, r2, opt);
    }
    return s;
}

}  // namespace zetalat
