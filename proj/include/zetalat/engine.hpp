#pragma once

// Periodic potential of a cuboid,
//
//   U^(m)(r) = Σ_{z ∈ L_near} S^(m)(r + z) + Σ_α coeff(α) Z^(m+2α)_{L_far,ν}(r),
//   coeff(α) = Π_i 2 c_i^{2α_i+2} / (2α_i+2)!,
//
// with the Taylor series of the shape operator truncated at |2α| ≤ ℓ.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "zetalat/cuboid.hpp"
#include "zetalat/errors.hpp"
#include "zetalat/lattice.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/set_zeta.hpp"
#include "zetalat/special/zeta.hpp"
#include "zetalat/summand.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

inline constexpr int kMaxTaylorOrder = 20;

struct PotentialQuery {
    double nu = 1.0;
    MultiIndex m;
    Cuboid box;
    Lattice lattice;
    RealVec r;
    NearFieldSpec near;
    /// Even cap on the Taylor derivative order 2|α|.
    int ell_max = 8;
    /// Relative size below which an order no longer raises chosen_order.
    double eps = 1e-16;
    ZetaOptions zeta;
    SummandOptions summand;
};

struct OrderContribution {
    int order = 0;  // 2|α|
    double value = 0.0;
};

struct CorrectionBreakdown {
    std::vector<OrderContribution> orders;
    int chosen_order = 0;
    double total = 0.0;
    /// Whether dist_∞(0, L_far + 2Ω) > η d diam(Ω) > ‖r‖_∞ holds for some η > 1.
    bool corollary_holds = false;
    /// dist_∞(0, L_far + 2Ω) / (d diam(Ω)).
    double eta = 0.0;
};

struct PotentialResult {
    double value = 0.0;
    double near_sum = 0.0;
    CorrectionBreakdown correction;
    /// error_estimate(correction), NaN when fewer than two orders were used.
    double estimate = std::numeric_limits<double>::quiet_NaN();
};

struct Coefficient {
    MultiIndex alpha;
    double value;
};

/// Terms of the cuboid shape operator with |2α| ≤ ℓ, ordered by |α|.
inline std::vector<Coefficient> cuboid_operator_coefficients(const Cuboid& box, int ell) {
    if (ell < 0 || ell % 2 != 0) throw DomainError("cuboid_operator_coefficients: ℓ must be even and >= 0");
    std::vector<Coefficient> out;
    for (const auto& a : multi_indices_up_to(box.dim(), ell / 2)) {
        double v = 1.0;
        for (std::size_t i = 0; i < box.dim(); ++i) {
            const int p = 2 * a[i] + 2;
            double term = 2.0;
            for (int k = 1; k <= p; ++k) term *= box.c[i] / k;
            v *= term;
        }
        out.push_back({a, v});
    }
    return out;
}

namespace detail {

inline void check_query(const PotentialQuery& q) {
    const std::size_t d = q.lattice.d();
    if (q.box.dim() != d || q.m.size() != d || q.r.size() != d)
        throw DomainError("potential: box, m and r must have the embedding dimension d=" + std::to_string(d));
    if (!std::isfinite(q.nu)) throw DomainError("potential: ν must be finite");
    if (!q.r.all_finite()) throw DomainError("potential: r must be finite");
    if (q.ell_max < 0 || q.ell_max % 2 != 0 || q.ell_max > kMaxTaylorOrder)
        throw InvariantError("potential: ℓ_max must be even and in [0, " + std::to_string(kMaxTaylorOrder) + "]");
    if (q.m.order() + q.ell_max > kMaxDerivOrder)
        throw DomainError("potential: |m| + ℓ_max exceeds the supported derivative order");
    if (!(q.eps >= 0.0 && q.eps < 1.0)) throw DomainError("potential: ε must lie in [0, 1)");
    q.near.check_dimension(q.lattice.n());
}

// Calls f(m, z) for far lattice points z = A m with ‖m‖_∞ ≤ s_max.
template <class F>
void for_each_far_point(const Lattice& L, const NearFieldSpec& near, int s_max, F&& f) {
    for (int s = 0; s <= s_max; ++s)
        for_each_in_shell(L.n(), s, [&](const LatticeCoord& m) {
            if (!near.contains(m)) f(m, L.point(m));
        });
}

// Shell radius beyond which every lattice point has ‖A m‖_∞ > reach.
inline int shell_bound(const Lattice& L, double reach) {
    const double s = reach * std::sqrt(static_cast<double>(L.n())) / L.sigma_min();
    if (s > 1e6) throw DomainError("potential: geometry too large relative to the lattice");
    return static_cast<int>(std::ceil(s)) + 1;
}

/// Throws InvariantError if r lies in the closure of L_far + 2Ω.
inline void check_far_distance(const Lattice& L, const NearFieldSpec& near, const Cuboid& box, const RealVec& r) {
    const std::size_t n = L.n(), d = L.d();
    for (std::size_t i = n; i < d; ++i)
        if (std::abs(r[i]) > box.c[i]) return;
    double reach = 0.0;
    for (std::size_t i = 0; i < n; ++i) reach = std::max(reach, std::abs(r[i]) + box.c[i]);
    for_each_far_point(L, near, shell_bound(L, reach), [&](const LatticeCoord& m, const RealVec& z) {
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(r[i] - z[i]) > box.c[i]) return;
        std::string s;
        for (int v : m) s += (s.empty() ? "" : ",") + std::to_string(v);
        throw InvariantError("dist_∞(r, L_far + 2Ω) = 0: r touches the far-field image at lattice coordinates (" + s +
                             ")");
    });
}

// dist_∞(0, L_far + 2Ω).
inline double far_distance(const Lattice& L, const NearFieldSpec& near, const Cuboid& box) {
    const std::size_t n = L.n();
    double cmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) cmax = std::max(cmax, box.c[i]);
    double best = std::numeric_limits<double>::infinity();
    const int start = std::max(near.max_shell(), 0);
    for (int s = 0;; ++s) {
        if (s > start && L.sigma_min() * s / std::sqrt(static_cast<double>(n)) - cmax > best) break;
        if (s > start + 1000) break;
        for_each_in_shell(n, s, [&](const LatticeCoord& m) {
            if (near.contains(m)) return;
            const RealVec z = L.point(m);
            double dist = 0.0;
            for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, std::abs(z[i]) - box.c[i]);
            best = std::min(best, dist);
        });
    }
    return best;
}

// |last nonzero order| and the per-order decay rate over orders ≤ max_order:
// sqrt(|last| / |second to last but one|) with three or more nonzero orders,
// |last| / |previous| with two, NaN with one.
inline std::pair<double, double> order_decay(const std::vector<OrderContribution>& orders, int max_order) {
    double last = 0.0, prev = 0.0, prev2 = 0.0;
    int nonzero = 0;
    for (const auto& o : orders) {
        if (o.value == 0.0 || o.order > max_order) continue;
        prev2 = prev;
        prev = last;
        last = std::abs(o.value);
        ++nonzero;
    }
    if (nonzero < 2) return {last, std::numeric_limits<double>::quiet_NaN()};
    return {last, nonzero == 2 ? last / prev : std::sqrt(last / prev2)};
}

inline bool in_closed_zone(const RealVec& x, const Cuboid& box) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > 2.0 * box.c[i]) return false;
    return true;
}

inline bool uses_closed_forms(const PotentialQuery& q) {
    return q.nu == 1.0 && q.m.order() == 2 && q.box.dim() == 3;
}

// Near sum for a diagonal lattice and box near field: factorized integrals
// over product sets, with the closed forms on the sub-box of images within
// 2c of r on every axis.
inline double near_sum_factorized(const PotentialQuery& q) {
    const std::size_t n = q.lattice.n(), d = q.lattice.d();
    const auto& radii = q.near.radii();
    std::vector<int> lo(d, 0), hi(d, 0);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = -radii[i];
        hi[i] = radii[i];
    }
    auto pitch = [&](std::size_t i) { return i < n ? q.lattice.generator()(i, i) : 0.0; };
    auto shifts = [&](std::size_t i, int a, int b) {
        std::vector<double> s;
        for (int j = a; j <= b; ++j) s.push_back(j * pitch(i));
        return s;
    };
    if (!uses_closed_forms(q)) {
        std::vector<std::vector<double>> sh(d);
        for (std::size_t i = 0; i < d; ++i) sh[i] = shifts(i, lo[i], hi[i]);
        return summand_grid_sum(q.nu, q.m, q.r, q.box, sh, q.summand);
    }
    // Zone index range per axis, clipped to the near box.
    std::vector<int> zlo(d), zhi(d);
    bool zone_empty = false;
    for (std::size_t i = 0; i < d; ++i) {
        zlo[i] = hi[i] + 1;
        zhi[i] = lo[i] - 1;
        for (int j = lo[i]; j <= hi[i]; ++j)
            if (std::abs(q.r[i] + j * pitch(i)) <= 2.0 * q.box.c[i]) {
                zlo[i] = std::min(zlo[i], j);
                zhi[i] = std::max(zhi[i], j);
            }
        if (zlo[i] > zhi[i]) zone_empty = true;
    }
    double total = 0.0;
    if (zone_empty) {
        std::vector<std::vector<double>> sh(d);
        for (std::size_t i = 0; i < d; ++i) sh[i] = shifts(i, lo[i], hi[i]);
        return summand_grid_sum(q.nu, q.m, q.r, q.box, sh, q.summand);
    }
    std::vector<int> j(d);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == d) {
            RealVec x(d);
            for (std::size_t k = 0; k < d; ++k) x[k] = q.r[k] + j[k] * pitch(k);
            total += u_second(q.m, x, q.box);
            return;
        }
        for (j[i] = zlo[i]; j[i] <= zhi[i]; ++j[i]) self(self, i + 1);
    };
    rec(rec, 0);
    // Box minus zone as slabs: axis i outside the zone range, axes < i inside.
    for (std::size_t i = 0; i < d; ++i) {
        for (int side = 0; side < 2; ++side) {
            const int a = side == 0 ? lo[i] : zhi[i] + 1;
            const int b = side == 0 ? zlo[i] - 1 : hi[i];
            if (a > b) continue;
            std::vector<std::vector<double>> sh(d);
            for (std::size_t k = 0; k < d; ++k) {
                if (k < i) sh[k] = shifts(k, zlo[k], zhi[k]);
                else if (k == i) sh[k] = shifts(k, a, b);
                else sh[k] = shifts(k, lo[k], hi[k]);
            }
            total += summand_grid_sum(q.nu, q.m, q.r, q.box, sh, q.summand);
        }
    }
    return total;
}

inline double near_sum_pointwise(const PotentialQuery& q) {
    const bool closed = uses_closed_forms(q);
    double total = 0.0;
    for (const auto& m : q.near.points()) {
        RealVec x = q.lattice.point(m);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += q.r[i];
        total += (closed && in_closed_zone(x, q.box)) ? u_second(q.m, x, q.box)
                                                      : summand_general(q.nu, q.m, x, q.box, q.summand);
    }
    return total;
}

}  // namespace detail

/// Σ_{z ∈ L_near} S^(m)(r + z).
inline double near_field_sum(const PotentialQuery& q) {
    detail::check_query(q);
    if (q.near.points().empty()) return 0.0;
    if (q.lattice.is_diagonal() && q.near.is_box()) return detail::near_sum_factorized(q);
    return detail::near_sum_pointwise(q);
}

/// D_Ω Z^(m)_{L_far,ν}(r) with per-order partial sums.
inline CorrectionBreakdown correction_term(const PotentialQuery& q) {
    detail::check_query(q);
    detail::check_far_distance(q.lattice, q.near, q.box, q.r);
    const auto coeffs = cuboid_operator_coefficients(q.box, q.ell_max);
    std::vector<MultiIndex> idx;
    idx.reserve(coeffs.size());
    for (const auto& c : coeffs) idx.push_back(q.m + c.alpha.scaled(2));
    const auto z = set_zeta_derivs(q.lattice, q.near, q.nu, idx, q.r, q.zeta);

    CorrectionBreakdown br;
    std::vector<double> partial(q.ell_max / 2 + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) partial[coeffs[i].alpha.order()] += coeffs[i].value * z.values[i];
    for (std::size_t k = 0; k < partial.size(); ++k) {
        br.orders.push_back({static_cast<int>(2 * k), partial[k]});
        br.total += partial[k];
    }
    // Symmetry can zero a single order, so the cut is taken after the last significant one.
    for (std::size_t k = 0; k < partial.size(); ++k)
        if (k == 0 || std::abs(partial[k]) >= q.eps * std::abs(br.total)) br.chosen_order = static_cast<int>(2 * k);
    // Up to the first negligible order, the contributions must decay.
    const auto [last, ratio] = detail::order_decay(br.orders, br.chosen_order + 2);
    if (ratio >= 1.0 && last > 1e-15 * std::abs(br.total))
        throw ConvergenceError("correction_term: Taylor orders are not decreasing (|order " +
                               std::to_string(br.chosen_order) + "| = " + std::to_string(last) +
                               "); enlarge the near field");

    const double D = detail::far_distance(q.lattice, q.near, q.box);
    const double diam = q.box.c.norm();
    const double dd = static_cast<double>(q.box.dim()) * diam;
    br.eta = D / dd;
    br.corollary_holds = D > dd && D > q.r.norm_inf();
    return br;
}

/// |last| ρ/(1-ρ) with ρ the per-order decay rate of the nonzero partials, capped at 0.9.
inline double error_estimate(const CorrectionBreakdown& br) {
    if (br.orders.size() < 2) throw DomainError("error_estimate: need at least two computed orders");
    const auto [last, ratio] = detail::order_decay(br.orders, std::numeric_limits<int>::max());
    if (last == 0.0) return 0.0;
    if (std::isnan(ratio)) return last;
    if (ratio >= 1.0)
        throw ConvergenceError("error_estimate: order contributions do not decay (ratio " + std::to_string(ratio) + ")");
    const double rho = std::min(ratio, 0.9);
    return last * rho / (1.0 - rho);
}

inline PotentialResult potential_detailed(const PotentialQuery& q) {
    PotentialResult res;
    res.correction = correction_term(q);
    res.near_sum = near_field_sum(q);
    res.value = res.near_sum + res.correction.total;
    // Orders past the first negligible one are rounding noise.
    CorrectionBreakdown used = res.correction;
    std::erase_if(used.orders, [&](const OrderContribution& o) { return o.order > used.chosen_order + 2; });
    if (used.orders.size() >= 2) res.estimate = error_estimate(used);
    return res;
}

/// U^(m)(r)
inline double potential(const PotentialQuery& q) { return potential_detailed(q).value; }

struct DemagPreset {
    int near_radius;
    int ell;
};

/// Near-field radius and Taylor order used for the periodic demag factor.
inline DemagPreset demag_preset(int N) { return N == 2 ? DemagPreset{26, 10} : DemagPreset{22, 8}; }

/// Cube of edge 1/N on Z² × {0}, as a potential query at r = 0.
inline PotentialQuery demag_query(int N, int near_radius, int ell, const MultiIndex& m) {
    if (N < 1) throw DomainError("demag_pbc: N must be >= 1");
    if (near_radius < 0) throw DomainError("demag_pbc: near-field radius must be >= 0");
    const double c = 1.0 / N;
    return PotentialQuery{1.0, m, Cuboid(RealVec{c, c, c}), Lattice::integer(2, 3), RealVec(3),
                          NearFieldSpec::cube(2, near_radius), ell};
}

/// D_z of the periodic layer of cubes with edge 1/N.
inline double demag_pbc(int N, int near_radius, int ell) {
    const double u200 = potential(demag_query(N, near_radius, ell, {2, 0, 0}));
    const double u020 = potential(demag_query(N, near_radius, ell, {0, 2, 0}));
    const double c = 1.0 / N;
    return 1.0 + (u200 + u020) / (4.0 * std::numbers::pi * c * c * c);
}

inline double demag_pbc(int N) {
    const auto p = demag_preset(N);
    return demag_pbc(N, p.near_radius, p.ell);
}

/// Z_{Z²,3}(0) = 4 β(3/2) ζ(3/2).
inline double square_lattice_zeta3() { return 4.0 * special::dirichlet_beta(1.5) * special::riemann_zeta(1.5); }

/// 1/3 + Z_{Z²,3}(0)/(4π N³).
inline double asymptotic_dz(int N) {
    if (N < 1) throw DomainError("asymptotic_dz: N must be >= 1");
    const double n3 = static_cast<double>(N) * N * N;
    return 1.0 / 3.0 + square_lattice_zeta3() / (4.0 * std::numbers::pi * n3);
}

}  // namespace zetalat
