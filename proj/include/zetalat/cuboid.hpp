#pragma once

// Closed forms for a homogeneous axis-aligned cuboid with the Newtonian
// kernel |r|^{-1}: the potential Φ, the six second-order interaction
// potentials U^(m) of two congruent boxes, averaged field, demagnetizing
// factors and mutual energy.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "zetalat/errors.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

/// Axis-aligned box Π(-c_i/2, c_i/2) centered at the origin.
struct Cuboid {
    RealVec c;

    explicit Cuboid(RealVec edges) : c(std::move(edges)) {
        for (double v : c)
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("cuboid edge lengths must be finite and > 0");
    }

    std::size_t dim() const noexcept { return c.size(); }
    double volume() const noexcept {
        double v = 1.0;
        for (double e : c) v *= e;
        return v;
    }
};

struct DemagFactors {
    double Dx = 0.0, Dy = 0.0, Dz = 0.0;
};

/// μ₀ in N/A².
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;

namespace detail {

// artanh(x/R) with R² = x² + p2, written without the R - |x| cancellation.
inline double artanh_over_r(double x, double R, double p2) {
    if (x == 0.0) return 0.0;
    return std::copysign(std::log((R + std::abs(x)) / std::sqrt(p2)), x);
}

// prefactor * arctan(num / den), zero whenever the prefactor is zero.
inline double atan_term(double prefactor, double num, double den) {
    if (prefactor == 0.0) return 0.0;
    return prefactor * std::atan(num / den);
}

inline double artanh_term(double prefactor, double x, double R, double p2) {
    if (prefactor == 0.0) return 0.0;
    return prefactor * artanh_over_r(x, R, p2);
}

inline void check3(const RealVec& r, const Cuboid& box) {
    if (r.size() != 3 || box.dim() != 3) throw DomainError("closed-form cuboid kernels are three-dimensional");
}

// Tensor second difference Σ w_i w_j w_k F(x + i a, y + j b, z + k c) with
// weights (1, -2, 1), evaluated in the given argument order.
template <class F>
double second_difference(F&& f, const std::array<double, 3>& x, const std::array<double, 3>& h,
                         const std::array<int, 3>& order) {
    static constexpr int w[3] = {1, -2, 1};
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                const std::array<double, 3> p = {x[0] + (i - 1) * h[0], x[1] + (j - 1) * h[1], x[2] + (k - 1) * h[2]};
                s += w[i] * w[j] * w[k] * f(p[order[0]], p[order[1]], p[order[2]]);
            }
    return s;
}

}  // namespace detail

inline double aux_F1(double u, double v, double w) {
    const double u2 = u * u, v2 = v * v, w2 = w * w;
    const double R = std::sqrt(u2 + v2 + w2);
    if (R == 0.0) return 0.0;
    using namespace detail;
    return -0.5 * (atan_term(u2, v * w, u * R) + atan_term(v2, w * u, v * R) + atan_term(w2, u * v, w * R)) +
           artanh_term(v * w, u, R, v2 + w2) + artanh_term(w * u, v, R, w2 + u2) + artanh_term(u * v, w, R, u2 + v2);
}

inline double aux_F2(double u, double v, double w) {
    const double u2 = u * u, v2 = v * v, w2 = w * w;
    const double R = std::sqrt(u2 + v2 + w2);
    if (R == 0.0) return 0.0;
    using namespace detail;
    return -v * w * R / 3.0 - atan_term(u2 * u / 6.0, v * w, u * R) - atan_term(0.5 * u * v2, u * w, v * R) -
           atan_term(0.5 * u * w2, u * v, w * R) + artanh_term(u * v * w, u, R, v2 + w2) +
           artanh_term((3.0 * u2 * w - w2 * w) / 6.0, v, R, u2 + w2) +
           artanh_term((3.0 * u2 * v - v2 * v) / 6.0, w, R, u2 + v2);
}

inline double aux_F3(double u, double v, double w) {
    const double u2 = u * u, v2 = v * v, w2 = w * w;
    const double R2 = u2 + v2 + w2;
    const double R = std::sqrt(R2);
    if (R == 0.0) return 0.0;
    using namespace detail;
    return (3.0 * u2 - R2) / 6.0 * R - atan_term(u * v * w, v * w, u * R) +
           artanh_term(0.5 * v * (w2 - u2), v, R, u2 + w2) + artanh_term(0.5 * w * (v2 - u2), w, R, u2 + v2);
}

/// Newtonian potential ∫_Ω |r - r'|^{-1} dr' of the box.
inline double phi_potential(const RealVec& r, const Cuboid& box) {
    detail::check3(r, box);
    double s = 0.0;
    for (int i = -1; i <= 1; i += 2)
        for (int j = -1; j <= 1; j += 2)
            for (int k = -1; k <= 1; k += 2)
                s += i * j * k * aux_F1(r[0] + i * box.c[0] / 2, r[1] + j * box.c[1] / 2, r[2] + k * box.c[2] / 2);
    return s;
}

/// U^(m)(r) = ∂_r^m ∫_Ω ∫_{Ω+r} |r' - r''|^{-1} dr' dr'' for |m| = 2.
inline double u_second(const MultiIndex& m, const RealVec& r, const Cuboid& box) {
    detail::check3(r, box);
    if (m.size() != 3 || m.order() != 2) throw DomainError("u_second: m must be a 3D multi-index with |m| = 2");
    const std::array<double, 3> x = {r[0], r[1], r[2]};
    const std::array<double, 3> h = {box.c[0], box.c[1], box.c[2]};
    auto f2 = [](double u, double v, double w) { return aux_F2(u, v, w); };
    auto f3 = [](double u, double v, double w) { return aux_F3(u, v, w); };
    if (m == MultiIndex{1, 1, 0}) return detail::second_difference(f2, x, h, {2, 0, 1});
    if (m == MultiIndex{0, 1, 1}) return detail::second_difference(f2, x, h, {0, 1, 2});
    if (m == MultiIndex{1, 0, 1}) return detail::second_difference(f2, x, h, {1, 2, 0});
    if (m == MultiIndex{2, 0, 0}) return detail::second_difference(f3, x, h, {0, 1, 2});
    if (m == MultiIndex{0, 2, 0}) return detail::second_difference(f3, x, h, {1, 2, 0});
    return detail::second_difference(f3, x, h, {2, 0, 1});
}

/// The six U^(m) at r arranged as the symmetric field matrix.
inline std::array<std::array<double, 3>, 3> field_matrix(const RealVec& r, const Cuboid& box) {
    const double u200 = u_second({2, 0, 0}, r, box), u020 = u_second({0, 2, 0}, r, box),
                 u002 = u_second({0, 0, 2}, r, box);
    const double u110 = u_second({1, 1, 0}, r, box), u101 = u_second({1, 0, 1}, r, box),
                 u011 = u_second({0, 1, 1}, r, box);
    return {{{-u020 - u002, u110, u101}, {u110, -u200 - u002, u011}, {u101, u011, -u200 - u020}}};
}

/// Field of the source box (magnetization M, A/m) averaged over Ω + r, in T.
inline RealVec b_avg(const RealVec& r, const RealVec& M, const Cuboid& box) {
    if (M.size() != 3) throw DomainError("b_avg: magnetization must have 3 components");
    const auto mat = field_matrix(r, box);
    const double pref = kMu0 / (4.0 * std::numbers::pi * box.volume());
    RealVec b(3);
    for (int j = 0; j < 3; ++j) b[j] = pref * (M[0] * mat[0][j] + M[1] * mat[1][j] + M[2] * mat[2][j]);
    return b;
}

inline DemagFactors demag_factors(const Cuboid& box) {
    const RealVec o(3);
    const double u200 = u_second({2, 0, 0}, o, box), u020 = u_second({0, 2, 0}, o, box),
                 u002 = u_second({0, 0, 2}, o, box);
    const double den = 4.0 * std::numbers::pi * box.volume();
    return {1.0 + (u020 + u002) / den, 1.0 + (u200 + u002) / den, 1.0 + (u200 + u020) / den};
}

/// Mutual energy in J of the source box and the box displaced by r.
inline double mutual_energy(const RealVec& r, const RealVec& M_src, const RealVec& M_disp, const Cuboid& box) {
    if (M_disp.size() != 3) throw DomainError("mutual_energy: magnetization must have 3 components");
    const RealVec b = b_avg(r, M_src, box);
    return box.volume() * (b[0] * M_disp[0] + b[1] * M_disp[1] + b[2] * M_disp[2]);
}

}  // namespace zetalat
