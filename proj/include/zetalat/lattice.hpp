#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zetalat/errors.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

/// Integer lattice coordinates m ∈ Z^n.
using LatticeCoord = std::vector<int>;

/// Bravais lattice L = A Z^n × {0}^{d-n} embedded in R^d. Lattice points are
/// A m; the columns of A are the generators.
class Lattice {
public:
    Lattice(Eigen::MatrixXd A, std::size_t d) : A_(std::move(A)), d_(d) {
        const auto n = static_cast<std::size_t>(A_.rows());
        if (A_.rows() != A_.cols() || n == 0) throw DomainError("lattice generator must be a nonempty square matrix");
        if (d < n || d > kMaxDim) throw DomainError("lattice embedding dimension must satisfy n <= d <= 6");
        if (!A_.allFinite()) throw DomainError("lattice generator must be finite");
        volume_ = std::abs(A_.determinant());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_);
        const auto& sv = svd.singularValues();
        if (!(volume_ > 0.0) || sv(sv.size() - 1) <= 1e-14 * sv(0)) throw DomainError("lattice generator is singular");
        sigma_min_ = sv(sv.size() - 1);
        A_inv_T_ = A_.inverse().transpose();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd_r(A_inv_T_);
        sigma_min_recip_ = svd_r.singularValues()(sv.size() - 1);
        diagonal_ = A_.isDiagonal(0.0);
    }

    /// Z^n × {0}^{d-n}.
    static Lattice integer(std::size_t n, std::size_t d) { return Lattice(Eigen::MatrixXd::Identity(n, n), d); }

    /// Row-major n×n generator.
    static Lattice from_row_major(const std::vector<double>& a, std::size_t d) {
        const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a.size()))));
        if (n * n != a.size()) throw DomainError("lattice matrix must have a square number of entries");
        Eigen::MatrixXd A(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) A(i, j) = a[i * n + j];
        return Lattice(A, d);
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(A_.rows()); }
    std::size_t d() const noexcept { return d_; }
    const Eigen::MatrixXd& generator() const noexcept { return A_; }
    const Eigen::MatrixXd& reciprocal_generator() const noexcept { return A_inv_T_; }
    double volume() const noexcept { return volume_; }
    double sigma_min() const noexcept { return sigma_min_; }
    double sigma_min_reciprocal() const noexcept { return sigma_min_recip_; }
    bool is_diagonal() const noexcept { return diagonal_; }

    /// A m embedded in R^d.
    RealVec point(const LatticeCoord& m) const {
        RealVec z(d_);
        for (std::size_t i = 0; i < n(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n(); ++j) s += A_(i, j) * m[j];
            z[i] = s;
        }
        return z;
    }

    /// A^{-T} m in R^n.
    RealVec reciprocal_point(const LatticeCoord& m) const {
        RealVec k(n());
        for (std::size_t i = 0; i < n(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n(); ++j) s += A_inv_T_(i, j) * m[j];
            k[i] = s;
        }
        return k;
    }

    /// Lattice coordinates of the in-plane part of x, A^{-1} x∥.
    std::vector<double> coordinates_of(const RealVec& x) const {
        Eigen::VectorXd v(n());
        for (std::size_t i = 0; i < n(); ++i) v(i) = x[i];
        const Eigen::VectorXd m = A_inv_T_.transpose() * v;
        return {m.data(), m.data() + m.size()};
    }

private:
    Eigen::MatrixXd A_;
    Eigen::MatrixXd A_inv_T_;
    std::size_t d_;
    double volume_ = 0.0;
    double sigma_min_ = 0.0;
    double sigma_min_recip_ = 0.0;
    bool diagonal_ = false;
};

/// Reciprocal lattice A^{-T} Z^n with the same embedding dimension.
inline Lattice reciprocal_lattice(const Lattice& L) { return Lattice(L.reciprocal_generator(), L.d()); }

/// Finite symmetric set of lattice coordinates summed directly.
class NearFieldSpec {
public:
    /// The box {-R_1..R_1} × ... × {-R_n..R_n}.
    static NearFieldSpec box(std::vector<int> radii) {
        for (int r : radii)
            if (r < 0) throw DomainError("near-field box radii must be non-negative");
        NearFieldSpec s;
        s.radii_ = std::move(radii);
        s.is_box_ = true;
        LatticeCoord m(s.radii_.size());
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == m.size()) {
                s.points_.push_back(m);
                return;
            }
            for (int v = -s.radii_[i]; v <= s.radii_[i]; ++v) {
                m[i] = v;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
        return s;
    }

    static NearFieldSpec cube(std::size_t n, int radius) { return box(std::vector<int>(n, radius)); }

    /// Explicit list; must be closed under negation.
    static NearFieldSpec explicit_points(std::vector<LatticeCoord> pts) {
        std::set<LatticeCoord> set(pts.begin(), pts.end());
        if (set.size() != pts.size()) throw InvariantError("near-field list contains duplicates");
        for (const auto& p : pts) {
            LatticeCoord q(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) q[i] = -p[i];
            if (!set.count(q)) throw InvariantError("near-field set must be symmetric under negation");
            if (p.size() != pts.front().size()) throw DomainError("near-field coordinates have mixed dimension");
        }
        NearFieldSpec s;
        s.points_.assign(set.begin(), set.end());
        return s;
    }

    const std::vector<LatticeCoord>& points() const noexcept { return points_; }
    bool is_box() const noexcept { return is_box_; }
    const std::vector<int>& radii() const noexcept { return radii_; }

    bool contains(const LatticeCoord& m) const {
        if (is_box_) {
            for (std::size_t i = 0; i < m.size(); ++i)
                if (std::abs(m[i]) > radii_[i]) return false;
            return true;
        }
        return std::binary_search(points_.begin(), points_.end(), m);
    }

    /// Largest ∞-norm over the set (-1 when empty).
    int max_shell() const {
        int s = -1;
        for (const auto& p : points_) {
            int t = 0;
            for (int v : p) t = std::max(t, std::abs(v));
            s = std::max(s, t);
        }
        return s;
    }

    void check_dimension(std::size_t n) const {
        for (const auto& p : points_)
            if (p.size() != n) throw DomainError("near-field coordinates do not match the lattice dimension");
    }

private:
    std::vector<LatticeCoord> points_;
    std::vector<int> radii_;
    bool is_box_ = false;
};

/// Calls f(m) for every m ∈ Z^n with ‖m‖_∞ = s, in lexicographic order.
template <class F>
void for_each_in_shell(std::size_t n, int s, F&& f) {
    LatticeCoord m(n);
    auto rec = [&](auto&& self, std::size_t i, bool on_boundary) -> void {
        if (i == n) {
            if (on_boundary || s == 0) f(static_cast<const LatticeCoord&>(m));
            return;
        }
        if (!on_boundary && i + 1 == n) {
            m[i] = -s;
            self(self, i + 1, true);
            if (s != 0) {
                m[i] = s;
                self(self, i + 1, true);
            }
            return;
        }
        for (int v = -s; v <= s; ++v) {
            m[i] = v;
            self(self, i + 1, on_boundary || std::abs(v) == s);
        }
    };
    rec(rec, 0, false);
}

/// Number of points of Z^n on shell s.
inline double shell_count(std::size_t n, int s) {
    if (s == 0) return 1.0;
    return std::pow(2.0 * s + 1.0, static_cast<double>(n)) - std::pow(2.0 * s - 1.0, static_cast<double>(n));
}

}  // namespace zetalat
