#pragma once

// Brute-force references: truncated direct lattice sums of cuboid summands,
// the closed-form derivatives of |x|^{-ν}, error metrics and the N_cut
// convergence study.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zetalat/cuboid.hpp"
#include "zetalat/engine.hpp"
#include "zetalat/errors.hpp"
#include "zetalat/lattice.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/summand.hpp"
#include "zetalat/vec.hpp"

namespace zetalat {

struct ErrorMetrics {
    double abs = 0.0;
    double rel = 0.0;
    double combined = 0.0;
};

inline ErrorMetrics error_metrics(double value, double reference) {
    if (!std::isfinite(reference)) throw DomainError("error_metrics: reference must be finite");
    ErrorMetrics e;
    e.abs = std::abs(value - reference);
    e.rel = reference == 0.0 ? e.abs : e.abs / std::abs(reference);
    e.combined = std::min(e.abs, e.rel);
    return e;
}

/// ∂^α |x|^{-ν} = Σ_β (-1)^{|α-β|} (α choose β) (α-β)!/(α-2β)! (2x)^{α-2β}
///               (ν/2)_{|α-β|} |x|^{-ν-2|α-β|}.
inline double riesz_kernel_deriv(double nu, const MultiIndex& alpha, const RealVec& x) {
    const std::size_t d = x.size();
    if (alpha.size() != d) throw DomainError("riesz_kernel_deriv: dimension mismatch");
    const double r2 = x.norm2();
    if (r2 == 0.0) throw DomainError("riesz_kernel_deriv: x must be nonzero");
    MultiIndex beta(d);
    double sum = 0.0;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == d) {
            int k = 0;
            double c = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                const int a = alpha[j], b = beta[j], e = a - 2 * b;
                k += a - b;
                c *= static_cast<double>(binomial(a, b));
                for (int q = e + 1; q <= a - b; ++q) c *= q;
                for (int q = 0; q < e; ++q) c *= 2.0 * x[j];
            }
            for (int q = 0; q < k; ++q) c *= -(0.5 * nu + q);
            sum += c * std::pow(r2, -0.5 * nu - k);
            return;
        }
        for (int b = 0; 2 * b <= alpha[i]; ++b) {
            beta.set(i, b);
            self(self, i + 1);
        }
        beta.set(i, 0);
    };
    rec(rec, 0);
    return sum;
}

namespace detail {

inline void check_direct(const Cuboid& box, const RealVec& r, int n_cut) {
    if (n_cut < 0) throw DomainError("direct_sum: N_cut must be >= 0");
    if (box.dim() < 2 || r.size() != box.dim()) throw DomainError("direct_sum: need d >= 2 and r of dimension d");
}

}  // namespace detail

/// Σ S^(m)(r + z) over z ∈ {-N_cut..N_cut}² × {0}, as one product-set integral.
inline double direct_sum(double nu, const MultiIndex& m, const Cuboid& box, const RealVec& r, int n_cut,
                         const SummandOptions& opt = {}) {
    detail::check_direct(box, r, n_cut);
    std::vector<std::vector<double>> sh(box.dim(), std::vector<double>{0.0});
    for (int i = 0; i < 2; ++i) {
        sh[i].clear();
        for (int j = -n_cut; j <= n_cut; ++j) sh[i].push_back(j);
    }
    return summand_grid_sum(nu, m, r, box, sh, opt);
}

/// Same sum image by image, shell-major from the outermost shell inwards.
inline double direct_sum_shellwise(double nu, const MultiIndex& m, const Cuboid& box, const RealVec& r, int n_cut,
                                   const SummandOptions& opt = {}) {
    detail::check_direct(box, r, n_cut);
    double total = 0.0;
    for (int s = n_cut; s >= 0; --s) {
        double shell = 0.0;
        for_each_in_shell(2, s, [&](const LatticeCoord& z) {
            RealVec x = r;
            x[0] += z[0];
            x[1] += z[1];
            shell += summand_general(nu, m, x, box, opt);
        });
        total += shell;
    }
    return total;
}

struct ConvergenceRow {
    int n_cut;
    double value;
    double rel_error;
};

struct ConvergenceStudy {
    double reference = 0.0;
    std::vector<ConvergenceRow> rows;
    /// Least-squares fit log(rel) = log(C) + slope log(N_cut) over N_cut >= 2.
    double C = 0.0;
    double slope = 0.0;
};

/// Periodic reference on Z² × {0} with the {-1,0,1}² near field.
inline double lattice_reference(double nu, const MultiIndex& m, const Cuboid& box, const RealVec& r, int ell = 8) {
    const PotentialQuery q{nu, m, box, Lattice::integer(2, box.dim()), r, NearFieldSpec::cube(2, 1), ell};
    return potential(q);
}

inline ConvergenceStudy convergence_study(double nu, const MultiIndex& m, const Cuboid& box, const RealVec& r,
                                          const std::vector<int>& n_cuts, std::optional<double> reference = {}) {
    ConvergenceStudy st;
    st.reference = reference ? *reference : lattice_reference(nu, m, box, r);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (int n : n_cuts) {
        const double v = direct_sum(nu, m, box, r, n);
        const double rel = error_metrics(v, st.reference).rel;
        st.rows.push_back({n, v, rel});
        if (n >= 2 && rel > 0.0) {
            const double lx = std::log(static_cast<double>(n)), ly = std::log(rel);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
    }
    if (cnt >= 2) {
        st.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        st.C = std::exp((sy - st.slope * sx) / cnt);
    }
    return st;
}

}  // namespace zetalat
