// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "suites.hpp"
#include "zetalat/zetalat.hpp"

using namespace zetalat;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const suites::RunSettings kExact{1, true};

// ---------------------------------------------------------------- 1

void bessel_accuracy() {
    const auto recs = suites::bessel_grid({1, false});
    std::vector<double> err, ns;
    for (const auto& r : recs) {
        err.push_back(suites::bessel_combined_error(r));
        ns.push_back(static_cast<double>(r.wall_ns));
    }
    const double mx = *std::max_element(err.begin(), err.end());
    const double med = median(err), med_us = median(ns) * 1e-3;
    report(1, "incomplete Bessel accuracy", mx < 5e-15 && med < 5e-17 && med_us <= 10.0,
           fmt("%zu points, max %.3e (< 5e-15), median %.3e (< 5e-17), median time %.3f us (<= 10)", err.size(), mx,
               med, med_us));
}

// ---------------------------------------------------------------- 2

void demag_table() {
    struct Row {
        int N;
        double tabulated;
    };
    const Row rows[] = {{2, 0.42220496345400017334},
                        {5, 0.33908248769098045966},
                        {10, 0.33405219171772493459},
                        {50, 0.33333908431532838944},
                        {100, 0.33333405220610433572}};
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const double d = demag_pbc(r.N);
        const double rel = std::abs(d - r.tabulated) / r.tabulated;
        ok = ok && rel <= 1e-12;
        detail += fmt("N=%d %.17g (rel %.1e) ", r.N, d, rel);
    }
    const double one = demag_pbc(1);
    ok = ok && std::abs(one - 1.0) <= 1e-12;
    detail += fmt("N=1 %.17g", one);
    report(2, "periodic demag table", ok, detail);
}

// ---------------------------------------------------------------- 3

void direct_vs_zeta() {
    const auto recs = suites::direct_vs_zeta(kExact);
    double mx = 0.0;
    for (const auto& r : recs) mx = std::max(mx, r.rel_err);
    report(3, "zeta vs direct sum", mx <= 1e-13, fmt("%zu points, max relative error %.3e (<= 1e-13)", recs.size(), mx));
}

// ---------------------------------------------------------------- 4

void truncation_law() {
    std::vector<int> ns;
    for (int n = 2; n <= 16; ++n) ns.push_back(n);
    bool ok = true;
    std::string detail;
    double err10 = 0.0;
    for (double nu : {1.0, 2.0, 3.0}) {
        std::vector<int> grid = ns;
        if (nu == 1.0) grid.push_back(10);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        const auto st = convergence_study(nu, suites::nc_m(), suites::nc_box(), suites::nc_point(), grid);
        const double dev = std::abs(st.slope + nu) / nu;
        ok = ok && dev <= 0.05;
        detail += fmt("nu=%g slope %.4f (%.1f%% off) ", nu, st.slope, 100 * dev);
        if (nu == 1.0)
            for (const auto& r : st.rows)
                if (r.n_cut == 10) err10 = r.rel_error;
    }
    ok = ok && err10 > 0.15;
    detail += fmt("nu=1 N=10 rel error %.4f (> 0.15)", err10);
    report(4, "truncation error law", ok, detail);
}

// ---------------------------------------------------------------- 5

void asymptotic_correction() {
    const auto recs = suites::dz_asymptotic(4, 32, kExact);
    const std::size_t n = recs.size();
    Eigen::MatrixXd A(n, 2), B(n, 2);
    Eigen::VectorXd y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double N = recs[i].n_cut_or_order;
        const double diff = recs[i].reference - recs[i].value;
        A(i, 0) = 1.0;
        A(i, 1) = std::log(N);
        y(i) = std::log(diff);
        B(i, 0) = 1.0;
        B(i, 1) = 1.0 / (N * N);
        z(i) = diff * std::pow(N, 7);
    }
    const Eigen::VectorXd free_fit = A.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd lead_fit = B.colPivHouseholderQr().solve(z);
    const double slope = free_fit(1), alpha = lead_fit(0);
    const bool ok = std::abs(slope + 7.0) <= 0.1 && std::abs(alpha - 0.1441459732) <= 1e-4;
    report(5, "asymptotic N^-7 correction", ok,
           fmt("exponent %.4f (-7 +- 0.1), alpha %.10f (0.1441459732 +- 1e-4; power-law prefactor %.10f)", slope,
               alpha, std::exp(free_fit(0))));
}

// ---------------------------------------------------------------- 6

struct Check {
    const char* name;
    double worst;
    double tol;
};

double lambda_invariance() {
    const Lattice L = Lattice::integer(2, 3);
    const auto near = NearFieldSpec::cube(2, 1);
    const RealVec r{0.25, 0.1, 0.3};
    double worst = 0.0;
    for (double nu : {1.0, 3.0, 4.5})
        for (const MultiIndex& a : {MultiIndex(3), MultiIndex{1, 0, 0}, MultiIndex{0, 2, 2}, MultiIndex{1, 1, 1}}) {
            std::vector<double> v;
            for (double lam : {0.7, 1.0, 1.5}) {
                ZetaOptions o;
                o.lambda = lam;
                v.push_back(set_zeta_deriv(ZetaQuery{L, near, nu, a, r, o}));
            }
            for (double x : v) worst = std::max(worst, std::abs(x - v[1]) / std::max(1.0, std::abs(v[1])));
        }
    return worst;
}

double reflection() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unu(-6.0, 6.0), u(0.1, 2.5);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double nu = unu(rng);
        const RealVec k{u(rng), u(rng)}, r{u(rng), u(rng)};
        const double a = special::incomplete_bessel(nu, k, r).value;
        worst = std::max(worst, std::abs(a - special::bessel_reflection(nu, k, r)) / std::max(1.0, std::abs(a)));
    }
    return worst;
}

double fundamental() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unu(0.1, 15.0), uz(0.05, 4.0), ul(0.5, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double nu = unu(rng);
        worst = std::max(worst,
                         std::abs(special::fundamental_relation_residual(nu, RealVec{uz(rng), uz(rng)}, ul(rng))));
    }
    // ν < 2 and small |z|/λ, where G and g come from independent expansions.
    std::uniform_real_distribution<double> us(0.1, 2.0), uw(0.01, 0.4);
    for (int i = 0; i < 200; ++i) {
        const double nu = us(rng);
        worst = std::max(worst,
                         std::abs(special::fundamental_relation_residual(nu, RealVec{uw(rng), uw(rng)}, ul(rng))));
    }
    return worst;
}

double derivatives_fd() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unu(0.5, 8.0), ux(0.3, 1.4);
    std::uniform_int_distribution<int> ua(0, 2);
    const double h = 5e-4;
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
        const double nu = unu(rng);
        const RealVec x{ux(rng), -ux(rng), ux(rng)};
        const MultiIndex lower{ua(rng), ua(rng), ua(rng)};
        MultiIndex alpha = lower;
        alpha.set(0, lower[0] + 1);
        auto shifted = [&](double t) {
            RealVec y = x;
            y[0] += t;
            return y;
        };
        const double k = static_cast<double>(i % 3);
        auto eval = [&](const MultiIndex& a, const RealVec& y) {
            if (k == 0) return deriv_upper_crandall(nu, a, y);
            if (k == 1) return deriv_lower_crandall(nu, a, y);
            return deriv_incomplete_bessel(nu - 4.0, a, RealVec{0.7}, y);
        };
        // Five-point stencil, O(h⁴).
        const double exact = eval(alpha, x);
        const double fd = (8.0 * (eval(lower, shifted(h)) - eval(lower, shifted(-h))) -
                           (eval(lower, shifted(2 * h)) - eval(lower, shifted(-2 * h)))) /
                          (12.0 * h);
        worst = std::max(worst, std::abs(fd - exact) / std::max({std::abs(exact), std::abs(fd), 1e-3}));
    }
    return worst;
}

double poisson_and_sum_rule() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Cuboid box(RealVec{u(rng), u(rng), u(rng)});
        const RealVec o(3);
        const double tr = u_second({2, 0, 0}, o, box) + u_second({0, 2, 0}, o, box) + u_second({0, 0, 2}, o, box);
        const double want = -4.0 * std::numbers::pi * box.volume();
        const auto D = demag_factors(box);
        worst = std::max({worst, std::abs(tr - want) / std::abs(want), std::abs(D.Dx + D.Dy + D.Dz - 1.0)});
    }
    return worst;
}

double closed_vs_quadrature() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uc(0.3, 2.0), uf(-1.6, 1.6), us(1.05, 1.8);
    const MultiIndex ms[] = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
        const Cuboid box(RealVec{uc(rng), uc(rng), uc(rng)});
        RealVec r{uf(rng) * box.c[0], uf(rng) * box.c[1], uf(rng) * box.c[2]};
        r[static_cast<std::size_t>(i % 3)] = us(rng) * box.c[static_cast<std::size_t>(i % 3)];
        for (const auto& m : ms) {
            const double a = u_second(m, r, box);
            worst = std::max(worst, std::abs(a - summand_general(1.0, m, r, box)) / std::abs(a));
        }
    }
    return worst;
}

double partition_invariance() {
    const Cuboid box(RealVec{0.1, 0.12, 0.08});
    double worst = 0.0;
    for (const auto& [nu, m] : {std::pair{1.0, MultiIndex{0, 0, 2}}, std::pair{3.0, MultiIndex(3)},
                                std::pair{2.5, MultiIndex{1, 0, 1}}}) {
        auto q = [&](int rad) {
            return PotentialQuery{nu, m, box, Lattice::integer(2, 3), RealVec{0.3, 0.1, 0.2},
                                  NearFieldSpec::cube(2, rad), 12};
        };
        const double a = potential(q(1)), b = potential(q(2));
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    return worst;
}

void property_suite() {
    const Check checks[] = {
        {"lambda", lambda_invariance(), 1e-12},      {"reflection", reflection(), 1e-13},
        {"fundamental", fundamental(), 1e-13},       {"finite-diff", derivatives_fd(), 1e-6},
        {"poisson/sum", poisson_and_sum_rule(), 1e-11}, {"A/B", closed_vs_quadrature(), 1e-10},
        {"near/far", partition_invariance(), 1e-12},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : checks) {
        ok = ok && c.worst <= c.tol;
        detail += fmt("%s %.1e/%.0e ", c.name, c.worst, c.tol);
    }
    report(6, "property suites", ok, detail);
}

void run(int id, const char* name, void (*criterion)()) {
    try {
        criterion();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    run(1, "incomplete Bessel accuracy", bessel_accuracy);
    run(2, "periodic demag table", demag_table);
    run(3, "zeta vs direct sum", direct_vs_zeta);
    run(4, "truncation error law", truncation_law);
    run(5, "asymptotic N^-7 correction", asymptotic_correction);
    run(6, "property suites", property_suite);
    std::printf("%d of 6 criteria failed\n", failures);
    return failures ? 1 : 0;
}
