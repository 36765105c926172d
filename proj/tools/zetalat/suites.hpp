#pragma once

// Benchmark suites shared by the CLI and the acceptance runner. Each row is
// one BenchmarkRecord; rows come out in a fixed order for any worker count.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "quad128.hpp"
#include "zetalat/zetalat.hpp"

namespace zetalat::suites {

struct BenchmarkRecord {
    std::string suite;
    double nu = 0.0;
    std::string m;
    std::string c;
    std::string r;
    int n_cut_or_order = 0;
    double value = 0.0;
    double reference = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    std::int64_t wall_ns = 0;
    /// Extra per-suite tag (Bessel branch); not part of the CSV schema.
    std::string note;
};

struct RunSettings {
    unsigned workers = 1;
    bool deterministic = false;
};

inline std::string join(const RealVec& v) {
    std::string s;
    char buf[32];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        if (!s.empty()) s += ';';
        s += buf;
    }
    return s;
}

inline std::string join(const MultiIndex& m) {
    std::string s;
    for (int v : m) s += (s.empty() ? "" : ";") + std::to_string(v);
    return s;
}

template <class F>
std::int64_t timed(const RunSettings& rs, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return rs.deterministic ? 0 : std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

inline void fill_errors(BenchmarkRecord& rec) {
    const auto e = error_metrics(rec.value, rec.reference);
    rec.abs_err = e.abs;
    rec.rel_err = e.rel;
}

struct BesselPoint {
    double nu, k, r;
};

/// 0 ≤ k, r ≤ 4 step 0.1, ν ∈ {-4, -2, 0, 2}; drops points where the defining
/// integral diverges (k = 0 with ν ≥ 0).
inline std::vector<BesselPoint> bessel_grid_points() {
    std::vector<BesselPoint> pts;
    for (double nu : {-4.0, -2.0, 0.0, 2.0})
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) {
                const double k = i / 10.0, r = j / 10.0;
                if (i == 0 && nu >= 0.0) continue;
                pts.push_back({nu, k, r});
            }
    return pts;
}

inline std::vector<BenchmarkRecord> bessel_grid(const RunSettings& rs) {
    const auto pts = bessel_grid_points();
    return parallel_map(pts.size(), rs.workers, [&](std::size_t i) {
        const auto& p = pts[i];
        BenchmarkRecord rec{"bessel-grid", p.nu};
        rec.r = join(RealVec{p.k, p.r});
        special::BesselEvalReport rep;
        rec.wall_ns = timed(rs, [&] { rep = special::incomplete_bessel(p.nu, RealVec{p.k}, RealVec{p.r}); });
        rec.value = rep.value;
        rec.note = std::string(special::to_string(rep.branch));
        const reference::f128 ref = reference::incomplete_bessel(p.nu, p.k, p.r);
        const reference::f128 diff = abs(reference::f128(rec.value) - ref);
        rec.reference = static_cast<double>(ref);
        rec.abs_err = static_cast<double>(diff);
        rec.rel_err = ref == 0 ? rec.abs_err : static_cast<double>(diff / abs(ref));
        return rec;
    });
}

/// min(abs, rel) error of a Bessel row against the quad-precision reference.
inline double bessel_combined_error(const BenchmarkRecord& rec) {
    return std::min(rec.abs_err, rec.rel_err);
}

struct DirectZetaPoint {
    MultiIndex m;
    RealVec c;
    double r3;
    double nu;
};

inline std::vector<DirectZetaPoint> direct_vs_zeta_points() {
    std::vector<DirectZetaPoint> pts;
    const MultiIndex ms[] = {{1, 1, 0}, {1, 0, 1}, {0, 0, 2}};
    const RealVec cs[] = {RealVec{1.0 / 50, 1.0 / 50, 1.0 / 50}, RealVec{1.0 / 100, 1.0 / 100, 1.0 / 100},
                          RealVec{1.0 / 100, 2.0 / 100, 3.0 / 100}};
    for (const auto& m : ms)
        for (const auto& c : cs)
            for (int i = 1; i <= 5; ++i)
                for (int j = 0; j <= 40; ++j) pts.push_back({m, c, i / 10.0, 10.0 + j / 10.0});
    return pts;
}

inline constexpr int kDirectNcut = 14;

inline std::vector<BenchmarkRecord> direct_vs_zeta(const RunSettings& rs) {
    const auto pts = direct_vs_zeta_points();
    return parallel_map(pts.size(), rs.workers, [&](std::size_t i) {
        const auto& p = pts[i];
        const Cuboid box(p.c);
        const RealVec r{0.25, 0.25, p.r3};
        BenchmarkRecord rec{"direct-vs-zeta", p.nu, join(p.m), join(p.c), join(r), kDirectNcut};
        rec.wall_ns = timed(rs, [&] { rec.value = lattice_reference(p.nu, p.m, box, r); });
        rec.reference = direct_sum(p.nu, p.m, box, r, kDirectNcut);
        fill_errors(rec);
        return rec;
    });
}

/// Convergence-study geometry: U^(0,0,2) at r = (1,1,1)/2 for a cube of edge 1/50.
inline Cuboid nc_box() { return Cuboid(RealVec{1.0 / 50, 1.0 / 50, 1.0 / 50}); }
inline RealVec nc_point() { return RealVec{0.5, 0.5, 0.5}; }
inline MultiIndex nc_m() { return MultiIndex{0, 0, 2}; }

inline std::vector<BenchmarkRecord> nc_scaling(double nu, int max_ncut, const RunSettings& rs) {
    const Cuboid box = nc_box();
    const RealVec r = nc_point();
    const MultiIndex m = nc_m();
    const double ref = lattice_reference(nu, m, box, r);
    return parallel_map(static_cast<std::size_t>(max_ncut), rs.workers, [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        BenchmarkRecord rec{"nc-scaling", nu, join(m), join(box.c), join(r), n};
        rec.wall_ns = timed(rs, [&] { rec.value = direct_sum(nu, m, box, r, n); });
        rec.reference = ref;
        fill_errors(rec);
        return rec;
    });
}

inline std::vector<BenchmarkRecord> dz_asymptotic(int n_min, int n_max, const RunSettings& rs) {
    return parallel_map(static_cast<std::size_t>(n_max - n_min + 1), rs.workers, [&](std::size_t i) {
        const int N = n_min + static_cast<int>(i);
        const double c = 1.0 / N;
        BenchmarkRecord rec{"dz-asymptotic", 1.0, "2;0;0+0;2;0", join(RealVec{c, c, c}), join(RealVec(3)), N};
        rec.wall_ns = timed(rs, [&] { rec.value = demag_pbc(N); });
        rec.reference = asymptotic_dz(N);
        fill_errors(rec);
        return rec;
    });
}

}  // namespace zetalat::suites
