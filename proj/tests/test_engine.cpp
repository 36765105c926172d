#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "zetalat/zetalat.hpp"

using namespace zetalat;

namespace {

PotentialQuery query(double nu, const MultiIndex& m, const Cuboid& box, const RealVec& r, int radius, int ell = 8) {
    return PotentialQuery{nu, m, box, Lattice::integer(2, 3), r, NearFieldSpec::cube(2, radius), ell};
}

}  // namespace

TEST(Engine, OperatorCoefficients) {
    const Cuboid box(RealVec{0.3, 0.4, 0.5});
    const auto co = cuboid_operator_coefficients(box, 8);
    EXPECT_EQ(co.size(), 35u);
    EXPECT_NEAR(co[0].value, box.volume() * box.volume(), 1e-17);
    const auto c1 = cuboid_operator_coefficients(Cuboid(RealVec{0.5}), 2);
    ASSERT_EQ(c1.size(), 2u);
    EXPECT_NEAR(c1[0].value, 0.25, 1e-17);
    EXPECT_NEAR(c1[1].value, std::pow(0.5, 4) / 12.0, 1e-17);
}

TEST(Engine, NearFarPartitionInvariance) {
    const Cuboid box(RealVec{0.1, 0.12, 0.08});
    struct C {
        double nu;
        MultiIndex m;
        RealVec r;
    };
    const C cases[] = {{1.0, {0, 0, 2}, {0.3, 0.2, 0.1}},
                       {1.0, {1, 1, 0}, {0.25, -0.1, 0.2}},
                       {3.0, {0, 0, 0}, {0.2, 0.3, 0.15}},
                       {2.5, {1, 0, 1}, {0.3, 0.1, 0.2}},
                       {12.0, {0, 0, 2}, {0.25, 0.25, 0.3}}};
    for (const auto& c : cases) {
        const double a = potential(query(c.nu, c.m, box, c.r, 1, 12));
        const double b = potential(query(c.nu, c.m, box, c.r, 2, 12));
        EXPECT_LE(std::abs(a - b), std::max(1e-16, 1e-12 * std::abs(a))) << "nu=" << c.nu << " m=" << c.m.str();
    }
}

TEST(Engine, FactorizedAndPointwiseNearSumsAgree) {
    const Cuboid box(RealVec{0.2, 0.2, 0.2});
    auto q = query(1.0, MultiIndex{0, 0, 2}, box, RealVec{0.1, 0.05, 0.3}, 2);
    const double fact = near_field_sum(q);
    std::vector<LatticeCoord> pts;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) pts.push_back({i, j});
    q.near = NearFieldSpec::explicit_points(pts);
    EXPECT_NEAR(near_field_sum(q), fact, 1e-13 * std::abs(fact));
    q.nu = 2.5;
    const double pw = near_field_sum(q);
    q.near = NearFieldSpec::cube(2, 2);
    EXPECT_NEAR(near_field_sum(q), pw, 1e-13 * std::abs(pw));
}

TEST(Engine, CorrectionOrdersDecay) {
    const auto q = query(1.0, MultiIndex{2, 0, 0}, Cuboid(RealVec{0.2, 0.15, 0.1}), RealVec(3), 1, 10);
    const auto br = correction_term(q);
    ASSERT_EQ(br.orders.size(), 6u);
    for (std::size_t k = 2; k < br.orders.size(); ++k)
        EXPECT_LT(std::abs(br.orders[k].value), std::abs(br.orders[k - 1].value)) << k;
    EXPECT_TRUE(br.corollary_holds);
    EXPECT_GT(br.eta, 1.0);
    const double est = error_estimate(br);
    EXPECT_GT(est, 0.0);
    EXPECT_LT(est, std::abs(br.orders.back().value) * 10.0);
}

TEST(Engine, SymmetricZeroOrderDoesNotStopTheSeries) {
    // ν = 1 is harmonic in 3D, so the cube's order-2 term vanishes but order 4 does not.
    const auto q = query(1.0, MultiIndex{2, 0, 0}, Cuboid(RealVec{0.2, 0.2, 0.2}), RealVec(3), 1, 10);
    const auto br = correction_term(q);
    ASSERT_EQ(br.orders.size(), 6u);
    EXPECT_LT(std::abs(br.orders[1].value), 1e-14 * std::abs(br.total));
    EXPECT_GT(std::abs(br.orders[2].value), 1e-8 * std::abs(br.total));
    EXPECT_GE(br.chosen_order, 4);
}

TEST(Engine, ErrorEstimateRules) {
    CorrectionBreakdown br;
    br.orders = {{0, 1.0}};
    EXPECT_THROW(error_estimate(br), DomainError);
    br.orders = {{0, 1.0}, {2, 0.1}};
    EXPECT_NEAR(error_estimate(br), 0.1 * 0.1 / 0.9, 1e-16);
    br.orders = {{0, 1.0}, {2, 0.95}};
    EXPECT_NEAR(error_estimate(br), 0.95 * 9.0, 1e-14);
    br.orders = {{0, 1.0}, {2, 2.0}};
    EXPECT_THROW(error_estimate(br), ConvergenceError);
    br.orders = {{0, 0.0}, {2, 0.0}};
    EXPECT_EQ(error_estimate(br), 0.0);
}

TEST(Engine, QueryValidation) {
    const Cuboid box(RealVec{0.2, 0.2, 0.2});
    EXPECT_THROW(potential(query(1.0, MultiIndex{2, 0, 0}, box, RealVec(3), 1, 7)), InvariantError);
    EXPECT_THROW(potential(query(1.0, MultiIndex{2, 0, 0}, box, RealVec(3), 1, 22)), InvariantError);
    // r reaches the far field: dist_∞(r, L_far + 2Ω) = 0.
    EXPECT_THROW(potential(query(1.0, MultiIndex{2, 0, 0}, box, RealVec{1.8, 0.0, 0.0}, 0)), InvariantError);
}

TEST(Engine, DemagPeriodicSingleCubeIsOne) { EXPECT_NEAR(demag_pbc(1), 1.0, 1e-12); }

TEST(Engine, DemagPeriodicIsMonotone) {
    double prev = 1.0;
    for (int N = 2; N <= 8; ++N) {
        const double d = demag_pbc(N);
        EXPECT_GT(d, 1.0 / 3.0);
        EXPECT_LT(d, prev) << N;
        prev = d;
    }
}

TEST(Engine, AsymptoticConstant) {
    EXPECT_NEAR(square_lattice_zeta3(), 4.0 * 0.86450265346120204 * 2.6123753486854883, 1e-14);
    EXPECT_NEAR(asymptotic_dz(10), 1.0 / 3.0 + square_lattice_zeta3() / (4000.0 * std::numbers::pi), 1e-16);
}

TEST(Engine, OneDimensionalChain) {
    // Small boxes on Z × {0}² approach the point-particle sum.
    const Cuboid box(RealVec{0.005, 0.005, 0.005});
    const RealVec r{0.3, 0.1, 0.0};
    const PotentialQuery q{3.0, MultiIndex(3), box, Lattice::integer(1, 3), r, NearFieldSpec::cube(1, 1), 8};
    double points = 0.0;
    for (int k = -20000; k <= 20000; ++k) points += std::pow(std::hypot(r[0] + k, r[1]), -3.0);
    EXPECT_NEAR(potential(q) / (box.volume() * box.volume()), points, 1e-3 * points);
}
