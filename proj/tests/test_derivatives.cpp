#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "zetalat/zetalat.hpp"

using namespace zetalat;

namespace {

constexpr double kStep = 1e-4;

using DerivFn = std::function<double(const MultiIndex&, const RealVec&)>;

// Central difference of f^(α - e_i) in direction i against f^(α), for every i with α_i > 0.
void check_against_fd(const DerivFn& f, const MultiIndex& alpha, const RealVec& x, const std::string& what) {
    const double exact = f(alpha, x);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0) continue;
        MultiIndex lower = alpha;
        lower.set(i, alpha[i] - 1);
        RealVec xp = x, xm = x;
        xp[i] += kStep;
        xm[i] -= kStep;
        const double fp = f(lower, xp), fm = f(lower, xm);
        const double fd = (fp - fm) / (2.0 * kStep);
        const double scale = std::max({std::abs(exact), std::abs(fd), 1e-3 * std::abs(fp)});
        EXPECT_LT(std::abs(fd - exact), 1e-6 * scale) << what << " alpha=" << alpha.str() << " axis=" << i;
    }
}

std::vector<MultiIndex> random_alphas(std::mt19937_64& rng, std::size_t d, int count) {
    std::uniform_int_distribution<int> u(0, 4);
    std::vector<MultiIndex> out;
    while (static_cast<int>(out.size()) < count) {
        MultiIndex a(d);
        for (std::size_t i = 0; i < d; ++i) a.set(i, u(rng));
        if (a.order() >= 1 && a.order() <= 4) out.push_back(a);
    }
    return out;
}

}  // namespace

TEST(MultiIndexTerms, ComponentwiseBetaRange) {
    for (const auto& alpha : multi_indices_up_to(3, 6)) {
        const auto& ex = deriv_expansion(alpha);
        std::size_t expected = 1;
        for (int a : alpha) expected *= static_cast<std::size_t>(a / 2 + 1);
        EXPECT_EQ(ex.terms.size(), expected) << alpha.str();
        for (const auto& t : ex.terms) EXPECT_TRUE(t.beta.scaled(2).leq(alpha));
        if (!alpha.all_even()) EXPECT_EQ(ex.zero_value, 0.0) << alpha.str();
    }
}

TEST(MultiIndexTerms, BasicCombinatorics) {
    EXPECT_EQ(binomial(10, 3), 120);
    EXPECT_EQ(multinomial(MultiIndex{2, 1}, MultiIndex{1, 0}), 2);
    EXPECT_EQ(multi_indices_up_to(3, 2).size(), 10u);
    const MultiIndex a{2, 4, 0};
    EXPECT_EQ(a.order(), 6);
    EXPECT_TRUE(a.all_even());
    EXPECT_EQ(a.half(), (MultiIndex{1, 2, 0}));
    EXPECT_THROW(deriv_upper_crandall(1.0, MultiIndex{25}, RealVec{1.0}), DomainError);
    EXPECT_THROW(monomial_p(MultiIndex{2}, MultiIndex{2}, RealVec{1.0}), DomainError);
}

TEST(Derivatives, UpperCrandallMatchesFiniteDifferences) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unu(-3.0, 9.0), ux(-1.5, 1.5);
    for (const auto& alpha : random_alphas(rng, 3, 60)) {
        const double nu = unu(rng);
        const RealVec x{ux(rng), ux(rng), ux(rng)};
        if (x.norm() < 0.2) continue;
        check_against_fd([&](const MultiIndex& a, const RealVec& r) { return deriv_upper_crandall(nu, a, r); }, alpha,
                         x, "G nu=" + std::to_string(nu));
    }
}

TEST(Derivatives, LowerCrandallMatchesFiniteDifferences) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> unu(0.3, 9.0), ux(-1.5, 1.5);
    for (const auto& alpha : random_alphas(rng, 3, 60)) {
        const double nu = unu(rng);
        const RealVec x{ux(rng), ux(rng), ux(rng)};
        check_against_fd([&](const MultiIndex& a, const RealVec& r) { return deriv_lower_crandall(nu, a, r); }, alpha,
                         x, "g nu=" + std::to_string(nu));
    }
}

TEST(Derivatives, IncompleteBesselMatchesFiniteDifferences) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unu(-4.0, 4.0), ux(-1.2, 1.2), uk(0.2, 1.5);
    for (const auto& alpha : random_alphas(rng, 2, 60)) {
        const double nu = unu(rng);
        const RealVec k{uk(rng)};
        const RealVec x{ux(rng), ux(rng)};
        check_against_fd(
            [&](const MultiIndex& a, const RealVec& r) { return deriv_incomplete_bessel(nu, a, k, r); }, alpha, x,
            "Gk nu=" + std::to_string(nu));
    }
}

TEST(Derivatives, RieszKernelMatchesFiniteDifferences) {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> unu(0.5, 12.0), ux(-2.0, 2.0);
    for (const auto& alpha : random_alphas(rng, 3, 60)) {
        const double nu = unu(rng);
        RealVec x{ux(rng), ux(rng), ux(rng)};
        if (x.norm() < 0.5) x[2] += 1.0;
        check_against_fd([&](const MultiIndex& a, const RealVec& r) { return riesz_kernel_deriv(nu, a, r); }, alpha, x,
                         "riesz nu=" + std::to_string(nu));
    }
}

TEST(Derivatives, FundamentalRelationDerivative) {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> unu(0.3, 9.0), ux(-1.5, 1.5);
    for (const auto& alpha : random_alphas(rng, 3, 80)) {
        const double nu = unu(rng);
        RealVec x{ux(rng), ux(rng), ux(rng)};
        if (x.norm() < 0.3) x[0] += 0.5;
        const double lhs = deriv_upper_crandall(nu, alpha, x) + deriv_lower_crandall(nu, alpha, x);
        // (πz²)^{-ν/2}Γ(ν/2) = π^{-ν/2}Γ(ν/2)|z|^{-ν}
        const double rhs = std::pow(std::numbers::pi, -0.5 * nu) * boost::math::tgamma(0.5 * nu) *
                           riesz_kernel_deriv(nu, alpha, x);
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs))) << "alpha=" << alpha.str();
    }
}

TEST(Derivatives, ZeroArgumentMatchesLimit) {
    // g_ν is entire in r; G_ν(0) is the continuation value and has no limit.
    const MultiIndex alpha{2, 0, 2};
    const double at0 = deriv_lower_crandall(3.0, alpha, RealVec(3));
    const double near0 = deriv_lower_crandall(3.0, alpha, RealVec{1e-7, 0.0, 0.0});
    EXPECT_NEAR(at0, near0, 1e-9 * std::abs(at0));
    EXPECT_EQ(deriv_upper_crandall(3.0, alpha, RealVec(3)), -at0);
    EXPECT_THROW(deriv_upper_crandall(-4.0, alpha, RealVec(3)), PoleError);
}
