// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include <bgwi/limits.hpp>
#include <bgwi/stats.hpp>

using namespace bgwi;

namespace
{
double laplace_mc(std::vector<double> const& xs, double lambda, double& se)
{
    double const grid[] = {lambda};
    auto const est = empirical_laplace(xs, grid);
    se = est.std_error[0];
    return est.mean[0];
}
}  // namespace

TEST(CbiLaplace, Examples)
{
    auto const p = canonical_exact_params();
    EXPECT_EQ(cbi_laplace({p, 1.0, 0.0}, 0.0), 1.0);
    EXPECT_NEAR(cbi_laplace({p, 1.0, 0.0}, 1.0), 0.8944272, 1e-7);
    double prev = 1.0;
    for (double z : {0.5, 1.0, 5.0, 50.0})
    {
        double const v = cbi_laplace({p, 1.0, z}, 1.0);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-6);
    EXPECT_THROW(cbi_laplace({p, 1.0, 0.0}, -1.0), DomainError);
}

TEST(LinnikLaplace, Examples)
{
    auto const p = canonical_exact_params();
    EXPECT_EQ(linnik_laplace(1.0, p, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(linnik_laplace(1.0, p, 1.0), 0.8);
    auto const other_d = validate_params(0.5, 0.5, 0.2);
    EXPECT_EQ(linnik_laplace(1.0, p, 1.7), linnik_laplace(1.0, other_d, 1.7));
    EXPECT_THROW(linnik_laplace(1.0, p, 1.0, 1.0), DomainError);
}

TEST(Arcsine, DensityAndCdf)
{
    EXPECT_NEAR(arcsine_density(0.5, 0.5), 2 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(arcsine_density(0.5, 0.5), 0.6366198, 1e-7);
    EXPECT_NEAR(arcsine_cdf(0.5, 0.5), 0.5, 1e-15);
    EXPECT_EQ(arcsine_cdf(0.3, 0.0), 0.0);
    EXPECT_EQ(arcsine_cdf(0.3, 1.0), 1.0);
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (double d : {0.3, 0.5, 0.8})
    {
        // Beta(1 - d, d) density; near x = 1 the quadrature hands over the
        // exact complement 1 - x, which double arithmetic cannot resolve
        double const norm = boost::math::beta(1 - d, d);
        auto oracle = [d, norm](double x, double xc) {
            double const y = xc > 0 ? xc : 1 - x;
            return std::pow(x, -d) * std::pow(y, d - 1) / norm;
        };
        EXPECT_NEAR(integrator.integrate(oracle, 0.0, 1.0), 1.0, 1e-10) << d;
        for (double x : {0.01, 0.3, 0.5, 0.9, 0.999})
        {
            EXPECT_NEAR(arcsine_density(d, x), oracle(x, 0.0),
                        1e-12 * oracle(x, 0.0));
        }
        auto f = [d](double x) { return arcsine_density(d, x); };
        EXPECT_NEAR(integrator.integrate(f, 0.0, 0.3), arcsine_cdf(d, 0.3), 1e-10);
    }
    EXPECT_THROW(arcsine_density(0.5, 1.0), DomainError);
}

TEST(CbExtinction, Examples)
{
    auto const p = canonical_exact_params();
    EXPECT_NEAR(cb_extinction_cdf(p, 1.0, 4.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(cb_extinction_cdf(p, 1.0, 4.0), 0.3678794, 1e-7);
    EXPECT_EQ(cb_extinction_cdf(p, 0.0, 2.0), 1.0);
    EXPECT_GT(cb_extinction_cdf(p, 1.0, 1e8), 0.999);
}

TEST(PositiveStable, LaplaceTransform)
{
    RngStream rng(21, 0);
    std::vector<double> xs(1000000);
    for (auto& x : xs)
    {
        x = sample_positive_stable(rng, 0.5);
        ASSERT_GT(x, 0.0);
    }
    double se;
    double const m = laplace_mc(xs, 1.0, se);
    EXPECT_NEAR(m, std::exp(-1.0), 3 * se);
}

TEST(PositiveStable, NearOneConcentrates)
{
    RngStream rng(22, 0);
    std::vector<double> xs(20001);
    for (auto& x : xs)
        x = sample_positive_stable(rng, 0.99);
    std::nth_element(xs.begin(), xs.begin() + 10000, xs.end());
    EXPECT_GT(xs[10000], 0.5);
    EXPECT_LT(xs[10000], 2.0);
}

TEST(Linnik, SamplerLaplace)
{
    auto const p = canonical_exact_params();
    RngStream rng(23, 0);
    std::vector<double> xs(1000000);
    for (auto& x : xs)
    {
        x = sample_linnik(rng, p, 1.0);
        ASSERT_GT(x, 0.0);
    }
    double se;
    double const m = laplace_mc(xs, 1.0, se);
    EXPECT_NEAR(m, 0.8, 3 * se);
}

TEST(Linnik, SelfSimilarInT)
{
    auto const p = canonical_exact_params();
    RngStream a(24, 0), b(24, 1);
    std::size_t const n = 100000;
    std::vector<double> t1(n), t4(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        t1[i] = sample_linnik(a, p, 1.0) * std::pow(4.0, 1 / p.alpha);
        t4[i] = sample_linnik(b, p, 4.0);
    }
    std::sort(t1.begin(), t1.end());
    std::sort(t4.begin(), t4.end());
    // Two-sample KS
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < n && j < n)
    {
        if (t1[i] <= t4[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(double(i) - double(j)) / n);
    }
    EXPECT_LE(d, 0.01);
}

TEST(MittagLeffler, MomentRatio)
{
    EXPECT_NEAR(mittag_leffler_moment_ratio(0.5), std::numbers::pi / 2, 1e-14);
    EXPECT_NEAR(mittag_leffler_moment_ratio(0.5), 1.5707963, 1e-7);
    EXPECT_NEAR(mittag_leffler_moment_ratio(1.0), 2.0, 1e-14);
    EXPECT_NEAR(mittag_leffler_moment_ratio(1e-9), 1.0, 1e-6);
    EXPECT_NEAR(mittag_leffler_moment_ratio(0.0), 1.0, 1e-14);
}

TEST(WalkLimits, Examples)
{
    auto const p = canonical_exact_params();
    EXPECT_EQ(walk_limit_laplace(p, 0.0, WalkKind::immigration), 1.0);
    EXPECT_EQ(walk_limit_laplace(p, 0.0, WalkKind::reproduction), 1.0);
    EXPECT_NEAR(walk_limit_laplace(p, 1.0, WalkKind::immigration), 0.8824969,
                1e-7);
    for (double l : {0.1, 1.0, 3.0})
    {
        EXPECT_GE(walk_limit_laplace(p, l, WalkKind::reproduction), 1.0);
    }
}
