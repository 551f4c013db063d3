// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <bgwi/exact.hpp>
#include <bgwi/limits.hpp>
#include <bgwi/scaling.hpp>
#include <bgwi/simulate.hpp>

using namespace bgwi;

namespace
{
double three_se(double p, int n)
{
    return 3 * std::sqrt(p * (1 - p) / n);
}

PathSample manual_path(std::vector<count_t> const& z)
{
    PathSample p;
    p.start = z[0];
    p.steps = z.size() - 1;
    p.Z = z;
    count_t c = 0;
    for (std::size_t k = 0; k < z.size(); ++k)
    {
        p.C.push_back(c);
        c += z[k];
        p.Y_total.push_back(0);
        p.X_at_C.push_back(z[k] - z[0]);
        if (z[k] == 0)
            p.zeros.push_back(k);
    }
    return p;
}
}  // namespace

TEST(SimulateBgwi, ZeroSteps)
{
    SimulationContext const ctx(canonical_exact_params());
    RngStream rng(31, 0);
    auto const p = simulate_bgwi(rng, ctx, 0, 0);
    EXPECT_EQ(p.Z, std::vector<count_t>{0});
    EXPECT_EQ(p.C, std::vector<count_t>{0});
    EXPECT_EQ(p.zeros, std::vector<std::size_t>{0});
    EXPECT_THROW(simulate_bgwi(rng, ctx, -1, 3), DomainError);
}

TEST(SimulateBgwi, FirstStepZeroFrequency)
{
    SimulationContext const ctx(canonical_exact_params());
    int const n = 100000;
    int zeros = 0;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(32, i);
        zeros += simulate_bgwi(rng, ctx, 0, 1).Z[1] == 0;
    }
    EXPECT_NEAR(double(zeros) / n, 0.875, three_se(0.875, n));
}

TEST(SimulateBgwi, ReturnProbabilityMatchesTable)
{
    auto const params = canonical_mc_params();
    SimulationContext const ctx(params);
    auto const t = zero_hit_tables(params, 20);
    int const n = 40000;
    int hits = 0;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(33, i);
        hits += simulate_bgwi(rng, ctx, 0, 20).Z[20] == 0;
    }
    EXPECT_NEAR(double(hits) / n, t.u[20], three_se(t.u[20], n));
}

TEST(SimulateBgwi, LampertiIdentitiesOnEveryPath)
{
    SimulationContext const ctx(canonical_mc_params());
    for (int i = 0; i < 200; ++i)
    {
        RngStream rng(34, i);
        auto const p = simulate_bgwi(rng, ctx, i % 7, 300);
        ASSERT_TRUE(check_path_identities(p)) << i;
    }
    auto broken = manual_path({0, 1, 0});
    broken.Y_total[1] = 5;
    EXPECT_FALSE(check_path_identities(broken));
}

TEST(SimulateBgw, SingleStepExtinction)
{
    SimulationContext const ctx(canonical_exact_params());
    int const n = 100000;
    int extinct = 0;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(35, i);
        auto const p = simulate_bgw(rng, ctx, 1, 1);
        extinct += p.Z.back() == 0;
    }
    EXPECT_NEAR(double(extinct) / n, 0.5, three_se(0.5, n));
    RngStream rng(35, 0);
    EXPECT_THROW(simulate_bgw(rng, ctx, 0, 3), DomainError);
}

TEST(SimulateBgw, ExtinctionByNMatchesW)
{
    auto const params = canonical_exact_params();
    SimulationContext const ctx(params);
    auto const w = w_sequence(params, 10);
    double const target = std::pow(1 - w.w[10], 3);
    int const n = 50000;
    int extinct = 0;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(36, i);
        auto const p = simulate_bgw(rng, ctx, 3, 10);
        extinct += p.Z.back() == 0;
        ASSERT_TRUE(check_path_identities(p));
    }
    EXPECT_NEAR(double(extinct) / n, target, three_se(target, n));
}

TEST(HittingFunctionals, Conventions)
{
    auto const zero = manual_path({0, 0, 0, 0, 0});
    auto const r = hitting_functionals(zero, 4, 1.0, 0.5, 1.0);
    EXPECT_EQ(r.g_t, 1.0);
    EXPECT_TRUE(r.d_truncated);
    EXPECT_TRUE(std::isinf(r.d_t));

    auto const only_start = manual_path({0, 3, 4, 2, 5});
    auto const r2 = hitting_functionals(only_start, 4, 1.0, 0.5, 1.0);
    EXPECT_EQ(r2.g_t, 0.0);

    auto const mixed = manual_path({0, 3, 0, 2, 5, 0, 1});
    auto const r3 = hitting_functionals(mixed, 4, 0.75, 0.1, 1.0);
    EXPECT_EQ(r3.g_t, 0.5);
    EXPECT_EQ(r3.d_t, 1.25);
    EXPECT_FALSE(r3.d_truncated);

    // Every state below eps: g_eps at the grid point, d_eps one step later
    auto const r4 = hitting_functionals(mixed, 4, 0.75, 100.0, 1.0);
    EXPECT_EQ(r4.g_eps, 0.75);
    EXPECT_EQ(r4.d_eps, 1.0);
    EXPECT_THROW(hitting_functionals(mixed, 4, 3.0, 0.1, 1.0), DomainError);
}

TEST(Meander, AcceptanceAndLawAtHorizonOne)
{
    auto const params = canonical_exact_params();
    SimulationContext const ctx(params);
    int const n = 100000;
    int accepted = 0;
    double pgf = 0;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(37, i);
        if (auto v = simulate_meander(rng, ctx, 1, 1, 1.0))
        {
            ++accepted;
            pgf += std::pow(0.5, *v);
        }
    }
    EXPECT_NEAR(double(accepted) / n, 0.125, three_se(0.125, n));
    double const g = 1 - gap_g(params, 0.5);
    double const target = (g - 0.875) / 0.125;
    double const mean = pgf / accepted;
    // Bernoulli-type bound on the variance of s^X with values in [0, 1]
    EXPECT_NEAR(mean, target, 3 * std::sqrt(0.25 / accepted));
    RngStream rng(37, 0);
    EXPECT_FALSE(simulate_meander(rng, ctx, 5, 0, 1.0).has_value());
}

TEST(Meander, MonteCarloMatchesExactTransform)
{
    auto const params = canonical_mc_params();
    SimulationContext const ctx(params);
    auto const t = zero_hit_tables(params, 40);
    std::size_t const horizon = 30;
    double const b = compute_bn(params, horizon, 1e-12);
    double const exact = meander_laplace(params, t, horizon - 1, 1.0, b).value;
    double sum = 0, sq = 0;
    int accepted = 0;
    for (int i = 0; i < 20000; ++i)
    {
        RngStream rng(38, i);
        if (auto v = simulate_meander(rng, ctx, horizon, 1000, b))
        {
            double const e = std::exp(-*v);
            sum += e;
            sq += e * e;
            ++accepted;
        }
    }
    double const mean = sum / accepted;
    double const se = std::sqrt((sq / accepted - mean * mean) / accepted);
    EXPECT_NEAR(mean, exact, 3 * se);
}

TEST(PerturbedLocalTime, Counterexample)
{
    SimulationContext const ctx(canonical_mc_params());
    std::size_t const m = 10;
    int const n = 10000;
    int single = 0, positive = 0;
    for (int i = 0; i < n; ++i)
    {
        RngStream rng(39, i);
        auto const r = simulate_perturbed_localtime(rng, ctx, m);
        ASSERT_GE(r.local_time, 1u);
        single += r.only_initial_zero;
        positive += r.all_immigration_positive;
        if (r.all_immigration_positive)
        {
            ASSERT_TRUE(r.only_initial_zero);
        }
    }
    double const f = double(single) / n;
    EXPECT_GE(f, 1 - 0.01 - 3 * std::sqrt(f * (1 - f) / n));
    double const expected = std::pow(1 - 1e-3, 10);
    EXPECT_NEAR(expected, 0.99004, 1e-5);
    EXPECT_NEAR(double(positive) / n, expected, three_se(expected, n));
}

TEST(Septuple, CoordinateIdentitiesAndY)
{
    auto const params = canonical_mc_params();
    SimulationContext const ctx(params);
    std::size_t const n = 100;
    double const b = compute_bn(params, n, 1e-12);
    auto const u = zero_probabilities(params, n);
    SeptupleScales const scales{b, compute_an(params, std::uint64_t(n * b)),
                                compute_cn(n, u[n], 1.0)};
    double const grid[] = {0.25, 0.5, 0.75, 1.0};
    int const paths = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < paths; ++i)
    {
        RngStream rng(40, i);
        auto const s = simulate_septuple(rng, ctx, n, 1.0, grid, scales, 100000000);
        ASSERT_EQ(s.points.size(), 4u);
        for (std::size_t j = 1; j < 4; ++j)
        {
            ASSERT_GE(s.points[j].C, s.points[j - 1].C);
        }
        ASSERT_NEAR(s.points[3].LZ, double(s.zero_count) / scales.c_n, 1e-12);
        for (auto const& pt : s.points)
        {
            ASSERT_NEAR(pt.Z, pt.XC + pt.Y, 1e-9 * (1 + pt.Z));
        }
        double const e = std::exp(-s.points[3].Y);
        sum += e;
        sq += e * e;
    }
    double const mean = sum / paths;
    double const se = std::sqrt((sq / paths - mean * mean) / paths);
    EXPECT_NEAR(mean, std::exp(-params.d), 3 * se + 1e-3);
    RngStream rng(40, 0);
    EXPECT_THROW(simulate_septuple(rng, ctx, n, 1.0, grid, scales, 10),
                 MemoryBudgetExceeded);
}

TEST(PathCsv, Header)
{
    auto const p = manual_path({0, 2, 0});
    std::ostringstream os;
    write_path_csv(os, p);
    EXPECT_EQ(os.str(), "step,Z,C,Y_total,X_at_C,is_zero\n0,0,0,0,0,1\n"
                        "1,2,0,0,2,0\n2,0,2,0,0,1\n");
}
