// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <bgwi/exact.hpp>
#include <bgwi/laws.hpp>
#include <bgwi/limits.hpp>

using namespace bgwi;

namespace
{
/*
 * Brute-force BGWI chain on the truncated state space {0..K}: transition
 * rows are convolution powers of the offspring pmf followed by immigration.
 * Mass that leaves the box is dropped, which is negligible for the short
 * horizons and zero-state events tested here.
 */
class BruteChain
{
  public:
    BruteChain(StableFamilyParams const& p, std::size_t K) : K_{K}, P_(K + 1)
    {
        std::vector<double> mu(K + 1), nu(K + 1);
        for (std::size_t k = 0; k <= K; ++k)
        {
            mu[k] = offspring_pmf(p, k);
            nu[k] = immigration_pmf(p, k);
        }
        std::vector<double> power(K + 1, 0.0);
        power[0] = 1.0;
        for (std::size_t j = 0; j <= K; ++j)
        {
            P_[j] = convolve(power, nu);
            power = convolve(power, mu);
        }
    }

    std::vector<double> step(std::vector<double> const& v) const
    {
        std::vector<double> out(K_ + 1, 0.0);
        for (std::size_t j = 0; j <= K_; ++j)
        {
            if (v[j] == 0)
                continue;
            for (std::size_t k = 0; k <= K_; ++k)
                out[k] += v[j] * P_[j][k];
        }
        return out;
    }

    std::size_t size() const { return K_ + 1; }

  private:
    std::vector<double> convolve(std::vector<double> const& a,
                                 std::vector<double> const& b) const
    {
        std::vector<double> out(K_ + 1, 0.0);
        for (std::size_t i = 0; i <= K_; ++i)
        {
            if (a[i] == 0)
                continue;
            for (std::size_t j = 0; i + j <= K_; ++j)
                out[i + j] += a[i] * b[j];
        }
        return out;
    }

    std::size_t K_;
    std::vector<std::vector<double>> P_;
};
}  // namespace

TEST(WSequence, Examples)
{
    auto const p = canonical_exact_params();
    auto const w = w_sequence(p, 2);
    EXPECT_EQ(w.w[0], 1.0);
    EXPECT_DOUBLE_EQ(w.w[1], 0.5);
    EXPECT_NEAR(w.w[2], 0.3232233, 1e-7);
    EXPECT_EQ(w.n_max(), 2u);
}

TEST(WSequence, SlackAsymptotics)
{
    auto const p = canonical_exact_params();
    WStream s(p);
    while (s.index() < 1000000)
    {
        s.advance();
    }
    double const n = 1e6;
    EXPECT_NEAR(s.value() * (0.25 * n) * (0.25 * n), 1.0, 0.02);
}

TEST(WSequence, StreamMatchesVector)
{
    auto const p = canonical_mc_params();
    auto const w = w_sequence(p, 500);
    WStream s(p);
    for (std::size_t k = 0; k <= 500; ++k, s.advance())
    {
        ASSERT_EQ(s.value(), w.w[k]);
    }
}

TEST(ZeroHitTables, HandExamples)
{
    auto const t = zero_hit_tables(canonical_exact_params(), 2);
    EXPECT_DOUBLE_EQ(t.u[1], 0.875);
    EXPECT_DOUBLE_EQ(t.r[1], 0.875);
    EXPECT_DOUBLE_EQ(t.q[1], 0.125);
    EXPECT_NEAR(t.u[2], 0.875 * (1 - 0.125 * std::sqrt(0.5)), 1e-15);
    EXPECT_NEAR(t.r[2], t.u[2] - 0.875 * 0.875, 1e-15);
    EXPECT_NEAR(t.q[2], 1 - t.r[1] - t.r[2], 1e-15);
    // Rounded reference values (hand arithmetic, ~6 digits)
    EXPECT_NEAR(t.u[2], 0.7976615, 2e-6);
    EXPECT_NEAR(t.r[2], 0.0320365, 2e-6);
    EXPECT_NEAR(t.q[2], 0.0929635, 2e-6);
    EXPECT_THROW(zero_hit_tables(canonical_exact_params(), 0), DomainError);
}

TEST(ZeroHitTables, MatchBruteForceChain)
{
    for (auto const& p : {canonical_exact_params(), canonical_mc_params()})
    {
        BruteChain const chain(p, 400);
        auto const t = zero_hit_tables(p, 6);
        std::vector<double> v(chain.size(), 0.0), taboo(chain.size(), 0.0);
        v[0] = taboo[0] = 1.0;
        double q = 1.0;
        for (std::size_t n = 1; n <= 6; ++n)
        {
            v = chain.step(v);
            taboo = chain.step(taboo);
            double const first = taboo[0];
            taboo[0] = 0.0;
            q -= first;
            EXPECT_NEAR(t.u[n], v[0], 1e-9) << n;
            EXPECT_NEAR(t.r[n], first, 1e-9) << n;
            EXPECT_NEAR(t.q[n], q, 1e-9) << n;
        }
    }
}

TEST(ZeroHitTables, ZeroProbabilitiesAgree)
{
    auto const p = canonical_mc_params();
    auto const t = zero_hit_tables(p, 3000);
    auto const u = zero_probabilities(p, 3000);
    for (std::size_t n = 0; n <= 3000; ++n)
    {
        ASSERT_EQ(u[n], t.u[n]);
    }
}

TEST(ZeroHitTables, RenewalAndSweepIdentities)
{
    auto const t = zero_hit_tables(canonical_exact_params(), 1500);
    for (std::size_t n = 1; n <= 1500; n += 7)
    {
        long double conv = 0, sweep = 0;
        for (std::size_t k = 1; k <= n; ++k)
            conv += (long double)t.r[k] * t.u[n - k];
        for (std::size_t k = 0; k <= n; ++k)
            sweep += (long double)t.u[k] * t.q[n - k];
        ASSERT_NEAR(double(conv), t.u[n], 1e-10);
        ASSERT_NEAR(double(sweep), 1.0, 1e-10);
        ASSERT_GE(t.r[n], 0.0);
    }
}

TEST(Meander, Examples)
{
    auto const p = canonical_exact_params();
    auto const t = zero_hit_tables(p, 100);
    EXPECT_EQ(meander_laplace(p, t, 5, 0.0, 1.0).value, 1.0);
    // n = 0: one step conditioned on leaving zero
    double const b = 3.0, lambda = 0.7;
    double const s = std::exp(-lambda / b);
    double const g = 1 - gap_g(p, 1 - s);
    double const g0 = 1 - p.d;
    EXPECT_NEAR(meander_laplace(p, t, 0, lambda, b).value, (g - g0) / (1 - g0),
                1e-13);
    EXPECT_THROW(meander_laplace(p, t, 100, 1.0, 1.0), IndexError);
    EXPECT_THROW(meander_laplace(p, t, 5, -1.0, 1.0), DomainError);
}

TEST(Meander, MatchesBruteForceTabooChain)
{
    auto const p = canonical_mc_params();
    BruteChain const chain(p, 400);
    auto const t = zero_hit_tables(p, 10);
    double const b = 1.0, lambda = 0.4;
    std::vector<double> taboo(chain.size(), 0.0);
    taboo[0] = 1.0;
    double alive = 1.0;
    for (std::size_t step = 1; step <= 5; ++step)
    {
        taboo = chain.step(taboo);
        alive -= taboo[0];
        taboo[0] = 0.0;
        // meander index n evaluates Z at time n + 1
        std::size_t const n = step - 1;
        double num = 0;
        for (std::size_t j = 1; j < chain.size(); ++j)
            num += taboo[j] * std::exp(-lambda * double(j) / b);
        EXPECT_NEAR(meander_laplace(p, t, n, lambda, b).value, num / alive, 1e-8)
            << step;
    }
}

TEST(Meander, ApproachesLinnik)
{
    auto const p = canonical_exact_params();
    auto const t = zero_hit_tables(p, 5001);
    double const n = 5000;
    double const v = meander_laplace(p, t, 5000, 1.0, n * n).value;
    EXPECT_NEAR(v, linnik_laplace(1.0, p, 1.0), 0.02);
}

TEST(Extinction, Examples)
{
    auto const p = canonical_exact_params();
    auto const w = w_sequence(p, 40000);
    // floor(b_n z) = 0: nobody to go extinct
    EXPECT_EQ(bgw_extinction_exact(p, w, 1e-9, 1.0, 10, 1e-12), 1.0);
    EXPECT_EQ(bgw_extinction_exact(p, w, 1.0, 0.0, 10, 1e-12), 0.0);
    EXPECT_NEAR(bgw_extinction_exact(p, w, 1.0, 4.0, 10000, 1e-12),
                std::exp(-1.0), 0.01);
    // Small case against (1 - w[n])^start directly: n = 2, b = 4, start 4
    EXPECT_NEAR(bgw_extinction_exact(p, w, 1.0, 1.0, 2, 1e-12),
                std::pow(1 - w.w[2], 4.0), 1e-14);
    EXPECT_THROW(bgw_extinction_exact(p, w, 1.0, 5.0, 10000, 1e-12), IndexError);
}

TEST(ArcsineLocalMass, Examples)
{
    auto const t = zero_hit_tables(canonical_exact_params(), 20000);
    EXPECT_NEAR(arcsine_local_mass(t, 2, 1.0, 0.5), 0.125, 1e-15);
    EXPECT_NEAR(arcsine_local_mass(t, 2, 1.0, 1.0), 0.875, 1e-15);
    EXPECT_THROW(arcsine_local_mass(t, 3, 1.0, 0.5), DomainError);
    double const n = 20000;
    double const product = n * std::numbers::pi * std::sqrt(0.25)
                           * arcsine_local_mass(t, 20000, 1.0, 0.5);
    EXPECT_NEAR(product, 1.0, 0.01);
}

TEST(LocalTimeMoments, Examples)
{
    auto const t = zero_hit_tables(canonical_exact_params(), 30000);
    auto const m0 = local_time_moments(t, 0);
    EXPECT_EQ(m0.m1, 1.0);
    EXPECT_EQ(m0.m2, 1.0);
    auto const m1 = local_time_moments(t, 1);
    EXPECT_DOUBLE_EQ(m1.m1, 1.875);
    EXPECT_DOUBLE_EQ(m1.m2, 3.625);
    auto const m = local_time_moments(t, 30000);
    EXPECT_NEAR(m.m1 / (30000 * t.u[30000]), 2.0, 0.1);
}

TEST(LocalTimeMoments, MatchDirectDoubleSum)
{
    auto const t = zero_hit_tables(canonical_mc_params(), 200);
    std::size_t const n = 200;
    // E L^2 = sum_{i,j} P(Z_i = 0, Z_j = 0) = sum_i u_i + 2 sum_{i<j} u_i u_{j-i}
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i <= n; ++i)
    {
        m1 += t.u[i];
        for (std::size_t j = 0; j <= n; ++j)
        {
            std::size_t const lo = std::min(i, j), hi = std::max(i, j);
            m2 += t.u[lo] * t.u[hi - lo];
        }
    }
    auto const m = local_time_moments(t, n);
    EXPECT_NEAR(m.m1, m1, 1e-12);
    EXPECT_NEAR(m.m2, m2, 1e-9);
}

TEST(TablesCsv, HeaderAndRows)
{
    auto const p = canonical_exact_params();
    auto const w = w_sequence(p, 3);
    auto const t = zero_hit_tables(w);
    std::ostringstream os;
    write_tables_csv(os, w, t);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "n,w,u,r,q");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    EXPECT_EQ(rows, 4);
    EXPECT_NE(os.str().find("\n1,0.5,0.875,0.875,0.125\n"), std::string::npos);
}
