// SPDX-License-Identifier: Apache-2.0
#include "bgwi/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bgwi/errors.hpp"

namespace bgwi
{
EmpiricalTransform empirical_laplace(std::span<double const> samples,
                                     std::span<double const> grid)
{
    if (samples.empty())
    {
        throw EmptySample();
    }
    for (double x : samples)
    {
        if (!(x >= 0))
        {
            throw DomainError("Laplace samples must be nonnegative");
        }
    }
    EmpiricalTransform out;
    out.lambda_grid.assign(grid.begin(), grid.end());
    out.n_samples = samples.size();
    double const n = static_cast<double>(samples.size());
    for (double lambda : grid)
    {
        // Welford
        double mean = 0.0;
        double m2 = 0.0;
        std::size_t count = 0;
        for (double x : samples)
        {
            double const v = std::exp(-lambda * x);
            ++count;
            double const delta = v - mean;
            mean += delta / static_cast<double>(count);
            m2 += delta * (v - mean);
        }
        double const var = count > 1 ? m2 / (n - 1) : 0.0;
        out.mean.push_back(mean);
        out.std_error.push_back(std::sqrt(var / n));
    }
    return out;
}

double ks_statistic(std::vector<double> samples,
                    std::function<double(double)> const& cdf)
{
    if (samples.empty())
    {
        throw EmptySample();
    }
    std::sort(samples.begin(), samples.end());
    double const n = static_cast<double>(samples.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        double const f = cdf(samples[i]);
        double const above = static_cast<double>(i + 1) / n - f;
        double const below = f - static_cast<double>(i) / n;
        stat = std::max({stat, above, below});
    }
    return stat;
}

SlopeFit log_log_slope(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size() || x.size() < 2)
    {
        throw DomainError("slope fit needs two or more matched points");
    }
    std::size_t const m = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i)
    {
        if (!(x[i] > 0) || !(y[i] > 0))
        {
            throw DomainError("log-log fit needs strictly positive values");
        }
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    double const mx = sx / static_cast<double>(m);
    double const my = sy / static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i)
    {
        double const dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    double const slope = sxy / sxx;
    double sse = 0;
    for (std::size_t i = 0; i < m; ++i)
    {
        double const resid = std::log(y[i]) - my
                             - slope * (std::log(x[i]) - mx);
        sse += resid * resid;
    }
    double const se = m > 2 ? std::sqrt(sse / static_cast<double>(m - 2) / sxx)
                            : 0.0;
    return {slope, se};
}

SlopeFit tail_index_fit(std::span<double const> values, std::size_t k_lo,
                        std::size_t k_hi)
{
    if (k_lo < 1 || k_hi <= k_lo || k_hi >= values.size())
    {
        throw DomainError("tail fit range must satisfy 1 <= k_lo < k_hi < size");
    }
    std::vector<double> ks;
    ks.reserve(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k)
    {
        ks.push_back(static_cast<double>(k));
    }
    return log_log_slope(ks, values.subspan(k_lo, k_hi - k_lo + 1));
}

Proportion proportion(std::size_t successes, std::size_t trials)
{
    if (trials == 0)
    {
        throw EmptySample();
    }
    double const n = static_cast<double>(trials);
    double const p = static_cast<double>(successes) / n;
    return {p, std::sqrt(p * (1 - p) / n)};
}

}  // namespace bgwi
