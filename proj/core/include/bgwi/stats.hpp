// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/stats.hpp
//! Estimators used by the experiment runners.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bgwi
{
//---------------------------------------------------------------------------//
//! Estimate of E exp(-lambda X) on a grid
struct EmpiricalTransform
{
    std::vector<double> lambda_grid;
    std::vector<double> mean;
    std::vector<double> std_error;
    std::size_t n_samples{0};
};

EmpiricalTransform empirical_laplace(std::span<double const> samples,
                                     std::span<double const> grid);

//! Two-sided Kolmogorov-Smirnov distance to a continuous cdf
double ks_statistic(std::vector<double> samples,
                    std::function<double(double)> const& cdf);

struct SlopeFit
{
    double slope;
    double std_error;
};

//! Least-squares slope of log y against log x
SlopeFit log_log_slope(std::span<double const> x, std::span<double const> y);

//! Log-log slope of values[k] against k over [k_lo, k_hi]
SlopeFit tail_index_fit(std::span<double const> values, std::size_t k_lo,
                        std::size_t k_hi);

//---------------------------------------------------------------------------//
//! Frequency of successes with binomial standard error
struct Proportion
{
    double value;
    double std_error;
};

Proportion proportion(std::size_t successes, std::size_t trials);

}  // namespace bgwi
