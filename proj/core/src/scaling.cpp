// SPDX-License-Identifier: Apache-2.0
#include "bgwi/scaling.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace bgwi
{
namespace
{
// x^alpha / l(1/x) for the log-perturbed slowly varying part
double log_perturbed_index(StableFamilyParams const& params, double x)
{
    return std::pow(x, params.alpha) / (1 + params.c_prime * std::log(x));
}
}  // namespace

double compute_bn(StableFamilyParams const& params, std::uint64_t n, double tol)
{
    if (n < 1)
    {
        throw DomainError("compute_bn requires n >= 1");
    }
    double const nn = static_cast<double>(n);
    if (params.family == Family::pure_power)
    {
        return std::pow(nn, 1 / params.alpha);
    }
    if (!(tol > 0))
    {
        throw DomainError("bisection tolerance must be positive");
    }
    double lo = 1.0;
    double hi = std::pow(nn, 2 / params.alpha);
    if (n == 1)
    {
        return 1.0;
    }
    if (!(log_perturbed_index(params, lo) <= nn
          && log_perturbed_index(params, hi) >= nn))
    {
        throw NoBracket("b_n is not bracketed by [1, n^{2/alpha}] for n = "
                        + std::to_string(n));
    }
    while (hi - lo > tol * lo)
    {
        double const mid = 0.5 * (lo + hi);
        double const lo_val = log_perturbed_index(params, lo);
        double const mid_val = log_perturbed_index(params, mid);
        if (mid_val < lo_val)
        {
            throw NoBracket("x^alpha / l(1/x) is not monotone on the bracket");
        }
        if (mid_val < nn)
        {
            lo = mid;
        }
        else
        {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double compute_cn(std::uint64_t n, double u_n, double kappa)
{
    if (!(u_n > 0 && u_n <= 1))
    {
        throw DomainError("u_n must lie in (0,1]");
    }
    if (!(kappa > 0))
    {
        throw DomainError("kappa must be positive");
    }
    return kappa * static_cast<double>(n) * u_n;
}

double compute_an(StableFamilyParams const& params, std::uint64_t m,
                  std::optional<std::span<double const>> walk_zero_probs)
{
    if (m < 1)
    {
        throw DomainError("compute_an requires m >= 1");
    }
    if (walk_zero_probs)
    {
        auto const probs = *walk_zero_probs;
        if (probs.size() < m + 1)
        {
            throw IndexError("walk return probabilities must cover k = 0..m");
        }
        return std::accumulate(probs.begin(),
                               probs.begin() + static_cast<long>(m) + 1, 0.0);
    }
    return std::pow(static_cast<double>(m), params.alpha / (1 + params.alpha));
}

double compute_lstar(std::uint64_t n, double u_n, double delta)
{
    if (n < 1)
    {
        throw DomainError("compute_lstar requires n >= 1");
    }
    return u_n * std::pow(static_cast<double>(n), delta);
}

ScalingLadder build_ladder(StableFamilyParams const& params,
                           std::span<std::uint64_t const> ladder,
                           std::span<double const> u, double kappa, double tol)
{
    ScalingLadder out;
    out.params = params;
    out.kappa = kappa;
    for (auto n : ladder)
    {
        if (n >= u.size())
        {
            throw IndexError("zero-hit table too short for ladder entry "
                             + std::to_string(n));
        }
        ScalingEntry e;
        e.n = n;
        e.b_n = compute_bn(params, n, tol);
        e.c_n = compute_cn(n, u[n], kappa);
        auto const m = static_cast<std::uint64_t>(
            std::floor(static_cast<double>(n) * e.b_n));
        e.a_nb = compute_an(params, std::max<std::uint64_t>(m, 1));
        e.lstar_n = compute_lstar(n, u[n], params.delta);
        out.entries.push_back(e);
    }
    return out;
}

}  // namespace bgwi
