// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/scaling.hpp
//! Scaling sequences b_n, c_n, a_n and the slowly varying factor l*(n).
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "laws.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
/*!
 * Space scale b_n solving b^alpha / l(1/b) = n.
 *
 * Pure power: n^{1/alpha} in closed form (tol unused). Log-perturbed: monotone
 * bisection on [1, n^{2/alpha}] until the bracket is narrower than tol
 * relative to its lower end.
 */
double compute_bn(StableFamilyParams const& params, std::uint64_t n, double tol);

//! Local-time normalization kappa * n * P(Z(n) = 0)
double compute_cn(std::uint64_t n, double u_n, double kappa);

/*!
 * Walk local-time scale a_m.
 *
 * Without data: m^{alpha/(1+alpha)}. With walk return probabilities
 * P(X(k) = 0), k = 0..m: their partial sum (the expected counting local time).
 */
double compute_an(StableFamilyParams const& params, std::uint64_t m,
                  std::optional<std::span<double const>> walk_zero_probs
                  = std::nullopt);

//! l*(n) := u_n n^delta
double compute_lstar(std::uint64_t n, double u_n, double delta);

//---------------------------------------------------------------------------//
struct ScalingEntry
{
    std::uint64_t n;
    double b_n;
    double c_n;
    double a_nb;  //!< a evaluated at floor(n b_n)
    double lstar_n;
};

struct ScalingLadder
{
    StableFamilyParams params;
    double kappa{1};
    std::vector<ScalingEntry> entries;
};

/*!
 * Tabulate the sequences along a ladder of n values.
 *
 * u must cover every n on the ladder (u[n] = P(Z(n) = 0)).
 */
ScalingLadder build_ladder(StableFamilyParams const& params,
                           std::span<std::uint64_t const> ladder,
                           std::span<double const> u, double kappa, double tol);

}  // namespace bgwi
