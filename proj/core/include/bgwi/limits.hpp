// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/limits.hpp
//! Closed-form scaling-limit laws and exact samplers for them.
//---------------------------------------------------------------------------//
#pragma once

#include "laws.hpp"
#include "rng.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
//! Horizon and initial state of a limit law
struct LimitLawParams
{
    StableFamilyParams params;
    double t{1};  //!< time horizon
    double z{0};  //!< initial state
};

//! E_z exp(-lambda Z(t)) for the self-similar CBI
double cbi_laplace(LimitLawParams const& p, double lambda);

//! 1 / (1 + alpha c (t - s) lambda^alpha); s = 0 gives the Yaglom limit
double linnik_laplace(double t, StableFamilyParams const& params,
                      double lambda, double s = 0.0);

//! Beta(1 - delta, delta) density: the generalized arcsine law of g_t / t
double arcsine_density(double delta, double x);
double arcsine_cdf(double delta, double x);

//! P(CB started at z is extinct by t) = exp(-z / (alpha c t)^{1/alpha})
double cb_extinction_cdf(StableFamilyParams const& params, double z, double t);

//! Positive stable variate with Laplace transform exp(-lambda^alpha)
double sample_positive_stable(RngStream& rng, double alpha);

//! (alpha c t E)^{1/alpha} Sigma: distributed as the Linnik law at horizon t
double sample_linnik(RngStream& rng, StableFamilyParams const& params, double t);

//! lim E[L(n)^2] / E[L(n)]^2 = 2 Gamma(1+g)^2 / Gamma(1+2g), g = 1 - delta
double mittag_leffler_moment_ratio(double delta);

enum class WalkKind
{
    immigration,   //!< exp(-d lambda^alpha)
    reproduction,  //!< exp(+c lambda^{1+alpha})
};

double walk_limit_laplace(StableFamilyParams const& params, double lambda,
                          WalkKind which);

}  // namespace bgwi
