// SPDX-License-Identifier: Apache-2.0
#include "bgwi/limits.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

namespace bgwi
{
namespace
{
void require_nonnegative(double lambda)
{
    if (!(lambda >= 0))
    {
        throw DomainError("Laplace argument must be nonnegative");
    }
}

void require_open_unit(double x, char const* what)
{
    if (!(x > 0 && x < 1))
    {
        throw DomainError(std::string(what) + " must lie in (0,1)");
    }
}
}  // namespace

double cbi_laplace(LimitLawParams const& p, double lambda)
{
    require_nonnegative(lambda);
    double const a = p.params.alpha;
    double const base = 1 + a * p.params.c * std::pow(lambda, a) * p.t;
    return std::pow(base, -p.params.delta)
           * std::exp(-lambda * p.z / std::pow(base, 1 / a));
}

double linnik_laplace(double t, StableFamilyParams const& params,
                      double lambda, double s)
{
    require_nonnegative(lambda);
    if (!(t > 0) || !(s >= 0 && s < t))
    {
        throw DomainError("linnik_laplace needs t > 0 and s in [0,t)");
    }
    return 1 / (1 + params.alpha * params.c * (t - s)
                        * std::pow(lambda, params.alpha));
}

double arcsine_density(double delta, double x)
{
    require_open_unit(delta, "delta");
    require_open_unit(x, "x");
    return std::sin(std::numbers::pi * delta) / std::numbers::pi
           / (std::pow(x, delta) * std::pow(1 - x, 1 - delta));
}

double arcsine_cdf(double delta, double x)
{
    require_open_unit(delta, "delta");
    if (x <= 0)
    {
        return 0.0;
    }
    if (x >= 1)
    {
        return 1.0;
    }
    return boost::math::ibeta(1 - delta, delta, x);
}

double cb_extinction_cdf(StableFamilyParams const& params, double z, double t)
{
    if (!(z >= 0) || !(t > 0))
    {
        throw DomainError("cb_extinction_cdf needs z >= 0 and t > 0");
    }
    double const a = params.alpha;
    return std::exp(-z / std::pow(a * params.c * t, 1 / a));
}

double sample_positive_stable(RngStream& rng, double alpha)
{
    require_open_unit(alpha, "alpha");
    // Kanter's representation
    double const u = std::numbers::pi * rng.uniform();
    double const e = rng.exponential();
    double const zolotarev = std::sin(alpha * u)
                             / std::pow(std::sin(u), 1 / alpha)
                             * std::pow(std::sin((1 - alpha) * u),
                                        (1 - alpha) / alpha);
    return zolotarev / std::pow(e, (1 - alpha) / alpha);
}

double sample_linnik(RngStream& rng, StableFamilyParams const& params, double t)
{
    if (!(t > 0))
    {
        throw DomainError("sample_linnik needs t > 0");
    }
    double const a = params.alpha;
    double const e = rng.exponential();
    double const sigma = sample_positive_stable(rng, a);
    return std::pow(a * params.c * t * e, 1 / a) * sigma;
}

double mittag_leffler_moment_ratio(double delta)
{
    if (!(delta >= 0 && delta <= 1))
    {
        throw DomainError("delta must lie in [0,1]");
    }
    double const g = 1 - delta;
    return 2 * std::exp(2 * std::lgamma(1 + g) - std::lgamma(1 + 2 * g));
}

double walk_limit_laplace(StableFamilyParams const& params, double lambda,
                          WalkKind which)
{
    require_nonnegative(lambda);
    if (which == WalkKind::immigration)
    {
        return std::exp(-params.d * std::pow(lambda, params.alpha));
    }
    return std::exp(params.c * std::pow(lambda, 1 + params.alpha));
}

}  // namespace bgwi
