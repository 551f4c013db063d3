// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/exact.hpp
//! Pre-limit quantities by generating-function iteration.
//!
//! Every iterate is carried in the gap variable w = 1 - s; 1 - w is never
//! formed and subtracted, so values near the fixed point s = 1 keep full
//! relative precision.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "laws.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
//! w[k] = 1 - f^{ok}(0): extinction gaps of the BGW process
struct WSequence
{
    StableFamilyParams params;
    std::vector<double> w;

    std::size_t n_max() const noexcept { return w.size() - 1; }
};

WSequence w_sequence(StableFamilyParams const& params, std::size_t n_max);

//! Constant-memory variant of w_sequence for very long horizons
class WStream
{
  public:
    explicit WStream(StableFamilyParams const& params) : params_{params} {}

    double value() const noexcept { return w_; }
    std::size_t index() const noexcept { return k_; }
    void advance() noexcept
    {
        w_ = gap_f(params_, w_);
        ++k_;
    }

  private:
    StableFamilyParams params_;
    double w_{1};
    std::size_t k_{0};
};

//---------------------------------------------------------------------------//
/*!
 * Zero-hit quantities of the BGWI started at 0.
 *
 * u[n] = P(Z(n) = 0), r[n] = P(rho = n), q[n] = P(rho > n) where rho is the
 * first return time to zero.
 */
struct ZeroHitTable
{
    std::vector<double> u;
    std::vector<double> r;
    std::vector<double> q;

    std::size_t n_max() const noexcept { return u.size() - 1; }
};

//! u[n] = P(Z(n) = 0) for n <= n_max by the product formula, O(n)
std::vector<double>
zero_probabilities(StableFamilyParams const& params, std::size_t n_max);

//! Reference O(n^2) construction by renewal deconvolution
ZeroHitTable zero_hit_tables(WSequence const& w);
ZeroHitTable zero_hit_tables(StableFamilyParams const& params,
                             std::size_t n_max);

//---------------------------------------------------------------------------//
struct MeanderEvaluation
{
    std::size_t n;
    double lambda;
    double b_n;
    double value;
};

/*!
 * E[exp(-lambda Z((n+1) ^ rho) / b) | rho > n+1] in O(n).
 *
 * Unrolls N(n+1, s) = [1 - g(s)] q_n + g(s) N(n, f(s)) at s = exp(-lambda/b).
 */
MeanderEvaluation
meander_laplace(StableFamilyParams const& params, ZeroHitTable const& tables,
                std::size_t n, double lambda, double b_scale);

//! P(BGW from floor(b_n z) is extinct by floor(n t)), exactly
double bgw_extinction_exact(StableFamilyParams const& params,
                            WSequence const& w, double z, double t,
                            std::size_t n, double bn_tol);

//! P(g_t(Z_n) = s) = u[ns - 1] q[n(t - s)]
double arcsine_local_mass(ZeroHitTable const& tables, std::size_t n, double t,
                          double s);

struct LocalTimeMoments
{
    double m1;  //!< E L(n), zero at time 0 included
    double m2;  //!< E L(n)^2
};

LocalTimeMoments local_time_moments(ZeroHitTable const& tables, std::size_t n);

//! CSV with columns n,w,u,r,q
void write_tables_csv(std::ostream& os, WSequence const& w,
                      ZeroHitTable const& tables);

}  // namespace bgwi
