// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/laws.hpp
//! Offspring and immigration laws of the stable family
//!
//!   f(s) = s + c (1-s)^{1+alpha} l(1-s),    g(s) = 1 - d (1-s)^alpha k(1-s)
//!
//! with l = k = 1 (pure power) or l(w) = k(w) = 1 - c' log w (alpha = 1).
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
enum class Family
{
    pure_power,
    log_perturbed,
};

//---------------------------------------------------------------------------//
/*!
 * Parameters (alpha, c, d) of the offspring/immigration pair.
 *
 * Construct through validate_params so that delta = d / (alpha c) and the
 * generating-function constraints are always consistent.
 */
struct StableFamilyParams
{
    double alpha{0.5};
    double c{0.5};
    double d{0.125};
    double delta{0.5};
    Family family{Family::pure_power};
    //! Slowly varying perturbation strength (log_perturbed only)
    double c_prime{0};
};

StableFamilyParams validate_params(double alpha, double c, double d,
                                   Family family = Family::pure_power,
                                   double c_prime = 0.0);

//! alpha = 0.5, c = 0.5, d = 0.125 (delta = 0.5): exact-table experiments
StableFamilyParams canonical_exact_params();
//! alpha = 0.9, c = 0.5, d = 0.225 (delta = 0.5): Monte Carlo experiments
StableFamilyParams canonical_mc_params();

char const* to_string(Family family) noexcept;

//---------------------------------------------------------------------------//
// Exact masses
//---------------------------------------------------------------------------//

//! [s^k] f(s)
double offspring_pmf(StableFamilyParams const& params, std::uint64_t k);
//! [s^k] g(s)
double immigration_pmf(StableFamilyParams const& params, std::uint64_t k);
//! mu((k, inf)) = c * Sibuya(alpha) mass at k, for k >= 1
double offspring_tail(StableFamilyParams const& params, std::uint64_t k);
//! nu((k, inf)) = d * P(Sibuya > k)
double immigration_tail(StableFamilyParams const& params, std::uint64_t k);

//! P(N > n) for N ~ Sibuya(alpha): prod_{j<=n} (1 - alpha/j)
double sibuya_survival(double alpha, std::uint64_t n);

//---------------------------------------------------------------------------//
// Generating functions in the gap variable w = 1 - s
//---------------------------------------------------------------------------//

struct GapForms
{
    double F;  //!< 1 - f(1-w)
    double G;  //!< 1 - g(1-w)
};

GapForms eval_w_forms(StableFamilyParams const& params, double w);

//! 1 - f(1-w) without domain checks (hot loops)
double gap_f(StableFamilyParams const& params, double w) noexcept;
//! w - F(w) = c w^{1+alpha} l(w), i.e. f(1-w) - (1-w) without cancellation
double gap_f_excess(StableFamilyParams const& params, double w) noexcept;
//! 1 - g(1-w) without domain checks (hot loops)
double gap_g(StableFamilyParams const& params, double w) noexcept;

//---------------------------------------------------------------------------//
enum class LawKind
{
    offspring,
    immigration,
};

//---------------------------------------------------------------------------//
/*!
 * Tabulated pmf, cdf and survival for one of the two laws.
 *
 * Entries are generated by the exact successive-ratio recursion. The table is
 * extended by a single owner (extend_to) before it is shared; samplers only
 * read it and fall back to closed-form survival inversion past the last
 * entry, so every reader sees a consistent prefix.
 */
class LawTable
{
  public:
    static constexpr std::size_t default_size = 4097;

    LawTable(StableFamilyParams const& params, LawKind kind,
             std::size_t size = default_size);

    void extend_to(std::size_t size);

    LawKind kind() const noexcept { return kind_; }
    StableFamilyParams const& params() const noexcept { return params_; }
    //! 1 + alpha for offspring, alpha for immigration
    double tail_index() const noexcept;
    std::size_t size() const noexcept { return pmf_.size(); }

    double pmf(std::size_t k) const { return pmf_.at(k); }
    double cdf(std::size_t k) const { return cdf_.at(k); }
    //! Mass strictly above k
    double tail(std::size_t k) const { return tail_.at(k); }

    std::span<double const> pmf_values() const noexcept { return pmf_; }
    std::span<double const> cdf_values() const noexcept { return cdf_; }
    std::span<double const> tail_values() const noexcept { return tail_; }

    //! Smallest k with cdf[k] >= u, or nothing when u exceeds covered mass
    std::optional<std::uint64_t> invert(double u) const noexcept;

    //! Draw from the law conditioned on exceeding k (closed-form survival)
    std::uint64_t sample_above(RngStream& rng, std::uint64_t k) const;

  private:
    StableFamilyParams params_;
    LawKind kind_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
    std::vector<double> tail_;
};

//---------------------------------------------------------------------------//
// Samplers
//---------------------------------------------------------------------------//

//! Hard cap on a single heavy-tail draw
inline constexpr std::uint64_t offspring_tail_cap = std::uint64_t{1} << 40;
inline constexpr std::uint64_t sibuya_cap = std::uint64_t{1} << 62;

std::uint64_t sample_offspring(RngStream& rng, LawTable const& law);

//! Sibuya(alpha): sequential scheme, then exact survival inversion
std::uint64_t sample_sibuya(RngStream& rng, double alpha);

std::uint64_t
sample_immigration(RngStream& rng, StableFamilyParams const& params);

struct OffspringSumOptions
{
    //! Below this many individuals, sum single draws
    count_t direct_threshold{64};
    //! Last tabulated cell of the multinomial allocation
    std::size_t table_cut{4096};
};

/*!
 * Sum of n independent offspring draws, exactly.
 *
 * Large n uses a multinomial allocation over cells {0..K} (conditional
 * binomials, stopping once every individual is placed) plus a binomial tail
 * bucket whose members are drawn individually above K.
 */
count_t sample_offspring_total(RngStream& rng, LawTable const& law,
                               count_t n, OffspringSumOptions const& opts = {});

//---------------------------------------------------------------------------//
//! Immigration with pgf 1 - p_m + p_m s g(s)
struct PerturbedImmigration
{
    StableFamilyParams base;
    double p_m;
};

PerturbedImmigration
make_perturbed_immigration(StableFamilyParams const& base, double p_m);

double perturbed_pgf(PerturbedImmigration const& law, double s);

std::uint64_t sample_perturbed_immigration(RngStream& rng,
                                           PerturbedImmigration const& law);

}  // namespace bgwi
