// SPDX-License-Identifier: Apache-2.0
#include "bgwi/laws.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace bgwi
{
namespace
{
// Below this index masses come from the ratio recursion, above from the
// gamma-ratio closed form.
constexpr std::uint64_t kRecursionLimit = 4096;

void require(bool ok, char const* reason)
{
    if (!ok)
    {
        throw InvalidParams(reason);
    }
}

void require_pure_power(StableFamilyParams const& params, char const* what)
{
    if (params.family != Family::pure_power)
    {
        throw Unsupported(std::string(what)
                          + ": masses of the log-perturbed family are not "
                            "available (generating functions only)");
    }
}

// Sibuya(alpha) mass at k >= 1: alpha/k * P(N > k-1)
double sibuya_mass(double alpha, std::uint64_t k)
{
    if (alpha >= 1)
    {
        return k == 1 ? 1.0 : 0.0;
    }
    if (k <= 256)
    {
        return alpha / static_cast<double>(k) * sibuya_survival(alpha, k - 1);
    }
    double const kk = static_cast<double>(k);
    return alpha * boost::math::tgamma_delta_ratio(kk - alpha, 1 + alpha)
           / std::tgamma(1 - alpha);
}

/*
 * Smallest k > lo with survival(k) < target, given survival(lo) >= target.
 * The guess comes from the pure power asymptotics and is refined by exact
 * comparisons, so the result does not depend on the guess.
 */
template<class Survival>
std::uint64_t first_below(Survival&& survival, std::uint64_t lo, double target,
                          double guess, std::uint64_t cap)
{
    auto const clamp_guess = [&](double g) -> std::uint64_t {
        if (!(g < static_cast<double>(cap)))
        {
            return cap;
        }
        return std::max<std::uint64_t>(lo + 1, static_cast<std::uint64_t>(g));
    };
    std::uint64_t hi = clamp_guess(guess * 1.05 + 1);
    while (!(survival(hi) < target))
    {
        if (hi >= cap)
        {
            throw TailCapExceeded("heavy-tail draw exceeded cap "
                                  + std::to_string(cap));
        }
        lo = hi;
        hi = hi > cap / 2 ? cap : 2 * hi;
    }
    std::uint64_t const low_guess = clamp_guess(guess * 0.95);
    if (low_guess > lo && low_guess < hi && !(survival(low_guess) < target))
    {
        lo = low_guess;
    }
    // Invariant: survival(lo) >= target > survival(hi)
    while (hi - lo > 1)
    {
        std::uint64_t const mid = lo + (hi - lo) / 2;
        if (survival(mid) < target)
        {
            hi = mid;
        }
        else
        {
            lo = mid;
        }
    }
    return hi;
}

count_t checked_add(count_t a, count_t b)
{
    count_t out;
    if (__builtin_add_overflow(a, b, &out))
    {
        throw OverflowError("population sum overflows 64 bits");
    }
    return out;
}

count_t checked_mul(count_t a, count_t b)
{
    count_t out;
    if (__builtin_mul_overflow(a, b, &out))
    {
        throw OverflowError("population product overflows 64 bits");
    }
    return out;
}

count_t draw_binomial(RngStream& rng, count_t n, double p)
{
    if (p <= 0 || n == 0)
    {
        return 0;
    }
    if (p >= 1)
    {
        return n;
    }
    return std::binomial_distribution<count_t>(n, p)(rng);
}
}  // namespace

//---------------------------------------------------------------------------//
StableFamilyParams validate_params(double alpha, double c, double d,
                                   Family family, double c_prime)
{
    require(std::isfinite(alpha) && std::isfinite(c) && std::isfinite(d)
                && std::isfinite(c_prime),
            "parameters must be finite");
    require(alpha > 0 && alpha <= 1, "alpha must lie in (0,1]");
    require(c > 0, "c must be positive");
    require(d > 0, "d must be positive");
    require(c * (1 + alpha) <= 1, "c(1+α) > 1");
    require(d < 1, "d must be < 1 so that ν(0) > 0");

    StableFamilyParams params;
    params.alpha = alpha;
    params.c = c;
    params.d = d;
    params.delta = d / (alpha * c);
    params.family = family;
    if (family == Family::log_perturbed)
    {
        require(alpha == 1, "log-perturbed family requires alpha = 1");
        require(c_prime > 0 && c_prime < 2.0 / 3.0, "c' must lie in (0, 2/3)");
        require(c_prime * (2 - c) > 0 && c_prime * (2 - c) < 1,
                "c'(2-c) must lie in (0,1)");
        params.c_prime = c_prime;
    }
    return params;
}

StableFamilyParams canonical_exact_params()
{
    return validate_params(0.5, 0.5, 0.125);
}

StableFamilyParams canonical_mc_params()
{
    return validate_params(0.9, 0.5, 0.225);
}

char const* to_string(Family family) noexcept
{
    return family == Family::pure_power ? "pure_power" : "log_perturbed";
}

//---------------------------------------------------------------------------//
double sibuya_survival(double alpha, std::uint64_t n)
{
    if (n == 0)
    {
        return 1.0;
    }
    if (alpha >= 1)
    {
        return 0.0;
    }
    if (n <= 256)
    {
        double s = 1.0;
        for (std::uint64_t j = 1; j <= n; ++j)
        {
            s *= 1.0 - alpha / static_cast<double>(j);
        }
        return s;
    }
    double const nn = static_cast<double>(n);
    return boost::math::tgamma_delta_ratio(nn + 1 - alpha, alpha)
           / std::tgamma(1 - alpha);
}

double offspring_pmf(StableFamilyParams const& params, std::uint64_t k)
{
    require_pure_power(params, "offspring_pmf");
    double const a = params.alpha;
    double const c = params.c;
    if (k == 0)
    {
        return c;
    }
    if (k == 1)
    {
        return 1 - c * (1 + a);
    }
    double p = c * a * (1 + a) / 2;
    if (a >= 1)
    {
        return k == 2 ? p : 0.0;
    }
    if (k <= kRecursionLimit)
    {
        for (std::uint64_t j = 2; j < k; ++j)
        {
            double const jj = static_cast<double>(j);
            p *= (jj - 1 - a) / (jj + 1);
        }
        return p;
    }
    double const kk = static_cast<double>(k);
    return c * a * (1 + a) * boost::math::tgamma_delta_ratio(kk - 1 - a, 2 + a)
           / std::tgamma(1 - a);
}

double immigration_pmf(StableFamilyParams const& params, std::uint64_t k)
{
    require_pure_power(params, "immigration_pmf");
    double const a = params.alpha;
    if (k == 0)
    {
        return 1 - params.d;
    }
    if (k <= kRecursionLimit)
    {
        double p = params.d * a;
        for (std::uint64_t j = 1; j < k; ++j)
        {
            double const jj = static_cast<double>(j);
            p *= (jj - a) / (jj + 1);
        }
        return p;
    }
    return params.d * sibuya_mass(a, k);
}

double offspring_tail(StableFamilyParams const& params, std::uint64_t k)
{
    require_pure_power(params, "offspring_tail");
    if (k == 0)
    {
        return 1 - params.c;
    }
    return params.c * sibuya_mass(params.alpha, k);
}

double immigration_tail(StableFamilyParams const& params, std::uint64_t k)
{
    require_pure_power(params, "immigration_tail");
    return params.d * sibuya_survival(params.alpha, k);
}

//---------------------------------------------------------------------------//
double gap_f(StableFamilyParams const& params, double w) noexcept
{
    if (params.family == Family::pure_power)
    {
        return w - params.c * std::pow(w, 1 + params.alpha);
    }
    if (w <= 0)
    {
        return 0.0;
    }
    return w - params.c * w * w * (1 - params.c_prime * std::log(w));
}

double gap_f_excess(StableFamilyParams const& params, double w) noexcept
{
    if (params.family == Family::pure_power)
    {
        return params.c * std::pow(w, 1 + params.alpha);
    }
    if (w <= 0)
    {
        return 0.0;
    }
    return params.c * w * w * (1 - params.c_prime * std::log(w));
}

double gap_g(StableFamilyParams const& params, double w) noexcept
{
    if (params.family == Family::pure_power)
    {
        return params.d * std::pow(w, params.alpha);
    }
    if (w <= 0)
    {
        return 0.0;
    }
    return params.d * w * (1 - params.c_prime * std::log(w));
}

GapForms eval_w_forms(StableFamilyParams const& params, double w)
{
    if (!(w >= 0 && w <= 1))
    {
        throw DomainError("gap variable w must lie in [0,1], got "
                          + std::to_string(w));
    }
    return {gap_f(params, w), gap_g(params, w)};
}

//---------------------------------------------------------------------------//
// LawTable
//---------------------------------------------------------------------------//
LawTable::LawTable(StableFamilyParams const& params, LawKind kind,
                   std::size_t size)
    : params_{params}, kind_{kind}
{
    require_pure_power(params, "LawTable");
    this->extend_to(std::max<std::size_t>(size, 3));
}

double LawTable::tail_index() const noexcept
{
    return kind_ == LawKind::offspring ? 1 + params_.alpha : params_.alpha;
}

void LawTable::extend_to(std::size_t size)
{
    if (size <= pmf_.size())
    {
        return;
    }
    double const a = params_.alpha;
    pmf_.reserve(size);
    cdf_.reserve(size);
    tail_.reserve(size);
    if (pmf_.empty())
    {
        if (kind_ == LawKind::offspring)
        {
            pmf_ = {params_.c, 1 - params_.c * (1 + a),
                    params_.c * a * (1 + a) / 2};
            tail_ = {1 - params_.c, params_.c * a,
                     params_.c * a * (1 - a) / 2};
        }
        else
        {
            pmf_ = {1 - params_.d, params_.d * a,
                    params_.d * a * (1 - a) / 2};
            tail_ = {params_.d, params_.d * (1 - a),
                     params_.d * (1 - a) * (1 - a / 2)};
        }
    }
    while (pmf_.size() < size)
    {
        // k is the index of the last entry; append k+1
        double const k = static_cast<double>(pmf_.size() - 1);
        if (kind_ == LawKind::offspring)
        {
            pmf_.push_back(pmf_.back() * (k - 1 - a) / (k + 1));
            tail_.push_back(tail_.back() * (k - a) / (k + 1));
        }
        else
        {
            pmf_.push_back(pmf_.back() * (k - a) / (k + 1));
            tail_.push_back(tail_.back() * (k + 1 - a) / (k + 1));
        }
    }
    cdf_.resize(pmf_.size());
    for (std::size_t k = 0; k < tail_.size(); ++k)
    {
        cdf_[k] = 1.0 - tail_[k];
    }
}

std::optional<std::uint64_t> LawTable::invert(double u) const noexcept
{
    // Most mass sits on the first few cells
    std::size_t const scan = std::min<std::size_t>(4, cdf_.size());
    for (std::size_t k = 0; k < scan; ++k)
    {
        if (u <= cdf_[k])
        {
            return k;
        }
    }
    auto it = std::lower_bound(cdf_.begin() + scan, cdf_.end(), u);
    if (it == cdf_.end())
    {
        return std::nullopt;
    }
    return static_cast<std::uint64_t>(it - cdf_.begin());
}

std::uint64_t LawTable::sample_above(RngStream& rng, std::uint64_t k) const
{
    double const u = rng.uniform();
    std::size_t const last = tail_.size() - 1;
    if (k < last)
    {
        if (!(tail_[k] > 0))
        {
            throw DomainError("conditioning on an event of zero mass");
        }
        // Uniform over (cdf[k], 1)
        double const v = cdf_[k] + u * tail_[k];
        if (v <= cdf_[last])
        {
            auto it = std::lower_bound(cdf_.begin() + static_cast<long>(k) + 1,
                                       cdf_.begin() + static_cast<long>(last) + 1,
                                       v);
            return static_cast<std::uint64_t>(it - cdf_.begin());
        }
        return this->sample_above(rng, last);
    }
    if (params_.alpha >= 1)
    {
        throw DomainError("conditioning on an event of zero mass");
    }
    double const a = params_.alpha;
    if (kind_ == LawKind::offspring)
    {
        // mu((j,inf)) is proportional to the Sibuya mass at j
        auto survival = [a](std::uint64_t j) { return sibuya_mass(a, j); };
        double const target = u * survival(k);
        double const guess = static_cast<double>(k) * std::pow(u, -1 / (1 + a));
        return first_below(survival, k, target, guess, offspring_tail_cap);
    }
    auto survival = [a](std::uint64_t j) { return sibuya_survival(a, j); };
    double const target = u * survival(k);
    double const guess = static_cast<double>(k) * std::pow(u, -1 / a);
    return first_below(survival, k, target, guess, sibuya_cap);
}

//---------------------------------------------------------------------------//
// Samplers
//---------------------------------------------------------------------------//
std::uint64_t sample_offspring(RngStream& rng, LawTable const& law)
{
    if (auto k = law.invert(rng.uniform()))
    {
        return *k;
    }
    return law.sample_above(rng, law.size() - 1);
}

std::uint64_t sample_sibuya(RngStream& rng, double alpha)
{
    constexpr std::uint64_t sequential_steps = 64;
    if (alpha >= 1)
    {
        return 1;
    }
    for (std::uint64_t n = 1; n <= sequential_steps; ++n)
    {
        if (rng.uniform() <= alpha / static_cast<double>(n))
        {
            return n;
        }
    }
    // Memoryless continuation: P(N > n | N > T) = S(n) / S(T)
    double const u = rng.uniform();
    auto survival = [alpha](std::uint64_t j) {
        return sibuya_survival(alpha, j);
    };
    double const target = u * survival(sequential_steps);
    double const guess = static_cast<double>(sequential_steps)
                         * std::pow(u, -1 / alpha);
    return first_below(survival, sequential_steps, target, guess, sibuya_cap);
}

std::uint64_t
sample_immigration(RngStream& rng, StableFamilyParams const& params)
{
    if (rng.uniform() <= 1 - params.d)
    {
        return 0;
    }
    return sample_sibuya(rng, params.alpha);
}

count_t sample_offspring_total(RngStream& rng, LawTable const& law, count_t n,
                               OffspringSumOptions const& opts)
{
    if (n < 0)
    {
        throw DomainError("negative number of individuals");
    }
    if (law.kind() != LawKind::offspring)
    {
        throw DomainError("sample_offspring_total needs the offspring table");
    }
    auto const draw_one = [&](count_t total) {
        auto const k = static_cast<count_t>(sample_offspring(rng, law));
        return checked_add(total, k);
    };

    count_t total = 0;
    if (n < opts.direct_threshold)
    {
        for (count_t i = 0; i < n; ++i)
        {
            total = draw_one(total);
        }
        return total;
    }

    std::size_t const cut
        = std::max<std::size_t>(1, std::min(opts.table_cut, law.size() - 1));
    auto const tail = law.tail_values();
    auto const cdf = law.cdf_values();
    auto const pmf = law.pmf_values();

    count_t const tail_count = draw_binomial(rng, n, tail[cut]);
    count_t remaining = n - tail_count;

    std::size_t k = 0;
    for (; k < cut && remaining > 0; ++k)
    {
        // Mass of the cells {k..cut}
        double const above = (k == 0 ? 1.0 : tail[k - 1]) - tail[cut];
        if (remaining < opts.direct_threshold)
        {
            // Place the stragglers individually on {k..cut}
            double const base = k == 0 ? 0.0 : cdf[k - 1];
            for (count_t i = 0; i < remaining; ++i)
            {
                double const v = base + rng.uniform() * above;
                auto it = std::lower_bound(cdf.begin() + static_cast<long>(k),
                                           cdf.begin() + static_cast<long>(cut),
                                           v);
                total = checked_add(total,
                                    static_cast<count_t>(it - cdf.begin()));
            }
            remaining = 0;
            break;
        }
        count_t const here = draw_binomial(rng, remaining, pmf[k] / above);
        total = checked_add(total, checked_mul(static_cast<count_t>(k), here));
        remaining -= here;
    }
    if (remaining > 0)
    {
        total = checked_add(total,
                            checked_mul(static_cast<count_t>(cut), remaining));
    }
    for (count_t i = 0; i < tail_count; ++i)
    {
        auto const j = static_cast<count_t>(law.sample_above(rng, cut));
        total = checked_add(total, j);
    }
    return total;
}

//---------------------------------------------------------------------------//
PerturbedImmigration
make_perturbed_immigration(StableFamilyParams const& base, double p_m)
{
    if (!(p_m > 0 && p_m < 1))
    {
        throw InvalidParams("p_m must lie in (0,1)");
    }
    return {base, p_m};
}

double perturbed_pgf(PerturbedImmigration const& law, double s)
{
    double const g = 1 - gap_g(law.base, 1 - s);
    return 1 - law.p_m + law.p_m * s * g;
}

std::uint64_t sample_perturbed_immigration(RngStream& rng,
                                           PerturbedImmigration const& law)
{
    if (rng.uniform() > law.p_m)
    {
        return 0;
    }
    return 1 + sample_immigration(rng, law.base);
}

}  // namespace bgwi
