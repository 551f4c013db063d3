// SPDX-License-Identifier: Apache-2.0
#include "bgwi/exact.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bgwi/format.hpp"
#include "bgwi/scaling.hpp"

namespace bgwi
{
namespace
{
constexpr double kNegativeMassTol = 1e-12;
constexpr double kRangeSlack = 1e-9;

std::size_t as_grid_index(double x, char const* what)
{
    double const rounded = std::round(x);
    if (std::abs(x - rounded) > 1e-9 * std::max(1.0, std::abs(x)))
    {
        throw DomainError(std::string(what) + " must be an integer");
    }
    return static_cast<std::size_t>(rounded);
}
}  // namespace

WSequence w_sequence(StableFamilyParams const& params, std::size_t n_max)
{
    WSequence out{params, {}};
    out.w.resize(n_max + 1);
    WStream stream(params);
    for (std::size_t k = 0; k <= n_max; ++k)
    {
        out.w[k] = stream.value();
        stream.advance();
    }
    return out;
}

std::vector<double>
zero_probabilities(StableFamilyParams const& params, std::size_t n_max)
{
    std::vector<double> u(n_max + 1);
    WStream stream(params);
    u[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n)
    {
        u[n] = u[n - 1] * (1 - gap_g(params, stream.value()));
        stream.advance();
    }
    return u;
}

ZeroHitTable zero_hit_tables(WSequence const& ws)
{
    std::size_t const n_max = ws.n_max();
    if (n_max < 1)
    {
        throw DomainError("zero_hit_tables requires n_max >= 1");
    }
    ZeroHitTable t;
    t.u.resize(n_max + 1);
    t.r.assign(n_max + 1, 0.0);
    t.q.resize(n_max + 1);

    // Product formula at s = 0: u[n] = prod_{k<n} g(f^{ok}(0))
    t.u[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n)
    {
        t.u[n] = t.u[n - 1] * (1 - gap_g(ws.params, ws.w[n - 1]));
    }

    t.q[0] = 1.0;
    double const* u = t.u.data();
    double* r = t.r.data();
    for (std::size_t n = 1; n <= n_max; ++n)
    {
        double conv = 0.0;
        for (std::size_t k = 1; k < n; ++k)
        {
            conv += r[k] * u[n - k];
        }
        r[n] = u[n] - conv;
        if (r[n] < -kNegativeMassTol)
        {
            throw NegativeMass(n, r[n]);
        }
        t.q[n] = t.q[n - 1] - r[n];
    }
    return t;
}

ZeroHitTable zero_hit_tables(StableFamilyParams const& params, std::size_t n_max)
{
    return zero_hit_tables(w_sequence(params, n_max));
}

MeanderEvaluation
meander_laplace(StableFamilyParams const& params, ZeroHitTable const& tables,
                std::size_t n, double lambda, double b_scale)
{
    if (n + 1 > tables.n_max())
    {
        throw IndexError("meander_laplace needs q[n+1]");
    }
    if (!(lambda >= 0) || !(b_scale > 0))
    {
        throw DomainError("meander_laplace needs lambda >= 0 and b_scale > 0");
    }
    MeanderEvaluation out{n, lambda, b_scale, 1.0};
    if (lambda == 0)
    {
        return out;
    }
    auto const& q = tables.q;
    double v = -std::expm1(-lambda / b_scale);
    double survive = 1.0;  // Pi_k = E s^{Z(k)}
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
    {
        double const gk = gap_g(params, v);
        sum += q[n - k] * gk * survive;
        survive *= 1 - gk;
        v = gap_f(params, v);
    }
    double const value = 1 - sum / q[n + 1];
    if (value < -kRangeSlack || value > 1 + kRangeSlack)
    {
        throw DomainError("meander transform left [0,1]: "
                          + std::to_string(value));
    }
    out.value = std::clamp(value, 0.0, 1.0);
    return out;
}

double bgw_extinction_exact(StableFamilyParams const& params,
                            WSequence const& ws, double z, double t,
                            std::size_t n, double bn_tol)
{
    if (!(z > 0) || !(t >= 0))
    {
        throw DomainError("bgw_extinction_exact needs z > 0 and t >= 0");
    }
    double const b_n = compute_bn(params, n, bn_tol);
    double const start = std::floor(b_n * z);
    auto const idx = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
    if (idx > ws.n_max())
    {
        throw IndexError("w sequence shorter than floor(n t)");
    }
    if (start == 0)
    {
        return 1.0;
    }
    double const w = ws.w[idx];
    if (w >= 1)
    {
        return 0.0;
    }
    return std::exp(start * std::log1p(-w));
}

double arcsine_local_mass(ZeroHitTable const& tables, std::size_t n, double t,
                          double s)
{
    auto const ns = as_grid_index(static_cast<double>(n) * s, "n s");
    auto const nt = as_grid_index(static_cast<double>(n) * t, "n t");
    if (ns < 1 || nt < ns)
    {
        throw DomainError("arcsine_local_mass needs 1 <= n s <= n t");
    }
    if (nt - ns > tables.n_max())
    {
        throw IndexError("zero-hit tables shorter than n (t - s)");
    }
    return tables.u[ns - 1] * tables.q[nt - ns];
}

LocalTimeMoments local_time_moments(ZeroHitTable const& tables, std::size_t n)
{
    if (n > tables.n_max())
    {
        throw IndexError("local_time_moments beyond the table");
    }
    auto const& u = tables.u;
    // U[m] = sum_{i<=m} u[i]
    std::vector<double> partial(n + 1);
    double acc = 0.0;
    for (std::size_t m = 0; m <= n; ++m)
    {
        acc += u[m];
        partial[m] = acc;
    }
    // sum_{j<k<=n} u[j] u[k-j] = sum_j u[j] (U[n-j] - 1)
    double pairs = 0.0;
    for (std::size_t j = 0; j <= n; ++j)
    {
        pairs += u[j] * (partial[n - j] - 1);
    }
    return {partial[n], partial[n] + 2 * pairs};
}

void write_tables_csv(std::ostream& os, WSequence const& ws,
                      ZeroHitTable const& tables)
{
    os << "n,w,u,r,q\n";
    std::size_t const n_max = std::min(ws.n_max(), tables.n_max());
    for (std::size_t n = 0; n <= n_max; ++n)
    {
        os << n << ',' << format_g17(ws.w[n]) << ',' << format_g17(tables.u[n])
           << ',' << format_g17(tables.r[n]) << ','
           << format_g17(tables.q[n]) << '\n';
    }
}

}  // namespace bgwi
