// SPDX-License-Identifier: Apache-2.0
#include "bgwi/simulate.hpp"

#include <cmath>
#include <iterator>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bgwi
{
namespace
{
count_t add_checked(count_t a, count_t b)
{
    count_t out;
    if (__builtin_add_overflow(a, b, &out))
    {
        throw OverflowError("population arithmetic overflows 64 bits");
    }
    return out;
}

count_t draw_immigration(RngStream& rng, StableFamilyParams const& params,
                         Immigration const& immigration)
{
    std::uint64_t batch;
    if (immigration.perturbed_p)
    {
        batch = sample_perturbed_immigration(
            rng, PerturbedImmigration{params, *immigration.perturbed_p});
    }
    else
    {
        batch = sample_immigration(rng, params);
    }
    if (batch > static_cast<std::uint64_t>(std::numeric_limits<count_t>::max()))
    {
        throw OverflowError("immigration batch overflows 64 bits");
    }
    return static_cast<count_t>(batch);
}

PathSample start_path(count_t start, std::size_t steps)
{
    PathSample path;
    path.start = start;
    path.steps = 0;
    path.Z.reserve(steps + 1);
    path.C.reserve(steps + 1);
    path.Y_total.reserve(steps + 1);
    path.X_at_C.reserve(steps + 1);
    path.Z.push_back(start);
    path.C.push_back(0);
    path.Y_total.push_back(0);
    path.X_at_C.push_back(0);
    if (start == 0)
    {
        path.zeros.push_back(0);
    }
    return path;
}

// Reproduction then immigration, appended to the path
void append_step(PathSample& path, count_t offspring, count_t immigrants)
{
    count_t const parents = path.Z.back();
    count_t const next = add_checked(offspring, immigrants);
    path.C.push_back(add_checked(path.C.back(), parents));
    path.X_at_C.push_back(add_checked(path.X_at_C.back(), offspring - parents));
    path.Y_total.push_back(add_checked(path.Y_total.back(), immigrants));
    path.Z.push_back(next);
    ++path.steps;
    if (next == 0)
    {
        path.zeros.push_back(path.steps);
    }
}

std::size_t grid_index(double n, double t)
{
    return static_cast<std::size_t>(std::floor(n * t));
}
}  // namespace

//---------------------------------------------------------------------------//
PathSample simulate_bgwi(RngStream& rng, SimulationContext const& ctx,
                         count_t start, std::size_t steps,
                         Immigration immigration)
{
    if (start < 0)
    {
        throw DomainError("initial population must be nonnegative");
    }
    if (immigration.perturbed_p)
    {
        make_perturbed_immigration(ctx.params, *immigration.perturbed_p);
    }
    PathSample path = start_path(start, steps);
    for (std::size_t k = 0; k < steps; ++k)
    {
        count_t const offspring = sample_offspring_total(
            rng, ctx.offspring, path.Z.back(), ctx.sum_options);
        count_t const immigrants = draw_immigration(rng, ctx.params, immigration);
        append_step(path, offspring, immigrants);
    }
    return path;
}

PathSample simulate_bgw(RngStream& rng, SimulationContext const& ctx,
                        count_t start, std::size_t steps)
{
    if (start < 1)
    {
        throw DomainError("BGW simulation needs start >= 1");
    }
    PathSample path = start_path(start, steps);
    for (std::size_t k = 0; k < steps && path.Z.back() > 0; ++k)
    {
        count_t const offspring = sample_offspring_total(
            rng, ctx.offspring, path.Z.back(), ctx.sum_options);
        append_step(path, offspring, 0);
    }
    return path;
}

bool check_path_identities(PathSample const& path)
{
    std::size_t const len = path.steps + 1;
    if (path.Z.size() != len || path.C.size() != len
        || path.Y_total.size() != len || path.X_at_C.size() != len)
    {
        return false;
    }
    count_t cumulative = 0;
    std::vector<std::size_t> zeros;
    for (std::size_t k = 0; k < len; ++k)
    {
        if (path.Z[k] != path.start + path.X_at_C[k] + path.Y_total[k])
        {
            return false;
        }
        if (path.C[k] != cumulative)
        {
            return false;
        }
        cumulative += path.Z[k];
        if (path.Z[k] == 0)
        {
            zeros.push_back(k);
        }
    }
    return zeros == path.zeros;
}

void write_path_csv(std::ostream& os, PathSample const& path)
{
    os << "step,Z,C,Y_total,X_at_C,is_zero\n";
    for (std::size_t k = 0; k <= path.steps; ++k)
    {
        os << k << ',' << path.Z[k] << ',' << path.C[k] << ','
           << path.Y_total[k] << ',' << path.X_at_C[k] << ','
           << (path.Z[k] == 0 ? 1 : 0) << '\n';
    }
}

//---------------------------------------------------------------------------//
HittingRecord hitting_functionals(PathSample const& path, std::size_t n_scale,
                                  double t, double eps, double b_n)
{
    if (n_scale < 1 || !(t >= 0) || !(eps > 0) || !(b_n > 0))
    {
        throw DomainError("hitting_functionals needs n >= 1, t >= 0, "
                          "eps > 0, b_n > 0");
    }
    double const n = static_cast<double>(n_scale);
    std::size_t const now = grid_index(n, t);
    if (now > path.steps)
    {
        throw DomainError("path horizon shorter than n t");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    HittingRecord rec{t, eps, 0.0, inf, 0.0, inf, true, true};

    auto it = std::upper_bound(path.zeros.begin(), path.zeros.end(), now);
    if (it != path.zeros.begin())
    {
        rec.g_t = static_cast<double>(*std::prev(it)) / n;
    }
    if (it != path.zeros.end())
    {
        rec.d_t = static_cast<double>(*it) / n;
        rec.d_truncated = false;
    }

    double const level = eps * b_n;
    for (std::size_t m = now + 1; m-- > 0;)
    {
        if (static_cast<double>(path.Z[m]) < level)
        {
            rec.g_eps = static_cast<double>(m) / n;
            break;
        }
    }
    for (std::size_t m = now + 1; m <= path.steps; ++m)
    {
        if (static_cast<double>(path.Z[m]) < level)
        {
            rec.d_eps = static_cast<double>(m) / n;
            rec.d_eps_truncated = false;
            break;
        }
    }
    return rec;
}

//---------------------------------------------------------------------------//
std::optional<double>
simulate_meander(RngStream& rng, SimulationContext const& ctx,
                 std::size_t horizon_steps, std::size_t max_attempts,
                 double b_n)
{
    if (horizon_steps < 1)
    {
        throw DomainError("meander horizon must be >= 1");
    }
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt)
    {
        count_t z = 0;
        bool survived = true;
        for (std::size_t k = 0; k < horizon_steps; ++k)
        {
            count_t const offspring
                = sample_offspring_total(rng, ctx.offspring, z, ctx.sum_options);
            z = add_checked(offspring,
                            draw_immigration(rng, ctx.params,
                                             Immigration::standard()));
            if (z == 0)
            {
                survived = false;
                break;
            }
        }
        if (survived)
        {
            return static_cast<double>(z) / b_n;
        }
    }
    return std::nullopt;
}

PerturbedLocalTime simulate_perturbed_localtime(RngStream& rng,
                                                SimulationContext const& ctx,
                                                std::size_t m)
{
    if (m < 2)
    {
        throw DomainError("perturbed local time needs m >= 2");
    }
    double const mm = static_cast<double>(m);
    auto const immigration = Immigration::perturbed(1 - 1 / (mm * mm * mm));
    PerturbedLocalTime out{1, false, true};
    count_t z = 0;
    for (std::size_t k = 0; k < m; ++k)
    {
        count_t const offspring
            = sample_offspring_total(rng, ctx.offspring, z, ctx.sum_options);
        count_t const immigrants = draw_immigration(rng, ctx.params, immigration);
        if (immigrants == 0)
        {
            out.all_immigration_positive = false;
        }
        z = add_checked(offspring, immigrants);
        if (z == 0)
        {
            ++out.local_time;
        }
    }
    out.only_initial_zero = out.local_time == 1;
    return out;
}

//---------------------------------------------------------------------------//
SeptupleSample simulate_septuple(RngStream& rng, SimulationContext const& ctx,
                                 std::size_t n_scale, double t_max,
                                 std::span<double const> grid,
                                 SeptupleScales const& scales,
                                 count_t walk_step_cap)
{
    if (n_scale < 1 || !(t_max > 0))
    {
        throw DomainError("septuple needs n >= 1 and t_max > 0");
    }
    for (double t : grid)
    {
        if (!(t >= 0 && t <= t_max))
        {
            throw DomainError("septuple grid must lie in [0, t_max]");
        }
    }
    double const n = static_cast<double>(n_scale);
    double const walk_span = std::floor(n * scales.b_n * t_max);
    if (!(walk_span <= static_cast<double>(walk_step_cap)))
    {
        throw MemoryBudgetExceeded(
            "n b_n t_max = " + std::to_string(walk_span)
            + " walk steps exceeds the cap " + std::to_string(walk_step_cap));
    }
    auto const walk_len = static_cast<count_t>(walk_span);
    std::size_t const pop_steps = grid_index(n, t_max);

    std::vector<double> times(grid.begin(), grid.end());
    std::sort(times.begin(), times.end());
    std::size_t const points = times.size();
    std::vector<count_t> walk_at(points);
    for (std::size_t j = 0; j < points; ++j)
    {
        walk_at[j] = static_cast<count_t>(std::floor(n * scales.b_n * times[j]));
    }

    SeptupleSample out;
    out.n_scale = n_scale;
    out.scales = scales;
    out.points.resize(points);
    for (std::size_t j = 0; j < points; ++j)
    {
        out.points[j].t = times[j];
    }

    // Reproduction walk state: x = X(pos), walk_zeros = #{k <= pos: X(k)=0}
    count_t pos = 0;
    count_t x = 0;
    count_t walk_zeros = 1;
    std::size_t next_walk_point = 0;
    auto record_walk = [&] {
        while (next_walk_point < points && walk_at[next_walk_point] == pos)
        {
            out.points[next_walk_point].X = static_cast<double>(x) / scales.b_n;
            out.points[next_walk_point].LX
                = static_cast<double>(walk_zeros) / scales.a_nb;
            ++next_walk_point;
        }
    };
    record_walk();

    // Advance the walk by `count` increments
    auto consume = [&](count_t count) {
        while (count > 0 && pos < walk_len)
        {
            auto const xi = static_cast<count_t>(sample_offspring(rng, ctx.offspring));
            x = add_checked(x, xi - 1);
            ++pos;
            --count;
            if (x == 0)
            {
                ++walk_zeros;
            }
            record_walk();
        }
        if (count > 0)
        {
            count_t const total = sample_offspring_total(rng, ctx.offspring,
                                                         count, ctx.sum_options);
            x = add_checked(x, total - count);
            pos = add_checked(pos, count);
        }
    };

    count_t z = 0;
    count_t c = 0;
    count_t y = 0;
    std::size_t pop_zeros = 1;
    std::size_t next_pop_point = 0;
    auto record_population = [&](std::size_t k) {
        while (next_pop_point < points
               && grid_index(n, times[next_pop_point]) == k)
        {
            auto& pt = out.points[next_pop_point];
            pt.Y = static_cast<double>(y) / scales.b_n;
            pt.C = static_cast<double>(c) / (n * scales.b_n);
            pt.XC = static_cast<double>(x) / scales.b_n;
            pt.Z = static_cast<double>(z) / scales.b_n;
            pt.LZ = static_cast<double>(pop_zeros) / scales.c_n;
            ++next_pop_point;
        }
    };

    for (std::size_t k = 0; k < pop_steps; ++k)
    {
        record_population(k);
        count_t const parents = z;
        count_t const before = x;
        consume(parents);
        count_t const immigrants
            = draw_immigration(rng, ctx.params, Immigration::standard());
        c = add_checked(c, parents);
        y = add_checked(y, immigrants);
        z = add_checked(add_checked(parents, x - before), immigrants);
        if (z != x + y || pos != c)
        {
            throw std::logic_error("Lamperti identity violated in septuple");
        }
        if (z == 0)
        {
            ++pop_zeros;
        }
    }
    record_population(pop_steps);
    // Walk coordinates past the last population step
    if (pos < walk_len)
    {
        consume(walk_len - pos);
    }
    out.zero_count = pop_zeros;
    return out;
}

}  // namespace bgwi
