// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/simulate.hpp
//! Monte Carlo simulation of BGW(I) paths through the discrete Lamperti
//! transform Z = start + X o C + Y.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "laws.hpp"
#include "rng.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
/*!
 * Immutable state shared by all paths of a run.
 */
struct SimulationContext
{
    explicit SimulationContext(StableFamilyParams const& p,
                               OffspringSumOptions opts = {})
        : params{p}
        , offspring{p, LawKind::offspring,
                    std::max(LawTable::default_size, opts.table_cut + 1)}
        , sum_options{opts}
    {
    }

    StableFamilyParams params;
    LawTable offspring;
    OffspringSumOptions sum_options;
};

//! Immigration law of a run: the standard nu, or 1 - p + p s g(s)
struct Immigration
{
    std::optional<double> perturbed_p;

    static Immigration standard() { return {}; }
    static Immigration perturbed(double p_m) { return {p_m}; }
};

//---------------------------------------------------------------------------//
/*!
 * One simulated trajectory.
 *
 * X_at_C accumulates (offspring total - parents) step by step, so the
 * Lamperti identity Z[k] = start + X_at_C[k] + Y_total[k] is a genuine check
 * on the bookkeeping, not a definition.
 */
struct PathSample
{
    count_t start{0};
    std::size_t steps{0};
    std::vector<count_t> Z;
    std::vector<count_t> C;
    std::vector<count_t> Y_total;
    std::vector<count_t> X_at_C;
    std::vector<std::size_t> zeros;
};

PathSample simulate_bgwi(RngStream& rng, SimulationContext const& ctx,
                         count_t start, std::size_t steps,
                         Immigration immigration = Immigration::standard());

//! No immigration; absorbed at the first zero (the path ends there)
PathSample simulate_bgw(RngStream& rng, SimulationContext const& ctx,
                        count_t start, std::size_t steps);

//! Both Lamperti identities and the zero-set record, exactly
bool check_path_identities(PathSample const& path);

//! CSV with columns step,Z,C,Y_total,X_at_C,is_zero
void write_path_csv(std::ostream& os, PathSample const& path);

//---------------------------------------------------------------------------//
/*!
 * Excursion endpoints around t for the rescaled path Z(floor(n .)) / b_n.
 *
 * g values use the last grid point m/n <= t; d values beyond the simulated
 * horizon are +inf with the matching truncation flag set.
 */
struct HittingRecord
{
    double t;
    double eps;
    double g_t;
    double d_t;
    double g_eps;
    double d_eps;
    bool d_truncated{false};
    bool d_eps_truncated{false};
};

HittingRecord hitting_functionals(PathSample const& path, std::size_t n_scale,
                                  double t, double eps, double b_n);

//---------------------------------------------------------------------------//
//! Z[horizon] / b_n given no zero on {1..horizon}, by plain rejection
std::optional<double>
simulate_meander(RngStream& rng, SimulationContext const& ctx,
                 std::size_t horizon_steps, std::size_t max_attempts,
                 double b_n);

struct PerturbedLocalTime
{
    std::size_t local_time;         //!< zeros in {0..m}
    bool only_initial_zero;         //!< local_time == 1
    bool all_immigration_positive;  //!< every one of the m batches >= 1
};

//! Run Z^{(m)} with p_m = 1 - m^{-3} for m steps from 0
PerturbedLocalTime simulate_perturbed_localtime(RngStream& rng,
                                                SimulationContext const& ctx,
                                                std::size_t m);

//---------------------------------------------------------------------------//
struct SeptupleScales
{
    double b_n;   //!< space scale of X, Y, X o C, Z
    double a_nb;  //!< walk local-time scale at floor(n b_n)
    double c_n;   //!< BGWI local-time scale
};

//! Scaled (X, L(X), Y, C, X o C, Z, L(Z)) at one grid time
struct SeptuplePoint
{
    double t;
    double X;
    double LX;
    double Y;
    double C;
    double XC;
    double Z;
    double LZ;
};

struct SeptupleSample
{
    std::size_t n_scale;
    SeptupleScales scales;
    std::vector<SeptuplePoint> points;
    //! Unscaled zeros of Z on {0..floor(n t_max)}
    std::size_t zero_count;
};

/*!
 * Coupled construction of all seven coordinates from one reproduction walk
 * and one immigration walk.
 *
 * The walk is generated increment by increment over its first
 * floor(n b_n t_max) steps (needed for L(X)); later increments are only
 * consumed through the Lamperti time change and are drawn in bulk.
 */
SeptupleSample simulate_septuple(RngStream& rng, SimulationContext const& ctx,
                                 std::size_t n_scale, double t_max,
                                 std::span<double const> grid,
                                 SeptupleScales const& scales,
                                 count_t walk_step_cap);

}  // namespace bgwi
