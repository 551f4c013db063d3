// SPDX-License-Identifier: Apache-2.0
#include "bgwi/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "bgwi/exact.hpp"
#include "bgwi/format.hpp"
#include "bgwi/limits.hpp"
#include "bgwi/parallel.hpp"
#include "bgwi/scaling.hpp"
#include "bgwi/simulate.hpp"
#include "bgwi/stats.hpp"

namespace bgwi
{
namespace
{
using Settings = std::map<std::string, double>;

constexpr double kBnTol = 1e-12;
constexpr char const* kThreeSigmaNote
    = "3-sigma band: ~0.27% false-failure probability";

// Stage salts for derive_seed; one per independent Monte Carlo stage
enum Stage : std::uint64_t
{
    stage_marginal = 1,
    stage_arcsine,
    stage_counterexample,
    stage_septuple,
    stage_chi_offspring,
    stage_chi_immigration,
    stage_lamperti,
    stage_linnik,
};

struct Definition
{
    std::string id;
    std::vector<std::uint64_t> ladder;
    std::uint64_t paths;
    Settings settings;
};

std::vector<Definition> const& definitions()
{
    static std::vector<Definition> const defs = {
        {"tables",
         {1000, 10000, 30000},
         0,
         {{"final_gap_max", 0.05},
          {"identity_tol", 1e-10},
          {"cn_n_lo", 1e3},
          {"cn_n_hi", 1e5},
          {"cn_slope_tol", 0.02}}},
        {"yaglom",
         {1000, 10000, 30000},
         0,
         {{"final_gap_max", 0.02}, {"alt_delta", 0.8}, {"alt_ratio_max", 2.0}}},
        {"extinction",
         {100, 1000, 10000},
         0,
         {{"z", 1.0}, {"t", 4.0}, {"final_err_max", 0.01}}},
        {"marginal", {2000}, 10000, {{"sigmas", 3.0}, {"slack", 0.01}}},
        {"arcsine",
         {2000},
         10000,
         {{"exact_n", 20000},
          {"product_lo", 0.95},
          {"product_hi", 1.05},
          {"ks_max", 0.03}}},
        {"localtime", {30000}, 0, {{"rel_tol", 0.05}}},
        {"counterexample", {10, 30}, 10000, {{"sigmas", 3.0}}},
        {"walklimits", {1000000}, 0, {{"lambda", 1.0}, {"rel_tol", 1e-3}}},
        {"tailfit",
         {100000},
         0,
         {{"k_lo", 100}, {"slope_tol", 0.05}, {"drift_max", 0.02}}},
        {"septuple",
         {100},
         10000,
         {{"sigmas", 3.0},
          {"z_slack", 0.02},
          {"t_max", 1.0},
          {"walk_step_cap", 1e8}}},
        {"properties",
         {},
         0,
         {{"chi_draws", 1e6},
          {"chi_cells", 20},
          {"chi_level", 0.999},
          {"identity_n", 2000},
          {"identity_tol", 1e-10},
          {"lamperti_paths", 200},
          {"lamperti_steps", 500},
          {"linnik_draws", 1e5},
          {"sigmas", 3.0},
          {"repro_paths", 256}}},
    };
    return defs;
}

Definition const& find_definition(std::string const& id)
{
    std::string const key = id == "yaglom-exact" ? "yaglom" : id;
    for (auto const& d : definitions())
    {
        if (d.id == key)
        {
            return d;
        }
    }
    throw UnknownExperiment(id);
}

//---------------------------------------------------------------------------//
//! Resolved spec plus the report under construction
class Run
{
  public:
    Run(ExperimentSpec const& spec, Definition const& def,
        std::vector<Artifact>* artifacts)
        : spec_{spec}, artifacts_{artifacts}
    {
        settings_ = def.settings;
        for (auto const& [name, value] : spec.settings)
        {
            auto it = settings_.find(name);
            if (it == settings_.end())
            {
                throw InvalidSpec("experiment '" + def.id
                                  + "' has no setting '" + name + "'");
            }
            it->second = value;
        }
        ladder_ = spec.ladder.empty() ? def.ladder : spec.ladder;
        paths_ = spec.paths.value_or(def.paths);
        if (def.paths > 0 && paths_ == 0)
        {
            throw InvalidSpec("path count must be positive");
        }
        for (auto n : ladder_)
        {
            if (n == 0)
            {
                throw InvalidSpec("ladder entries must be positive");
            }
        }
        report_.experiment = def.id;
        report_.seed = spec.seed;
        report_.ladder = ladder_;
        report_.paths = paths_;
        report_.workers = std::max(1u, spec.workers);
    }

    double setting(std::string const& name) const { return settings_.at(name); }
    std::size_t size_setting(std::string const& name) const
    {
        double const v = setting(name);
        if (!(v >= 0) || v != std::floor(v))
        {
            throw InvalidSpec("setting '" + name
                              + "' must be a nonnegative integer");
        }
        return static_cast<std::size_t>(v);
    }
    std::vector<std::uint64_t> const& ladder() const { return ladder_; }
    std::uint64_t paths() const { return paths_; }
    unsigned workers() const { return report_.workers; }
    std::uint64_t seed() const { return spec_.seed; }

    StableFamilyParams params(StableFamilyParams const& fallback)
    {
        return params_named("model", fallback);
    }
    //! The spec's params if set, else the fallback; recorded under name
    StableFamilyParams
    params_named(std::string name, StableFamilyParams const& fallback)
    {
        auto p = spec_.params.value_or(fallback);
        add_params(std::move(name), p);
        return p;
    }
    void add_params(std::string name, StableFamilyParams const& p)
    {
        report_.params.emplace_back(std::move(name), p);
    }

    void metric(std::string name, double observed, double target,
                Provenance provenance, Comparison comparison,
                double tolerance = 0.0, std::string note = {})
    {
        report_.metrics.push_back(make_metric(std::move(name), observed,
                                              target, provenance, comparison,
                                              tolerance, std::move(note)));
    }
    void info(std::string name, double observed, double target = 0.0,
              Provenance provenance = Provenance::derived_oracle,
              std::string note = {})
    {
        metric(std::move(name), observed, target, provenance, Comparison::info,
               0.0, std::move(note));
    }
    //! 1 if every gap is strictly below the previous one
    void decreasing(std::string name, std::vector<double> const& gaps,
                    Provenance provenance)
    {
        bool ok = true;
        for (std::size_t i = 1; i < gaps.size(); ++i)
        {
            ok = ok && gaps[i] < gaps[i - 1];
        }
        metric(std::move(name), ok ? 1.0 : 0.0, 1.0, provenance,
               Comparison::at_least, 0.0, "1 = strictly decreasing along ladder");
    }

    void artifact(std::string name, std::string content)
    {
        if (artifacts_)
        {
            artifacts_->push_back({std::move(name), std::move(content)});
        }
    }

    ExperimentReport finish(double runtime)
    {
        report_.runtime_s = runtime;
        return std::move(report_);
    }

  private:
    ExperimentSpec const& spec_;
    std::vector<Artifact>* artifacts_;
    Settings settings_;
    std::vector<std::uint64_t> ladder_;
    std::uint64_t paths_{0};
    ExperimentReport report_;
};

std::string tag(char const* prefix, double value)
{
    std::ostringstream os;
    os << prefix << value;
    return os.str();
}

template<class T, class Fn>
std::vector<T> per_path(Run const& run, std::uint64_t stage, std::size_t count,
                        Fn&& fn)
{
    std::vector<T> out(count);
    auto const key = derive_seed(run.seed(), stage);
    parallel_for(count, run.workers(), [&](std::size_t i) {
        RngStream rng(key, i);
        out[i] = fn(rng);
    });
    return out;
}

double sup_of(std::vector<double> const& v)
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// max_n |u[n] - sum_{k=1}^{n} r[k] u[n-k]| and max_n |sum_k u[k] q[n-k] - 1|
std::pair<double, double> renewal_residuals(ZeroHitTable const& t,
                                            std::size_t n_hi)
{
    double renewal = 0.0;
    double sweep = 0.0;
    for (std::size_t n = 1; n <= n_hi; ++n)
    {
        long double conv = 0.0L;
        long double last_exit = 0.0L;
        for (std::size_t k = 1; k <= n; ++k)
        {
            conv += static_cast<long double>(t.r[k]) * t.u[n - k];
        }
        for (std::size_t k = 0; k <= n; ++k)
        {
            last_exit += static_cast<long double>(t.u[k]) * t.q[n - k];
        }
        renewal = std::max(renewal,
                           static_cast<double>(std::abs(t.u[n] - conv)));
        sweep = std::max(sweep, static_cast<double>(std::abs(last_exit - 1)));
    }
    return {renewal, sweep};
}

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade)
{
    std::vector<double> out;
    double const step = std::pow(10.0, 1.0 / static_cast<double>(per_decade));
    for (double x = lo; x <= hi * (1 + 1e-12); x *= step)
    {
        double const k = std::round(x);
        if (out.empty() || k > out.back())
        {
            out.push_back(k);
        }
    }
    if (out.back() < hi)
    {
        out.push_back(hi);
    }
    return out;
}

//---------------------------------------------------------------------------//
// Runners
//---------------------------------------------------------------------------//
void run_tables(Run& run)
{
    auto const p = run.params(canonical_exact_params());
    auto const& ladder = run.ladder();
    std::size_t const n_max = *std::max_element(ladder.begin(), ladder.end());
    auto const ws = w_sequence(p, n_max);
    auto const t = zero_hit_tables(ws);

    double const target = std::sin(std::numbers::pi * p.delta) / std::numbers::pi;
    std::vector<double> gaps;
    for (auto n : ladder)
    {
        double const product = static_cast<double>(n) * t.u[n] * t.q[n];
        gaps.push_back(std::abs(product - target));
        run.info(tag("n_u_q@n=", static_cast<double>(n)), product, target,
                 Provenance::paper_formula);
    }
    run.decreasing("return_tail_gap_decreasing", gaps, Provenance::paper_formula);
    run.metric("return_tail_final_gap", gaps.back(), run.setting("final_gap_max"),
               Provenance::paper_formula, Comparison::at_most);

    // Identities on a prefix (O(n^2) each) and at the ladder points
    std::size_t const prefix = std::min<std::size_t>(n_max, 2000);
    auto [renewal, sweep] = renewal_residuals(t, prefix);
    for (auto n : ladder)
    {
        long double conv = 0.0L;
        long double last_exit = 0.0L;
        for (std::size_t k = 1; k <= n; ++k)
        {
            conv += static_cast<long double>(t.r[k]) * t.u[n - k];
        }
        for (std::size_t k = 0; k <= n; ++k)
        {
            last_exit += static_cast<long double>(t.u[k]) * t.q[n - k];
        }
        renewal = std::max(renewal, static_cast<double>(std::abs(t.u[n] - conv)));
        sweep = std::max(sweep, static_cast<double>(std::abs(last_exit - 1)));
    }
    double const tol = run.setting("identity_tol");
    run.metric("renewal_identity_residual", renewal, tol, Provenance::derived_oracle,
               Comparison::at_most);
    run.metric("last_exit_sweep_residual", sweep, tol, Provenance::derived_oracle,
               Comparison::at_most);

    // c_n = n u_n is regularly varying with index 1 - delta
    auto const n_lo = static_cast<double>(run.size_setting("cn_n_lo"));
    auto const n_hi = run.size_setting("cn_n_hi");
    if (n_lo >= 1 && static_cast<double>(n_hi) > n_lo)
    {
        auto const u = zero_probabilities(p, n_hi);
        std::vector<double> xs = log_grid(n_lo, static_cast<double>(n_hi), 20);
        std::vector<double> cn;
        for (double x : xs)
        {
            auto const n = static_cast<std::size_t>(x);
            cn.push_back(compute_cn(n, u[n], 1.0));
        }
        auto const fit = log_log_slope(xs, cn);
        run.metric("c_n_regular_variation_index", fit.slope, 1 - p.delta,
                   Provenance::derived_oracle, Comparison::abs_within,
                   run.setting("cn_slope_tol"));
    }

    std::ostringstream csv;
    write_tables_csv(csv, ws, t);
    run.artifact("tables.csv", csv.str());
}

void run_yaglom(Run& run)
{
    auto const p = run.params(canonical_exact_params());
    double const alt_delta = run.setting("alt_delta");
    auto const alt = validate_params(p.alpha, p.c, alt_delta * p.alpha * p.c,
                                     p.family, p.c_prime);
    run.add_params("alt", alt);
    static constexpr double lambdas[] = {0.25, 0.5, 1, 2, 4};

    auto const& ladder = run.ladder();
    std::size_t const n_max = *std::max_element(ladder.begin(), ladder.end()) + 1;
    std::ostringstream csv;
    csv << "model,n,lambda,meander,linnik\n";

    auto sweep = [&](StableFamilyParams const& q, char const* name) {
        auto const t = zero_hit_tables(q, n_max);
        std::vector<double> gaps;
        for (auto n : ladder)
        {
            double const b = compute_bn(q, n, kBnTol);
            std::vector<double> errs(std::size(lambdas));
            std::vector<double> vals(std::size(lambdas));
            parallel_for(std::size(lambdas), run.workers(), [&](std::size_t i) {
                vals[i] = meander_laplace(q, t, n, lambdas[i], b).value;
                errs[i] = std::abs(vals[i] - linnik_laplace(1.0, q, lambdas[i]));
            });
            for (std::size_t i = 0; i < std::size(lambdas); ++i)
            {
                csv << name << ',' << n << ',' << format_g17(lambdas[i]) << ','
                    << format_g17(vals[i]) << ','
                    << format_g17(linnik_laplace(1.0, q, lambdas[i])) << '\n';
            }
            gaps.push_back(sup_of(errs));
        }
        return gaps;
    };

    auto const gaps = sweep(p, "model");
    for (std::size_t i = 0; i < ladder.size(); ++i)
    {
        run.info(tag("sup_gap@n=", static_cast<double>(ladder[i])), gaps[i]);
    }
    run.decreasing("yaglom_gap_decreasing", gaps, Provenance::paper_formula);
    run.metric("yaglom_final_sup_gap", gaps.back(), run.setting("final_gap_max"),
               Provenance::paper_formula, Comparison::at_most);

    auto const alt_gaps = sweep(alt, "alt");
    for (std::size_t i = 0; i < ladder.size(); ++i)
    {
        run.info(tag("alt_sup_gap@n=", static_cast<double>(ladder[i])),
                 alt_gaps[i]);
    }
    double const ratio_max = run.setting("alt_ratio_max");
    double const ratio = gaps.back() > 0 ? alt_gaps.back() / gaps.back()
                                         : std::numeric_limits<double>::infinity();
    run.metric("yaglom_gap_ratio_alt_over_model_max", ratio, ratio_max,
               Provenance::paper_formula, Comparison::at_most, 0.0,
               "limit law does not depend on d");
    run.metric("yaglom_gap_ratio_alt_over_model_min", ratio, 1 / ratio_max,
               Provenance::paper_formula, Comparison::at_least);
    run.artifact("yaglom.csv", csv.str());
}

void run_extinction(Run& run)
{
    auto const p = run.params(canonical_exact_params());
    double const z = run.setting("z");
    double const t = run.setting("t");
    auto const& ladder = run.ladder();
    std::size_t const n_max = *std::max_element(ladder.begin(), ladder.end());
    auto const ws = w_sequence(p, static_cast<std::size_t>(
                                      std::floor(static_cast<double>(n_max) * t)));
    double const target = cb_extinction_cdf(p, z, t);
    std::vector<double> errs;
    for (auto n : ladder)
    {
        double const v = bgw_extinction_exact(p, ws, z, t, n, kBnTol);
        run.info(tag("extinction@n=", static_cast<double>(n)), v, target,
                 Provenance::paper_formula);
        errs.push_back(std::abs(v - target));
    }
    run.decreasing("extinction_error_decreasing", errs, Provenance::paper_formula);
    run.metric("extinction_final_error", errs.back(), run.setting("final_err_max"),
               Provenance::paper_formula, Comparison::at_most);
}

void run_marginal(Run& run)
{
    auto const p = run.params(canonical_mc_params());
    SimulationContext const ctx(p);
    double const sigmas = run.setting("sigmas");
    double const slack = run.setting("slack");
    static constexpr double lambdas[] = {0.5, 1, 2};
    std::ostringstream csv;
    csv << "n,lambda,empirical,std_error,target\n";
    for (std::size_t li = 0; li < run.ladder().size(); ++li)
    {
        auto const n = run.ladder()[li];
        double const b = compute_bn(p, n, kBnTol);
        auto const samples = per_path<double>(
            run, derive_seed(stage_marginal, li), run.paths(), [&](RngStream& rng) {
                count_t z = 0;
                for (std::uint64_t k = 0; k < n; ++k)
                {
                    z = sample_offspring_total(rng, ctx.offspring, z,
                                               ctx.sum_options)
                        + static_cast<count_t>(sample_immigration(rng, p));
                }
                return static_cast<double>(z) / b;
            });
        auto const est = empirical_laplace(samples, lambdas);
        for (std::size_t i = 0; i < std::size(lambdas); ++i)
        {
            double const target = cbi_laplace({p, 1.0, 0.0}, lambdas[i]);
            run.metric(tag("laplace_Z_over_b@n=", static_cast<double>(n))
                           + tag(",lambda=", lambdas[i]),
                       est.mean[i], target, Provenance::paper_formula,
                       Comparison::abs_within,
                       sigmas * est.std_error[i] + slack,
                       std::string(kThreeSigmaNote) + " plus discretization slack");
            csv << n << ',' << format_g17(lambdas[i]) << ','
                << format_g17(est.mean[i]) << ',' << format_g17(est.std_error[i])
                << ',' << format_g17(target) << '\n';
        }
    }
    run.artifact("marginal.csv", csv.str());
}

void run_arcsine(Run& run)
{
    // (a) exact local limit
    auto const exact_p = run.params_named("exact", canonical_exact_params());
    std::size_t const n_exact = run.size_setting("exact_n");
    if (n_exact < 4)
    {
        throw InvalidSpec("exact_n must be at least 4");
    }
    auto const t = zero_hit_tables(exact_p, n_exact);
    double const d = exact_p.delta;
    double const lo = run.setting("product_lo");
    double const hi = run.setting("product_hi");
    for (double s : {0.25, 0.5, 0.75})
    {
        double const ns = static_cast<double>(n_exact) * s;
        if (ns != std::floor(ns))
        {
            throw InvalidSpec("exact_n must be divisible by 4");
        }
        double const product = static_cast<double>(n_exact) * std::tgamma(d)
                               * std::tgamma(1 - d) * std::pow(s, d)
                               * std::pow(1 - s, 1 - d)
                               * arcsine_local_mass(t, n_exact, 1.0, s);
        run.metric(tag("local_limit_product_lower@s=", s), product, lo,
                   Provenance::paper_formula, Comparison::at_least);
        run.metric(tag("local_limit_product_upper@s=", s), product, hi,
                   Provenance::paper_formula, Comparison::at_most);
    }

    // (b) Monte Carlo g_1 against Beta(1 - delta, delta)
    auto const p = run.params_named("mc", canonical_mc_params());
    SimulationContext const ctx(p);
    std::ostringstream csv;
    csv << "n,path,g1\n";
    for (std::size_t li = 0; li < run.ladder().size(); ++li)
    {
        auto const n = run.ladder()[li];
        auto const g = per_path<double>(
            run, derive_seed(stage_arcsine, li), run.paths(), [&](RngStream& rng) {
                std::uint64_t last_zero = 0;
                count_t z = 0;
                for (std::uint64_t k = 1; k <= n; ++k)
                {
                    z = sample_offspring_total(rng, ctx.offspring, z,
                                               ctx.sum_options)
                        + static_cast<count_t>(sample_immigration(rng, p));
                    if (z == 0)
                    {
                        last_zero = k;
                    }
                }
                return static_cast<double>(last_zero) / static_cast<double>(n);
            });
        double const ks = ks_statistic(
            g, [&](double x) { return arcsine_cdf(p.delta, x); });
        run.metric(tag("ks_g1_vs_beta@n=", static_cast<double>(n)), ks,
                   run.setting("ks_max"), Provenance::paper_formula,
                   Comparison::at_most);

        // Oracle: KS of the exact discrete law of g_1 against the same Beta
        auto const tm = zero_hit_tables(p, n);
        double cum = 0.0;
        double exact_ks = 0.0;
        for (std::size_t k = 0; k <= n; ++k)
        {
            double const f = arcsine_cdf(p.delta, static_cast<double>(k)
                                                      / static_cast<double>(n));
            exact_ks = std::max(exact_ks, std::abs(cum - f));
            cum += tm.u[k] * tm.q[n - k];
            exact_ks = std::max(exact_ks, std::abs(cum - f));
        }
        run.info(tag("exact_discrete_ks@n=", static_cast<double>(n)), exact_ks,
                 0.0, Provenance::derived_oracle,
                 "lower bound set by the atom P(g_1 = 1) = u_n");
        run.info(tag("atom_at_one_u_n@n=", static_cast<double>(n)), tm.u[n]);
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            csv << n << ',' << i << ',' << format_g17(g[i]) << '\n';
        }
    }
    run.artifact("arcsine.csv", csv.str());
}

void run_localtime(Run& run)
{
    auto const p = run.params(canonical_exact_params());
    auto const& ladder = run.ladder();
    std::size_t const n_max = *std::max_element(ladder.begin(), ladder.end());
    auto const t = zero_hit_tables(p, n_max);
    double const tol = run.setting("rel_tol");
    for (auto n : ladder)
    {
        auto const m = local_time_moments(t, n);
        double const nn = static_cast<double>(n);
        run.metric(tag("mean_local_time_over_n_u_n@n=", nn),
                   m.m1 / (nn * t.u[n]), 1 / (1 - p.delta),
                   Provenance::paper_formula, Comparison::rel_within, tol);
        run.metric(tag("second_moment_ratio@n=", nn), m.m2 / (m.m1 * m.m1),
                   mittag_leffler_moment_ratio(p.delta),
                   Provenance::derived_oracle, Comparison::rel_within, tol);
    }
}

void run_counterexample(Run& run)
{
    auto const p = run.params(canonical_mc_params());
    SimulationContext const ctx(p);
    double const sigmas = run.setting("sigmas");
    for (std::size_t li = 0; li < run.ladder().size(); ++li)
    {
        auto const m = run.ladder()[li];
        if (m < 2)
        {
            throw InvalidSpec("counterexample needs m >= 2");
        }
        auto const out = per_path<PerturbedLocalTime>(
            run, derive_seed(stage_counterexample, li), run.paths(),
            [&](RngStream& rng) {
                return simulate_perturbed_localtime(rng, ctx, m);
            });
        std::size_t single = 0;
        std::size_t positive = 0;
        for (auto const& o : out)
        {
            single += o.only_initial_zero ? 1 : 0;
            positive += o.all_immigration_positive ? 1 : 0;
        }
        double const mm = static_cast<double>(m);
        auto const freq = proportion(single, out.size());
        run.metric(tag("freq_local_time_one@m=", mm), freq.value,
                   1 - 1 / (mm * mm) - sigmas * freq.std_error,
                   Provenance::paper_formula, Comparison::at_least, 0.0,
                   std::string("bound 1 - m^-2 less ") + kThreeSigmaNote);
        double const expected = std::pow(1 - 1 / (mm * mm * mm), mm);
        auto const pos = proportion(positive, out.size());
        double const se
            = std::sqrt(expected * (1 - expected) / static_cast<double>(out.size()));
        run.metric(tag("freq_all_immigration_positive@m=", mm), pos.value,
                   expected, Provenance::derived_oracle, Comparison::abs_within,
                   sigmas * se, kThreeSigmaNote);
    }
}

void run_walklimits(Run& run)
{
    auto const p = run.params(canonical_exact_params());
    double const lambda = run.setting("lambda");
    double const tol = run.setting("rel_tol");
    for (auto n : run.ladder())
    {
        double const b = compute_bn(p, n, kBnTol);
        double const w = -std::expm1(-lambda / b);
        double const nn = static_cast<double>(n);
        double const imm = std::exp(nn * std::log1p(-gap_g(p, w)));
        double const steps = std::floor(nn * b);
        double const rep = std::exp(steps * std::log1p(gap_f_excess(p, w) / (1 - w)));
        run.metric(tag("immigration_walk_laplace@n=", nn), imm,
                   walk_limit_laplace(p, lambda, WalkKind::immigration),
                   Provenance::paper_formula, Comparison::rel_within, tol);
        run.metric(tag("reproduction_walk_laplace@n=", nn), rep,
                   walk_limit_laplace(p, lambda, WalkKind::reproduction),
                   Provenance::paper_formula, Comparison::rel_within, tol);
    }
}

void run_tailfit(Run& run)
{
    auto const p = run.params(canonical_exact_params());
    auto const k_hi = static_cast<double>(run.ladder().back());
    auto const k_lo = static_cast<double>(run.size_setting("k_lo"));
    if (!(k_lo >= 1 && k_hi >= 10 * k_lo))
    {
        throw InvalidSpec("tailfit needs k_lo >= 1 and k_max >= 10 k_lo");
    }
    auto const ks = log_grid(k_lo, k_hi, 40);
    std::vector<double> off, imm;
    for (double k : ks)
    {
        off.push_back(offspring_tail(p, static_cast<std::uint64_t>(k)));
        imm.push_back(immigration_tail(p, static_cast<std::uint64_t>(k)));
    }
    double const tol = run.setting("slope_tol");
    run.metric("offspring_tail_slope", log_log_slope(ks, off).slope,
               -(1 + p.alpha), Provenance::paper_formula,
               Comparison::abs_within, tol);
    run.metric("immigration_tail_slope", log_log_slope(ks, imm).slope, -p.alpha,
               Provenance::paper_formula, Comparison::abs_within, tol);

    auto balance = [&](double k) {
        auto const kk = static_cast<std::uint64_t>(k);
        return immigration_tail(p, kk) / (k * offspring_tail(p, kk));
    };
    double const r_hi = balance(k_hi);
    double const r_lo = balance(std::round(k_hi / 10));
    run.metric("balance_ratio_drift_last_decade", std::abs(r_hi / r_lo - 1),
               run.setting("drift_max"), Provenance::paper_formula,
               Comparison::at_most);
    run.info("balance_ratio_at_k_max", r_hi, p.delta, Provenance::derived_oracle,
             "nu_bar(k) / (k mu_bar(k)) tends to delta");
}

void run_septuple(Run& run)
{
    auto const p = run.params(canonical_mc_params());
    SimulationContext const ctx(p);
    double const sigmas = run.setting("sigmas");
    double const t_max = run.setting("t_max");
    auto const cap = static_cast<count_t>(run.size_setting("walk_step_cap"));
    static constexpr double grid[] = {0.25, 0.5, 0.75, 1.0};
    static constexpr double lambdas[] = {0.5, 1, 2};
    if (!(t_max >= 1))
    {
        throw InvalidSpec("septuple needs t_max >= 1");
    }

    for (std::size_t li = 0; li < run.ladder().size(); ++li)
    {
        auto const n = run.ladder()[li];
        double const nn = static_cast<double>(n);
        double const b = compute_bn(p, n, kBnTol);
        double const walk_steps = std::floor(nn * b);
        auto const u = zero_probabilities(p, n);
        SeptupleScales const scales{
            b, compute_an(p, static_cast<std::uint64_t>(walk_steps)),
            compute_cn(n, u[n], 1.0)};
        auto const samples = per_path<SeptupleSample>(
            run, derive_seed(stage_septuple, li), run.paths(), [&](RngStream& rng) {
                return simulate_septuple(rng, ctx, n, t_max, grid, scales, cap);
            });

        std::size_t const last = std::size(grid) - 1;
        std::vector<double> ys, zs, xs, lz;
        std::size_t violations = 0;
        for (auto const& s : samples)
        {
            for (auto const& pt : s.points)
            {
                if (std::abs(pt.Z - (pt.XC + pt.Y)) > 1e-9 * (1 + std::abs(pt.Z)))
                {
                    ++violations;
                }
            }
            ys.push_back(s.points[last].Y);
            zs.push_back(s.points[last].Z);
            xs.push_back(s.points[last].X);
            lz.push_back(s.points[last].LZ);
        }
        std::string const at = tag("@n=", nn);
        run.metric("lamperti_violations" + at, static_cast<double>(violations), 0,
                   Provenance::trivial, Comparison::at_most);

        auto const ey = empirical_laplace(ys, lambdas);
        auto const ez = empirical_laplace(zs, lambdas);
        for (std::size_t i = 0; i < std::size(lambdas); ++i)
        {
            double const lam = lambdas[i];
            double const s_w = -std::expm1(-lam / b);
            // Y: exact pre-limit g(e^{-lam/b})^n against the limit
            double const y_limit = walk_limit_laplace(p, lam, WalkKind::immigration);
            double const y_exact = std::exp(nn * std::log1p(-gap_g(p, s_w)));
            run.metric("laplace_Y1" + at + tag(",lambda=", lam), ey.mean[i],
                       y_limit, Provenance::paper_formula, Comparison::abs_within,
                       sigmas * ey.std_error[i] + std::abs(y_exact - y_limit),
                       std::string(kThreeSigmaNote)
                           + " plus exact discretization gap");

            // X at walk time floor(n b): E exp(-lam X / b) = (f(s)/s)^{floor(n b)}
            double mean = 0.0;
            double m2 = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j)
            {
                double const v = std::exp(-lam * xs[j]);
                double const dlt = v - mean;
                mean += dlt / static_cast<double>(j + 1);
                m2 += dlt * (v - mean);
            }
            double const se = std::sqrt(m2 / static_cast<double>(xs.size() - 1)
                                        / static_cast<double>(xs.size()));
            double const x_limit
                = walk_limit_laplace(p, lam, WalkKind::reproduction);
            double const x_exact = std::exp(
                walk_steps * std::log1p(gap_f_excess(p, s_w) / (1 - s_w)));
            run.metric("laplace_X1" + at + tag(",lambda=", lam), mean, x_limit,
                       Provenance::paper_formula, Comparison::abs_within,
                       sigmas * se + std::abs(x_exact - x_limit),
                       std::string(kThreeSigmaNote)
                           + " plus exact discretization gap");

            run.metric("laplace_Z1" + at + tag(",lambda=", lam), ez.mean[i],
                       cbi_laplace({p, 1.0, 0.0}, lam), Provenance::paper_formula,
                       Comparison::abs_within,
                       sigmas * ez.std_error[i] + run.setting("z_slack"),
                       std::string(kThreeSigmaNote) + " plus discretization slack");
        }
        double lz_mean = 0.0;
        for (double v : lz)
        {
            lz_mean += v / static_cast<double>(lz.size());
        }
        run.info("mean_scaled_local_time_Z1" + at, lz_mean, 1 / (1 - p.delta),
                 Provenance::derived_oracle, "E L(n) / (n u_n) tends to 1/(1-delta)");
    }
}

//! Pearson chi-square of a sampler against cells 0..cells-1 plus the tail
double chi_square(std::vector<std::uint64_t> const& draws,
                  std::vector<double> const& probs)
{
    std::vector<double> counts(probs.size(), 0.0);
    std::size_t const tail_cell = probs.size() - 1;
    for (auto x : draws)
    {
        counts[std::min<std::uint64_t>(x, tail_cell)] += 1;
    }
    double const n = static_cast<double>(draws.size());
    double stat = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k)
    {
        double const e = n * probs[k];
        stat += (counts[k] - e) * (counts[k] - e) / e;
    }
    return stat;
}

void run_properties(Run& run)
{
    auto const exact_p = canonical_exact_params();
    auto const mc_p = canonical_mc_params();
    run.add_params("exact", exact_p);
    run.add_params("mc", mc_p);
    std::size_t const draws = run.size_setting("chi_draws");
    std::size_t const cells = run.size_setting("chi_cells");
    double const level = run.setting("chi_level");
    boost::math::chi_squared const dist(static_cast<double>(cells));
    double const critical = boost::math::quantile(dist, level);
    double const sigmas = run.setting("sigmas");

    int which = 0;
    for (auto const& [label, p] :
         {std::pair{"exact", exact_p}, std::pair{"mc", mc_p}})
    {
        LawTable const law(p, LawKind::offspring);
        std::vector<double> off_probs, imm_probs;
        for (std::size_t k = 0; k < cells; ++k)
        {
            off_probs.push_back(offspring_pmf(p, k));
            imm_probs.push_back(immigration_pmf(p, k));
        }
        off_probs.push_back(offspring_tail(p, cells - 1));
        imm_probs.push_back(immigration_tail(p, cells - 1));

        auto const off = per_path<std::uint64_t>(
            run, derive_seed(stage_chi_offspring, which), draws,
            [&](RngStream& rng) { return sample_offspring(rng, law); });
        auto const imm = per_path<std::uint64_t>(
            run, derive_seed(stage_chi_immigration, which), draws,
            [&](RngStream& rng) { return sample_immigration(rng, p); });
        std::string const note = tag("false-failure probability ", 1 - level);
        run.metric(std::string("chi_square_offspring_") + label,
                   chi_square(off, off_probs), critical,
                   Provenance::derived_oracle, Comparison::at_most, 0.0, note);
        run.metric(std::string("chi_square_immigration_") + label,
                   chi_square(imm, imm_probs), critical,
                   Provenance::derived_oracle, Comparison::at_most, 0.0, note);

        auto const t = zero_hit_tables(p, run.size_setting("identity_n"));
        auto const [renewal, sweep] = renewal_residuals(t, t.n_max());
        double const tol = run.setting("identity_tol");
        run.metric(std::string("renewal_identity_residual_") + label, renewal,
                   tol, Provenance::derived_oracle, Comparison::at_most);
        run.metric(std::string("last_exit_sweep_residual_") + label, sweep, tol,
                   Provenance::derived_oracle, Comparison::at_most);

        // Linnik sampler against its closed-form transform
        std::size_t const linnik_draws = run.size_setting("linnik_draws");
        auto const lin = per_path<double>(
            run, derive_seed(stage_linnik, which), linnik_draws,
            [&](RngStream& rng) { return sample_linnik(rng, p, 1.0); });
        double const one[] = {1.0};
        auto const est = empirical_laplace(lin, one);
        run.metric(std::string("linnik_sampler_laplace_") + label, est.mean[0],
                   linnik_laplace(1.0, p, 1.0), Provenance::paper_formula,
                   Comparison::abs_within, sigmas * est.std_error[0],
                   kThreeSigmaNote);
        ++which;
    }

    // Lamperti identities on simulated paths
    SimulationContext const ctx(mc_p);
    std::size_t const steps = run.size_setting("lamperti_steps");
    auto const ok = per_path<int>(
        run, stage_lamperti, run.size_setting("lamperti_paths"),
        [&](RngStream& rng) {
            bool good = check_path_identities(simulate_bgwi(rng, ctx, 0, steps));
            good = good && check_path_identities(simulate_bgw(rng, ctx, 50, steps));
            return good ? 1 : 0;
        });
    run.metric("lamperti_path_identities",
               static_cast<double>(std::count(ok.begin(), ok.end(), 0)), 0,
               Provenance::trivial, Comparison::at_most, 0.0,
               "number of paths violating an identity");

    // Same seed, different worker counts: byte-identical CSV
    auto const repro_paths = run.size_setting("repro_paths");
    auto render = [&](unsigned workers) {
        std::string out;
        for (char const* id : {"counterexample", "marginal"})
        {
            ExperimentSpec s;
            s.id = id;
            s.seed = run.seed();
            s.workers = workers;
            s.paths = repro_paths;
            s.ladder = std::string(id) == "marginal"
                           ? std::vector<std::uint64_t>{200}
                           : std::vector<std::uint64_t>{10};
            std::ostringstream os;
            emit_report(run_experiment(s), ReportFormat::csv, os);
            out += os.str();
        }
        return out;
    };
    run.metric("reproducible_across_workers",
               render(1) == render(3) ? 1.0 : 0.0, 1.0, Provenance::trivial,
               Comparison::at_least, 0.0, "CSV reports, workers 1 vs 3");
}

using RunnerFn = void (*)(Run&);

RunnerFn runner_for(std::string const& id)
{
    static std::map<std::string, RunnerFn> const table = {
        {"tables", run_tables},
        {"yaglom", run_yaglom},
        {"extinction", run_extinction},
        {"marginal", run_marginal},
        {"arcsine", run_arcsine},
        {"localtime", run_localtime},
        {"counterexample", run_counterexample},
        {"walklimits", run_walklimits},
        {"tailfit", run_tailfit},
        {"septuple", run_septuple},
        {"properties", run_properties},
    };
    return table.at(id);
}
}  // namespace

//---------------------------------------------------------------------------//
std::vector<std::string> const& experiment_ids()
{
    static std::vector<std::string> const ids = [] {
        std::vector<std::string> out;
        for (auto const& d : definitions())
        {
            out.push_back(d.id);
        }
        return out;
    }();
    return ids;
}

std::map<std::string, double> const& default_settings(std::string const& id)
{
    return find_definition(id).settings;
}

std::vector<std::uint64_t> const& default_ladder(std::string const& id)
{
    return find_definition(id).ladder;
}

std::uint64_t default_paths(std::string const& id)
{
    return find_definition(id).paths;
}

ExperimentReport run_experiment(ExperimentSpec const& spec,
                                std::vector<Artifact>* artifacts)
{
    auto const& def = find_definition(spec.id);
    auto const start = std::chrono::steady_clock::now();
    Run run(spec, def, artifacts);
    try
    {
        runner_for(def.id)(run);
    }
    catch (InvalidParams const& e)
    {
        throw InvalidSpec(e.what());
    }
    catch (Unsupported const& e)
    {
        throw InvalidSpec(std::string("unsupported for this model: ") + e.what());
    }
    std::chrono::duration<double> const elapsed
        = std::chrono::steady_clock::now() - start;
    return run.finish(elapsed.count());
}

std::vector<ExperimentReport>
run_all(ExperimentSpec const& spec, std::vector<Artifact>* artifacts)
{
    std::vector<ExperimentReport> out;
    for (auto const& id : experiment_ids())
    {
        ExperimentSpec s;
        s.id = id;
        s.params = spec.params;
        s.seed = spec.seed;
        s.workers = spec.workers;
        out.push_back(run_experiment(s, artifacts));
    }
    return out;
}

}  // namespace bgwi
