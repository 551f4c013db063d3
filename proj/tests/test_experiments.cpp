// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include <bgwi/experiments.hpp>

using namespace bgwi;

namespace
{
std::string csv_of(ExperimentReport const& r)
{
    std::ostringstream os;
    emit_report(r, ReportFormat::csv, os);
    return os.str();
}

Metric const* find_metric(ExperimentReport const& r, std::string const& part)
{
    auto it = std::find_if(r.metrics.begin(), r.metrics.end(), [&](auto const& m) {
        return m.name.find(part) != std::string::npos;
    });
    return it == r.metrics.end() ? nullptr : &*it;
}
}  // namespace

TEST(Experiments, Registry)
{
    auto const& ids = experiment_ids();
    for (char const* id : {"tables", "yaglom", "extinction", "marginal", "arcsine",
                           "localtime", "counterexample", "walklimits",
                           "tailfit", "septuple", "properties"})
    {
        EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
        EXPECT_NO_THROW(default_settings(id));
    }
    EXPECT_THROW(default_settings("nosuch"), UnknownExperiment);
    EXPECT_EQ(default_paths("tables"), 0u);
    EXPECT_EQ(default_paths("marginal"), 10000u);
}

TEST(Experiments, RejectsBadSpecs)
{
    ExperimentSpec spec;
    spec.id = "nosuch";
    EXPECT_THROW(run_experiment(spec), UnknownExperiment);

    spec.id = "tables";
    spec.settings["no_such_setting"] = 1;
    EXPECT_THROW(run_experiment(spec), InvalidSpec);

    spec.settings.clear();
    spec.ladder = {0};
    EXPECT_THROW(run_experiment(spec), InvalidSpec);
}

TEST(Experiments, SmallTablesRun)
{
    ExperimentSpec spec;
    spec.id = "tables";
    spec.ladder = {100, 1000};
    spec.settings["cn_n_hi"] = 1e4;
    std::vector<Artifact> artifacts;
    auto const r = run_experiment(spec, &artifacts);
    EXPECT_EQ(r.experiment, "tables");
    EXPECT_EQ(r.ladder, spec.ladder);
    ASSERT_FALSE(r.metrics.empty());
    for (auto const& m : r.metrics)
    {
        EXPECT_TRUE(m.pass) << m.name << " observed " << m.observed;
    }
    ASSERT_EQ(artifacts.size(), 1u);
    EXPECT_EQ(artifacts[0].name, "tables.csv");
}

TEST(Experiments, YaglomExactAlias)
{
    ExperimentSpec spec;
    spec.id = "yaglom-exact";
    spec.ladder = {50, 200};
    auto const r = run_experiment(spec);
    EXPECT_EQ(r.experiment, "yaglom");
    ASSERT_NE(find_metric(r, "decreasing"), nullptr);
}

TEST(Experiments, ExtinctionSmall)
{
    ExperimentSpec spec;
    spec.id = "extinction";
    spec.ladder = {100, 1000};
    auto const r = run_experiment(spec);
    auto const* m = find_metric(r, "decreasing");
    ASSERT_NE(m, nullptr);
    EXPECT_TRUE(m->pass);
}

TEST(Experiments, WorkerCountDoesNotChangeResults)
{
    ExperimentSpec spec;
    spec.id = "counterexample";
    spec.ladder = {10};
    spec.paths = 300;
    spec.seed = 99;
    spec.workers = 1;
    auto const one = csv_of(run_experiment(spec));
    spec.workers = 4;
    auto const four = csv_of(run_experiment(spec));
    EXPECT_EQ(one, four);

    spec.id = "marginal";
    spec.ladder = {100};
    spec.paths = 200;
    spec.workers = 1;
    auto const m1 = csv_of(run_experiment(spec));
    spec.workers = 3;
    EXPECT_EQ(m1, csv_of(run_experiment(spec)));
}

TEST(Experiments, SeedChangesMonteCarlo)
{
    ExperimentSpec spec;
    spec.id = "counterexample";
    spec.ladder = {10};
    spec.paths = 300;
    spec.seed = 1;
    auto const a = csv_of(run_experiment(spec));
    spec.seed = 2;
    EXPECT_NE(a, csv_of(run_experiment(spec)));
}
