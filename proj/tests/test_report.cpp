// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include <bgwi/errors.hpp>
#include <bgwi/report.hpp>

using namespace bgwi;

namespace
{
ExperimentReport sample_report()
{
    ExperimentReport r;
    r.experiment = "demo";
    r.params.emplace_back("model", canonical_exact_params());
    r.seed = 17;
    r.ladder = {10, 100};
    r.paths = 5;
    r.workers = 2;
    r.runtime_s = 0.25;
    r.metrics.push_back(make_metric("gap", 0.01, 0.05, Provenance::paper_formula,
                                    Comparison::at_most));
    r.metrics.push_back(make_metric("mean, \"quoted\"", 0.51, 0.5,
                                    Provenance::derived_oracle,
                                    Comparison::abs_within, 0.02, "3-sigma"));
    r.metrics.push_back(make_metric("unbounded",
                                    std::numeric_limits<double>::infinity(), 0,
                                    Provenance::trivial, Comparison::info));
    return r;
}
}  // namespace

TEST(Metric, Verdicts)
{
    EXPECT_TRUE(make_metric("a", 1.0, 1.1, Provenance::trivial,
                            Comparison::rel_within, 0.1)
                    .pass);
    EXPECT_FALSE(make_metric("a", 1.0, 1.2, Provenance::trivial,
                             Comparison::rel_within, 0.1)
                     .pass);
    EXPECT_TRUE(make_metric("a", 2, 1, Provenance::trivial, Comparison::at_least).pass);
    EXPECT_FALSE(make_metric("a", 2, 1, Provenance::trivial, Comparison::at_most).pass);
    EXPECT_FALSE(make_metric("a", std::nan(""), 1, Provenance::trivial,
                             Comparison::at_most)
                     .pass);
    EXPECT_TRUE(make_metric("a", 7, 1, Provenance::trivial, Comparison::info).pass);
}

TEST(Report, EmptyMetricsJson)
{
    ExperimentReport r;
    r.experiment = "empty";
    std::ostringstream os;
    emit_report(r, ReportFormat::json, os);
    EXPECT_NE(os.str().find("\"metrics\": []"), std::string::npos);
    auto const back = parse_report_json(os.str());
    EXPECT_TRUE(back.metrics.empty());
    EXPECT_TRUE(back.all_pass());
}

TEST(Report, JsonRoundTrip)
{
    auto const r = sample_report();
    std::ostringstream os;
    emit_report(r, ReportFormat::json, os);
    for (char const* key : {"\"experiment\"", "\"params\"", "\"seed\"",
                            "\"ladder\"", "\"metrics\"", "\"runtime_s\""})
    {
        EXPECT_NE(os.str().find(key), std::string::npos) << key;
    }
    auto const back = parse_report_json(os.str());
    EXPECT_EQ(back.experiment, r.experiment);
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(back.ladder, r.ladder);
    EXPECT_EQ(back.paths, r.paths);
    EXPECT_EQ(back.workers, r.workers);
    ASSERT_EQ(back.params.size(), 1u);
    EXPECT_EQ(back.params[0].second.delta, 0.5);
    ASSERT_EQ(back.metrics.size(), r.metrics.size());
    for (std::size_t i = 0; i < r.metrics.size(); ++i)
    {
        auto const& a = r.metrics[i];
        auto const& b = back.metrics[i];
        EXPECT_EQ(a.name, b.name);
        EXPECT_EQ(a.observed, b.observed);
        EXPECT_EQ(a.target, b.target);
        EXPECT_EQ(a.tolerance, b.tolerance);
        EXPECT_EQ(a.provenance, b.provenance);
        EXPECT_EQ(a.comparison, b.comparison);
        EXPECT_EQ(a.pass, b.pass);
        EXPECT_EQ(a.note, b.note);
    }
}

TEST(Report, CsvRowsAndQuoting)
{
    auto const r = sample_report();
    std::ostringstream os;
    emit_report(r, ReportFormat::csv, os);
    std::string const text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'),
              static_cast<long>(r.metrics.size() + 1));
    EXPECT_NE(text.find("\"mean, \"\"quoted\"\"\""), std::string::npos);
    EXPECT_NE(text.find(",inf,"), std::string::npos);
    EXPECT_NE(text.find("0.01,0.050000000000000003"), std::string::npos);
}

TEST(Report, TextSummary)
{
    std::ostringstream os;
    emit_report(sample_report(), ReportFormat::text, os);
    EXPECT_NE(os.str().find("[PASS] gap"), std::string::npos);
    EXPECT_NE(os.str().find("ALL PASS"), std::string::npos);
}

TEST(Report, FailingSinkRaises)
{
    std::ostringstream os;
    os.setstate(std::ios::badbit);
    EXPECT_THROW(emit_report(sample_report(), ReportFormat::csv, os), IoError);
}

TEST(Report, FormatNames)
{
    EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
    EXPECT_THROW(parse_report_format("xml"), DomainError);
}
