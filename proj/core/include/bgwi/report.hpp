// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/report.hpp
//! Experiment reports and their JSON / CSV / text renderings.
//!
//! JSON keys: experiment, params (object of named parameter sets), seed,
//! ladder, paths, workers, metrics[] (name, observed, target, provenance,
//! tolerance, comparison, pass, note), runtime_s.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "laws.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
enum class Provenance
{
    paper_formula,
    derived_oracle,
    trivial,
};

//! How observed is compared with target and tolerance
enum class Comparison
{
    abs_within,  //!< |observed - target| <= tolerance
    rel_within,  //!< |observed - target| <= tolerance * |target|
    at_most,     //!< observed <= target
    at_least,    //!< observed >= target
    info,        //!< recorded only, always passes
};

struct Metric
{
    std::string name;
    double observed{0};
    double target{0};
    Provenance provenance{Provenance::derived_oracle};
    double tolerance{0};
    Comparison comparison{Comparison::abs_within};
    bool pass{false};
    std::string note;
};

//! Build a metric and evaluate its verdict
Metric make_metric(std::string name, double observed, double target,
                   Provenance provenance, Comparison comparison,
                   double tolerance = 0.0, std::string note = {});

struct ExperimentReport
{
    std::string experiment;
    std::vector<std::pair<std::string, StableFamilyParams>> params;
    std::uint64_t seed{0};
    std::vector<std::uint64_t> ladder;
    std::uint64_t paths{0};
    unsigned workers{1};
    std::vector<Metric> metrics;
    double runtime_s{0};

    bool all_pass() const noexcept;
};

enum class ReportFormat
{
    json,
    csv,
    text,
};

char const* to_string(Provenance p) noexcept;
char const* to_string(Comparison c) noexcept;
char const* to_string(ReportFormat f) noexcept;
ReportFormat parse_report_format(std::string const& name);

//! Throws IoError if the sink fails
void emit_report(ExperimentReport const& report, ReportFormat format,
                 std::ostream& sink);

ExperimentReport parse_report_json(std::string const& text);

}  // namespace bgwi
