// SPDX-License-Identifier: Apache-2.0
#include "bgwi/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "bgwi/format.hpp"

namespace bgwi
{
namespace
{
using nlohmann::json;

bool evaluate(double observed, double target, Comparison comparison,
              double tolerance)
{
    if (std::isnan(observed))
    {
        return comparison == Comparison::info;
    }
    switch (comparison)
    {
        case Comparison::abs_within:
            return std::abs(observed - target) <= tolerance;
        case Comparison::rel_within:
            return std::abs(observed - target) <= tolerance * std::abs(target);
        case Comparison::at_most:
            return observed <= target;
        case Comparison::at_least:
            return observed >= target;
        case Comparison::info:
            return true;
    }
    return false;
}

template<class E>
E enum_from(std::string const& name, std::initializer_list<E> values)
{
    for (E v : values)
    {
        if (name == to_string(v))
        {
            return v;
        }
    }
    throw DomainError("unknown enum value '" + name + "'");
}

// JSON has no inf/nan; keep them as strings so round trips are lossless
json number(double v)
{
    if (std::isfinite(v))
    {
        return v;
    }
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double from_number(json const& j)
{
    if (j.is_string())
    {
        auto const s = j.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

json params_json(StableFamilyParams const& p)
{
    return json{{"alpha", p.alpha},   {"c", p.c},
                {"d", p.d},           {"delta", p.delta},
                {"family", to_string(p.family)}, {"c_prime", p.c_prime}};
}

StableFamilyParams params_from(json const& j)
{
    auto const family = j.at("family").get<std::string>() == "log_perturbed"
                            ? Family::log_perturbed
                            : Family::pure_power;
    return validate_params(j.at("alpha").get<double>(), j.at("c").get<double>(),
                           j.at("d").get<double>(), family,
                           j.at("c_prime").get<double>());
}

std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
    {
        return s;
    }
    std::string out = "\"";
    for (char ch : s)
    {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}
}  // namespace

Metric make_metric(std::string name, double observed, double target,
                   Provenance provenance, Comparison comparison,
                   double tolerance, std::string note)
{
    Metric m;
    m.name = std::move(name);
    m.observed = observed;
    m.target = target;
    m.provenance = provenance;
    m.comparison = comparison;
    m.tolerance = tolerance;
    m.note = std::move(note);
    m.pass = evaluate(observed, target, comparison, tolerance);
    return m;
}

bool ExperimentReport::all_pass() const noexcept
{
    return std::all_of(metrics.begin(), metrics.end(),
                       [](Metric const& m) { return m.pass; });
}

char const* to_string(Provenance p) noexcept
{
    switch (p)
    {
        case Provenance::paper_formula:
            return "paper-formula";
        case Provenance::derived_oracle:
            return "derived-oracle";
        case Provenance::trivial:
            return "trivial";
    }
    return "?";
}

char const* to_string(Comparison c) noexcept
{
    switch (c)
    {
        case Comparison::abs_within:
            return "abs_within";
        case Comparison::rel_within:
            return "rel_within";
        case Comparison::at_most:
            return "at_most";
        case Comparison::at_least:
            return "at_least";
        case Comparison::info:
            return "info";
    }
    return "?";
}

char const* to_string(ReportFormat f) noexcept
{
    switch (f)
    {
        case ReportFormat::json:
            return "json";
        case ReportFormat::csv:
            return "csv";
        case ReportFormat::text:
            return "text";
    }
    return "?";
}

ReportFormat parse_report_format(std::string const& name)
{
    return enum_from(name, {ReportFormat::json, ReportFormat::csv,
                            ReportFormat::text});
}

void emit_report(ExperimentReport const& report, ReportFormat format,
                 std::ostream& sink)
{
    switch (format)
    {
        case ReportFormat::json: {
            json params = json::object();
            for (auto const& [name, p] : report.params)
            {
                params[name] = params_json(p);
            }
            json metrics = json::array();
            for (auto const& m : report.metrics)
            {
                metrics.push_back({{"name", m.name},
                                   {"observed", number(m.observed)},
                                   {"target", number(m.target)},
                                   {"provenance", to_string(m.provenance)},
                                   {"tolerance", number(m.tolerance)},
                                   {"comparison", to_string(m.comparison)},
                                   {"pass", m.pass},
                                   {"note", m.note}});
            }
            json doc{{"experiment", report.experiment},
                     {"params", params},
                     {"seed", report.seed},
                     {"ladder", report.ladder},
                     {"paths", report.paths},
                     {"workers", report.workers},
                     {"metrics", metrics},
                     {"runtime_s", report.runtime_s}};
            sink << doc.dump(2) << '\n';
            break;
        }
        case ReportFormat::csv:
            sink << "experiment,metric,observed,target,provenance,tolerance,"
                    "comparison,pass\n";
            for (auto const& m : report.metrics)
            {
                sink << csv_field(report.experiment) << ',' << csv_field(m.name)
                     << ',' << format_g17(m.observed) << ','
                     << format_g17(m.target) << ',' << to_string(m.provenance)
                     << ',' << format_g17(m.tolerance) << ','
                     << to_string(m.comparison) << ',' << (m.pass ? 1 : 0)
                     << '\n';
            }
            break;
        case ReportFormat::text:
            sink << "experiment " << report.experiment << "  seed "
                 << report.seed << "  paths " << report.paths << '\n';
            for (auto const& [name, p] : report.params)
            {
                sink << "  params[" << name << "] alpha=" << p.alpha
                     << " c=" << p.c << " d=" << p.d << " delta=" << p.delta
                     << '\n';
            }
            for (auto const& m : report.metrics)
            {
                sink << "  [" << (m.pass ? "PASS" : "FAIL") << "] " << m.name
                     << ": observed " << std::setprecision(8) << m.observed
                     << "  target " << m.target << " (" << to_string(m.comparison);
                if (m.comparison == Comparison::abs_within
                    || m.comparison == Comparison::rel_within)
                {
                    sink << " tol " << m.tolerance;
                }
                sink << ", " << to_string(m.provenance) << ")";
                if (!m.note.empty())
                {
                    sink << "  " << m.note;
                }
                sink << '\n';
            }
            sink << "  " << (report.all_pass() ? "ALL PASS" : "FAILURES")
                 << "  runtime " << std::setprecision(3) << report.runtime_s
                 << " s\n";
            break;
    }
    sink.flush();
    if (!sink)
    {
        throw IoError("failed writing report");
    }
}

ExperimentReport parse_report_json(std::string const& text)
{
    json const doc = json::parse(text);
    ExperimentReport r;
    r.experiment = doc.at("experiment").get<std::string>();
    for (auto const& [name, p] : doc.at("params").items())
    {
        r.params.emplace_back(name, params_from(p));
    }
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.ladder = doc.at("ladder").get<std::vector<std::uint64_t>>();
    r.paths = doc.at("paths").get<std::uint64_t>();
    r.workers = doc.at("workers").get<unsigned>();
    r.runtime_s = doc.at("runtime_s").get<double>();
    for (auto const& m : doc.at("metrics"))
    {
        Metric out;
        out.name = m.at("name").get<std::string>();
        out.observed = from_number(m.at("observed"));
        out.target = from_number(m.at("target"));
        out.provenance = enum_from(m.at("provenance").get<std::string>(),
                                   {Provenance::paper_formula,
                                    Provenance::derived_oracle,
                                    Provenance::trivial});
        out.tolerance = from_number(m.at("tolerance"));
        out.comparison = enum_from(
            m.at("comparison").get<std::string>(),
            {Comparison::abs_within, Comparison::rel_within, Comparison::at_most,
             Comparison::at_least, Comparison::info});
        out.pass = m.at("pass").get<bool>();
        out.note = m.at("note").get<std::string>();
        r.metrics.push_back(std::move(out));
    }
    return r;
}

}  // namespace bgwi
