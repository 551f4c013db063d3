// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <bgwi/parallel.hpp>

namespace bgwi::cli
{
namespace
{
namespace pt = boost::property_tree;

double to_double(std::string const& text, std::size_t line)
{
    try
    {
        std::size_t used = 0;
        double const v = std::stod(text, &used);
        if (used != text.size())
        {
            throw std::invalid_argument(text);
        }
        return v;
    }
    catch (std::exception const&)
    {
        throw ParseError(line, "expected a number, got '" + text + "'");
    }
}

std::uint64_t to_count(std::string const& text, std::size_t line)
{
    double const v = to_double(text, line);
    if (!(v >= 0) || v != std::floor(v) || v > 1.8e19)
    {
        throw ParseError(line, "expected a nonnegative integer, got '" + text
                                   + "'");
    }
    return static_cast<std::uint64_t>(v);
}

// Line of the first occurrence of "key" in the file, for diagnostics
std::size_t line_of(std::string const& contents, std::string const& key)
{
    std::istringstream in(contents);
    std::string row;
    std::size_t n = 0;
    while (std::getline(in, row))
    {
        ++n;
        auto const start = row.find_first_not_of(" \t");
        if (start != std::string::npos && row.compare(start, key.size(), key) == 0)
        {
            return n;
        }
    }
    return 0;
}
}  // namespace

std::vector<std::uint64_t> parse_ladder(std::string const& text)
{
    std::vector<std::uint64_t> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        out.push_back(to_count(item, 0));
    }
    if (out.empty())
    {
        throw ParseError(0, "empty ladder");
    }
    return out;
}

ExperimentSpec RunConfig::to_spec() const
{
    ExperimentSpec spec;
    spec.id = experiment;
    spec.params = params;
    spec.seed = seed;
    if (ladder_set)
    {
        spec.ladder = ladder;
    }
    spec.paths = paths;
    spec.workers = workers;
    spec.settings = settings;
    return spec;
}

RunConfig parse_config(std::string const& contents, Overrides const& overrides)
{
    pt::ptree tree;
    try
    {
        std::istringstream in(contents);
        pt::ini_parser::read_ini(in, tree);
    }
    catch (pt::ini_parser_error const& e)
    {
        throw ParseError(e.line(), e.message());
    }

    RunConfig cfg;
    cfg.workers = default_workers();
    std::optional<double> alpha, c, d, cprime;
    std::optional<std::string> family;

    for (auto const& [section, body] : tree)
    {
        if (body.empty() && !body.data().empty())
        {
            throw UnknownKey(section);
        }
        for (auto const& [key, node] : body)
        {
            std::string const value = node.data();
            std::string const full = section + "." + key;
            std::size_t const line = line_of(contents, key);
            if (section == "model")
            {
                if (key == "alpha")
                    alpha = to_double(value, line);
                else if (key == "c")
                    c = to_double(value, line);
                else if (key == "d")
                    d = to_double(value, line);
                else if (key == "cprime")
                    cprime = to_double(value, line);
                else if (key == "family")
                    family = value;
                else
                    throw UnknownKey(full);
            }
            else if (section == "experiment")
            {
                if (key == "id")
                {
                    cfg.experiment = value;
                }
                else if (key == "ladder")
                {
                    try
                    {
                        cfg.ladder = parse_ladder(value);
                    }
                    catch (ParseError const& e)
                    {
                        throw ParseError(line, e.what());
                    }
                    cfg.ladder_set = true;
                }
                else if (key == "paths")
                {
                    cfg.paths = to_count(value, line);
                }
                else if (key.rfind("setting.", 0) == 0)
                {
                    cfg.settings[key.substr(8)] = to_double(value, line);
                }
                else
                {
                    throw UnknownKey(full);
                }
            }
            else if (section == "run")
            {
                if (key == "seed")
                    cfg.seed = to_count(value, line);
                else if (key == "workers")
                    cfg.workers = static_cast<unsigned>(to_count(value, line));
                else if (key == "out")
                    cfg.out = value;
                else if (key == "format")
                    cfg.format = parse_report_format(value);
                else
                    throw UnknownKey(full);
            }
            else
            {
                throw UnknownKey(full);
            }
        }
    }

    // Command-line values win
    if (overrides.experiment)
        cfg.experiment = *overrides.experiment;
    if (overrides.alpha)
        alpha = overrides.alpha;
    if (overrides.c)
        c = overrides.c;
    if (overrides.d)
        d = overrides.d;
    if (overrides.cprime)
        cprime = overrides.cprime;
    if (overrides.family)
        family = overrides.family;
    if (overrides.ladder)
    {
        cfg.ladder = *overrides.ladder;
        cfg.ladder_set = true;
    }
    if (overrides.paths)
        cfg.paths = overrides.paths;
    if (overrides.seed)
        cfg.seed = *overrides.seed;
    if (overrides.workers)
        cfg.workers = *overrides.workers;
    if (overrides.out)
        cfg.out = *overrides.out;
    if (overrides.format)
        cfg.format = parse_report_format(*overrides.format);
    for (auto const& [k, v] : overrides.settings)
    {
        cfg.settings[k] = v;
    }

    if (cfg.workers == 0)
    {
        throw InvalidSpec("workers must be at least 1");
    }
    if (cfg.experiment.empty())
    {
        throw InvalidSpec("no experiment id given");
    }

    bool const any_model = alpha || c || d || cprime || family;
    if (any_model)
    {
        if (!(alpha && c && d))
        {
            throw InvalidParams("model needs alpha, c and d together");
        }
        Family fam = Family::pure_power;
        if (family)
        {
            if (*family == "log_perturbed")
                fam = Family::log_perturbed;
            else if (*family != "pure_power")
                throw InvalidParams("unknown family '" + *family + "'");
        }
        cfg.params = validate_params(*alpha, *c, *d, fam, cprime.value_or(0.0));
    }

    if (cfg.out.empty())
    {
        char const* env = std::getenv("BGWILAB_OUT");
        cfg.out = env && *env ? env : "bgwilab-out";
    }
    return cfg;
}

}  // namespace bgwi::cli
