// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwilab.cpp
//! Command-line front end: bgwilab [SUBCOMMAND] [--config FILE] [flags]
//---------------------------------------------------------------------------//
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/dispatch.hpp"

int main(int argc, char** argv)
{
    using namespace bgwi::cli;

    CLI::App app{"bgwilab: branching processes with immigration, exact and "
                 "Monte Carlo scaling-limit checks"};
    app.set_version_flag("--version", "bgwilab 0.1.0");

    Overrides ov;
    std::string config_path;
    std::string ladder_text;
    std::vector<std::string> sets;

    app.add_option("--config", config_path, "Sectioned key=value config file")
        ->check(CLI::ExistingFile);
    app.add_option("--experiment", ov.experiment, "Experiment id");
    app.add_option("--seed", ov.seed, "Master seed");
    app.add_option("--workers", ov.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", ov.out,
                   "Output directory (fallback: $BGWILAB_OUT, bgwilab-out)");
    app.add_option("--format", ov.format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--ladder", ladder_text, "Comma-separated n ladder");
    app.add_option("--paths", ov.paths, "Monte Carlo path count");
    app.add_option("--alpha", ov.alpha, "Stability index alpha");
    app.add_option("--c", ov.c, "Offspring constant c");
    app.add_option("--d", ov.d, "Immigration constant d");
    app.add_option("--cprime", ov.cprime, "Log-perturbation strength c'");
    app.add_option("--family", ov.family, "pure_power or log_perturbed")
        ->check(CLI::IsMember({"pure_power", "log_perturbed"}));
    app.add_option("--set", sets, "Experiment setting override name=value");

    std::vector<CLI::App*> subcommands;
    for (auto const& id : bgwi::experiment_ids())
    {
        subcommands.push_back(
            app.add_subcommand(id, "Run the " + id + " experiment")->fallthrough());
    }
    subcommands.push_back(
        app.add_subcommand("all", "Run the full gate suite")->fallthrough());
    app.require_subcommand(0, 1);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? exit_pass : exit_operational;
    }

    try
    {
        for (auto* sub : subcommands)
        {
            if (sub->parsed())
            {
                ov.experiment = sub->get_name();
            }
        }
        if (!ladder_text.empty())
        {
            ov.ladder = parse_ladder(ladder_text);
        }
        for (auto const& s : sets)
        {
            auto const eq = s.find('=');
            if (eq == std::string::npos)
            {
                throw std::invalid_argument("--set expects name=value, got '"
                                            + s + "'");
            }
            ov.settings[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        }
        std::string contents;
        if (!config_path.empty())
        {
            std::ifstream in(config_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            contents = buf.str();
        }
        auto const config = parse_config(contents, ov);
        return dispatch(config, std::cout, std::cerr);
    }
    catch (std::exception const& e)
    {
        std::cerr << "bgwilab: error: " << e.what() << '\n';
        return exit_operational;
    }
}
