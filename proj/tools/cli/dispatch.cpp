// SPDX-License-Identifier: Apache-2.0
#include "dispatch.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <bgwi/experiments.hpp>

namespace bgwi::cli
{
namespace
{
namespace fs = std::filesystem;

char const* extension(ReportFormat f)
{
    switch (f)
    {
        case ReportFormat::json:
            return "json";
        case ReportFormat::csv:
            return "csv";
        case ReportFormat::text:
            return "txt";
    }
    return "out";
}

void write_file(fs::path const& path, std::string const& content)
{
    std::ofstream os(path, std::ios::binary);
    os << content;
    os.close();
    if (!os)
    {
        throw IoError("cannot write " + path.string());
    }
}
}  // namespace

int dispatch(RunConfig const& config, std::ostream& log, std::ostream& err)
{
    try
    {
        fs::path const dir(config.out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir))
        {
            throw IoError("cannot create output directory " + dir.string());
        }

        std::vector<Artifact> artifacts;
        std::vector<ExperimentReport> reports;
        if (config.experiment == "all")
        {
            reports = run_all(config.to_spec(), &artifacts);
        }
        else
        {
            reports.push_back(run_experiment(config.to_spec(), &artifacts));
        }

        bool pass = true;
        for (auto const& r : reports)
        {
            std::ofstream os(dir / (r.experiment + ".report."
                                    + extension(config.format)),
                             std::ios::binary);
            if (!os)
            {
                throw IoError("cannot open report file in " + dir.string());
            }
            emit_report(r, config.format, os);
            emit_report(r, ReportFormat::text, log);
            pass = pass && r.all_pass();
        }
        for (auto const& a : artifacts)
        {
            write_file(dir / a.name, a.content);
        }
        return pass ? exit_pass : exit_metric_failure;
    }
    catch (std::exception const& e)
    {
        err << "bgwilab: error: " << e.what() << '\n';
        return exit_operational;
    }
}

}  // namespace bgwi::cli
