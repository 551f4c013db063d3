// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file cli/dispatch.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <iosfwd>

#include "config.hpp"

namespace bgwi::cli
{
//! Process exit codes
enum ExitCode : int
{
    exit_pass = 0,
    exit_operational = 1,
    exit_metric_failure = 2,
};

/*!
 * Run the configured experiment ("all" runs every one) and write
 * <id>.report.<format> plus any CSV artifacts into the output directory,
 * creating it if needed. A text summary goes to `log`, diagnostics to `err`.
 */
int dispatch(RunConfig const& config, std::ostream& log, std::ostream& err);

}  // namespace bgwi::cli
