// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/format.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace bgwi
{
//! Round-trippable decimal ('.' separator, 17 significant digits)
inline std::string format_g17(double value)
{
    if (std::isinf(value))
    {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace bgwi
