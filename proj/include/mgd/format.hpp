#pragma once

#include <cstdio>
#include <string>

namespace mgd {

// Locale-independent number formatting used by every CSV writer so outputs
// are byte-stable.
inline std::string fmt_num(double value)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

// Round-trip precision, for files that are read back (schedules).
inline std::string fmt_exact(double value)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

} // namespace mgd
