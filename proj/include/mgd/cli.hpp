#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgd/devices.hpp"
#include "mgd/netmodel.hpp"
#include "mgd/objectives.hpp"

namespace mgd {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitValidation = 2,
    kExitConvergence = 3,
    kExitInfeasible = 4,
};

// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// hour, one column per unit, battery_kw, [dr_shift_kw], then informational
// columns that are ignored on read.
void write_schedule_csv(std::ostream& out, const MicrogridCase& microgrid, const DispatchSchedule& schedule,
                        const std::vector<double>& grid_kw, const std::vector<double>& soc);
DispatchSchedule read_schedule_csv(std::istream& in, const MicrogridCase& microgrid);
DispatchSchedule read_schedule_csv(const std::filesystem::path& path, const MicrogridCase& microgrid);

// "w1,w2,w3,w4" -> weights normalised to sum 1.
ObjectiveVector parse_weights(const std::string& text);

} // namespace mgd
