#pragma once

#include <array>
#include <vector>

#include "mgd/contingency.hpp"

namespace mgd {

// Energy-neutral intra-day load shifting program.
struct DrProgram {
    std::vector<double> shiftable_fraction; // per hour, in [0, 1)
    std::array<bool, kLoadCategoryCount> participation{true, true, true};
    double shift_cost = 0.0; // EUR ct per kWh moved; optional incentive term

    bool participates(LoadCategory category) const
    {
        return participation[static_cast<std::size_t>(category)];
    }

    bool operator==(const DrProgram&) const = default;
};

} // namespace mgd
