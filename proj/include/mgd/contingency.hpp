#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace mgd {

enum class LoadCategory { Domestic, Industrial, Commercial };

inline constexpr std::size_t kLoadCategoryCount = 3;

const char* to_string(LoadCategory category);
LoadCategory load_category_from_string(const std::string& text);

inline constexpr const char* kTransformerElement = "transformer";

// An outage of one element. `islanded` is derived from the topology when the
// case is validated and is never read from a case file.
struct Contingency {
    std::string id;
    std::string failed_element; // branch id or "transformer"
    double lambda = 0.0;        // failures per hour
    double repair_time = 1.0;   // hours
    std::vector<bool> islanded; // per bus

    bool operator==(const Contingency&) const = default;
};

// Outage cost per load category as a step function of outage duration.
class OutageCostTable {
public:
    struct Step {
        double max_duration; // hours; +inf for the open-ended last step
        double cost;         // EUR ct/kWh
        bool operator==(const Step&) const = default;
    };

    OutageCostTable();

    // Duration-independent costs.
    static OutageCostTable flat(double domestic, double industrial, double commercial);

    void set_steps(LoadCategory category, std::vector<Step> steps);
    const std::vector<Step>& steps(LoadCategory category) const;

    double cost(LoadCategory category, double duration) const;

    bool operator==(const OutageCostTable&) const = default;

private:
    std::array<std::vector<Step>, kLoadCategoryCount> steps_;
};

} // namespace mgd
