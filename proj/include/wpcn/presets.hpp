#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpcn/config.hpp"
#include "wpcn/engine.hpp"

namespace wpcn {

// Ready-made experiment configurations. Each preset carries a base scenario
// plus the sweep axes its experiment family uses.
struct Preset {
    std::string name;
    std::string description;
    Scenario scenario;
    std::optional<SweepAxis> axis;
    std::optional<SweepAxis> axis2;
    int default_runs = 3;
};

std::vector<std::string> preset_names();
Preset get_preset(const std::string& name);

}  // namespace wpcn
