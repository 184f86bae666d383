#pragma once

// Scenario files bundled into the library (sources live in fixtures/).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etmas/scenario_io.hpp"

namespace etmas {

struct Fixture {
  std::string_view name;
  std::string_view yaml;
};

// Stable order: sorted by name.
const std::vector<Fixture>& bundled_fixtures();
std::optional<Fixture> find_fixture(std::string_view name);

struct FixtureListing {
  std::string name;
  std::string description;
};

std::vector<FixtureListing> list_fixtures();

ScenarioDocument load_fixture(std::string_view name);

}  // namespace etmas
