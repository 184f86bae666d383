#include "etmas/fixtures.hpp"

#include <algorithm>
#include <string>

namespace etmas {

namespace {

const Fixture kFixtures[] = {
#include "fixtures_data.inc"
};

}  // namespace

const std::vector<Fixture>& bundled_fixtures() {
  static const std::vector<Fixture> sorted = [] {
    std::vector<Fixture> v(std::begin(kFixtures), std::end(kFixtures));
    std::sort(v.begin(), v.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
    return v;
  }();
  return sorted;
}

std::optional<Fixture> find_fixture(std::string_view name) {
  for (const auto& f : bundled_fixtures())
    if (f.name == name) return f;
  return std::nullopt;
}

std::vector<FixtureListing> list_fixtures() {
  std::vector<FixtureListing> out;
  for (const auto& f : bundled_fixtures()) out.push_back({std::string(f.name), load_fixture(f.name).description});
  return out;
}

ScenarioDocument load_fixture(std::string_view name) {
  const auto f = find_fixture(name);
  if (!f) throw ScenarioParseError("unknown fixture '" + std::string(name) + "'");
  return parse_scenario_text(std::string(f->yaml), "fixture:" + std::string(name));
}

}  // namespace etmas
