#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "gt/experiments.hpp"
#include "gt/verification.hpp"

namespace gt {
namespace {

Json load(const std::string& name) {
  std::ifstream in(std::string(GT_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  return Json::parse(in);
}

TEST(Fixtures, GameFilesMatchAcceptanceFixtures) {
  const std::pair<const char*, GameFixture> cases[] = {
      {"game_ideal_distinguisher_first.json", GameFixture::ideal_distinguisher_first},
      {"game_ideal_teleporter_first.json", GameFixture::ideal_teleporter_first},
      {"game_gaussian_distinguisher_first.json", GameFixture::gaussian_distinguisher_first},
      {"game_gaussian_teleporter_first.json", GameFixture::gaussian_teleporter_first},
  };
  for (const auto& [file, fixture] : cases) {
    const auto doc = load(file);
    EXPECT_EQ(doc["version"], 1);
    EXPECT_EQ(game_config_to_json(game_config_from_json(doc["game"])), game_config_to_json(game_fixture(fixture)))
        << file;
  }
}

TEST(Fixtures, SweepFilesParse) {
  for (const char* file : {"sweep_basel_strong.json", "sweep_basel_default_floor.json", "sweep_uniform_divergence.json"}) {
    EXPECT_NO_THROW(validate(sweep_spec_from_json(load(file)["sweep"]))) << file;
  }
  EXPECT_THROW(sweep_spec_from_json(load("sweep_unknown_field.json")["sweep"]), std::invalid_argument);
}

}  // namespace
}  // namespace gt
