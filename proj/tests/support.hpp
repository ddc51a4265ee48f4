#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "episim/population.hpp"
#include "episim/simulation.hpp"

namespace episim::testing {

/// Two small counties, a few hundred people in total.
inline const char* kSmallTable =
    "county_id,name,real_population,households_real,avg_household_size,grocery,supercenter,"
    "convenience,schools,workplaces\n"
    "1,Alpha,30000,12000,2.5,4,1,3,3,6\n"
    "2,Beta,20000,8000,2.4,3,1,2,2,4\n";

inline Population small_population(std::uint64_t seed = 7, bool region_wide = true) {
  SynthesisParams params;
  params.seed = seed;
  params.region_wide = region_wide;
  const auto counties = parse_county_table(kSmallTable);
  return synthesize_population(counties, params);
}

inline const Population& shared_small_population() {
  static const Population pop = small_population();
  return pop;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("episim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path data_dir() { return EPISIM_SOURCE_DIR "/data"; }
inline std::filesystem::path scenario_dir() { return EPISIM_SOURCE_DIR "/scenarios"; }

}  // namespace episim::testing
