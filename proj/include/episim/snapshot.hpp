#pragma once

#include <filesystem>
#include <string>

#include "episim/population.hpp"

namespace episim {

/// Population snapshot as three CSV files in one directory:
///
///   sites.csv       site_id,kind,county_id,x,y
///   households.csv  household_id,county_id,home_site,grocery,supercenter,
///                   convenience,workplace,friends
///   people.csv      person_id,household_id,age_years,age_bin,sex,employed,
///                   school_site
///
/// `friends` is a ';'-joined list of household ids; `school_site` is empty for
/// people who do not attend school. Coordinates use the shortest decimal form
/// that reads back to the same double, so snapshots round-trip exactly.
inline constexpr const char* kSitesFile = "sites.csv";
inline constexpr const char* kHouseholdsFile = "households.csv";
inline constexpr const char* kPeopleFile = "people.csv";

std::string format_sites(const Population& population);
std::string format_households(const Population& population);
std::string format_people(const Population& population);

/// Throws IoError on file errors.
void write_snapshot(const Population& population, const std::filesystem::path& dir);

/// Throws IoError on file errors and ValidationError (key = file:row:field)
/// on malformed content or broken references.
Population read_snapshot(const std::filesystem::path& dir);

}  // namespace episim
