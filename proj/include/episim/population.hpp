#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "episim/random.hpp"
#include "episim/types.hpp"

namespace episim {

struct CountyProfile {
  CountyId county_id = 0;
  std::string name;
  std::uint64_t real_population = 0;
  std::uint64_t households_real = 0;
  double avg_household_size = 1.0;
  std::uint32_t grocery_count = 0;
  std::uint32_t supercenter_count = 0;
  std::uint32_t convenience_count = 0;
  std::uint32_t school_count = 0;
  std::uint32_t workplace_count = 0;
};

/// Regional age mix by decade bin (census-shaped default).
inline constexpr AgeTable kDefaultAgeDistribution{0.122, 0.131, 0.132, 0.128,
                                                  0.121, 0.134, 0.124, 0.108};

/// Probability of being employed by age bin.
inline constexpr AgeTable kDefaultEmploymentByAge{0.0, 0.0, 0.8,  0.9,
                                                  0.9, 0.85, 0.4, 0.0};

struct SynthesisParams {
  double scale = 0.01;
  double proximity_factor = 0.9;
  std::uint32_t friend_count = 5;
  double friend_radius = 0.1;
  std::uint64_t seed = 20200401;
  /// Choose stores, schools, workplaces and friends from every county,
  /// comparing county-local coordinates as if all counties shared one unit
  /// square. When false every assignment stays inside the household's county.
  bool region_wide = true;
  AgeTable age_distribution = kDefaultAgeDistribution;
  AgeTable employment_by_age = kDefaultEmploymentByAge;

  void validate() const;
};

struct Site {
  SiteId site_id = kNoSite;
  SiteKind kind = SiteKind::Home;
  CountyId county_id = 0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Site&, const Site&) = default;
};

struct Household {
  HouseholdId household_id = 0;
  CountyId county_id = 0;
  SiteId home_site = kNoSite;
  double x = 0.0;
  double y = 0.0;
  std::vector<PersonId> resident_ids;
  std::vector<HouseholdId> friend_household_ids;
  SiteId assigned_grocery = kNoSite;
  SiteId assigned_supercenter = kNoSite;
  SiteId assigned_convenience = kNoSite;
  SiteId assigned_workplace = kNoSite;

  SiteId assigned_store(SiteKind kind) const;

  friend bool operator==(const Household&, const Household&) = default;
};

struct Person {
  PersonId person_id = 0;
  HouseholdId household_id = 0;
  int age_years = 0;
  AgeBin age_bin = 0;
  Sex sex = Sex::Female;  // carried through snapshots, never read by the model
  bool employed = false;
  SiteId school_site = kNoSite;

  bool attends_school() const { return school_site != kNoSite; }

  friend bool operator==(const Person&, const Person&) = default;
};

/// Entity tables indexed by id: sites[id].site_id == id, and likewise for
/// households and people.
struct Population {
  std::vector<Site> sites;
  std::vector<Household> households;
  std::vector<Person> people;

  std::size_t size() const { return people.size(); }
  const Household& household_of(const Person& p) const {
    return households[p.household_id];
  }
  SiteId home_of(const Person& p) const {
    return households[p.household_id].home_site;
  }

  /// Throws std::invalid_argument naming the first broken structural
  /// invariant (dangling ids, kind mismatches, bad friend lists). With
  /// `same_county`, assigned sites and friends must share the household's
  /// county.
  void validate(std::uint32_t friend_count, bool same_county = false) const;

  friend bool operator==(const Population&, const Population&) = default;
};

class CountyTableError : public std::runtime_error {
 public:
  enum class Code { MissingFile, BadHeader, EmptyTable, MalformedRow, InvalidValue };

  CountyTableError(Code code, std::size_t row, std::string field,
                   const std::string& message);

  Code code() const { return code_; }
  /// 1-based data row (0 for file-level errors).
  std::size_t row() const { return row_; }
  const std::string& field() const { return field_; }

 private:
  Code code_;
  std::size_t row_;
  std::string field_;
};

inline constexpr std::string_view kCountyTableHeader =
    "county_id,name,real_population,households_real,avg_household_size,"
    "grocery,supercenter,convenience,schools,workplaces";

std::vector<CountyProfile> load_county_table(const std::filesystem::path& path);
std::vector<CountyProfile> parse_county_table(std::string_view text);

/// Store, school and workplace sites for one county with consecutive ids
/// starting at first_id, in kind order grocery, supercenter, convenience,
/// school, workplace.
std::vector<Site> synthesize_sites(const CountyProfile& profile,
                                   RandomStream& rng, SiteId first_id);

/// round-half-up(households_real * scale), at least 1 for nonzero counties.
std::uint64_t scaled_household_count(std::uint64_t households_real, double scale);

/// Positioned households with consecutive ids starting at first_id. Home
/// sites, residents, friends and assignments are left for later steps.
std::vector<Household> synthesize_households(const CountyProfile& profile,
                                             const SynthesisParams& params,
                                             RandomStream& rng,
                                             HouseholdId first_id);

/// With probability proximity_factor the nearest site of `kind` (ties to the
/// lowest id), otherwise a uniformly random site of `kind`. Sites of other
/// kinds in `candidates` are ignored.
class NoSiteOfKind : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SiteId select_store(SiteKind kind, double x, double y,
                    std::span<const Site> candidates, double proximity_factor,
                    RandomStream& rng);

/// Friend ids for `self` drawn from `candidates` (its county, or the whole
/// region). Requires at least friend_count + 1 candidates including `self`.
std::vector<HouseholdId> assign_friends(const Household& self,
                                        std::span<const Household> candidates,
                                        const SynthesisParams& params,
                                        RandomStream& rng);

/// Household size: round(normal(avg, 1)) clamped to [1, 8].
int draw_household_size(double avg_household_size, RandomStream& rng);

/// Fills residents for `households` and returns the new people, with ids
/// starting at first_id. Schools are chosen from the School sites in
/// `schools` with the select_store rule.
std::vector<Person> synthesize_people(std::span<Household> households,
                                      const CountyProfile& profile,
                                      std::span<const Site> schools,
                                      const SynthesisParams& params,
                                      RandomStream& rng, PersonId first_id);

/// Full pipeline over all counties.
Population synthesize_population(std::span<const CountyProfile> counties,
                                 const SynthesisParams& params);

}  // namespace episim
