#include "episim/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "episim/errors.hpp"
#include "text.hpp"

namespace episim {

std::string_view to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::Home: return "home";
    case SiteKind::Grocery: return "grocery";
    case SiteKind::Supercenter: return "supercenter";
    case SiteKind::Convenience: return "convenience";
    case SiteKind::School: return "school";
    case SiteKind::Workplace: return "workplace";
  }
  return "unknown";
}

std::optional<SiteKind> parse_site_kind(std::string_view text) {
  for (auto kind : {SiteKind::Home, SiteKind::Grocery, SiteKind::Supercenter,
                    SiteKind::Convenience, SiteKind::School, SiteKind::Workplace}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

void SynthesisParams::validate() const {
  if (!(scale > 0.0 && scale <= 1.0))
    throw ValidationError("synthesis.scale", "must be in (0, 1]");
  if (!(proximity_factor >= 0.0 && proximity_factor <= 1.0))
    throw ValidationError("synthesis.proximity_factor", "must be in [0, 1]");
  if (friend_count < 1)
    throw ValidationError("synthesis.friend_count", "must be at least 1");
  if (!(friend_radius > 0.0))
    throw ValidationError("synthesis.friend_radius", "must be positive");
  const double total =
      std::accumulate(age_distribution.begin(), age_distribution.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9 ||
      std::any_of(age_distribution.begin(), age_distribution.end(),
                  [](double p) { return p < 0.0; }))
    throw ValidationError("synthesis.age_distribution",
                          "must be non-negative and sum to 1");
  for (double p : employment_by_age) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("synthesis.employment_by_age",
                            "probabilities must be in [0, 1]");
  }
}

SiteId Household::assigned_store(SiteKind kind) const {
  switch (kind) {
    case SiteKind::Grocery: return assigned_grocery;
    case SiteKind::Supercenter: return assigned_supercenter;
    case SiteKind::Convenience: return assigned_convenience;
    case SiteKind::Workplace: return assigned_workplace;
    case SiteKind::Home: return home_site;
    default: return kNoSite;
  }
}

// ---------------------------------------------------------------------------
// County table

CountyTableError::CountyTableError(Code code, std::size_t row, std::string field,
                                   const std::string& message)
    : std::runtime_error(message), code_(code), row_(row), field_(std::move(field)) {}

namespace {

using Code = CountyTableError::Code;

template <typename T>
T parse_field(std::string_view text, std::size_t row, const char* field) {
  const auto trimmed = detail::trim(text);
  if constexpr (std::is_unsigned_v<T>) {
    // Reject negatives explicitly so they report as invalid rather than
    // malformed.
    if (auto as_signed = detail::parse_number<long long>(trimmed)) {
      if (*as_signed < 0) {
        throw CountyTableError(Code::InvalidValue, row, field,
                               "row " + std::to_string(row) + ": field '" + field +
                                   "' must be non-negative, got " +
                                   std::string(trimmed));
      }
    }
  }
  auto value = detail::parse_number<T>(trimmed);
  if (!value) {
    throw CountyTableError(Code::MalformedRow, row, field,
                           "row " + std::to_string(row) + ": field '" + field +
                               "' is not a number: '" + std::string(trimmed) + "'");
  }
  return *value;
}

}  // namespace

std::vector<CountyProfile> parse_county_table(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty()) {
    throw CountyTableError(Code::BadHeader, 0, "", "county table has no header");
  }
  if (detail::trim(rows.front()) != kCountyTableHeader) {
    throw CountyTableError(Code::BadHeader, 0, "",
                           "county table header must be '" +
                               std::string(kCountyTableHeader) + "'");
  }
  std::vector<CountyProfile> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (detail::trim(rows[i]).empty()) continue;
    const std::size_t row = i;
    const auto cells = detail::split(rows[i], ',');
    if (cells.size() != 10) {
      throw CountyTableError(Code::MalformedRow, row, "",
                             "row " + std::to_string(row) + ": expected 10 fields, got " +
                                 std::to_string(cells.size()));
    }
    CountyProfile p;
    p.county_id = parse_field<std::uint32_t>(cells[0], row, "county_id");
    p.name = std::string(detail::trim(cells[1]));
    p.real_population = parse_field<std::uint64_t>(cells[2], row, "real_population");
    p.households_real = parse_field<std::uint64_t>(cells[3], row, "households_real");
    p.avg_household_size = parse_field<double>(cells[4], row, "avg_household_size");
    p.grocery_count = parse_field<std::uint32_t>(cells[5], row, "grocery");
    p.supercenter_count = parse_field<std::uint32_t>(cells[6], row, "supercenter");
    p.convenience_count = parse_field<std::uint32_t>(cells[7], row, "convenience");
    p.school_count = parse_field<std::uint32_t>(cells[8], row, "schools");
    p.workplace_count = parse_field<std::uint32_t>(cells[9], row, "workplaces");

    if (!(p.avg_household_size >= 1.0 && p.avg_household_size <= 10.0)) {
      throw CountyTableError(Code::InvalidValue, row, "avg_household_size",
                             "row " + std::to_string(row) +
                                 ": field 'avg_household_size' must be in [1, 10]");
    }
    if (p.real_population == 0) {
      throw CountyTableError(Code::InvalidValue, row, "real_population",
                             "row " + std::to_string(row) +
                                 ": field 'real_population' must be positive");
    }
    for (const auto& prev : out) {
      if (prev.county_id == p.county_id) {
        throw CountyTableError(Code::InvalidValue, row, "county_id",
                               "row " + std::to_string(row) + ": duplicate county_id " +
                                   std::to_string(p.county_id));
      }
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) {
    throw CountyTableError(Code::EmptyTable, 0, "", "county table has no data rows");
  }
  return out;
}

std::vector<CountyProfile> load_county_table(const std::filesystem::path& path) {
  std::string text;
  try {
    text = detail::read_file(path.string());
  } catch (const IoError& e) {
    throw CountyTableError(Code::MissingFile, 0, "", e.what());
  }
  return parse_county_table(text);
}

// ---------------------------------------------------------------------------
// Sites and households

std::vector<Site> synthesize_sites(const CountyProfile& profile, RandomStream& rng,
                                   SiteId first_id) {
  const std::pair<SiteKind, std::uint32_t> counts[] = {
      {SiteKind::Grocery, profile.grocery_count},
      {SiteKind::Supercenter, profile.supercenter_count},
      {SiteKind::Convenience, profile.convenience_count},
      {SiteKind::School, profile.school_count},
      {SiteKind::Workplace, profile.workplace_count},
  };
  std::vector<Site> out;
  SiteId next = first_id;
  for (const auto& [kind, count] : counts) {
    for (std::uint32_t i = 0; i < count; ++i) {
      const double x = rng.uniform();
      const double y = rng.uniform();
      out.push_back(Site{next++, kind, profile.county_id, x, y});
    }
  }
  return out;
}

std::uint64_t scaled_household_count(std::uint64_t households_real, double scale) {
  if (households_real == 0) return 0;
  const auto n =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(households_real) * scale + 0.5));
  return std::max<std::uint64_t>(n, 1);
}

std::vector<Household> synthesize_households(const CountyProfile& profile,
                                             const SynthesisParams& params,
                                             RandomStream& rng, HouseholdId first_id) {
  const auto count = scaled_household_count(profile.households_real, params.scale);
  std::vector<Household> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Household h;
    h.household_id = first_id + static_cast<HouseholdId>(i);
    h.county_id = profile.county_id;
    h.x = rng.uniform();
    h.y = rng.uniform();
    out.push_back(std::move(h));
  }
  return out;
}

SiteId select_store(SiteKind kind, double x, double y, std::span<const Site> candidates,
                    double proximity_factor, RandomStream& rng) {
  std::vector<const Site*> of_kind;
  for (const auto& s : candidates) {
    if (s.kind == kind) of_kind.push_back(&s);
  }
  if (of_kind.empty()) {
    throw NoSiteOfKind("no site of kind '" + std::string(to_string(kind)) +
                       "' to choose from");
  }
  // Always consume exactly two draws so the stream position does not depend
  // on which branch was taken.
  const double u = rng.uniform();
  const auto random_pick = rng.below(of_kind.size());
  if (u < proximity_factor) {
    const Site* best = nullptr;
    double best_d2 = 0.0;
    for (const Site* s : of_kind) {
      const double dx = s->x - x;
      const double dy = s->y - y;
      const double d2 = dx * dx + dy * dy;
      if (best == nullptr || d2 < best_d2 || (d2 == best_d2 && s->site_id < best->site_id)) {
        best = s;
        best_d2 = d2;
      }
    }
    return best->site_id;
  }
  return of_kind[random_pick]->site_id;
}

std::vector<HouseholdId> assign_friends(const Household& self,
                                        std::span<const Household> candidates,
                                        const SynthesisParams& params, RandomStream& rng) {
  struct Candidate {
    double d2;
    HouseholdId id;
  };
  std::vector<Candidate> near;
  std::vector<Candidate> far;
  const double r2 = params.friend_radius * params.friend_radius;
  for (const auto& h : candidates) {
    if (h.household_id == self.household_id) continue;
    const double dx = h.x - self.x;
    const double dy = h.y - self.y;
    const double d2 = dx * dx + dy * dy;
    (d2 <= r2 ? near : far).push_back({d2, h.household_id});
  }
  const std::size_t want = params.friend_count;
  if (near.size() + far.size() < want) {
    throw std::invalid_argument("household " + std::to_string(self.household_id) +
                                ": fewer than friend_count other households to befriend");
  }

  std::vector<HouseholdId> out;
  out.reserve(want);
  if (near.size() >= want) {
    // Partial Fisher-Yates: a uniform ordered sample without replacement.
    for (std::size_t i = 0; i < want; ++i) {
      const auto j = i + rng.below(near.size() - i);
      std::swap(near[i], near[j]);
      out.push_back(near[i].id);
    }
    return out;
  }
  for (const auto& c : near) out.push_back(c.id);
  const auto fill = want - near.size();
  std::partial_sort(far.begin(), far.begin() + static_cast<std::ptrdiff_t>(fill), far.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.d2 < b.d2 || (a.d2 == b.d2 && a.id < b.id);
                    });
  for (std::size_t i = 0; i < fill; ++i) out.push_back(far[i].id);
  return out;
}

// ---------------------------------------------------------------------------
// People

int draw_household_size(double avg_household_size, RandomStream& rng) {
  std::normal_distribution<double> normal(avg_household_size, 1.0);
  const double draw = std::round(normal(rng));
  return static_cast<int>(std::clamp(draw, 1.0, 8.0));
}

namespace {

AgeBin draw_age_bin(const AgeTable& dist, RandomStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t bin = 0; bin < kAgeBinCount; ++bin) {
    cumulative += dist[bin];
    if (u < cumulative) return static_cast<AgeBin>(bin);
  }
  // u landed in the rounding slack above the last cumulative value.
  for (std::size_t bin = kAgeBinCount; bin-- > 0;) {
    if (dist[bin] > 0.0) return static_cast<AgeBin>(bin);
  }
  return 0;
}

// Oldest bin spans 70-89.
int draw_age_in_bin(AgeBin bin, RandomStream& rng) {
  const int width = bin == kAgeBinCount - 1 ? 20 : 10;
  return bin * 10 + static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
}

}  // namespace

std::vector<Person> synthesize_people(std::span<Household> households,
                                      const CountyProfile& profile,
                                      std::span<const Site> schools,
                                      const SynthesisParams& params, RandomStream& rng,
                                      PersonId first_id) {
  std::vector<Person> out;
  PersonId next = first_id;
  for (auto& h : households) {
    const int size = draw_household_size(profile.avg_household_size, rng);
    for (int i = 0; i < size; ++i) {
      Person p;
      p.person_id = next++;
      p.household_id = h.household_id;
      p.age_bin = draw_age_bin(params.age_distribution, rng);
      p.age_years = draw_age_in_bin(p.age_bin, rng);
      p.sex = rng.bernoulli(0.5) ? Sex::Male : Sex::Female;
      p.employed = rng.bernoulli(params.employment_by_age[p.age_bin]);
      if (p.age_years < kSchoolAgeLimit) {
        p.school_site =
            select_store(SiteKind::School, h.x, h.y, schools, params.proximity_factor, rng);
      }
      h.resident_ids.push_back(p.person_id);
      out.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

enum class SynthesisStep : std::uint64_t { Sites, Households, Assignments, Friends, People };

RandomStream step_stream(const SynthesisParams& params, const CountyProfile& county,
                         SynthesisStep step) {
  return RandomStream(params.seed, StreamTag::Synthesis, county.county_id,
                      static_cast<std::uint64_t>(step));
}

}  // namespace

Population synthesize_population(std::span<const CountyProfile> counties,
                                 const SynthesisParams& params) {
  params.validate();
  Population pop;

  // Pass 1: place every county's stores, schools, workplaces and households.
  struct Placed {
    const CountyProfile* profile;
    std::size_t first_site, site_count;
    std::size_t first_household, household_count;
  };
  std::vector<Placed> placed;
  std::vector<Household> households;
  for (const auto& county : counties) {
    Placed p{&county, pop.sites.size(), 0, households.size(), 0};
    auto rng_sites = step_stream(params, county, SynthesisStep::Sites);
    auto sites = synthesize_sites(county, rng_sites, static_cast<SiteId>(pop.sites.size()));
    p.site_count = sites.size();
    pop.sites.insert(pop.sites.end(), sites.begin(), sites.end());

    auto rng_households = step_stream(params, county, SynthesisStep::Households);
    auto hs = synthesize_households(county, params, rng_households,
                                    static_cast<HouseholdId>(households.size()));
    p.household_count = hs.size();
    households.insert(households.end(), std::make_move_iterator(hs.begin()),
                      std::make_move_iterator(hs.end()));
    placed.push_back(p);
  }
  const std::span<const Site> all_sites(pop.sites);

  // Pass 2: assignments, friends and residents, county by county.
  for (const auto& p : placed) {
    if (p.household_count == 0) continue;
    const auto& county = *p.profile;
    const auto site_scope =
        params.region_wide ? all_sites : all_sites.subspan(p.first_site, p.site_count);
    const auto mine = std::span(households).subspan(p.first_household, p.household_count);
    const std::span<const Household> friend_scope =
        params.region_wide ? std::span<const Household>(households) : mine;

    auto rng_assign = step_stream(params, county, SynthesisStep::Assignments);
    auto rng_friends = step_stream(params, county, SynthesisStep::Friends);
    auto rng_people = step_stream(params, county, SynthesisStep::People);
    try {
      for (auto& h : mine) {
        h.assigned_grocery = select_store(SiteKind::Grocery, h.x, h.y, site_scope,
                                          params.proximity_factor, rng_assign);
        h.assigned_supercenter = select_store(SiteKind::Supercenter, h.x, h.y, site_scope,
                                              params.proximity_factor, rng_assign);
        h.assigned_convenience = select_store(SiteKind::Convenience, h.x, h.y, site_scope,
                                              params.proximity_factor, rng_assign);
        h.assigned_workplace = select_store(SiteKind::Workplace, h.x, h.y, site_scope,
                                            params.proximity_factor, rng_assign);
      }
      if (friend_scope.size() < params.friend_count + 1u) {
        throw ValidationError("county " + county.name,
                              "needs at least friend_count + 1 households at this scale");
      }
      for (auto& h : mine) {
        h.friend_household_ids = assign_friends(h, friend_scope, params, rng_friends);
      }
      auto people = synthesize_people(mine, county, site_scope, params, rng_people,
                                      static_cast<PersonId>(pop.people.size()));
      pop.people.insert(pop.people.end(), people.begin(), people.end());
    } catch (const NoSiteOfKind& e) {
      throw ValidationError("county " + county.name, e.what());
    }
  }

  for (auto& h : households) {
    h.home_site = static_cast<SiteId>(pop.sites.size());
    pop.sites.push_back(Site{h.home_site, SiteKind::Home, h.county_id, h.x, h.y});
  }
  pop.households = std::move(households);
  pop.validate(params.friend_count, !params.region_wide);
  return pop;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument(what); }

bool in_unit_square(double x, double y) {
  return x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0;
}

}  // namespace

void Population::validate(std::uint32_t friend_count, bool same_county) const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    if (s.site_id != i) invalid("site " + std::to_string(i) + ": id out of sequence");
    if (!in_unit_square(s.x, s.y))
      invalid("site " + std::to_string(i) + ": coordinates outside [0,1]^2");
  }
  auto check_site = [&](SiteId id, SiteKind kind, CountyId county, const std::string& who) {
    if (id >= sites.size()) invalid(who + ": dangling site id");
    if (sites[id].kind != kind)
      invalid(who + ": site " + std::to_string(id) + " is not a " +
              std::string(to_string(kind)));
    if (same_county && sites[id].county_id != county)
      invalid(who + ": site in another county");
  };
  std::vector<int> membership(people.size(), 0);
  for (std::size_t i = 0; i < households.size(); ++i) {
    const auto& h = households[i];
    const std::string who = "household " + std::to_string(i);
    if (h.household_id != i) invalid(who + ": id out of sequence");
    check_site(h.home_site, SiteKind::Home, h.county_id, who);
    check_site(h.assigned_grocery, SiteKind::Grocery, h.county_id, who);
    check_site(h.assigned_supercenter, SiteKind::Supercenter, h.county_id, who);
    check_site(h.assigned_convenience, SiteKind::Convenience, h.county_id, who);
    check_site(h.assigned_workplace, SiteKind::Workplace, h.county_id, who);
    if (h.resident_ids.empty()) invalid(who + ": no residents");
    for (auto pid : h.resident_ids) {
      if (pid >= people.size() || people[pid].household_id != h.household_id)
        invalid(who + ": resident " + std::to_string(pid) + " does not live here");
      ++membership[pid];
    }
    if (h.friend_household_ids.size() != friend_count)
      invalid(who + ": friend list has wrong length");
    std::vector<HouseholdId> sorted = h.friend_household_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      invalid(who + ": duplicate friend");
    for (auto f : sorted) {
      if (f == h.household_id) invalid(who + ": lists itself as a friend");
      if (f >= households.size()) invalid(who + ": dangling friend id");
      if (same_county && households[f].county_id != h.county_id)
        invalid(who + ": friend in another county");
    }
  }
  for (std::size_t i = 0; i < people.size(); ++i) {
    const auto& p = people[i];
    const std::string who = "person " + std::to_string(i);
    if (p.person_id != i) invalid(who + ": id out of sequence");
    if (membership[i] != 1) invalid(who + ": not in exactly one household");
    if (p.age_years < 0 || p.age_bin != age_bin_for(p.age_years))
      invalid(who + ": age bin inconsistent with age");
    const bool school_age = p.age_years < kSchoolAgeLimit;
    if (school_age != p.attends_school())
      invalid(who + ": school assignment must exist exactly for ages under 20");
    if (p.attends_school())
      check_site(p.school_site, SiteKind::School, households[p.household_id].county_id, who);
  }
}

}  // namespace episim
