#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "episim/errors.hpp"
#include "episim/population.hpp"
#include "support.hpp"

namespace episim {
namespace {

using testing::kSmallTable;
using testing::shared_small_population;

CountyTableError::Code table_error(std::string_view text) {
  try {
    parse_county_table(text);
  } catch (const CountyTableError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return CountyTableError::Code::MissingFile;
}

const std::string kHeader = std::string(kCountyTableHeader) + "\n";

TEST(CountyTable, ParsesRows) {
  const auto rows = parse_county_table(kSmallTable);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].name, "Alpha");
  EXPECT_EQ(rows[0].households_real, 12000u);
  EXPECT_DOUBLE_EQ(rows[1].avg_household_size, 2.4);
  EXPECT_EQ(rows[1].workplace_count, 4u);
}

TEST(CountyTable, HeaderOnlyIsEmptyTable) {
  EXPECT_EQ(table_error(kHeader), CountyTableError::Code::EmptyTable);
}

TEST(CountyTable, WrongHeader) {
  EXPECT_EQ(table_error("county,name\n1,x\n"), CountyTableError::Code::BadHeader);
  EXPECT_EQ(table_error(""), CountyTableError::Code::BadHeader);
}

TEST(CountyTable, NegativeCountIsInvalidValueWithRowAndField) {
  try {
    parse_county_table(kHeader + "1,A,100,40,2.5,1,1,1,1,1\n2,B,100,40,2.5,-3,1,1,1,1\n");
    FAIL();
  } catch (const CountyTableError& e) {
    EXPECT_EQ(e.code(), CountyTableError::Code::InvalidValue);
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.field(), "grocery");
  }
}

TEST(CountyTable, OtherBadRows) {
  EXPECT_EQ(table_error(kHeader + "1,A,100,40,2.5,1,1,1,1\n"), CountyTableError::Code::MalformedRow);
  EXPECT_EQ(table_error(kHeader + "1,A,100,40,abc,1,1,1,1,1\n"), CountyTableError::Code::MalformedRow);
  EXPECT_EQ(table_error(kHeader + "1,A,100,40,0.5,1,1,1,1,1\n"), CountyTableError::Code::InvalidValue);
  EXPECT_EQ(table_error(kHeader + "1,A,100,40,2,1,1,1,1,1\n1,B,100,40,2,1,1,1,1,1\n"),
            CountyTableError::Code::InvalidValue);
}

TEST(CountyTable, MissingFile) {
  try {
    load_county_table("/nonexistent/counties.csv");
    FAIL();
  } catch (const CountyTableError& e) {
    EXPECT_EQ(e.code(), CountyTableError::Code::MissingFile);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/counties.csv"), std::string::npos);
  }
}

TEST(CountyTable, BundledTableLoads) {
  const auto rows = load_county_table(testing::data_dir() / "tristate_counties.csv");
  EXPECT_EQ(rows.size(), 19u);
}

TEST(Sites, CountsKindsAndIds) {
  CountyProfile p;
  p.county_id = 3;
  p.grocery_count = 2;
  p.supercenter_count = 1;
  p.convenience_count = 0;
  p.school_count = 3;
  p.workplace_count = 4;
  RandomStream rng(1);
  const auto sites = synthesize_sites(p, rng, 100);
  ASSERT_EQ(sites.size(), 10u);
  std::map<SiteKind, int> kinds;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    EXPECT_EQ(sites[i].site_id, 100 + i);
    EXPECT_EQ(sites[i].county_id, 3u);
    EXPECT_GE(sites[i].x, 0.0);
    EXPECT_LT(sites[i].x, 1.0);
    ++kinds[sites[i].kind];
  }
  EXPECT_EQ(kinds[SiteKind::Grocery], 2);
  EXPECT_EQ(kinds[SiteKind::School], 3);
  EXPECT_EQ(kinds[SiteKind::Workplace], 4);
  EXPECT_EQ(kinds.count(SiteKind::Convenience), 0u);
}

TEST(Households, ScaledCount) {
  EXPECT_EQ(scaled_household_count(12000, 0.01), 120u);
  EXPECT_EQ(scaled_household_count(12050, 0.01), 121u);  // half rounds up
  EXPECT_EQ(scaled_household_count(10, 0.01), 1u);
  EXPECT_EQ(scaled_household_count(0, 0.01), 0u);
}

TEST(SelectStore, ProximityOneIsAlwaysNearestWithLowestIdTies) {
  const std::vector<Site> sites{{0, SiteKind::Grocery, 1, 0.5, 0.5},
                                {1, SiteKind::Grocery, 1, 0.1, 0.1},
                                {2, SiteKind::Supercenter, 1, 0.0, 0.0},
                                {3, SiteKind::Grocery, 1, 0.1, 0.1}};
  RandomStream rng(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(select_store(SiteKind::Grocery, 0.0, 0.0, sites, 1.0, rng), 1u);
  }
  EXPECT_EQ(select_store(SiteKind::Supercenter, 0.9, 0.9, sites, 1.0, rng), 2u);
}

TEST(SelectStore, NoCandidateOfKindThrows) {
  const std::vector<Site> sites{{0, SiteKind::Grocery, 1, 0.5, 0.5}};
  RandomStream rng(3);
  EXPECT_THROW(select_store(SiteKind::School, 0, 0, sites, 0.9, rng), NoSiteOfKind);
}

TEST(SelectStore, ProximityZeroIsUniform) {
  std::vector<Site> sites;
  for (SiteId i = 0; i < 4; ++i) sites.push_back({i, SiteKind::Convenience, 1, 0.1 * i, 0.0});
  RandomStream rng(5);
  std::array<int, 4> hits{};
  const int trials = 200000;
  for (int i = 0; i < trials; ++i) ++hits[select_store(SiteKind::Convenience, 0, 0, sites, 0.0, rng)];
  for (int h : hits) EXPECT_NEAR(h / double(trials), 0.25, 0.005);
}

// Nearest-choice frequency is proximity_factor plus the uniform branch's
// share landing on the nearest site: p + (1 - p) / k.
TEST(SelectStore, NearestFrequencyMatchesMixture) {
  RandomStream layout(11);
  std::vector<Site> sites;
  for (SiteId i = 0; i < 3; ++i) sites.push_back({i, SiteKind::Grocery, 1, layout.uniform(), layout.uniform()});
  RandomStream rng(12);
  const int trials = 1000000;
  int nearest_hits = 0;
  for (int i = 0; i < trials; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    SiteId nearest = 0;
    double best = 1e9;
    for (const auto& s : sites) {
      const double d = std::hypot(s.x - x, s.y - y);
      if (d < best) best = d, nearest = s.site_id;
    }
    nearest_hits += select_store(SiteKind::Grocery, x, y, sites, 0.9, rng) == nearest;
  }
  EXPECT_NEAR(nearest_hits / double(trials), 0.9 + 0.1 / 3.0, 0.002);
}

TEST(Friends, WithinRadiusAndDistinct) {
  const auto& pop = shared_small_population();
  for (const auto& h : pop.households) {
    ASSERT_EQ(h.friend_household_ids.size(), 5u);
    std::set<HouseholdId> uniq(h.friend_household_ids.begin(), h.friend_household_ids.end());
    EXPECT_EQ(uniq.size(), 5u);
    EXPECT_EQ(uniq.count(h.household_id), 0u);
  }
}

TEST(Friends, FallsBackToNearestOutsideRadius) {
  std::vector<Household> hs(7);
  for (HouseholdId i = 0; i < 7; ++i) {
    hs[i].household_id = i;
    hs[i].x = 0.2 * i;
  }
  SynthesisParams params;
  params.friend_radius = 0.01;
  RandomStream rng(1);
  const auto f = assign_friends(hs[0], hs, params, rng);
  EXPECT_EQ(f, (std::vector<HouseholdId>{1, 2, 3, 4, 5}));
  params.friend_count = 7;
  EXPECT_THROW(assign_friends(hs[0], hs, params, rng), std::invalid_argument);
}

// E[clamp(round(N(mu, 1)), 1, 8)] from the normal CDF.
double expected_household_size(double mu) {
  auto cdf = [&](double v) { return 0.5 * std::erfc(-(v - mu) / std::sqrt(2.0)); };
  double mean = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double lo = k == 1 ? 0.0 : cdf(k - 0.5);
    const double hi = k == 8 ? 1.0 : cdf(k + 0.5);
    mean += k * (hi - lo);
  }
  return mean;
}

TEST(People, HouseholdSizeMeanMatchesClampedNormal) {
  RandomStream rng(21);
  const int trials = 200000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    const int s = draw_household_size(2.5, rng);
    ASSERT_GE(s, 1);
    ASSERT_LE(s, 8);
    sum += s;
  }
  EXPECT_NEAR(sum / trials, expected_household_size(2.5), 0.01);
}

TEST(People, AgeBinFrequenciesTrackDistribution) {
  const auto counties = load_county_table(testing::data_dir() / "tristate_counties.csv");
  SynthesisParams params;
  const auto pop = synthesize_population(counties, params);
  std::array<double, kAgeBinCount> freq{};
  for (const auto& p : pop.people) {
    EXPECT_EQ(p.age_bin, age_bin_for(p.age_years));
    freq[p.age_bin] += 1.0 / pop.people.size();
    EXPECT_EQ(p.attends_school(), p.age_years < kSchoolAgeLimit);
    if (p.age_bin <= 1 || p.age_bin == 7) EXPECT_FALSE(p.employed);
  }
  for (std::size_t b = 0; b < kAgeBinCount; ++b) {
    EXPECT_NEAR(freq[b], params.age_distribution[b], 0.02) << "bin " << b;
  }
}

TEST(Population, ValidatesAndIsDeterministic) {
  const auto a = testing::small_population(7);
  const auto b = testing::small_population(7);
  const auto c = testing::small_population(8);
  EXPECT_NO_THROW(a.validate(5));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (std::size_t i = 0; i < a.sites.size(); ++i) EXPECT_EQ(a.sites[i].site_id, i);
  for (const auto& h : a.households) {
    EXPECT_EQ(a.sites[h.home_site].kind, SiteKind::Home);
    EXPECT_FALSE(h.resident_ids.empty());
    EXPECT_EQ(a.sites[h.assigned_grocery].kind, SiteKind::Grocery);
    EXPECT_EQ(a.sites[h.assigned_workplace].kind, SiteKind::Workplace);
  }
}

TEST(Population, CountyLocalModeKeepsAssignmentsInCounty) {
  const auto pop = testing::small_population(7, false);
  EXPECT_NO_THROW(pop.validate(5, true));
  for (const auto& h : pop.households) {
    EXPECT_EQ(pop.sites[h.assigned_supercenter].county_id, h.county_id);
    for (auto f : h.friend_household_ids) EXPECT_EQ(pop.households[f].county_id, h.county_id);
  }
}

TEST(Population, ValidateCatchesDanglingReference) {
  auto pop = testing::small_population(7);
  pop.households[0].assigned_grocery = static_cast<SiteId>(pop.sites.size() + 5);
  EXPECT_THROW(pop.validate(5), std::invalid_argument);
}

TEST(Population, BadParamsRejected) {
  SynthesisParams params;
  params.scale = 0.0;
  EXPECT_THROW(params.validate(), ValidationError);
  params = {};
  params.age_distribution[0] += 0.1;
  EXPECT_THROW(params.validate(), ValidationError);
}

TEST(Population, BundledTableScale) {
  const auto counties = load_county_table(testing::data_dir() / "tristate_counties.csv");
  const auto pop = synthesize_population(counties, SynthesisParams{});
  EXPECT_NEAR(static_cast<double>(pop.households.size()), 9200.0, 9200.0 * 0.02);
  EXPECT_GE(pop.people.size(), 21000u);
  EXPECT_LE(pop.people.size(), 25000u);
}

}  // namespace
}  // namespace episim
