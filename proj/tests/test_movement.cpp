#include <gtest/gtest.h>

#include "episim/movement.hpp"
#include "support.hpp"

namespace episim {
namespace {

using testing::shared_small_population;

Person person_aged(int age, PersonId id = 0) {
  Person p;
  p.person_id = id;
  p.age_years = age;
  p.age_bin = age_bin_for(age);
  return p;
}

std::array<Phase, kDaysPerWeek> week_of(Phase phase) {
  std::array<Phase, kDaysPerWeek> out;
  out.fill(phase);
  return out;
}

TEST(Plan, StoreVisitMeanByAge) {
  const BehaviorParams params;
  for (int age : {25, 65, 75, 15}) {
    const auto p = person_aged(age);
    double total = 0.0;
    const int weeks = 10000;
    for (int w = 0; w < weeks; ++w) {
      auto rng = plan_stream(1, 0, static_cast<std::uint32_t>(w));
      total += static_cast<double>(build_base_plan(p, w, 5, params, rng).store_visit_count());
    }
    const double want = params.store_visits_per_week[p.age_bin];
    EXPECT_NEAR(total / weeks, want, 0.05 * want) << "age " << age;
  }
}

TEST(Plan, SlotsAndOrdering) {
  const BehaviorParams params;
  for (int w = 0; w < 500; ++w) {
    for (int age : {8, 35}) {
      auto rng = plan_stream(3, 1, static_cast<std::uint32_t>(w));
      const auto plan = build_base_plan(person_aged(age), w, 5, params, rng);
      for (std::size_t i = 0; i < plan.visits.size(); ++i) {
        const auto& v = plan.visits[i];
        EXPECT_LT(v.timestep, 4);
        if (v.day_of_week < 5) EXPECT_EQ(v.timestep, 3);
        if (v.kind == VisitKind::Friend) {
          EXPECT_LT(v.friend_index, 5);
          if (age < kSchoolAgeLimit) EXPECT_LT(v.day_of_week, 5);
        }
        if (i > 0) {
          const auto& u = plan.visits[i - 1];
          EXPECT_LE(std::pair(u.day_of_week, u.timestep), std::pair(v.day_of_week, v.timestep));
        }
      }
    }
  }
}

TEST(Plan, StoreKindMix) {
  const BehaviorParams params;
  std::array<double, 3> counts{};
  double total = 0.0;
  for (int w = 0; w < 20000; ++w) {
    auto rng = plan_stream(8, 2, static_cast<std::uint32_t>(w));
    for (const auto& v : build_base_plan(person_aged(40), w, 5, params, rng).visits) {
      if (v.kind == VisitKind::Friend) continue;
      counts[static_cast<int>(v.kind)] += 1;
      total += 1;
    }
  }
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(counts[k] / total, params.store_kind_mix[k], 0.01);
}

TEST(Plan, QuarantineDropsFriendVisits) {
  const BehaviorParams params;
  const auto p = person_aged(30, 4);
  for (std::uint32_t w = 0; w < 200; ++w) {
    const auto normal = build_weekly_plan(p, w, week_of(Phase::Normal), 5, params, 11);
    const auto quarantine = build_weekly_plan(p, w, week_of(Phase::Quarantine), 5, params, 11);
    EXPECT_EQ(quarantine.friend_visit_count(), 0u);
    EXPECT_EQ(quarantine.store_visit_count(), normal.store_visit_count());
    EXPECT_EQ(quarantine.panic_visit_count(), 0u);
  }
}

TEST(Plan, PanicVisitsAverageTwoPointSeven) {
  const BehaviorParams params;
  auto phases = week_of(Phase::Quarantine);
  phases[0] = phases[1] = phases[2] = Phase::Panic;
  double total = 0.0;
  const int people = 20000;
  for (PersonId id = 0; id < people; ++id) {
    const auto plan = build_weekly_plan(person_aged(45, id), 0, phases, 5, params, 13);
    for (const auto& v : plan.visits) {
      if (v.panic) {
        EXPECT_TRUE(v.kind == VisitKind::Grocery || v.kind == VisitKind::Supercenter);
        EXPECT_LT(v.day_of_week, 3);
      }
    }
    total += static_cast<double>(plan.panic_visit_count());
  }
  EXPECT_NEAR(total / people, 2.7, 0.03);
}

TEST(Plan, DeterministicPerKey) {
  const BehaviorParams params;
  const auto p = person_aged(22, 9);
  const auto a = build_weekly_plan(p, 3, week_of(Phase::Normal), 5, params, 1);
  const auto b = build_weekly_plan(p, 3, week_of(Phase::Normal), 5, params, 1);
  EXPECT_EQ(a.visits, b.visits);
}

class SiteFor : public ::testing::Test {
 protected:
  const Population& pop = shared_small_population();
  const Person& find(auto pred) {
    for (const auto& p : pop.people) {
      if (pred(p)) return p;
    }
    throw std::runtime_error("no matching person");
  }
  WeeklyPlan empty_plan;
};

TEST_F(SiteFor, NightIsHome) {
  const BehaviorParams params;
  for (const auto& p : pop.people) {
    for (int day = 0; day < 7; ++day) {
      const auto plan = build_weekly_plan(p, 0, week_of(Phase::Normal), 5, params, 2);
      DayContext ctx{Phase::Normal, false, p.employed, std::nullopt};
      EXPECT_EQ(site_for(p, pop, plan, {day, 4}, ctx), pop.home_of(p));
    }
  }
}

TEST_F(SiteFor, SchoolOpenAndClosed) {
  const auto& kid = find([](const Person& p) { return p.age_years == 12 || p.age_years == 13; });
  DayContext ctx{Phase::Normal, false, false, std::nullopt};
  EXPECT_EQ(site_for(kid, pop, empty_plan, {0, 1}, ctx), kid.school_site);
  ctx.phase = Phase::Quarantine;
  EXPECT_EQ(site_for(kid, pop, empty_plan, {0, 1}, ctx), pop.home_of(kid));
  ctx.phase = Phase::Normal;
  EXPECT_EQ(site_for(kid, pop, empty_plan, {5, 1}, ctx), pop.home_of(kid));  // Saturday
}

TEST_F(SiteFor, WorkOnlyWhenWorkingToday) {
  const auto& w = find([](const Person& p) { return p.employed; });
  DayContext ctx{Phase::Quarantine, false, true, std::nullopt};
  EXPECT_EQ(site_for(w, pop, empty_plan, {1, 2}, ctx), pop.household_of(w).assigned_workplace);
  ctx.works_today = false;
  EXPECT_EQ(site_for(w, pop, empty_plan, {1, 2}, ctx), pop.home_of(w));
  EXPECT_EQ(site_for(w, pop, empty_plan, {1, 3}, ctx), pop.home_of(w));
}

TEST_F(SiteFor, PlannedVisitsAndStayHome) {
  const auto& a = find([](const Person& p) { return p.age_years >= 30 && p.employed; });
  const auto& home = pop.household_of(a);
  WeeklyPlan plan;
  plan.visits = {{2, 3, VisitKind::Supercenter, 0, false}, {6, 1, VisitKind::Friend, 1, false}};
  DayContext ctx{Phase::Normal, false, true, std::nullopt};
  EXPECT_EQ(site_for(a, pop, plan, {2, 3}, ctx), home.assigned_supercenter);
  EXPECT_EQ(site_for(a, pop, plan, {6, 1}, ctx),
            pop.households[home.friend_household_ids[1]].home_site);
  EXPECT_EQ(site_for(a, pop, plan, {6, 2}, ctx), home.home_site);
  ctx.phase = Phase::Quarantine;
  EXPECT_EQ(site_for(a, pop, plan, {6, 1}, ctx), home.home_site);
  ctx.phase = Phase::Normal;
  ctx.stay_home = true;
  for (int t = 1; t <= 4; ++t) EXPECT_EQ(site_for(a, pop, plan, {1, t}, ctx), home.home_site);
  EXPECT_EQ(site_for(a, pop, plan, {2, 3}, ctx), home.home_site);
}

TEST_F(SiteFor, PanicVisitTakesPrecedence) {
  const auto& a = find([](const Person& p) { return p.age_years >= 30; });
  const auto& home = pop.household_of(a);
  WeeklyPlan plan;
  plan.visits = {{0, 3, VisitKind::Convenience, 0, false}};
  DayContext ctx{Phase::Panic, false, false, PlannedVisit{0, 3, VisitKind::Grocery, 0, true}};
  EXPECT_EQ(site_for(a, pop, plan, {7, 3}, ctx), home.assigned_grocery);
}

}  // namespace
}  // namespace episim
