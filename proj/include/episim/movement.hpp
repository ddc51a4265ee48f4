#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "episim/clock.hpp"
#include "episim/intervention.hpp"
#include "episim/population.hpp"
#include "episim/random.hpp"

namespace episim {

struct BehaviorParams {
  /// Mean store trips per week by age bin.
  AgeTable store_visits_per_week{0.0, 1.35, 5.4, 5.4, 5.4, 5.4, 4.0, 2.7};
  /// Chance of a friend visit in each eligible slot, by age bin. Under-20s
  /// are eligible on weekday evenings only; adults also on weekend slots.
  AgeTable friend_visit_prob{0.14, 0.14, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  double symptomatic_stay_home_prob = 0.9;
  double panic_store_visit_prob = 0.9;
  /// Grocery, supercenter, convenience.
  std::array<double, 3> store_kind_mix{0.6, 0.25, 0.15};

  void validate() const;
};

enum class VisitKind : std::uint8_t { Grocery, Supercenter, Convenience, Friend };

SiteKind store_kind(VisitKind kind);

struct PlannedVisit {
  std::uint8_t day_of_week = 0;
  std::uint8_t timestep = 3;
  VisitKind kind = VisitKind::Grocery;
  std::uint8_t friend_index = 0;  // only for VisitKind::Friend
  bool panic = false;

  friend constexpr bool operator==(const PlannedVisit&, const PlannedVisit&) = default;
};

/// Discretionary visits for one person and one week, ordered by
/// (day_of_week, timestep). When two visits share a slot the earlier entry
/// wins.
struct WeeklyPlan {
  std::uint32_t week_index = 0;
  std::vector<PlannedVisit> visits;

  std::size_t store_visit_count() const;
  std::size_t friend_visit_count() const;
  std::size_t panic_visit_count() const;
};

/// Slots open to discretionary visits: timestep 3 on weekdays, 1-3 at weekends.
inline constexpr int kDiscretionarySlotsPerWeek = 5 + 2 * 3;

/// Phase-independent part of the plan: store trips and candidate friend
/// visits for the week.
WeeklyPlan build_base_plan(const Person& person, std::uint32_t week_index,
                           std::uint32_t friend_count, const BehaviorParams& params,
                           RandomStream& rng);

/// Extra grocery/supercenter trip on a panic day at a uniform timestep 1-3,
/// or nothing. On weekdays a trip in working hours only happens for people
/// who are not at work.
std::optional<PlannedVisit> draw_panic_visit(ClockStamp day_start, const BehaviorParams& params,
                                             RandomStream& rng);

/// Stream for a person's base plan in a given week.
RandomStream plan_stream(std::uint64_t seed, PersonId person, std::uint32_t week_index);
/// Streams for a person's per-day draws.
RandomStream stay_home_stream(std::uint64_t seed, PersonId person, int day);
RandomStream panic_stream(std::uint64_t seed, PersonId person, int day);

/// Whole plan for a week given the phase of each day: the base plan with
/// friend visits dropped on quarantine days, plus panic trips on panic days.
WeeklyPlan build_weekly_plan(const Person& person, std::uint32_t week_index,
                             std::span<const Phase, kDaysPerWeek> day_phases,
                             std::uint32_t friend_count, const BehaviorParams& params,
                             std::uint64_t seed);

/// Per-person, per-day inputs to site_for.
struct DayContext {
  Phase phase = Phase::Normal;
  bool stay_home = false;  // symptomatic and drew stay-home for the day
  bool works_today = false;
  std::optional<PlannedVisit> panic_visit;
};

/// Where `person` is at `clock`. Total: always returns an existing site.
SiteId site_for(const Person& person, const Population& population, const WeeklyPlan& plan,
                ClockStamp clock, const DayContext& ctx);

}  // namespace episim
