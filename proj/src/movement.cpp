#include "episim/movement.hpp"

#include <algorithm>
#include <random>

#include "episim/errors.hpp"

namespace episim {

void BehaviorParams::validate() const {
  for (double v : store_visits_per_week) {
    if (!(v >= 0.0))
      throw ValidationError("behavior.store_visits_per_week", "must be non-negative");
  }
  for (double p : friend_visit_prob) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("behavior.friend_visit_prob", "must be in [0, 1]");
  }
  if (!(symptomatic_stay_home_prob >= 0.0 && symptomatic_stay_home_prob <= 1.0))
    throw ValidationError("behavior.symptomatic_stay_home_prob", "must be in [0, 1]");
  if (!(panic_store_visit_prob >= 0.0 && panic_store_visit_prob <= 1.0))
    throw ValidationError("behavior.panic_store_visit_prob", "must be in [0, 1]");
  double total = 0.0;
  for (double w : store_kind_mix) {
    if (!(w >= 0.0)) throw ValidationError("behavior.store_kind_mix", "must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("behavior.store_kind_mix", "must not be all zero");
  if (!(store_kind_mix[0] + store_kind_mix[1] > 0.0))
    throw ValidationError("behavior.store_kind_mix",
                          "grocery and supercenter weights must not both be zero");
}

SiteKind store_kind(VisitKind kind) {
  switch (kind) {
    case VisitKind::Grocery: return SiteKind::Grocery;
    case VisitKind::Supercenter: return SiteKind::Supercenter;
    case VisitKind::Convenience: return SiteKind::Convenience;
    case VisitKind::Friend: return SiteKind::Home;
  }
  return SiteKind::Home;
}

std::size_t WeeklyPlan::store_visit_count() const {
  return static_cast<std::size_t>(std::count_if(visits.begin(), visits.end(), [](const auto& v) {
    return v.kind != VisitKind::Friend && !v.panic;
  }));
}

std::size_t WeeklyPlan::friend_visit_count() const {
  return static_cast<std::size_t>(std::count_if(
      visits.begin(), visits.end(), [](const auto& v) { return v.kind == VisitKind::Friend; }));
}

std::size_t WeeklyPlan::panic_visit_count() const {
  return static_cast<std::size_t>(
      std::count_if(visits.begin(), visits.end(), [](const auto& v) { return v.panic; }));
}

namespace {

VisitKind draw_store_kind(const std::array<double, 3>& mix, RandomStream& rng) {
  const double total = mix[0] + mix[1] + mix[2];
  const double u = rng.uniform() * total;
  if (u < mix[0]) return VisitKind::Grocery;
  if (u < mix[0] + mix[1]) return VisitKind::Supercenter;
  return VisitKind::Convenience;
}

void sort_plan(std::vector<PlannedVisit>& visits) {
  std::stable_sort(visits.begin(), visits.end(), [](const auto& a, const auto& b) {
    if (a.day_of_week != b.day_of_week) return a.day_of_week < b.day_of_week;
    if (a.timestep != b.timestep) return a.timestep < b.timestep;
    return a.panic && !b.panic;
  });
}

}  // namespace

WeeklyPlan build_base_plan(const Person& person, std::uint32_t week_index,
                           std::uint32_t friend_count, const BehaviorParams& params,
                           RandomStream& rng) {
  WeeklyPlan plan;
  plan.week_index = week_index;

  const double mean_trips = params.store_visits_per_week[person.age_bin];
  int trips = 0;
  if (mean_trips > 0.0) trips = std::poisson_distribution<int>(mean_trips)(rng);
  for (int i = 0; i < trips; ++i) {
    const auto slot = static_cast<int>(rng.below(kDiscretionarySlotsPerWeek));
    PlannedVisit v;
    if (slot < 5) {
      v.day_of_week = static_cast<std::uint8_t>(slot);
      v.timestep = 3;
    } else {
      v.day_of_week = static_cast<std::uint8_t>(5 + (slot - 5) / 3);
      v.timestep = static_cast<std::uint8_t>(1 + (slot - 5) % 3);
    }
    v.kind = draw_store_kind(params.store_kind_mix, rng);
    plan.visits.push_back(v);
  }

  const double p_friend = params.friend_visit_prob[person.age_bin];
  const bool adult = person.age_years >= kSchoolAgeLimit;
  if (p_friend > 0.0 && friend_count > 0) {
    for (int dow = 0; dow < kDaysPerWeek; ++dow) {
      const bool weekday = dow < 5;
      if (!weekday && !adult) continue;
      for (int t = weekday ? 3 : 1; t <= 3; ++t) {
        if (!rng.bernoulli(p_friend)) continue;
        PlannedVisit v;
        v.day_of_week = static_cast<std::uint8_t>(dow);
        v.timestep = static_cast<std::uint8_t>(t);
        v.kind = VisitKind::Friend;
        v.friend_index = static_cast<std::uint8_t>(rng.below(friend_count));
        plan.visits.push_back(v);
      }
    }
  }
  sort_plan(plan.visits);
  return plan;
}

std::optional<PlannedVisit> draw_panic_visit(ClockStamp day_start, const BehaviorParams& params,
                                             RandomStream& rng) {
  if (!rng.bernoulli(params.panic_store_visit_prob)) return std::nullopt;
  PlannedVisit v;
  v.day_of_week = static_cast<std::uint8_t>(day_start.day_of_week());
  v.timestep = static_cast<std::uint8_t>(1 + rng.below(3));
  const double grocery = params.store_kind_mix[0];
  const double supercenter = params.store_kind_mix[1];
  v.kind = rng.uniform() * (grocery + supercenter) < grocery ? VisitKind::Grocery
                                                             : VisitKind::Supercenter;
  v.panic = true;
  return v;
}

RandomStream plan_stream(std::uint64_t seed, PersonId person, std::uint32_t week_index) {
  return RandomStream(seed, StreamTag::WeeklyPlan, person, week_index);
}

RandomStream stay_home_stream(std::uint64_t seed, PersonId person, int day) {
  return RandomStream(seed, StreamTag::PersonDay, person, static_cast<std::uint64_t>(day), 0);
}

RandomStream panic_stream(std::uint64_t seed, PersonId person, int day) {
  return RandomStream(seed, StreamTag::PersonDay, person, static_cast<std::uint64_t>(day), 1);
}

WeeklyPlan build_weekly_plan(const Person& person, std::uint32_t week_index,
                             std::span<const Phase, kDaysPerWeek> day_phases,
                             std::uint32_t friend_count, const BehaviorParams& params,
                             std::uint64_t seed) {
  auto rng = plan_stream(seed, person.person_id, week_index);
  WeeklyPlan plan = build_base_plan(person, week_index, friend_count, params, rng);
  std::erase_if(plan.visits, [&](const PlannedVisit& v) {
    return v.kind == VisitKind::Friend && quarantine_rules_apply(day_phases[v.day_of_week]);
  });
  for (int dow = 0; dow < kDaysPerWeek; ++dow) {
    if (day_phases[dow] != Phase::Panic) continue;
    const int day = static_cast<int>(week_index) * kDaysPerWeek + dow;
    auto prng = panic_stream(seed, person.person_id, day);
    if (auto v = draw_panic_visit(ClockStamp{day, 1}, params, prng)) plan.visits.push_back(*v);
  }
  sort_plan(plan.visits);
  return plan;
}

namespace {

SiteId visit_site(const PlannedVisit& v, const Household& home, const Population& population) {
  if (v.kind == VisitKind::Friend) {
    const auto& friends = home.friend_household_ids;
    if (friends.empty()) return home.home_site;
    const auto friend_id = friends[v.friend_index % friends.size()];
    return population.households[friend_id].home_site;
  }
  return home.assigned_store(store_kind(v.kind));
}

}  // namespace

SiteId site_for(const Person& person, const Population& population, const WeeklyPlan& plan,
                ClockStamp clock, const DayContext& ctx) {
  const Household& home = population.household_of(person);
  if (clock.timestep >= kTimestepsPerDay || ctx.stay_home) return home.home_site;

  const auto dow = static_cast<std::uint8_t>(clock.day_of_week());
  const auto t = static_cast<std::uint8_t>(clock.timestep);
  const bool panic_now =
      ctx.panic_visit && ctx.panic_visit->day_of_week == dow && ctx.panic_visit->timestep == t;

  if (clock.weekday() && clock.timestep <= 2) {
    if (person.attends_school() && !quarantine_rules_apply(ctx.phase)) return person.school_site;
    if (person.employed && ctx.works_today) return home.assigned_workplace;
    if (panic_now) return visit_site(*ctx.panic_visit, home, population);
    return home.home_site;
  }

  if (panic_now) return visit_site(*ctx.panic_visit, home, population);
  const bool friends_allowed = !quarantine_rules_apply(ctx.phase);
  for (const auto& v : plan.visits) {
    if (v.day_of_week != dow || v.timestep != t) continue;
    if (v.kind == VisitKind::Friend && !friends_allowed) continue;
    return visit_site(v, home, population);
  }
  return home.home_site;
}

}  // namespace episim
