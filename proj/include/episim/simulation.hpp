#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "episim/epidemic.hpp"
#include "episim/intervention.hpp"
#include "episim/movement.hpp"
#include "episim/population.hpp"

namespace episim {

struct ScenarioConfig {
  std::string label = "scenario";
  std::uint64_t seed = 1;
  int horizon_days = 365;
  /// Number of index cases seeded at day 0 (0 or 1).
  int index_cases = 1;
  /// Stop once nobody is infected, provided somebody has been.
  bool stop_when_extinct = true;
  /// Worker threads for location and site resolution; 1 is the sequential
  /// reference path.
  unsigned threads = 1;
  int r0_window_days = 10;
  DiseaseParams disease;
  BehaviorParams behavior;
  InterventionConfig intervention;
  SynthesisParams synthesis;  // provenance only; the run uses the snapshot

  void validate() const;
};

struct DailyMetrics {
  int day = 0;
  std::uint32_t susceptible = 0;
  std::uint32_t infected_no_symptoms = 0;
  std::uint32_t infected_symptomatic = 0;
  std::uint32_t infected_total = 0;
  std::uint32_t recovered = 0;
  Phase phase = Phase::Normal;

  friend bool operator==(const DailyMetrics&, const DailyMetrics&) = default;
};

struct Summary {
  std::uint32_t max_infected = 0;
  int day_of_peak = 0;
  std::uint32_t not_infected_final = 0;
  std::uint32_t recovered_final = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

Summary summarize(std::span<const DailyMetrics> series);

struct R0Estimate {
  double value = 0.0;
  std::size_t infectors = 0;
  /// False when no infector qualified; value is then 0.
  bool valid = false;

  friend bool operator==(const R0Estimate&, const R0Estimate&) = default;
};

/// Mean direct secondary infections over everyone first infected in the
/// first `window_days` days: the index case(s), recognised as infectors that
/// never appear as infectees, plus infectees with event day < window_days.
R0Estimate estimate_r0(std::span<const TransmissionEvent> events, int window_days);

/// Same, with the index case given explicitly so that an index case without
/// secondary infections still counts.
R0Estimate estimate_r0(std::span<const TransmissionEvent> events, int window_days,
                       PersonId index_case);

struct SimResult {
  std::string label;
  std::uint64_t seed = 0;
  std::size_t population = 0;
  std::optional<PersonId> index_case;
  std::vector<DailyMetrics> series;
  std::vector<TransmissionEvent> events;
  Summary summary;
  R0Estimate r0;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Picks one Healthy person uniformly with a stream keyed on `seed`, sets
/// them to NoSymptoms and returns their id.
PersonId seed_index_case(std::span<HealthState> health, std::uint64_t seed);

/// Day-by-day driver. Holds the mutable epidemic state for one run over a
/// borrowed population.
class Simulation {
 public:
  Simulation(const Population& population, ScenarioConfig config);

  PersonId seed_index_case();
  /// Test hook: overwrite one person's state before the run starts.
  void set_health(PersonId id, HealthState state);

  /// Runs one day and returns its end-of-day metrics.
  DailyMetrics step_day();
  /// Steps until the horizon or extinction and packages the result.
  SimResult run();

  int day() const { return day_; }
  const PhaseState& phase() const { return phase_; }
  const Workforce& workforce() const { return workforce_; }
  std::span<const HealthState> health() const { return health_; }
  std::span<const TransmissionEvent> events() const { return events_; }
  DailyMetrics count(Phase phase) const;

  /// Site of every person at `timestep` of the current day. Valid after
  /// prepare_day(); exposed for invariant tests.
  void prepare_day();
  std::span<const SiteId> locate(int timestep);

 private:
  void enter_phase(const PhaseState& next);
  void resolve_timestep(int timestep);

  const Population& population_;
  ScenarioConfig config_;
  std::vector<HealthState> health_;
  std::vector<std::uint32_t> generation_;
  std::vector<TransmissionEvent> events_;
  std::vector<WeeklyPlan> plans_;
  std::vector<DayContext> today_;
  std::vector<SiteId> location_;
  std::vector<std::uint32_t> site_start_;
  std::vector<std::uint32_t> site_infectious_;
  std::vector<PersonId> occupants_;
  std::vector<SiteId> active_sites_;
  PhaseState phase_;
  Workforce workforce_;
  std::optional<PersonId> index_case_;
  int day_ = 0;
  int plans_week_ = -1;
  bool prepared_ = false;
  bool ever_infected_ = false;
};

/// Seeds the configured index cases and runs to completion.
SimResult run_scenario(const Population& population, const ScenarioConfig& config);

}  // namespace episim
