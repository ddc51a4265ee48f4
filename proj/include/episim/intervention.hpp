#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "episim/population.hpp"
#include "episim/random.hpp"

namespace episim {

enum class Phase : std::uint8_t { Normal, Panic, Quarantine, Reopening, Reopened };

std::string_view to_string(Phase phase);

/// Schools closed, work restricted to essential staff, no friend visits.
constexpr bool quarantine_rules_apply(Phase phase) {
  return phase == Phase::Panic || phase == Phase::Quarantine;
}

enum class ReturnMode : std::uint8_t { Immediate, Gradual };

std::string_view to_string(ReturnMode mode);

struct InterventionConfig {
  bool enabled = false;
  double quarantine_start_frac = 0.05;
  double quarantine_end_frac = 0.01;
  double essential_fraction = 0.5;
  ReturnMode return_mode = ReturnMode::Immediate;
  int gradual_days = 14;
  bool panic_enabled = false;
  int panic_days = 3;
  bool release_enabled = true;

  /// Days from the first reopening day until everyone is back at work.
  int return_window_days() const {
    return return_mode == ReturnMode::Gradual ? gradual_days : 1;
  }

  void validate() const;
};

struct PhaseState {
  Phase phase = Phase::Normal;
  int day_entered = 0;

  friend constexpr bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Daily phase step, evaluated before timestep 1 on the currently infected
/// fraction. The machine only moves forward and quarantine triggers once.
PhaseState evaluate_phase(double infected_fraction, const PhaseState& current,
                          const InterventionConfig& cfg, int day);

/// Uniform subset of size round(fraction * |employed|), returned sorted.
std::vector<PersonId> select_essential(std::span<const PersonId> employed,
                                       double fraction, RandomStream& rng);

/// Cohort index in [0, cohorts) for each of `workers`, as equal-sized blocks
/// of the workers ordered by a seeded hash of their id.
std::vector<int> partition_return_cohorts(std::span<const PersonId> workers, int cohorts,
                                          std::uint64_t seed);

/// Who is allowed to work in person. Built once the quarantine starts.
class Workforce {
 public:
  Workforce() = default;
  explicit Workforce(std::size_t population_size);

  /// Fixes the essential set. May only be called once.
  void set_essential(std::span<const PersonId> essential_ids);
  /// Partitions the non-essential employed into return cohorts.
  void set_return_cohorts(const Population& population, int cohorts, std::uint64_t seed);

  bool essential_fixed() const { return essential_fixed_; }
  bool is_essential(PersonId id) const { return id < essential_.size() && essential_[id]; }
  /// -1 for essential staff, people without a job, or before partitioning.
  int return_cohort(PersonId id) const {
    return id < cohort_.size() ? cohort_[id] : -1;
  }
  const std::vector<PersonId>& essential_ids() const { return essential_ids_; }

 private:
  std::vector<std::uint8_t> essential_;
  std::vector<int> cohort_;
  std::vector<PersonId> essential_ids_;
  bool essential_fixed_ = false;
};

/// Whether an employed person works in person on `day`.
bool working_today(const Person& person, const PhaseState& phase, const Workforce& workforce,
                   const InterventionConfig& cfg, int day);

}  // namespace episim
