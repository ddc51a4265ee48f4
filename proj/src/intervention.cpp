#include "episim/intervention.hpp"

#include <algorithm>
#include <cmath>

#include "episim/errors.hpp"

namespace episim {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Normal: return "normal";
    case Phase::Panic: return "panic";
    case Phase::Quarantine: return "quarantine";
    case Phase::Reopening: return "reopening";
    case Phase::Reopened: return "reopened";
  }
  return "unknown";
}

std::string_view to_string(ReturnMode mode) {
  return mode == ReturnMode::Gradual ? "gradual" : "immediate";
}

void InterventionConfig::validate() const {
  if (!(quarantine_start_frac > 0.0 && quarantine_start_frac < 1.0))
    throw ValidationError("intervention.quarantine_start_frac", "must be in (0, 1)");
  if (!(quarantine_end_frac > 0.0 && quarantine_end_frac < quarantine_start_frac))
    throw ValidationError("intervention.quarantine_end_frac",
                          "must be in (0, quarantine_start_frac)");
  if (!(essential_fraction >= 0.0 && essential_fraction <= 1.0))
    throw ValidationError("intervention.essential_fraction", "must be in [0, 1]");
  if (gradual_days < 1)
    throw ValidationError("intervention.gradual_days", "must be at least 1");
  if (panic_days < 1) throw ValidationError("intervention.panic_days", "must be at least 1");
}

PhaseState evaluate_phase(double infected_fraction, const PhaseState& current,
                          const InterventionConfig& cfg, int day) {
  if (!cfg.enabled) return current;
  switch (current.phase) {
    case Phase::Normal:
      if (infected_fraction >= cfg.quarantine_start_frac) {
        return {cfg.panic_enabled ? Phase::Panic : Phase::Quarantine, day};
      }
      break;
    case Phase::Panic:
      if (day - current.day_entered >= cfg.panic_days) return {Phase::Quarantine, day};
      break;
    case Phase::Quarantine:
      if (cfg.release_enabled && infected_fraction < cfg.quarantine_end_frac) {
        return {Phase::Reopening, day};
      }
      break;
    case Phase::Reopening:
      if (day - current.day_entered >= cfg.return_window_days()) return {Phase::Reopened, day};
      break;
    case Phase::Reopened:
      break;
  }
  return current;
}

std::vector<PersonId> select_essential(std::span<const PersonId> employed, double fraction,
                                       RandomStream& rng) {
  const auto want = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(employed.size()) + 0.5));
  std::vector<PersonId> pool(employed.begin(), employed.end());
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(want);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<int> partition_return_cohorts(std::span<const PersonId> workers, int cohorts,
                                          std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(workers.size());
  for (std::size_t i = 0; i < workers.size(); ++i) {
    keyed.emplace_back(derive_seed(seed, StreamTag::Cohort, workers[i]), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out(workers.size(), 0);
  const auto count = workers.size();
  for (std::size_t rank = 0; rank < count; ++rank) {
    out[keyed[rank].second] =
        static_cast<int>(rank * static_cast<std::size_t>(cohorts) / count);
  }
  return out;
}

Workforce::Workforce(std::size_t population_size)
    : essential_(population_size, 0), cohort_(population_size, -1) {}

void Workforce::set_essential(std::span<const PersonId> essential_ids) {
  if (essential_fixed_) throw std::logic_error("essential workers already selected");
  essential_ids_.assign(essential_ids.begin(), essential_ids.end());
  for (auto id : essential_ids_) essential_.at(id) = 1;
  essential_fixed_ = true;
}

void Workforce::set_return_cohorts(const Population& population, int cohorts,
                                   std::uint64_t seed) {
  std::vector<PersonId> workers;
  for (const auto& p : population.people) {
    if (p.employed && !is_essential(p.person_id)) workers.push_back(p.person_id);
  }
  const auto assigned = partition_return_cohorts(workers, cohorts, seed);
  for (std::size_t i = 0; i < workers.size(); ++i) cohort_.at(workers[i]) = assigned[i];
}

bool working_today(const Person& person, const PhaseState& phase, const Workforce& workforce,
                   const InterventionConfig& cfg, int day) {
  if (!person.employed) return false;
  switch (phase.phase) {
    case Phase::Normal:
    case Phase::Reopened:
      return true;
    case Phase::Panic:
    case Phase::Quarantine:
      return workforce.is_essential(person.person_id);
    case Phase::Reopening: {
      if (workforce.is_essential(person.person_id)) return true;
      if (cfg.return_mode == ReturnMode::Immediate) return true;
      const int cohort = workforce.return_cohort(person.person_id);
      return cohort >= 0 && cohort <= day - phase.day_entered;
    }
  }
  return true;
}

}  // namespace episim
