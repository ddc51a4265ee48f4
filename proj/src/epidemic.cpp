#include "episim/epidemic.hpp"

#include <algorithm>
#include <stdexcept>

#include "episim/errors.hpp"

namespace episim {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Healthy: return "healthy";
    case Stage::NoSymptoms: return "no_symptoms";
    case Stage::ShowingSymptoms: return "showing_symptoms";
    case Stage::Recovered: return "recovered";
  }
  return "unknown";
}

void DiseaseParams::validate() const {
  if (!(lambda >= 0.0)) throw ValidationError("disease.lambda", "must be non-negative");
  if (days_no_symptoms < 1)
    throw ValidationError("disease.days_no_symptoms", "must be at least 1");
  if (days_showing_symptoms < 1)
    throw ValidationError("disease.days_showing_symptoms", "must be at least 1");
}

double infection_probability(std::size_t n, double lambda) {
  if (n == 0) throw std::domain_error("infection_probability: no occupants");
  if (lambda < 0.0) throw std::domain_error("infection_probability: negative lambda");
  return std::min(lambda / static_cast<double>(n), 1.0);
}

void resolve_site(const SiteOccupancy& occupancy, std::span<const HealthState> health,
                  const DiseaseParams& params, RandomStream& rng, ClockStamp clock,
                  std::vector<TransmissionEvent>& out) {
  if (occupancy.infectious_count == 0 || occupancy.n() < 2) return;
  const double p = infection_probability(occupancy.n(), params.lambda);

  // Small buffer of infectious occupants for infector attribution.
  std::vector<PersonId> infectious;
  infectious.reserve(occupancy.infectious_count);
  for (auto id : occupancy.occupants) {
    if (health[id].infectious()) infectious.push_back(id);
  }
  for (auto id : occupancy.occupants) {
    if (!health[id].susceptible()) continue;
    if (!rng.bernoulli(p)) continue;
    const auto infector = infectious[rng.below(infectious.size())];
    out.push_back(TransmissionEvent{clock.day, clock.timestep, occupancy.site, id, infector, 0});
  }
}

std::vector<TransmissionEvent> resolve_site(const SiteOccupancy& occupancy,
                                            std::span<const HealthState> health,
                                            const DiseaseParams& params, RandomStream& rng,
                                            ClockStamp clock) {
  std::vector<TransmissionEvent> out;
  resolve_site(occupancy, health, params, rng, clock, out);
  return out;
}

HealthState advance_health(HealthState state, const DiseaseParams& params) {
  switch (state.stage) {
    case Stage::Healthy:
    case Stage::Recovered:
      return state;
    case Stage::NoSymptoms:
      ++state.days_in_stage;
      if (state.days_in_stage >= params.days_no_symptoms) return {Stage::ShowingSymptoms, 0};
      return state;
    case Stage::ShowingSymptoms:
      ++state.days_in_stage;
      if (state.days_in_stage >= params.days_showing_symptoms) return {Stage::Recovered, 0};
      return state;
  }
  return state;
}

}  // namespace episim
