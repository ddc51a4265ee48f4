#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "episim/clock.hpp"
#include "episim/random.hpp"
#include "episim/types.hpp"

namespace episim {

enum class Stage : std::uint8_t { Healthy, NoSymptoms, ShowingSymptoms, Recovered };

std::string_view to_string(Stage stage);

struct HealthState {
  Stage stage = Stage::Healthy;
  std::uint16_t days_in_stage = 0;

  constexpr bool infectious() const {
    return stage == Stage::NoSymptoms || stage == Stage::ShowingSymptoms;
  }
  constexpr bool susceptible() const { return stage == Stage::Healthy; }

  friend constexpr bool operator==(HealthState, HealthState) = default;
};

struct DiseaseParams {
  double lambda = 0.25;
  int days_no_symptoms = 6;
  int days_showing_symptoms = 12;

  void validate() const;
};

/// People co-located at one site during one timestep. Occupants are listed in
/// ascending person id.
struct SiteOccupancy {
  SiteId site = kNoSite;
  std::span<const PersonId> occupants;
  std::size_t infectious_count = 0;

  std::size_t n() const { return occupants.size(); }
};

struct TransmissionEvent {
  int day = 0;
  int timestep = 0;
  SiteId site = kNoSite;
  PersonId infectee = 0;
  PersonId infector = 0;
  std::uint32_t generation = 0;

  friend bool operator==(const TransmissionEvent&, const TransmissionEvent&) = default;
};

/// min(lambda / n, 1). Throws std::domain_error when n == 0 or lambda < 0.
double infection_probability(std::size_t n, double lambda);

/// Resolves one site for one timestep: when any occupant is infectious, each
/// Healthy occupant is infected independently with infection_probability(n),
/// and the infector is drawn uniformly among the infectious occupants.
/// Events are appended in occupant order with generation left at 0; `health`
/// is indexed by person id and is not modified.
void resolve_site(const SiteOccupancy& occupancy, std::span<const HealthState> health,
                  const DiseaseParams& params, RandomStream& rng, ClockStamp clock,
                  std::vector<TransmissionEvent>& out);

std::vector<TransmissionEvent> resolve_site(const SiteOccupancy& occupancy,
                                            std::span<const HealthState> health,
                                            const DiseaseParams& params, RandomStream& rng,
                                            ClockStamp clock);

/// One day of disease progression. Healthy and Recovered are fixed points.
HealthState advance_health(HealthState state, const DiseaseParams& params);

}  // namespace episim
