#include "episim/simulation.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "episim/errors.hpp"
#include "parallel.hpp"

namespace episim {

void ScenarioConfig::validate() const {
  if (horizon_days < 1) throw ValidationError("run.horizon_days", "must be at least 1");
  if (index_cases < 0 || index_cases > 1)
    throw ValidationError("run.index_cases", "must be 0 or 1");
  if (threads < 1) throw ValidationError("run.threads", "must be at least 1");
  if (r0_window_days < 1) throw ValidationError("run.r0_window_days", "must be at least 1");
  disease.validate();
  behavior.validate();
  intervention.validate();
  synthesis.validate();
}

Summary summarize(std::span<const DailyMetrics> series) {
  Summary s;
  for (const auto& m : series) {
    if (m.infected_total > s.max_infected) {
      s.max_infected = m.infected_total;
      s.day_of_peak = m.day;
    }
  }
  if (!series.empty()) {
    s.not_infected_final = series.back().susceptible;
    s.recovered_final = series.back().recovered;
  }
  return s;
}

namespace {

R0Estimate mean_secondaries(std::span<const TransmissionEvent> events,
                            const std::unordered_set<PersonId>& qualifying) {
  if (qualifying.empty()) return {};
  std::size_t secondaries = 0;
  for (const auto& e : events) {
    if (qualifying.contains(e.infector)) ++secondaries;
  }
  return {static_cast<double>(secondaries) / static_cast<double>(qualifying.size()),
          qualifying.size(), true};
}

}  // namespace

R0Estimate estimate_r0(std::span<const TransmissionEvent> events, int window_days) {
  std::unordered_set<PersonId> infectees;
  for (const auto& e : events) infectees.insert(e.infectee);
  std::unordered_set<PersonId> qualifying;
  for (const auto& e : events) {
    if (!infectees.contains(e.infector)) qualifying.insert(e.infector);
    if (e.day < window_days) qualifying.insert(e.infectee);
  }
  return mean_secondaries(events, qualifying);
}

R0Estimate estimate_r0(std::span<const TransmissionEvent> events, int window_days,
                       PersonId index_case) {
  std::unordered_set<PersonId> qualifying{index_case};
  for (const auto& e : events) {
    if (e.day < window_days) qualifying.insert(e.infectee);
  }
  return mean_secondaries(events, qualifying);
}

PersonId seed_index_case(std::span<HealthState> health, std::uint64_t seed) {
  std::vector<PersonId> healthy;
  for (std::size_t i = 0; i < health.size(); ++i) {
    if (health[i].susceptible()) healthy.push_back(static_cast<PersonId>(i));
  }
  if (healthy.empty()) throw std::invalid_argument("seed_index_case: nobody is Healthy");
  RandomStream rng(seed, StreamTag::IndexCase);
  const auto id = healthy[rng.below(healthy.size())];
  health[id] = {Stage::NoSymptoms, 0};
  return id;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const Population& population, ScenarioConfig config)
    : population_(population),
      config_(std::move(config)),
      health_(population.size()),
      generation_(population.size(), 0),
      plans_(population.size()),
      today_(population.size()),
      location_(population.size(), kNoSite),
      site_start_(population.sites.size() + 1, 0),
      site_infectious_(population.sites.size(), 0),
      occupants_(population.size()),
      workforce_(population.size()) {
  config_.validate();
}

PersonId Simulation::seed_index_case() {
  if (index_case_) throw std::logic_error("index case already seeded");
  index_case_ = episim::seed_index_case(health_, config_.seed);
  ever_infected_ = true;
  return *index_case_;
}

void Simulation::set_health(PersonId id, HealthState state) {
  health_.at(id) = state;
  if (state.infectious()) ever_infected_ = true;
}

DailyMetrics Simulation::count(Phase phase) const {
  DailyMetrics m;
  m.day = day_;
  m.phase = phase;
  for (const auto& h : health_) {
    switch (h.stage) {
      case Stage::Healthy: ++m.susceptible; break;
      case Stage::NoSymptoms: ++m.infected_no_symptoms; break;
      case Stage::ShowingSymptoms: ++m.infected_symptomatic; break;
      case Stage::Recovered: ++m.recovered; break;
    }
  }
  m.infected_total = m.infected_no_symptoms + m.infected_symptomatic;
  return m;
}

void Simulation::enter_phase(const PhaseState& next) {
  if (quarantine_rules_apply(next.phase) && !workforce_.essential_fixed()) {
    std::vector<PersonId> employed;
    for (const auto& p : population_.people) {
      if (p.employed) employed.push_back(p.person_id);
    }
    RandomStream rng(config_.seed, StreamTag::Essential);
    workforce_.set_essential(
        select_essential(employed, config_.intervention.essential_fraction, rng));
  }
  if (next.phase == Phase::Reopening) {
    workforce_.set_return_cohorts(population_, config_.intervention.return_window_days(),
                                  config_.seed);
  }
  phase_ = next;
}

void Simulation::prepare_day() {
  const auto start = count(phase_.phase);
  const double infected_fraction =
      population_.size() == 0
          ? 0.0
          : static_cast<double>(start.infected_total) / static_cast<double>(population_.size());
  const auto next = evaluate_phase(infected_fraction, phase_, config_.intervention, day_);
  if (!(next == phase_)) enter_phase(next);

  const ClockStamp day_start{day_, 1};
  const int week = day_start.week();
  const bool new_week = week != plans_week_;
  plans_week_ = week;
  const auto friend_count = config_.synthesis.friend_count;

  detail::parallel_chunks(population_.size(), config_.threads,
                          [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& person = population_.people[i];
      const auto id = person.person_id;
      if (new_week) {
        auto rng = plan_stream(config_.seed, id, static_cast<std::uint32_t>(week));
        plans_[i] = build_base_plan(person, static_cast<std::uint32_t>(week), friend_count,
                                    config_.behavior, rng);
      }
      DayContext ctx;
      ctx.phase = phase_.phase;
      if (health_[i].stage == Stage::ShowingSymptoms) {
        auto rng = stay_home_stream(config_.seed, id, day_);
        ctx.stay_home = rng.bernoulli(config_.behavior.symptomatic_stay_home_prob);
      }
      ctx.works_today =
          working_today(person, phase_, workforce_, config_.intervention, day_);
      if (phase_.phase == Phase::Panic) {
        auto rng = panic_stream(config_.seed, id, day_);
        ctx.panic_visit = draw_panic_visit(day_start, config_.behavior, rng);
      }
      today_[i] = ctx;
    }
  });
  prepared_ = true;
}

std::span<const SiteId> Simulation::locate(int timestep) {
  if (!prepared_) prepare_day();
  const ClockStamp clock{day_, timestep};
  detail::parallel_chunks(population_.size(), config_.threads,
                          [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      location_[i] = site_for(population_.people[i], population_, plans_[i], clock, today_[i]);
    }
  });
  return location_;
}

void Simulation::resolve_timestep(int timestep) {
  locate(timestep);

  // Counting sort of people by site; occupants stay in ascending id order.
  const std::size_t sites = population_.sites.size();
  std::fill(site_start_.begin(), site_start_.end(), 0u);
  std::fill(site_infectious_.begin(), site_infectious_.end(), 0u);
  for (std::size_t i = 0; i < location_.size(); ++i) {
    ++site_start_[location_[i] + 1];
    if (health_[i].infectious()) ++site_infectious_[location_[i]];
  }
  for (std::size_t s = 0; s < sites; ++s) site_start_[s + 1] += site_start_[s];
  {
    std::vector<std::uint32_t> cursor(site_start_.begin(), site_start_.end() - 1);
    for (std::size_t i = 0; i < location_.size(); ++i) {
      occupants_[cursor[location_[i]]++] = static_cast<PersonId>(i);
    }
  }

  active_sites_.clear();
  for (std::size_t s = 0; s < sites; ++s) {
    if (site_infectious_[s] > 0 && site_start_[s + 1] - site_start_[s] >= 2) {
      active_sites_.push_back(static_cast<SiteId>(s));
    }
  }

  const ClockStamp clock{day_, timestep};
  const std::size_t chunks = std::max<std::size_t>(
      1, std::min<std::size_t>(config_.threads, active_sites_.size()));
  std::vector<std::vector<TransmissionEvent>> produced(chunks);
  detail::parallel_chunks(active_sites_.size(), config_.threads,
                          [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& out = produced[chunk];
    for (std::size_t k = begin; k < end; ++k) {
      const SiteId s = active_sites_[k];
      const SiteOccupancy occupancy{
          s,
          std::span<const PersonId>(occupants_.data() + site_start_[s],
                                    site_start_[s + 1] - site_start_[s]),
          site_infectious_[s]};
      RandomStream rng(config_.seed, StreamTag::SiteTimestep, static_cast<std::uint64_t>(day_),
                       static_cast<std::uint64_t>(timestep), s);
      resolve_site(occupancy, health_, config_.disease, rng, clock, out);
    }
  });

  // New infections take effect only after every site has been resolved.
  for (auto& chunk : produced) {
    for (auto& e : chunk) {
      e.generation = generation_[e.infector] + 1;
      generation_[e.infectee] = e.generation;
      health_[e.infectee] = {Stage::NoSymptoms, 0};
      events_.push_back(e);
    }
  }
}

DailyMetrics Simulation::step_day() {
  if (!prepared_) prepare_day();
  for (int t = 1; t <= kTimestepsPerDay; ++t) resolve_timestep(t);
  for (auto& h : health_) h = advance_health(h, config_.disease);
  const auto metrics = count(phase_.phase);
  if (metrics.infected_total > 0) ever_infected_ = true;
  ++day_;
  prepared_ = false;
  return metrics;
}

SimResult Simulation::run() {
  SimResult result;
  result.label = config_.label;
  result.seed = config_.seed;
  result.population = population_.size();
  result.index_case = index_case_;
  while (day_ < config_.horizon_days) {
    const auto m = step_day();
    result.series.push_back(m);
    if (config_.stop_when_extinct && ever_infected_ && m.infected_total == 0) break;
  }
  result.events = events_;
  result.summary = summarize(result.series);
  result.r0 = index_case_ ? estimate_r0(events_, config_.r0_window_days, *index_case_)
                          : estimate_r0(events_, config_.r0_window_days);
  return result;
}

SimResult run_scenario(const Population& population, const ScenarioConfig& config) {
  Simulation sim(population, config);
  if (config.index_cases > 0 && population.size() > 0) sim.seed_index_case();
  return sim.run();
}

}  // namespace episim
