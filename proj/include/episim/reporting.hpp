#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "episim/simulation.hpp"

namespace episim {

inline constexpr const char* kTimeseriesFile = "timeseries.csv";
inline constexpr const char* kEventsFile = "events.csv";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kAggregateFile = "aggregate.csv";

inline constexpr std::string_view kTimeseriesHeader =
    "day,susceptible,no_symptoms,symptomatic,infected_total,recovered,phase";
inline constexpr std::string_view kEventsHeader =
    "day,timestep,site_id,infectee,infector,generation";
inline constexpr std::string_view kSummaryHeader =
    "scenario,max_infected,not_infected,recovered_removed,day_of_peak,r0_estimate,seed,population";

/// One line of the final-data table.
struct SummaryRow {
  std::string scenario;
  std::uint64_t max_infected = 0;
  std::uint64_t not_infected = 0;
  std::uint64_t recovered_removed = 0;
  int day_of_peak = 0;
  double r0_estimate = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t population = 0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

SummaryRow summary_row(const SimResult& result);

std::string format_timeseries(std::span<const DailyMetrics> series);
std::string format_events(std::span<const TransmissionEvent> events);
std::string format_summary(std::span<const SummaryRow> rows);

/// Parses timeseries.csv content back into metrics (phase labels included).
std::vector<DailyMetrics> parse_timeseries(std::string_view text);
std::vector<SummaryRow> parse_summary(std::string_view text);

/// Mean, min and max of each numeric summary column, one row per statistic.
std::string format_aggregate(std::span<const SummaryRow> rows);

/// All file writers throw IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_timeseries(const SimResult& result, const std::filesystem::path& path);
/// timeseries.csv, events.csv and summary.csv into `dir`.
void write_run_outputs(const SimResult& result, const std::filesystem::path& dir);

std::vector<SummaryRow> read_summary(const std::filesystem::path& path);

/// round(sim_count * real_population / sim_population). Throws
/// std::domain_error when sim_population is 0.
std::uint64_t scale_up(std::uint64_t sim_count, std::uint64_t sim_population,
                       std::uint64_t real_population);

}  // namespace episim
