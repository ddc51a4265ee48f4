#include "episim/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "episim/errors.hpp"
#include "text.hpp"

namespace episim {

SummaryRow summary_row(const SimResult& result) {
  SummaryRow row;
  row.scenario = result.label;
  row.max_infected = result.summary.max_infected;
  row.not_infected = result.summary.not_infected_final;
  row.recovered_removed = result.summary.recovered_final;
  row.day_of_peak = result.summary.day_of_peak;
  row.r0_estimate = result.r0.value;
  row.seed = result.seed;
  row.population = result.population;
  return row;
}

std::string format_timeseries(std::span<const DailyMetrics> series) {
  std::ostringstream out;
  out << kTimeseriesHeader << '\n';
  for (const auto& m : series) {
    out << m.day << ',' << m.susceptible << ',' << m.infected_no_symptoms << ','
        << m.infected_symptomatic << ',' << m.infected_total << ',' << m.recovered << ','
        << to_string(m.phase) << '\n';
  }
  return out.str();
}

std::string format_events(std::span<const TransmissionEvent> events) {
  std::ostringstream out;
  out << kEventsHeader << '\n';
  for (const auto& e : events) {
    out << e.day << ',' << e.timestep << ',' << e.site << ',' << e.infectee << ','
        << e.infector << ',' << e.generation << '\n';
  }
  return out.str();
}

namespace {

void summary_line(std::ostream& out, const SummaryRow& r) {
  out << r.scenario << ',' << r.max_infected << ',' << r.not_infected << ','
      << r.recovered_removed << ',' << r.day_of_peak << ',' << detail::format_double(r.r0_estimate)
      << ',' << r.seed << ',' << r.population << '\n';
}

template <typename T>
T field(std::string_view cell, const std::string& key) {
  auto v = detail::parse_number<T>(cell);
  if (!v) throw ValidationError(key, "expected a number, got '" + std::string(cell) + "'");
  return *v;
}

}  // namespace

std::string format_summary(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) summary_line(out, r);
  return out.str();
}

std::vector<DailyMetrics> parse_timeseries(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty() || rows.front() != kTimeseriesHeader) {
    throw ValidationError(kTimeseriesFile, "unexpected header");
  }
  std::vector<DailyMetrics> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = detail::split(rows[i], ',');
    const std::string key = std::string(kTimeseriesFile) + ":" + std::to_string(i);
    if (cells.size() != 7) throw ValidationError(key, "expected 7 fields");
    DailyMetrics m;
    m.day = field<int>(cells[0], key);
    m.susceptible = field<std::uint32_t>(cells[1], key);
    m.infected_no_symptoms = field<std::uint32_t>(cells[2], key);
    m.infected_symptomatic = field<std::uint32_t>(cells[3], key);
    m.infected_total = field<std::uint32_t>(cells[4], key);
    m.recovered = field<std::uint32_t>(cells[5], key);
    bool known = false;
    for (auto p : {Phase::Normal, Phase::Panic, Phase::Quarantine, Phase::Reopening,
                   Phase::Reopened}) {
      if (to_string(p) == cells[6]) {
        m.phase = p;
        known = true;
      }
    }
    if (!known) throw ValidationError(key, "unknown phase '" + std::string(cells[6]) + "'");
    out.push_back(m);
  }
  return out;
}

std::vector<SummaryRow> parse_summary(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty() || rows.front() != kSummaryHeader) {
    throw ValidationError(kSummaryFile, "unexpected header");
  }
  std::vector<SummaryRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = detail::split(rows[i], ',');
    const std::string key = std::string(kSummaryFile) + ":" + std::to_string(i);
    if (cells.size() != 8) throw ValidationError(key, "expected 8 fields");
    SummaryRow r;
    r.scenario = std::string(cells[0]);
    r.max_infected = field<std::uint64_t>(cells[1], key);
    r.not_infected = field<std::uint64_t>(cells[2], key);
    r.recovered_removed = field<std::uint64_t>(cells[3], key);
    r.day_of_peak = field<int>(cells[4], key);
    r.r0_estimate = field<double>(cells[5], key);
    r.seed = field<std::uint64_t>(cells[6], key);
    r.population = field<std::uint64_t>(cells[7], key);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_aggregate(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "scenario,statistic,max_infected,not_infected,recovered_removed,day_of_peak,"
         "r0_estimate,runs\n";
  if (rows.empty()) return out.str();
  using Column = double (*)(const SummaryRow&);
  const Column columns[] = {
      [](const SummaryRow& r) { return static_cast<double>(r.max_infected); },
      [](const SummaryRow& r) { return static_cast<double>(r.not_infected); },
      [](const SummaryRow& r) { return static_cast<double>(r.recovered_removed); },
      [](const SummaryRow& r) { return static_cast<double>(r.day_of_peak); },
      [](const SummaryRow& r) { return r.r0_estimate; },
  };
  for (const char* stat : {"mean", "min", "max"}) {
    out << rows.front().scenario << ',' << stat;
    for (auto col : columns) {
      double acc = col(rows.front());
      for (const auto& r : rows.subspan(1)) {
        const double v = col(r);
        if (stat[1] == 'e') acc += v;
        else if (stat[1] == 'i') acc = std::min(acc, v);
        else acc = std::max(acc, v);
      }
      if (stat[1] == 'e') acc /= static_cast<double>(rows.size());
      out << ',' << detail::format_double(acc);
    }
    out << ',' << rows.size() << '\n';
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

void write_timeseries(const SimResult& result, const std::filesystem::path& path) {
  write_text_file(path, format_timeseries(result.series));
}

void write_run_outputs(const SimResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
  write_timeseries(result, dir / kTimeseriesFile);
  write_text_file(dir / kEventsFile, format_events(result.events));
  const SummaryRow row = summary_row(result);
  write_text_file(dir / kSummaryFile, format_summary(std::span(&row, 1)));
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
  return parse_summary(detail::read_file(path.string()));
}

std::uint64_t scale_up(std::uint64_t sim_count, std::uint64_t sim_population,
                       std::uint64_t real_population) {
  if (sim_population == 0) throw std::domain_error("scale_up: simulated population is zero");
  const long double scaled = static_cast<long double>(sim_count) *
                             static_cast<long double>(real_population) /
                             static_cast<long double>(sim_population);
  return static_cast<std::uint64_t>(std::floor(scaled + 0.5L));
}

}  // namespace episim
