#include "episim/scenario.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "episim/errors.hpp"
#include "text.hpp"

namespace episim {
namespace {

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;
using Getter = std::function<std::string(const ScenarioConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

template <typename T>
T number(std::string_view key, std::string_view value) {
  auto parsed = detail::parse_number<T>(value);
  if (!parsed) {
    throw ValidationError(std::string(key), "expected a number, got '" + std::string(value) + "'");
  }
  return *parsed;
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError(std::string(key), "expected true or false, got '" + std::string(value) + "'");
}

template <std::size_t N>
std::array<double, N> list(std::string_view key, std::string_view value) {
  const auto parts = detail::split(value, ',');
  if (parts.size() != N) {
    throw ValidationError(std::string(key),
                          "expected " + std::to_string(N) + " comma-separated values");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number<double>(key, parts[i]);
  return out;
}

template <std::size_t N>
std::string format_list(const std::array<double, N>& values) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ',';
    out += detail::format_double(values[i]);
  }
  return out;
}

std::string fmt(double v) { return detail::format_double(v); }
template <typename T>
std::string fmt_int(T v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

#define EPISIM_NUMBER_KEY(name, member, type)                                               \
  {name, {[](ScenarioConfig& c, std::string_view v) { c.member = number<type>(name, v); }, \
          [](const ScenarioConfig& c) { return fmt_int(c.member); }}}
#define EPISIM_REAL_KEY(name, member)                                                         \
  {name, {[](ScenarioConfig& c, std::string_view v) { c.member = number<double>(name, v); }, \
          [](const ScenarioConfig& c) { return fmt(c.member); }}}
#define EPISIM_BOOL_KEY(name, member)                                                   \
  {name, {[](ScenarioConfig& c, std::string_view v) { c.member = boolean(name, v); }, \
          [](const ScenarioConfig& c) { return fmt(c.member); }}}
#define EPISIM_LIST_KEY(name, member, n)                                                 \
  {name, {[](ScenarioConfig& c, std::string_view v) { c.member = list<n>(name, v); }, \
          [](const ScenarioConfig& c) { return format_list(c.member); }}}

const std::map<std::string, Key, std::less<>>& keys() {
  static const std::map<std::string, Key, std::less<>> table = {
      {"run.label", {[](ScenarioConfig& c, std::string_view v) { c.label = std::string(v); },
                     [](const ScenarioConfig& c) { return c.label; }}},
      EPISIM_NUMBER_KEY("run.seed", seed, std::uint64_t),
      EPISIM_NUMBER_KEY("run.horizon_days", horizon_days, int),
      EPISIM_NUMBER_KEY("run.index_cases", index_cases, int),
      EPISIM_BOOL_KEY("run.stop_when_extinct", stop_when_extinct),
      EPISIM_NUMBER_KEY("run.threads", threads, unsigned),
      EPISIM_NUMBER_KEY("run.r0_window_days", r0_window_days, int),

      EPISIM_REAL_KEY("disease.lambda", disease.lambda),
      EPISIM_NUMBER_KEY("disease.days_no_symptoms", disease.days_no_symptoms, int),
      EPISIM_NUMBER_KEY("disease.days_showing_symptoms", disease.days_showing_symptoms, int),

      EPISIM_LIST_KEY("behavior.store_visits_per_week", behavior.store_visits_per_week, 8),
      EPISIM_LIST_KEY("behavior.friend_visit_prob", behavior.friend_visit_prob, 8),
      EPISIM_REAL_KEY("behavior.symptomatic_stay_home_prob", behavior.symptomatic_stay_home_prob),
      EPISIM_REAL_KEY("behavior.panic_store_visit_prob", behavior.panic_store_visit_prob),
      EPISIM_LIST_KEY("behavior.store_kind_mix", behavior.store_kind_mix, 3),

      EPISIM_BOOL_KEY("intervention.enabled", intervention.enabled),
      EPISIM_REAL_KEY("intervention.quarantine_start_frac", intervention.quarantine_start_frac),
      EPISIM_REAL_KEY("intervention.quarantine_end_frac", intervention.quarantine_end_frac),
      EPISIM_REAL_KEY("intervention.essential_fraction", intervention.essential_fraction),
      {"intervention.return_mode",
       {[](ScenarioConfig& c, std::string_view v) {
          if (v == "immediate") c.intervention.return_mode = ReturnMode::Immediate;
          else if (v == "gradual") c.intervention.return_mode = ReturnMode::Gradual;
          else throw ValidationError("intervention.return_mode",
                                     "expected immediate or gradual, got '" + std::string(v) + "'");
        },
        [](const ScenarioConfig& c) { return std::string(to_string(c.intervention.return_mode)); }}},
      EPISIM_NUMBER_KEY("intervention.gradual_days", intervention.gradual_days, int),
      EPISIM_BOOL_KEY("intervention.panic_enabled", intervention.panic_enabled),
      EPISIM_NUMBER_KEY("intervention.panic_days", intervention.panic_days, int),
      EPISIM_BOOL_KEY("intervention.release_enabled", intervention.release_enabled),

      EPISIM_REAL_KEY("synthesis.scale", synthesis.scale),
      EPISIM_REAL_KEY("synthesis.proximity_factor", synthesis.proximity_factor),
      EPISIM_NUMBER_KEY("synthesis.friend_count", synthesis.friend_count, std::uint32_t),
      EPISIM_REAL_KEY("synthesis.friend_radius", synthesis.friend_radius),
      EPISIM_NUMBER_KEY("synthesis.seed", synthesis.seed, std::uint64_t),
      EPISIM_BOOL_KEY("synthesis.region_wide", synthesis.region_wide),
      EPISIM_LIST_KEY("synthesis.age_distribution", synthesis.age_distribution, 8),
      EPISIM_LIST_KEY("synthesis.employment_by_age", synthesis.employment_by_age, 8),
  };
  return table;
}

#undef EPISIM_NUMBER_KEY
#undef EPISIM_REAL_KEY
#undef EPISIM_BOOL_KEY
#undef EPISIM_LIST_KEY

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig config;
  const auto& table = keys();
  std::size_t line_no = 0;
  for (auto line : detail::lines(text)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) throw ValidationError(std::string(key), "unknown key");
    it->second.set(config, value);
  }
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(detail::read_file(path.string()));
}

std::string format_scenario(const ScenarioConfig& config) {
  std::ostringstream out;
  for (const auto& [name, key] : keys()) out << name << " = " << key.get(config) << '\n';
  return out.str();
}

}  // namespace episim
