// episim command-line driver: synthesize populations, run scenarios and
// seed sweeps, and merge summaries.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "episim/errors.hpp"
#include "episim/population.hpp"
#include "episim/reporting.hpp"
#include "episim/scenario.hpp"
#include "episim/simulation.hpp"
#include "episim/snapshot.hpp"

namespace fs = std::filesystem;
using namespace episim;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

int cmd_synth(const fs::path& county_csv, double scale, std::uint64_t seed, double proximity,
              double friend_radius, bool county_local, const fs::path& out) {
  SynthesisParams params;
  params.region_wide = !county_local;
  params.scale = scale;
  params.seed = seed;
  params.proximity_factor = proximity;
  params.friend_radius = friend_radius;
  const auto counties = load_county_table(county_csv);
  const auto population = synthesize_population(counties, params);
  write_snapshot(population, out);
  std::cerr << "synthesized " << population.households.size() << " households, "
            << population.people.size() << " people, " << population.sites.size()
            << " sites -> " << out.string() << '\n';
  return 0;
}

ScenarioConfig load_config(const fs::path& scenario, unsigned threads) {
  auto config = load_scenario(scenario);
  if (threads > 0) config.threads = threads;
  return config;
}

int cmd_run(const fs::path& snapshot, const fs::path& scenario, unsigned threads,
            const fs::path& out) {
  const auto config = load_config(scenario, threads);
  const auto population = read_snapshot(snapshot);
  const auto result = run_scenario(population, config);
  write_run_outputs(result, out);
  std::cerr << config.label << ": peak " << result.summary.max_infected << " on day "
            << result.summary.day_of_peak << ", recovered " << result.summary.recovered_final
            << '\n';
  return 0;
}

int cmd_sweep(const fs::path& snapshot, const fs::path& scenario, int seeds, unsigned threads,
              unsigned jobs, const fs::path& out) {
  if (seeds < 1) throw ValidationError("--seeds", "must be at least 1");
  const auto base = load_config(scenario, threads);
  const auto population = read_snapshot(snapshot);

  std::vector<SummaryRow> rows(static_cast<std::size_t>(seeds));
  std::vector<std::exception_ptr> errors(rows.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < rows.size(); i += stride) {
      try {
        auto config = base;
        config.seed = base.seed + i;
        const auto result = run_scenario(population, config);
        write_run_outputs(result, out / ("seed_" + std::to_string(config.seed)));
        rows[i] = summary_row(result);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w, workers);
    work(0, workers);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  write_text_file(out / kSummaryFile, format_summary(rows));
  write_text_file(out / kAggregateFile, format_aggregate(rows));
  std::cout << format_aggregate(rows);
  return 0;
}

int cmd_report(const std::vector<fs::path>& dirs, bool aggregate, std::uint64_t real_population) {
  std::cout << "scenario,max_infected,not_infected,recovered_removed,day_of_peak,r0_estimate,seed";
  if (real_population > 0) std::cout << ",max_infected_real,recovered_removed_real";
  std::cout << '\n';
  for (const auto& dir : dirs) {
    auto rows = read_summary(dir / kSummaryFile);
    if (aggregate && rows.size() > 1) {
      SummaryRow mean = rows.front();
      double max_i = 0, not_i = 0, rec = 0, peak = 0, r0 = 0;
      for (const auto& r : rows) {
        max_i += r.max_infected;
        not_i += r.not_infected;
        rec += r.recovered_removed;
        peak += r.day_of_peak;
        r0 += r.r0_estimate;
      }
      const double n = static_cast<double>(rows.size());
      mean.max_infected = static_cast<std::uint64_t>(std::llround(max_i / n));
      mean.not_infected = static_cast<std::uint64_t>(std::llround(not_i / n));
      mean.recovered_removed = static_cast<std::uint64_t>(std::llround(rec / n));
      mean.day_of_peak = static_cast<int>(std::lround(peak / n));
      mean.r0_estimate = r0 / n;
      rows = {mean};
    }
    for (const auto& r : rows) {
      std::cout << r.scenario << ',' << r.max_infected << ',' << r.not_infected << ','
                << r.recovered_removed << ',' << r.day_of_peak << ',' << r.r0_estimate << ','
                << (aggregate && r.population > 0 ? std::string("mean") : std::to_string(r.seed));
      if (real_population > 0) {
        std::cout << ',' << scale_up(r.max_infected, r.population, real_population) << ','
                  << scale_up(r.recovered_removed, r.population, real_population);
      }
      std::cout << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Individual-based epidemic simulator"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Synthesize a population snapshot from a county table");
  fs::path county_csv, synth_out;
  double scale = 0.01, proximity = 0.9, friend_radius = 0.1;
  std::uint64_t synth_seed = SynthesisParams{}.seed;
  synth->add_option("county_csv", county_csv, "County table CSV")->required();
  synth->add_option("--scale", scale, "Household scaling factor")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Synthesis seed")->capture_default_str();
  synth->add_option("--proximity-factor", proximity, "Nearest-site choice rate")
      ->capture_default_str();
  synth->add_option("--friend-radius", friend_radius, "Friend radius in county units")
      ->capture_default_str();
  bool county_local = false;
  synth->add_flag("--county-local", county_local,
                  "Keep store, school, workplace and friend choices inside each county");
  synth->add_option("-o,--out", synth_out, "Snapshot directory")->required();

  auto* run = app.add_subcommand("run", "Run one scenario");
  fs::path snapshot, scenario, run_out;
  unsigned threads = 0;
  run->add_option("snapshot", snapshot, "Snapshot directory")->required();
  run->add_option("scenario", scenario, "Scenario document")->required();
  run->add_option("--threads", threads, "Override run.threads");
  run->add_option("-o,--out", run_out, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a scenario over consecutive seeds");
  int seeds = 20;
  unsigned jobs = 1;
  fs::path sweep_out;
  sweep->add_option("snapshot", snapshot, "Snapshot directory")->required();
  sweep->add_option("scenario", scenario, "Scenario document")->required();
  sweep->add_option("--seeds", seeds, "Number of seeds, starting at run.seed")
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Override run.threads");
  sweep->add_option("--jobs", jobs, "Seeds run concurrently")->capture_default_str();
  sweep->add_option("-o,--out", sweep_out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Merge summaries from output directories");
  std::vector<fs::path> dirs;
  bool aggregate = false;
  std::uint64_t real_population = 0;
  report->add_option("dirs", dirs, "Run or sweep output directories")->required();
  report->add_flag("--aggregate", aggregate, "One mean row per sweep directory");
  report->add_option("--real-population", real_population,
                     "Also scale counts to this population");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*synth) return cmd_synth(county_csv, scale, synth_seed, proximity, friend_radius, county_local,
                                    synth_out);
    if (*run) return cmd_run(snapshot, scenario, threads, run_out);
    if (*sweep) return cmd_sweep(snapshot, scenario, seeds, threads, jobs, sweep_out);
    if (*report) return cmd_report(dirs, aggregate, real_population);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CountyTableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == CountyTableError::Code::MissingFile ? kExitIo : kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
