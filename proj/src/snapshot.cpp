#include "episim/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "episim/errors.hpp"
#include "text.hpp"

namespace episim {
namespace {

constexpr std::string_view kSitesHeader = "site_id,kind,county_id,x,y";
constexpr std::string_view kHouseholdsHeader =
    "household_id,county_id,home_site,grocery,supercenter,convenience,workplace,friends";
constexpr std::string_view kPeopleHeader =
    "person_id,household_id,age_years,age_bin,sex,employed,school_site";

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

class RowReader {
 public:
  RowReader(std::string file, std::size_t row, std::vector<std::string_view> cells)
      : file_(std::move(file)), row_(row), cells_(std::move(cells)) {}

  template <typename T>
  T get(std::size_t col, const char* field) const {
    auto v = detail::parse_number<T>(cells_[col]);
    if (!v) fail(field, "expected a number, got '" + std::string(cells_[col]) + "'");
    return *v;
  }
  std::string_view text(std::size_t col) const { return detail::trim(cells_[col]); }

  [[noreturn]] void fail(const char* field, const std::string& what) const {
    throw ValidationError(file_ + ":" + std::to_string(row_) + ":" + field, what);
  }

 private:
  std::string file_;
  std::size_t row_;
  std::vector<std::string_view> cells_;
};

template <typename Fn>
void for_each_row(const std::filesystem::path& path, std::string_view header,
                  std::size_t columns, Fn&& fn) {
  const auto text = detail::read_file(path.string());
  const auto rows = detail::lines(text);
  const auto name = path.filename().string();
  if (rows.empty() || detail::trim(rows.front()) != header) {
    throw ValidationError(name, "header must be '" + std::string(header) + "'");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto cells = detail::split(rows[i], ',');
    if (cells.size() != columns) {
      throw ValidationError(name + ":" + std::to_string(i),
                            "expected " + std::to_string(columns) + " fields");
    }
    fn(RowReader(name, i, std::move(cells)), i);
  }
}

std::string id_or_empty(SiteId id) { return id == kNoSite ? std::string() : std::to_string(id); }

}  // namespace

std::string format_sites(const Population& population) {
  std::ostringstream out;
  out << kSitesHeader << '\n';
  for (const auto& s : population.sites) {
    out << s.site_id << ',' << to_string(s.kind) << ',' << s.county_id << ','
        << detail::format_double(s.x) << ',' << detail::format_double(s.y) << '\n';
  }
  return out.str();
}

std::string format_households(const Population& population) {
  std::ostringstream out;
  out << kHouseholdsHeader << '\n';
  for (const auto& h : population.households) {
    out << h.household_id << ',' << h.county_id << ',' << h.home_site << ','
        << id_or_empty(h.assigned_grocery) << ',' << id_or_empty(h.assigned_supercenter) << ','
        << id_or_empty(h.assigned_convenience) << ',' << id_or_empty(h.assigned_workplace)
        << ',';
    for (std::size_t i = 0; i < h.friend_household_ids.size(); ++i) {
      if (i) out << ';';
      out << h.friend_household_ids[i];
    }
    out << '\n';
  }
  return out.str();
}

std::string format_people(const Population& population) {
  std::ostringstream out;
  out << kPeopleHeader << '\n';
  for (const auto& p : population.people) {
    out << p.person_id << ',' << p.household_id << ',' << p.age_years << ','
        << static_cast<int>(p.age_bin) << ',' << (p.sex == Sex::Male ? "M" : "F") << ','
        << (p.employed ? 1 : 0) << ',' << id_or_empty(p.school_site) << '\n';
  }
  return out.str();
}

void write_snapshot(const Population& population, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
  write_text(dir / kSitesFile, format_sites(population));
  write_text(dir / kHouseholdsFile, format_households(population));
  write_text(dir / kPeopleFile, format_people(population));
}

Population read_snapshot(const std::filesystem::path& dir) {
  Population pop;

  for_each_row(dir / kSitesFile, kSitesHeader, 5, [&](const RowReader& r, std::size_t) {
    Site s;
    s.site_id = r.get<SiteId>(0, "site_id");
    const auto kind = parse_site_kind(r.text(1));
    if (!kind) r.fail("kind", "unknown site kind '" + std::string(r.text(1)) + "'");
    s.kind = *kind;
    s.county_id = r.get<CountyId>(2, "county_id");
    s.x = r.get<double>(3, "x");
    s.y = r.get<double>(4, "y");
    if (s.site_id != pop.sites.size()) r.fail("site_id", "ids must be dense and ascending");
    pop.sites.push_back(s);
  });

  auto site_ref = [&](const RowReader& r, std::size_t col, const char* field) {
    const auto text = r.text(col);
    if (text.empty()) return kNoSite;
    const auto id = r.get<SiteId>(col, field);
    if (id >= pop.sites.size()) r.fail(field, "unknown site id");
    return id;
  };

  for_each_row(dir / kHouseholdsFile, kHouseholdsHeader, 8, [&](const RowReader& r, std::size_t) {
    Household h;
    h.household_id = r.get<HouseholdId>(0, "household_id");
    if (h.household_id != pop.households.size())
      r.fail("household_id", "ids must be dense and ascending");
    h.county_id = r.get<CountyId>(1, "county_id");
    h.home_site = site_ref(r, 2, "home_site");
    if (h.home_site == kNoSite) r.fail("home_site", "missing");
    h.x = pop.sites[h.home_site].x;
    h.y = pop.sites[h.home_site].y;
    h.assigned_grocery = site_ref(r, 3, "grocery");
    h.assigned_supercenter = site_ref(r, 4, "supercenter");
    h.assigned_convenience = site_ref(r, 5, "convenience");
    h.assigned_workplace = site_ref(r, 6, "workplace");
    const auto friends = r.text(7);
    if (!friends.empty()) {
      for (auto part : detail::split(friends, ';')) {
        auto id = detail::parse_number<HouseholdId>(part);
        if (!id) r.fail("friends", "bad household id '" + std::string(part) + "'");
        h.friend_household_ids.push_back(*id);
      }
    }
    pop.households.push_back(std::move(h));
  });

  for_each_row(dir / kPeopleFile, kPeopleHeader, 7, [&](const RowReader& r, std::size_t) {
    Person p;
    p.person_id = r.get<PersonId>(0, "person_id");
    if (p.person_id != pop.people.size()) r.fail("person_id", "ids must be dense and ascending");
    p.household_id = r.get<HouseholdId>(1, "household_id");
    if (p.household_id >= pop.households.size()) r.fail("household_id", "unknown household");
    p.age_years = r.get<int>(2, "age_years");
    p.age_bin = static_cast<AgeBin>(r.get<int>(3, "age_bin"));
    const auto sex = r.text(4);
    if (sex != "M" && sex != "F") r.fail("sex", "expected M or F");
    p.sex = sex == "M" ? Sex::Male : Sex::Female;
    const auto employed = r.get<int>(5, "employed");
    if (employed != 0 && employed != 1) r.fail("employed", "expected 0 or 1");
    p.employed = employed == 1;
    p.school_site = site_ref(r, 6, "school_site");
    pop.households[p.household_id].resident_ids.push_back(p.person_id);
    pop.people.push_back(p);
  });

  const auto friend_count = pop.households.empty()
                                ? 0u
                                : static_cast<std::uint32_t>(
                                      pop.households.front().friend_household_ids.size());
  try {
    pop.validate(friend_count);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(dir.string(), e.what());
  }
  return pop;
}

}  // namespace episim
