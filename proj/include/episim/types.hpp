#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace episim {

using PersonId = std::uint32_t;
using HouseholdId = std::uint32_t;
using SiteId = std::uint32_t;
using CountyId = std::uint32_t;

inline constexpr SiteId kNoSite = std::numeric_limits<SiteId>::max();

enum class SiteKind : std::uint8_t {
  Home,
  Grocery,
  Supercenter,
  Convenience,
  School,
  Workplace,
};

inline constexpr std::array<SiteKind, 3> kStoreKinds{
    SiteKind::Grocery, SiteKind::Supercenter, SiteKind::Convenience};

std::string_view to_string(SiteKind kind);
std::optional<SiteKind> parse_site_kind(std::string_view text);

inline constexpr bool is_store(SiteKind kind) {
  return kind == SiteKind::Grocery || kind == SiteKind::Supercenter ||
         kind == SiteKind::Convenience;
}

/// Decade bins 0-9, 10-19, ..., 60-69 and 70+.
inline constexpr std::size_t kAgeBinCount = 8;
using AgeBin = std::uint8_t;
using AgeTable = std::array<double, kAgeBinCount>;

inline constexpr AgeBin age_bin_for(int age_years) {
  if (age_years >= 70) return 7;
  return static_cast<AgeBin>(age_years < 0 ? 0 : age_years / 10);
}

inline constexpr int kSchoolAgeLimit = 20;

enum class Sex : std::uint8_t { Female, Male };

}  // namespace episim
