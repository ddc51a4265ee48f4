#pragma once

namespace episim {

inline constexpr int kTimestepsPerDay = 4;
inline constexpr int kDaysPerWeek = 7;

/// Day 0 is a Monday; timesteps run 1..4 and timestep 4 is night at home.
struct ClockStamp {
  int day = 0;
  int timestep = 1;

  constexpr int day_of_week() const { return day % kDaysPerWeek; }
  constexpr bool weekday() const { return day_of_week() < 5; }
  constexpr int week() const { return day / kDaysPerWeek; }

  friend constexpr bool operator==(ClockStamp, ClockStamp) = default;
};

}  // namespace episim
