#pragma once

#include <cstdint>

namespace platoon {

// All times are whole seconds since the simulation epoch (00:00 of the
// simulated day). Currency is euro as double.
using Seconds = std::int64_t;
using HubId = std::int32_t;
using TruckId = std::int32_t;
using FleetId = std::int32_t;

inline constexpr double kSecondsPerHour = 3600.0;

inline constexpr double to_hours(Seconds s) {
  return static_cast<double>(s) / kSecondsPerHour;
}

}  // namespace platoon
