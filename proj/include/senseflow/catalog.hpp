#pragma once

#include <cstdint>

#include "senseflow/lcs.hpp"
#include "senseflow/scenario.hpp"

namespace senseflow {

/// Canonical scenarios shipped with the toolkit. Geometry (coverage radii,
/// gateway spacing, walk lengths) is a documented assumption of this
/// simulator, chosen so that the interval spread between phone operating
/// modes produces clean desk-scale results.

/// Four adjacent classrooms, two gateways each (ids 1..8), stationary
/// phones with staggered arrivals, zero shadowing. One hour.
Scenario classroom_scenario(std::uint64_t seed = 42);

/// One lab gateway, a mixed population over a full day; several phones take
/// out-of-coverage excursions of 6..35 minutes, which spreads record gaps
/// across the interesting t_interval range.
Scenario lab_day_scenario(std::uint64_t seed = 7);

/// Two gateways ("A" and "C") along a street; most phones pass through in
/// well under ten minutes, a few stay for hours.
Scenario city_scenario(std::uint64_t seed = 11);

/// One straight walk past a line of gateways (spacing 40 m, coverage 30 m)
/// carrying the five-phone set (2 iOS, 2 Android, 1 Windows), all in the
/// given operational mode.
Scenario speed_walkthrough_scenario(WifiState wifi, Screen screen, double speed, int gn_count,
                                    std::uint64_t seed);

/// Flow-tracking deployment: seven locations on a circle, two gateways one
/// meter apart at each (inner ids 1..7, outer ids 8..14); the five-phone set
/// walks the given location sequence at the given speed.
Scenario flow_walk_scenario(const GatewaySeq& target, WifiState wifi, Screen screen,
                            double speed, std::uint64_t seed);

/// The two canonical targeting trajectories over locations 1..7.
GatewaySeq flow_target_straight(); // (1,2,3,4,5,6,7)
GatewaySeq flow_target_detour();   // (1,2,5,6,4,3,7)

} // namespace senseflow
