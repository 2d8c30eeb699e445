#pragma once

#include <string>
#include <vector>

#include "senseflow/types.hpp"

namespace senseflow {

/// Named walking behaviours with their reference speeds (m/s).
inline constexpr double kSpeedSlow = 1.25;
inline constexpr double kSpeedNormal = 2.25;
inline constexpr double kSpeedJog = 2.6;
inline constexpr double kSpeedRun = 4.5;

double speed_by_name(const std::string& name); // slow|normal|jog|run

/// Either parked at one position or walking a polyline at constant speed
/// with linear interpolation between waypoints. The phone exists (and may
/// probe) from start_time on; a walker rests at the final waypoint after
/// finishing.
struct MobilityPlan {
    enum class Kind { Stationary, Walk };

    Kind kind = Kind::Stationary;
    Timestamp start_time = 0.0;
    std::vector<Point> waypoints; // 1 point for stationary, >= 2 for walks
    double speed = kSpeedNormal;  // m/s, walks only

    void validate() const;

    /// Total path length (0 for stationary).
    double path_length() const;

    /// Time at which the walk reaches the end of the polyline.
    Timestamp end_time() const;

    /// Position at absolute time t (clamped to the endpoints).
    Point position_at(Timestamp t) const;
};

} // namespace senseflow
