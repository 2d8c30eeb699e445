#include "senseflow/mobility.hpp"

#include <cmath>

namespace senseflow {

double speed_by_name(const std::string& name) {
    if (name == "slow") return kSpeedSlow;
    if (name == "normal") return kSpeedNormal;
    if (name == "jog") return kSpeedJog;
    if (name == "run") return kSpeedRun;
    throw ParseError("unknown walking behaviour \"" + name +
                     "\" (expected slow|normal|jog|run)");
}

void MobilityPlan::validate() const {
    if (kind == Kind::Stationary) {
        if (waypoints.size() != 1)
            throw InvariantError("stationary plan needs exactly one position");
        return;
    }
    if (waypoints.size() < 2)
        throw InvariantError("walk polyline needs at least 2 waypoints");
    if (!(speed > 0.0)) throw InvariantError("walk speed must be > 0");
}

double MobilityPlan::path_length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        total += distance(waypoints[i - 1], waypoints[i]);
    return total;
}

Timestamp MobilityPlan::end_time() const {
    if (kind == Kind::Stationary) return start_time;
    return start_time + path_length() / speed;
}

Point MobilityPlan::position_at(Timestamp t) const {
    if (kind == Kind::Stationary) return waypoints.front();
    double travelled = (t - start_time) * speed;
    if (travelled <= 0.0) return waypoints.front();
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        double leg = distance(waypoints[i - 1], waypoints[i]);
        if (travelled <= leg && leg > 0.0) {
            double f = travelled / leg;
            return {waypoints[i - 1].x + f * (waypoints[i].x - waypoints[i - 1].x),
                    waypoints[i - 1].y + f * (waypoints[i].y - waypoints[i - 1].y)};
        }
        travelled -= leg;
    }
    return waypoints.back();
}

} // namespace senseflow
