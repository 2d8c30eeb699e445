#include "senseflow/catalog.hpp"

#include <cmath>
#include <set>

namespace senseflow {

namespace {

constexpr double kTau = 6.283185307179586476925287;

SimPhone make_phone(std::uint32_t index, PhoneOs os, WifiState wifi, Screen screen,
                    MobilityPlan plan) {
    SimPhone p;
    p.mac = phone_mac(index);
    p.model.os = os;
    p.model.wifi = wifi;
    p.model.screen = screen;
    p.plan = std::move(plan);
    return p;
}

MobilityPlan parked(double x, double y, double start_time = 0.0) {
    MobilityPlan plan;
    plan.kind = MobilityPlan::Kind::Stationary;
    plan.start_time = start_time;
    plan.waypoints = {{x, y}};
    return plan;
}

MobilityPlan walk(std::vector<Point> waypoints, double speed, double start_time = 0.0) {
    MobilityPlan plan;
    plan.kind = MobilityPlan::Kind::Walk;
    plan.start_time = start_time;
    plan.speed = speed;
    plan.waypoints = std::move(waypoints);
    return plan;
}

/// Desk-to-excursion-and-back walk: leaves the lab K times, each excursion
/// keeping the phone out of coverage for roughly `away_seconds`.
MobilityPlan excursions(Point desk, double away_seconds, int count, double speed,
                        double first_leave, double coverage_radius) {
    // out-of-coverage time = 2 * (turnaround_x - coverage_radius) / speed
    double turnaround = coverage_radius + away_seconds * speed / 2.0;
    std::vector<Point> wps;
    wps.push_back(desk);
    for (int i = 0; i < count; ++i) {
        wps.push_back({turnaround + desk.x, desk.y});
        wps.push_back(desk);
    }
    return walk(std::move(wps), speed, first_leave);
}

} // namespace

Scenario classroom_scenario(std::uint64_t seed) {
    Scenario s;
    s.name = "classroom";
    s.duration = 3600.0;
    s.seed = seed;
    s.channel = {-40.0, 2.7, 0.0, 30.0};

    // Four 16x10 m rooms in a 2x2 grid, two gateways per room.
    const Point rooms[4] = {{0.0, 0.0}, {24.0, 0.0}, {0.0, 16.0}, {24.0, 16.0}};
    GatewayId id = 1;
    for (int r = 0; r < 4; ++r) {
        std::string room = "room" + std::to_string(r + 1);
        s.gateways.push_back(
            {id++, room + "-a", Point{rooms[r].x + 4.0, rooms[r].y + 5.0}});
        s.gateways.push_back(
            {id++, room + "-b", Point{rooms[r].x + 12.0, rooms[r].y + 5.0}});
    }

    // Stationary Android phones (screen on, Wi-Fi non-registered) arriving
    // over the hour; desks spread through the rooms.
    struct Desk {
        int room;
        double dx, dy, arrive;
    };
    const Desk desks[] = {
        {0, 2.5, 2.0, 0.0},    {0, 6.0, 7.5, 150.0},  {0, 13.5, 3.0, 750.0},
        {0, 10.0, 8.0, 1900.0}, {1, 3.0, 6.5, 0.0},    {1, 8.5, 2.5, 480.0},
        {1, 12.0, 7.0, 1210.0}, {1, 14.0, 4.5, 2400.0}, {2, 2.0, 8.0, 60.0},
        {2, 7.5, 5.5, 900.0},  {2, 11.0, 2.0, 1500.0}, {2, 13.0, 6.0, 3000.0},
        {3, 4.5, 3.5, 300.0},  {3, 6.0, 8.5, 1200.0}, {3, 9.5, 5.0, 2100.0},
        {3, 14.5, 7.5, 2750.0}, {0, 4.0, 5.0, 3300.0}, {2, 5.0, 3.0, 2820.0},
    };
    std::uint32_t index = 1;
    for (const auto& d : desks) {
        s.phones.push_back(make_phone(index++, PhoneOs::Android, WifiState::NonRegistered,
                                      Screen::On,
                                      parked(rooms[d.room].x + d.dx, rooms[d.room].y + d.dy,
                                             d.arrive)));
    }
    return s;
}

Scenario lab_day_scenario(std::uint64_t seed) {
    Scenario s;
    s.name = "lab-day";
    s.duration = 86400.0;
    s.seed = seed;
    s.channel = {-40.0, 2.7, 0.0, 30.0};
    s.gateways.push_back({1, "lab", Point{0.0, 0.0}});

    const double r = s.channel.coverage_radius;
    std::uint32_t i = 1;
    // Dense probers take excursions of 6..25 minutes, so their record gaps
    // land between the interesting t_interval settings. Sparse probers stay
    // parked: their native 18..22-minute probe gaps do the same job at the
    // top of the range.
    s.phones.push_back(make_phone(i++, PhoneOs::Android, WifiState::Registered, Screen::On,
                                  excursions({5.0, 2.0}, 360.0, 10, kSpeedSlow, 3600.0, r)));
    s.phones.push_back(make_phone(i++, PhoneOs::Android, WifiState::Registered, Screen::On,
                                  excursions({8.0, -3.0}, 480.0, 8, kSpeedSlow, 5400.0, r)));
    s.phones.push_back(make_phone(i++, PhoneOs::Windows, WifiState::NonRegistered, Screen::On,
                                  excursions({10.0, 6.0}, 720.0, 6, kSpeedSlow, 9000.0, r)));
    s.phones.push_back(make_phone(i++, PhoneOs::Windows, WifiState::NonRegistered, Screen::On,
                                  excursions({-4.0, -9.0}, 900.0, 5, kSpeedSlow, 18000.0, r)));
    s.phones.push_back(make_phone(i++, PhoneOs::Android, WifiState::Registered, Screen::On,
                                  excursions({-6.0, 4.0}, 1320.0, 4, kSpeedSlow, 7200.0, r)));
    s.phones.push_back(make_phone(i++, PhoneOs::Android, WifiState::Registered, Screen::Off,
                                  excursions({3.0, 9.0}, 1500.0, 4, kSpeedSlow, 10800.0, r)));
    s.phones.push_back(make_phone(i++, PhoneOs::Ios, WifiState::Registered, Screen::On,
                                  parked(-8.0, -5.0, 0.0)));
    s.phones.push_back(make_phone(i++, PhoneOs::Ios, WifiState::Registered, Screen::On,
                                  parked(2.0, -11.0, 1800.0)));
    s.phones.push_back(make_phone(i++, PhoneOs::Ios, WifiState::Registered, Screen::On,
                                  parked(12.0, 1.0, 3600.0)));
    // Visitors with idle screens.
    s.phones.push_back(make_phone(i++, PhoneOs::Ios, WifiState::NonRegistered, Screen::Off,
                                  parked(6.0, -7.0, 28800.0)));
    s.phones.push_back(make_phone(i++, PhoneOs::Ios, WifiState::NonRegistered, Screen::Off,
                                  parked(-10.0, 2.0, 43200.0)));
    return s;
}

Scenario city_scenario(std::uint64_t seed) {
    Scenario s;
    s.name = "city";
    s.duration = 7200.0;
    s.seed = seed;
    s.channel = {-40.0, 2.7, 0.0, 30.0};
    s.gateways.push_back({1, "A", Point{0.0, 0.0}});
    s.gateways.push_back({2, "C", Point{200.0, 0.0}});

    std::uint32_t i = 1;
    // Passers-by: through the street in under a minute per gateway.
    for (int k = 0; k < 18; ++k) {
        double start = 120.0 + 360.0 * k;
        bool reverse = k % 3 == 2;
        std::vector<Point> path = {{-80.0, 3.0}, {280.0, 3.0}};
        if (reverse) std::swap(path.front(), path.back());
        PhoneOs os = k % 5 == 4 ? PhoneOs::Ios : PhoneOs::Android;
        s.phones.push_back(make_phone(i++, os, WifiState::NonRegistered, Screen::On,
                                      walk(std::move(path), kSpeedNormal, start)));
    }
    // Shop staff near gateway A, present for most of the window.
    s.phones.push_back(make_phone(i++, PhoneOs::Android, WifiState::Registered, Screen::On,
                                  parked(8.0, -6.0, 300.0)));
    s.phones.push_back(make_phone(i++, PhoneOs::Android, WifiState::Registered, Screen::On,
                                  parked(-5.0, 4.0, 600.0)));
    return s;
}

Scenario speed_walkthrough_scenario(WifiState wifi, Screen screen, double speed, int gn_count,
                                    std::uint64_t seed) {
    if (gn_count < 1) throw InvariantError("gn_count must be >= 1");
    Scenario s;
    s.name = "speed-walkthrough";
    s.seed = seed;
    s.channel = {-40.0, 2.7, 0.0, 30.0};
    for (int k = 1; k <= gn_count; ++k)
        s.gateways.push_back({k, "gn" + std::to_string(k), Point{40.0 * k, 0.0}});

    double end_x = 40.0 * gn_count + 40.0;
    s.duration = end_x / speed + 5.0;

    const PhoneOs set[5] = {PhoneOs::Ios, PhoneOs::Ios, PhoneOs::Android, PhoneOs::Android,
                            PhoneOs::Windows};
    for (std::uint32_t k = 0; k < 5; ++k)
        s.phones.push_back(make_phone(k + 1, set[k], wifi, screen,
                                      walk({{0.0, 2.0}, {end_x, 2.0}}, speed)));
    return s;
}

GatewaySeq flow_target_straight() { return {1, 2, 3, 4, 5, 6, 7}; }
GatewaySeq flow_target_detour() { return {1, 2, 5, 6, 4, 3, 7}; }

Scenario flow_walk_scenario(const GatewaySeq& target, WifiState wifi, Screen screen,
                            double speed, std::uint64_t seed) {
    if (target.empty()) throw InvariantError("flow walk needs a non-empty target");
    for (GatewayId id : target)
        if (id < 1 || id > 7)
            throw InvariantError("flow targets use location ids 1..7, got " +
                                 std::to_string(id));

    Scenario s;
    s.name = "flow-walk";
    s.seed = seed;
    // Wide coverage and a large circle: every location's dominance span
    // exceeds the worst-case screen-on probe gap, and the 20-minute
    // registered-mode intervals stay silent for the whole walk.
    s.channel = {-40.0, 2.7, 0.0, 100.0};

    const double radius = 270.0;
    auto vertex_dir = [&](GatewayId loc) {
        double angle = kTau * static_cast<double>(loc - 1) / 7.0;
        return Point{std::cos(angle), std::sin(angle)};
    };
    for (GatewayId loc = 1; loc <= 7; ++loc) {
        Point u = vertex_dir(loc);
        Point at{radius * u.x, radius * u.y};
        std::string name = "loc" + std::to_string(loc);
        // A co-located pair at each location. With equal positions the two
        // hear every probe at the same strength, so overhearing resolution
        // always lands on the primary (smaller) id via the tie-break, and
        // location ids in trajectories stay 1..7.
        s.gateways.push_back({loc, name + "-a", at});
        s.gateways.push_back({loc + 7, name + "-b", at});
    }

    std::vector<Point> wps;
    Point first = vertex_dir(target.front());
    wps.push_back({(radius - 120.0) * first.x, (radius - 120.0) * first.y});
    for (GatewayId loc : target) {
        Point u = vertex_dir(loc);
        wps.push_back({radius * u.x, radius * u.y});
    }
    Point last = vertex_dir(target.back());
    wps.push_back({(radius - 120.0) * last.x, (radius - 120.0) * last.y});

    const PhoneOs set[5] = {PhoneOs::Android, PhoneOs::Android, PhoneOs::Ios, PhoneOs::Ios,
                            PhoneOs::Windows};
    for (std::uint32_t k = 0; k < 5; ++k)
        s.phones.push_back(make_phone(k + 1, set[k], wifi, screen, walk(wps, speed)));
    // Keep simulating a little past the walk so the last location's records
    // close normally; the rest position is outside all coverage.
    s.duration = s.phones.front().plan.end_time() + 45.0;
    return s;
}

} // namespace senseflow
