#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "senseflow/analytics.hpp"
#include "senseflow/scenario.hpp"
#include "senseflow/types.hpp"

namespace senseflow {

struct CoverageInterval {
    GatewayId gn = 0;
    Timestamp from = 0.0;
    Timestamp to = 0.0;
};

/// Ground truth for one simulated phone: where it really was, when each
/// gateway could hear it, and (for walks) the gateway sequence its path
/// visits — the planted trajectory that tracking accuracy is scored against.
struct PhoneTruth {
    MacAddress mac;
    PhoneOs os = PhoneOs::Android;
    Screen screen = Screen::On;
    WifiState wifi = WifiState::NonRegistered;
    Timestamp present_from = 0.0;
    std::vector<std::pair<Timestamp, Point>> timeline; // piecewise-linear knots
    std::vector<CoverageInterval> coverage;            // exact, merged per gateway
    GatewaySeq planted;                                // empty for stationary phones

    Point position_at(Timestamp t) const;
};

struct GroundTruthLog {
    std::string scenario_name;
    Duration duration = 0.0;
    ChannelModel channel;
    std::vector<GatewayInfo> gateways;
    std::vector<PhoneTruth> phones;
};

/// True headcount per (gateway, window): a phone counts toward the gateway
/// that is nearest among those in coverage at some instant of the window
/// (ties to the smallest id), evaluated from the position timelines alone.
std::map<std::pair<GatewayId, Timestamp>, std::uint32_t> true_headcount(
    const GroundTruthLog& truth, const WindowGrid& grid);

struct SimResult {
    std::vector<ProbeEvent> events; // time-sorted
    GroundTruthLog truth;
};

/// Runs the discrete-event simulation: each phone emits probe bursts at
/// jittered intervals from its start time; every gateway within the coverage
/// radius receives each frame with log-distance RSSI plus optional Gaussian
/// shadowing, drawn per gateway. Fully determined by the scenario seed.
SimResult simulate(const Scenario& scenario);

void write_ground_truth(const std::filesystem::path& path, const GroundTruthLog& truth);
GroundTruthLog load_ground_truth(const std::filesystem::path& path);
std::string ground_truth_to_json(const GroundTruthLog& truth);

} // namespace senseflow
