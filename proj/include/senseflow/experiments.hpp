#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "senseflow/agent.hpp"
#include "senseflow/catalog.hpp"
#include "senseflow/sim.hpp"

namespace senseflow {

struct OperationalMode {
    WifiState wifi = WifiState::NonRegistered;
    Screen screen = Screen::On;

    std::string str() const { return to_string(wifi) + "/" + to_string(screen); }
};

/// The four (Wi-Fi, screen) operational modes.
std::vector<OperationalMode> all_modes();

// ---------------------------------------------------------------------------
// Detection rate vs walking behaviour and gateway count

struct DetectionConfig {
    std::vector<OperationalMode> modes = all_modes();
    std::vector<double> speeds = {kSpeedSlow, kSpeedNormal, kSpeedJog, kSpeedRun};
    std::vector<int> gn_counts = {1, 2, 3, 4};
    int replications = 10;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct DetectionCell {
    OperationalMode mode;
    double speed = 0.0;
    int gn_count = 0;
    int replications = 0;
    double mean_rate = 0.0; // mean fraction of the 5 phones detected by any gateway
    double stderr_mean = 0.0;
    double mean_rate_android = 0.0;
    double mean_rate_ios = 0.0;
    double mean_rate_windows = 0.0;
};

/// One walk-through simulation per (mode, speed, gn_count, replication);
/// a phone counts as detected when any gateway hears at least one probe.
std::vector<DetectionCell> detection_rate_experiment(const DetectionConfig& config);

// ---------------------------------------------------------------------------
// Flow tracking over the seven-location deployment

struct FlowConfig {
    std::vector<GatewaySeq> targets = {flow_target_straight(), flow_target_detour()};
    std::vector<OperationalMode> modes = all_modes();
    double speed = kSpeedNormal;
    int replications = 10;
    std::uint64_t seed = 1;
    CollectionConfig collection{600.0, 300.0};
    Duration t_win = 30.0;
    int jobs = 1;
};

struct FlowPhoneResult {
    MacAddress mac;
    PhoneOs os = PhoneOs::Android;
    double delta = 0.0;                     // tracking accuracy vs the planted walk
    std::optional<std::size_t> recognized;  // candidate index, nullopt = ambiguous
    bool matched_walked = false;            // walked target is a subsequence of observed
};

struct FlowRun {
    OperationalMode mode;
    std::size_t target_index = 0;
    int replication = 0;
    std::vector<FlowPhoneResult> phones;
};

/// Walks the five-phone set along every target in every mode, feeds the
/// capture through the gateway agents and the server analytics, and scores
/// tracking accuracy plus trajectory recognition per phone.
std::vector<FlowRun> flow_tracking_experiment(const FlowConfig& config);

struct FlowSummaryRow {
    OperationalMode mode;
    std::size_t target_index = 0;
    PhoneOs os = PhoneOs::Android;
    double mean_delta = 0.0;
    double recognition_rate = 0.0; // recognized == walked target, per phone
};

std::vector<FlowSummaryRow> summarize_flow(const std::vector<FlowRun>& runs);

// ---------------------------------------------------------------------------
// Uploaded bytes vs collection parameters

struct TrafficCell {
    Duration t_dataset = 0.0;
    Duration t_interval = 0.0;
    std::uint64_t bytes = 0;
    std::uint64_t packets = 0;
    std::uint64_t records = 0;
};

/// Replays the same capture through the agent once per (t_dataset,
/// t_interval) cell and accounts the serialized upload bytes.
std::vector<TrafficCell> traffic_sweep(const std::vector<ProbeEvent>& events,
                                       const std::vector<Duration>& t_datasets,
                                       const std::vector<Duration>& t_intervals, int jobs = 1);

/// Splits a mixed capture into per-gateway streams (order preserved).
std::map<GatewayId, std::vector<ProbeEvent>> split_by_gateway(
    const std::vector<ProbeEvent>& events);

/// Runs one agent per gateway over a mixed capture into the given store.
/// Returns per-gateway summaries (keyed by gateway id).
std::map<GatewayId, AgentSummary> run_agents(const std::vector<ProbeEvent>& events,
                                             const CollectionConfig& config, PacketStore& store);

} // namespace senseflow
