#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "senseflow/lcs.hpp"
#include "senseflow/store.hpp"
#include "senseflow/types.hpp"

namespace senseflow {

/// Analysis window grid: windows of width t_win tiling [from, to), anchored
/// at `from`. The last window may extend past `to`.
struct WindowGrid {
    Timestamp from = 0.0;
    Timestamp to = 0.0;
    Duration t_win = 0.0;

    WindowGrid(Timestamp from_, Timestamp to_, Duration t_win_);

    std::size_t count() const;
    Timestamp start_of(std::size_t k) const { return from + static_cast<double>(k) * t_win; }
    Timestamp end_of(std::size_t k) const { return from + static_cast<double>(k + 1) * t_win; }
};

/// Resolution of the probe-request overhearing problem for one (mac, window):
/// the phone is assigned to the gateway with the maximum average RSSI among
/// records overlapping the window; ties go to the smallest gateway id.
struct Placement {
    MacAddress mac;
    Timestamp window_start = 0.0;
    GatewayId gn = 0;
    double winning_rssi = 0.0;

    bool operator==(const Placement&) const = default;
};

/// One placement per (mac, window) observed by at least one gateway within
/// the grid. A record contributes to every window it overlaps; multiple
/// records of one gateway in one window enter as their plain mean.
/// Output is sorted by (window_start, mac).
std::vector<Placement> resolve_placements(const PacketStore& store, const WindowGrid& grid);

/// Unique-phone count per (gateway, window); every (gateway, window) cell in
/// the grid is present, zeros included.
struct DensitySeries {
    Duration t_win = 0.0;
    Timestamp from = 0.0;
    std::vector<GatewayId> gateways;            // ascending
    std::vector<Timestamp> window_starts;       // ascending
    std::map<std::pair<GatewayId, Timestamp>, std::uint32_t> counts;

    std::uint32_t at(GatewayId gn, Timestamp window_start) const {
        auto it = counts.find({gn, window_start});
        return it == counts.end() ? 0u : it->second;
    }
};

DensitySeries density(const PacketStore& store, const WindowGrid& grid);

/// Per-phone total connection duration at one gateway plus a histogram by
/// duration bucket. Duration sums record spans (last_ts - first_ts); records
/// of zero span count `zero_span_floor` seconds (default 0).
struct DwellReport {
    Duration bucket_width = 600.0;
    // (gateway, mac) -> total seconds
    std::map<std::pair<GatewayId, MacAddress>, double> durations;
    // (gateway, bucket index) -> number of phones
    std::map<std::pair<GatewayId, std::uint32_t>, std::uint32_t> histogram;
};

DwellReport dwell_durations(const PacketStore& store, Timestamp from, Timestamp to,
                            Duration bucket_width = 600.0, double zero_span_floor = 0.0);

/// One step of an observed trajectory, tagged with its analysis window.
struct TrajectoryStep {
    Timestamp window_start = 0.0;
    GatewayId gn = 0;

    bool operator==(const TrajectoryStep&) const = default;
};

struct ObservedTrajectory {
    MacAddress mac;
    std::vector<TrajectoryStep> steps; // time-ordered, consecutive duplicates collapsed

    GatewaySeq ids() const {
        GatewaySeq out;
        out.reserve(steps.size());
        for (const auto& s : steps) out.push_back(s.gn);
        return out;
    }
};

/// Time-ordered gateway sequence of one phone's placements, consecutive
/// duplicates collapsed; empty if the phone was never observed.
ObservedTrajectory observed_trajectory(const PacketStore& store, const MacAddress& mac,
                                       const WindowGrid& grid);

/// All observed trajectories in the grid, sorted by mac.
std::vector<ObservedTrajectory> observed_trajectories(const PacketStore& store,
                                                      const WindowGrid& grid);

} // namespace senseflow
