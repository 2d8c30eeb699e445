#include "senseflow/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace senseflow {

WindowGrid::WindowGrid(Timestamp from_, Timestamp to_, Duration t_win_)
    : from(from_), to(to_), t_win(t_win_) {
    if (!(t_win > 0.0)) throw InvariantError("t_win must be > 0");
    if (!(from < to)) throw InvariantError("analysis range must satisfy from < to");
}

std::size_t WindowGrid::count() const {
    return static_cast<std::size_t>(std::ceil((to - from) / t_win));
}

namespace {

struct RssiAcc {
    double sum = 0.0;
    std::uint32_t n = 0;
    double mean() const { return sum / static_cast<double>(n); }
};

// Accumulates record averages per (window, mac, gateway). Records and
// gateways are visited in store order (sorted), so float accumulation is
// deterministic.
using CellKey = std::tuple<std::size_t, MacAddress, GatewayId>;

std::map<CellKey, RssiAcc> accumulate_cells(const PacketStore& store, const WindowGrid& grid) {
    std::map<CellKey, RssiAcc> cells;
    for (const DatasetPacket* p : store.query(grid.from, grid.to)) {
        for (const auto& r : p->records()) {
            if (r.last_ts < grid.from || r.first_ts >= grid.to) continue;
            double lo = std::max(r.first_ts, grid.from);
            auto k0 = static_cast<std::size_t>(std::floor((lo - grid.from) / grid.t_win));
            for (std::size_t k = k0; k < grid.count(); ++k) {
                // record [first, last] overlaps window [ws, we)
                if (r.last_ts < grid.start_of(k)) break;
                auto& acc = cells[{k, r.mac, p->gn()}];
                acc.sum += r.avg_rssi;
                acc.n += 1;
            }
        }
    }
    return cells;
}

} // namespace

std::vector<Placement> resolve_placements(const PacketStore& store, const WindowGrid& grid) {
    auto cells = accumulate_cells(store, grid);

    std::vector<Placement> out;
    auto it = cells.begin();
    while (it != cells.end()) {
        auto [window, mac, gn] = it->first;
        GatewayId best_gn = gn;
        double best_rssi = it->second.mean();
        ++it;
        // gateways for one (window, mac) are adjacent and id-ascending, so
        // "strictly greater wins" implements the smallest-id tie-break.
        while (it != cells.end() && std::get<0>(it->first) == window &&
               std::get<1>(it->first) == mac) {
            double mean = it->second.mean();
            if (mean > best_rssi) {
                best_rssi = mean;
                best_gn = std::get<2>(it->first);
            }
            ++it;
        }
        out.push_back({mac, grid.start_of(window), best_gn, best_rssi});
    }
    // map order is (window, mac) already.
    return out;
}

DensitySeries density(const PacketStore& store, const WindowGrid& grid) {
    DensitySeries series;
    series.t_win = grid.t_win;
    series.from = grid.from;
    series.gateways = store.gateways();
    series.window_starts.reserve(grid.count());
    for (std::size_t k = 0; k < grid.count(); ++k)
        series.window_starts.push_back(grid.start_of(k));

    for (GatewayId gn : series.gateways)
        for (Timestamp ws : series.window_starts) series.counts[{gn, ws}] = 0;

    for (const Placement& p : resolve_placements(store, grid)) {
        auto it = series.counts.find({p.gn, p.window_start});
        if (it == series.counts.end())
            it = series.counts.emplace(std::make_pair(p.gn, p.window_start), 0u).first;
        it->second += 1;
    }
    return series;
}

DwellReport dwell_durations(const PacketStore& store, Timestamp from, Timestamp to,
                            Duration bucket_width, double zero_span_floor) {
    if (!(bucket_width > 0.0)) throw InvariantError("dwell bucket width must be > 0");
    DwellReport report;
    report.bucket_width = bucket_width;

    for (const DatasetPacket* p : store.query(from, to)) {
        for (const auto& r : p->records()) {
            if (r.last_ts < from || r.first_ts >= to) continue;
            double span = r.last_ts - r.first_ts;
            if (span == 0.0) span = zero_span_floor;
            report.durations[{p->gn(), r.mac}] += span;
        }
    }
    for (const auto& [key, seconds] : report.durations) {
        auto bucket = static_cast<std::uint32_t>(std::floor(seconds / bucket_width));
        report.histogram[{key.first, bucket}] += 1;
    }
    return report;
}

ObservedTrajectory observed_trajectory(const PacketStore& store, const MacAddress& mac,
                                       const WindowGrid& grid) {
    ObservedTrajectory trajectory;
    trajectory.mac = mac;
    for (const Placement& p : resolve_placements(store, grid)) {
        if (p.mac != mac) continue;
        if (!trajectory.steps.empty() && trajectory.steps.back().gn == p.gn) continue;
        trajectory.steps.push_back({p.window_start, p.gn});
    }
    return trajectory;
}

std::vector<ObservedTrajectory> observed_trajectories(const PacketStore& store,
                                                      const WindowGrid& grid) {
    auto placements = resolve_placements(store, grid);
    std::set<MacAddress> macs;
    for (const auto& p : placements) macs.insert(p.mac);

    std::vector<ObservedTrajectory> out;
    out.reserve(macs.size());
    for (const auto& mac : macs) {
        ObservedTrajectory t;
        t.mac = mac;
        for (const auto& p : placements) {
            if (p.mac != mac) continue;
            if (!t.steps.empty() && t.steps.back().gn == p.gn) continue;
            t.steps.push_back({p.window_start, p.gn});
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace senseflow
