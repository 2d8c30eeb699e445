#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "senseflow/error.hpp"

namespace senseflow {

/// Gateway node identifier; small non-negative integer, unique per deployment.
using GatewayId = std::int32_t;

/// Timestamps are seconds since the Unix epoch; durations are seconds.
/// Wire formats carry timestamps at millisecond precision.
using Timestamp = double;
using Duration = double;

constexpr double kRssiFloorDbm = -120.0;
constexpr double kRssiCeilDbm = 0.0;

/// Quantize a timestamp to the wire precision (1 ms). Normalizes -0.
inline double quantize_ms(double seconds) {
    double q = std::round(seconds * 1000.0) / 1000.0;
    return q == 0.0 ? 0.0 : q;
}

/// Quantize an RSSI value to the wire precision (0.1 dBm). Normalizes -0.
inline double quantize_dbm(double dbm) {
    double q = std::round(dbm * 10.0) / 10.0;
    return q == 0.0 ? 0.0 : q;
}

/// A 48-bit MAC address. Canonical text form is lowercase colon-separated,
/// e.g. "aa:bb:cc:dd:ee:ff". Comparison and hashing are byte-wise.
struct MacAddress {
    std::array<std::uint8_t, 6> octets{};

    /// Accepts upper or lower case hex digits; throws ParseError otherwise.
    static MacAddress parse(std::string_view text);

    std::string str() const;

    auto operator<=>(const MacAddress&) const = default;
};

struct MacHash {
    std::size_t operator()(const MacAddress& m) const {
        std::uint64_t v = 0;
        for (auto b : m.octets) v = (v << 8) | b;
        return std::hash<std::uint64_t>{}(v);
    }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Deployment-level description of a gateway node. Position is required by
/// the simulator and the channel model, optional elsewhere.
struct GatewayInfo {
    GatewayId id = 0;
    std::string label;
    std::optional<Point> position;
};

/// One sniffed probe request.
struct ProbeEvent {
    Timestamp ts = 0.0;
    MacAddress mac;
    double rssi = 0.0; // dBm, in [-120, 0]
    GatewayId gn = 0;
};

/// Throws InvariantError if the event is outside the domain bounds.
void validate_event(const ProbeEvent& e);

/// Gateway-side collection parameters: t_dataset is the upload period,
/// t_interval the gap threshold that separates two records of one phone.
struct CollectionConfig {
    Duration t_dataset = 600.0;
    Duration t_interval = 300.0;

    void validate() const {
        if (!(t_dataset > 0.0)) throw InvariantError("t_dataset must be > 0");
        if (!(t_interval > 0.0)) throw InvariantError("t_interval must be > 0");
    }
};

/// Open per-phone record accumulated by the gateway agent.
struct ContactRecord {
    MacAddress mac;
    Timestamp first_ts = 0.0;
    Timestamp last_ts = 0.0;
    double rssi_sum = 0.0;
    std::uint64_t probe_count = 0;

    double avg_rssi() const { return rssi_sum / static_cast<double>(probe_count); }
};

/// Finalized record as it appears in a dataset packet: probe_count is kept
/// on the gateway only and never uploaded.
struct PacketRecord {
    MacAddress mac;
    Timestamp first_ts = 0.0;
    Timestamp last_ts = 0.0;
    double avg_rssi = 0.0;

    bool operator==(const PacketRecord&) const = default;
};

/// One gateway's upload for one collection period. Construction canonicalizes
/// (millisecond timestamps, 0.1 dBm RSSI, records sorted by mac then time)
/// and rejects invariant violations, so a constructed packet is always valid.
class DatasetPacket {
public:
    DatasetPacket(GatewayId gn, Timestamp period_start, Timestamp period_end,
                  std::vector<PacketRecord> records);

    GatewayId gn() const { return gn_; }
    Timestamp period_start() const { return period_start_; }
    Timestamp period_end() const { return period_end_; }
    const std::vector<PacketRecord>& records() const { return records_; }

    bool operator==(const DatasetPacket&) const = default;

private:
    GatewayId gn_;
    Timestamp period_start_;
    Timestamp period_end_;
    std::vector<PacketRecord> records_;
};

} // namespace senseflow
