#pragma once

#include <string>
#include <string_view>

#include "senseflow/types.hpp"

namespace senseflow {

/// Wire schema version of dataset packets ("v" field).
constexpr int kPacketSchemaVersion = 1;

/// Serialize a packet as one newline-terminated JSON object with a fixed
/// field order:
///   {"v":1,"gn":G,"period_start":S,"period_end":E,"records":[
///     {"mac":"..","first_ts":F,"last_ts":L,"avg_rssi":R}, ...]}\n
/// Timestamps use 3 decimals (milliseconds), avg_rssi 1 decimal (0.1 dBm).
/// The byte length is the packet's data-traffic contribution.
std::string serialize_packet(const DatasetPacket& p);

/// Parse one packet line. Throws ParseError for malformed input (names the
/// first offending field) and InvariantError for records that violate the
/// packet invariants (names the record index).
DatasetPacket deserialize_packet(std::string_view bytes);

/// Spool file name for a packet: "<gn>_<period_start>.ndjson".
std::string spool_filename(GatewayId gn, Timestamp period_start);

/// Format helpers shared by the wire and report writers.
std::string format_ts(double seconds);   // %.3f, -0 normalized
std::string format_dbm(double dbm);      // %.1f, -0 normalized

} // namespace senseflow
