#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "senseflow/types.hpp"

namespace senseflow {

/// Server-side collection of dataset packets from all gateways, keyed by
/// (gateway, period_start). Re-ingesting an identical packet is a no-op;
/// a different payload under the same key is a ConflictError.
class PacketStore {
public:
    void ingest(const DatasetPacket& p);

    /// Packets whose period intersects [from, to), ordered by key.
    std::vector<const DatasetPacket*> query(Timestamp from, Timestamp to) const;

    /// All gateway ids ever seen, ascending.
    std::vector<GatewayId> gateways() const;

    /// Highest period_end ingested for a gateway (the ingest watermark).
    std::map<GatewayId, Timestamp> watermarks() const { return watermarks_; }

    std::size_t size() const { return packets_.size(); }
    bool empty() const { return packets_.empty(); }

    /// Earliest period_start / latest period_end across the store; both 0
    /// when empty.
    Timestamp min_time() const;
    Timestamp max_time() const;

    /// Loads every "*.ndjson" packet file under dir (one packet per file).
    static PacketStore load_dir(const std::filesystem::path& dir);

    /// Writes the packet into dir with the spool naming scheme, enforcing
    /// the same idempotency/conflict rules against any existing file.
    static void store_file(const std::filesystem::path& dir, const DatasetPacket& p,
                           const std::string& bytes);

private:
    std::map<std::pair<GatewayId, Timestamp>, DatasetPacket> packets_;
    std::map<GatewayId, Timestamp> watermarks_;
};

} // namespace senseflow
