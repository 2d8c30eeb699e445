#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "senseflow/capture.hpp"
#include "senseflow/types.hpp"

namespace senseflow {

/// Destination for serialized dataset packets. Packets arrive in period
/// order per gateway; distinct gateways may deliver concurrently.
class PacketSink {
public:
    virtual ~PacketSink() = default;
    virtual void deliver(const DatasetPacket& packet, const std::string& bytes) = 0;
};

/// Keeps packets in memory (tests, experiments).
class CollectorSink final : public PacketSink {
public:
    void deliver(const DatasetPacket& packet, const std::string& bytes) override {
        packets.push_back(packet);
        total_bytes += bytes.size();
    }
    std::vector<DatasetPacket> packets;
    std::uint64_t total_bytes = 0;
};

/// Writes one file per packet into a spool directory, named
/// "<gn>_<period_start>.ndjson". Files are created via a temp name and
/// renamed so readers never observe partial packets.
class SpoolSink final : public PacketSink {
public:
    explicit SpoolSink(std::filesystem::path dir);
    void deliver(const DatasetPacket& packet, const std::string& bytes) override;

private:
    std::filesystem::path dir_;
};

/// Streams newline-delimited packets over a TCP connection.
class TcpSink final : public PacketSink {
public:
    TcpSink(const std::string& host, int port);
    ~TcpSink() override;
    void deliver(const DatasetPacket& packet, const std::string& bytes) override;

private:
    int fd_ = -1;
};

/// Gateway agent state: merges a phone's consecutive probes into one contact
/// record while the gap stays below t_interval, and flushes a dataset packet
/// every t_dataset. Collection periods are aligned to the epoch grid
/// (period k covers [k*t_dataset, (k+1)*t_dataset)).
class AgentState {
public:
    AgentState(CollectionConfig config, GatewayId gn);

    /// Folds one probe event into the open records. The event stream must be
    /// non-decreasing in ts (OrderingError) and belong to this gateway
    /// (RoutingError). The caller is responsible for flushing periods before
    /// ingesting an event past the current period end.
    void ingest_probe(const ProbeEvent& e);

    /// Closes all open records, averages their RSSI and emits the packet for
    /// the current period, then advances the period by t_dataset. A phone
    /// active across the boundary starts a fresh record in the new period.
    /// Requires now >= period_end (the upload trigger).
    DatasetPacket flush_period(Timestamp now);

    /// Period bounds become defined once the first event is ingested; before
    /// that, start_period() anchors them explicitly. Bounds are computed as
    /// index * t_dataset so replays and oracles agree bit-for-bit.
    void start_period(Timestamp period_start);
    bool period_open() const { return period_open_; }
    Timestamp current_period_start() const {
        return static_cast<double>(period_index_) * config_.t_dataset;
    }
    Timestamp current_period_end() const {
        return static_cast<double>(period_index_ + 1) * config_.t_dataset;
    }

    const CollectionConfig& config() const { return config_; }
    GatewayId gn() const { return gn_; }
    std::uint64_t events_ingested() const { return events_ingested_; }

    /// Total probe_count over all flushed records; equals events_ingested()
    /// once every period has been flushed (conservation).
    std::uint64_t probes_flushed() const { return probes_flushed_; }

private:
    CollectionConfig config_;
    GatewayId gn_;
    bool period_open_ = false;
    std::int64_t period_index_ = 0;
    Timestamp last_event_ts_ = 0.0;
    bool any_event_ = false;
    std::uint64_t events_ingested_ = 0;
    std::uint64_t probes_flushed_ = 0;
    std::unordered_map<MacAddress, ContactRecord, MacHash> open_records_;
    std::vector<ContactRecord> closed_records_;
};

struct AgentSummary {
    std::uint64_t events_ingested = 0;
    std::uint64_t packets_emitted = 0;
    std::uint64_t bytes_uploaded = 0;
    std::uint64_t probes_recorded = 0; // conservation: equals events_ingested
    std::optional<std::string> error;  // set when the source or sink failed mid-run
};

/// Drives one agent over a probe source: ingests events, flushes every
/// period boundary crossed by the event timeline (empty periods included)
/// and the final period after the stream ends. Period boundaries derive
/// from event time, never the wall clock, so capture replays are exact.
AgentSummary run_agent(const CollectionConfig& config, GatewayId gn, ProbeSource& source,
                       PacketSink& sink);

} // namespace senseflow
