#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "senseflow/types.hpp"

namespace senseflow {

struct ServeOptions {
    std::filesystem::path store_dir;
    std::optional<std::filesystem::path> spool_dir; // watch for packet files
    std::optional<int> listen_port;                 // 0 picks an ephemeral port
    std::string listen_host = "127.0.0.1";
    double poll_interval = 0.5; // spool scan period, seconds
};

struct ServeStats {
    std::uint64_t ingested = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t rejected = 0;
};

/// Ingestion daemon: moves validated packet files from a spool directory
/// into the store and/or accepts newline-delimited JSON packets on a TCP
/// port (one packet per line, one connection per uploading gateway).
/// Store writes are serialized; concurrent gateway connections are fine.
class IngestServer {
public:
    explicit IngestServer(ServeOptions options);
    ~IngestServer();

    IngestServer(const IngestServer&) = delete;
    IngestServer& operator=(const IngestServer&) = delete;

    /// Starts the listener thread (when a port is configured).
    void start();

    /// One spool pass; returns the number of packets ingested.
    std::size_t scan_spool();

    /// Serves until stop(): periodic spool scans plus the TCP listener.
    void run();

    void stop();

    /// Bound TCP port (valid after start()).
    int port() const { return port_; }

    ServeStats stats() const;

private:
    void listener_loop();
    void handle_connection(int fd);
    bool ingest_line(const std::string& line, const std::string& origin);

    ServeOptions options_;
    std::atomic<bool> stopping_{false};
    int listen_fd_ = -1;
    int port_ = 0;
    std::thread listener_;
    std::vector<std::thread> connections_;
    mutable std::mutex mutex_; // guards store writes and stats
    ServeStats stats_;
};

} // namespace senseflow
