#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "senseflow/types.hpp"

namespace senseflow {

/// Capture files are CSV with header "ts,mac,rssi,gn", one probe event per
/// line, non-decreasing in ts. Timestamps carry 6 decimals, RSSI 2.
constexpr const char* kCaptureHeader = "ts,mac,rssi,gn";

void write_capture(const std::filesystem::path& path, const std::vector<ProbeEvent>& events);
std::string capture_line(const ProbeEvent& e);

/// Loads a whole capture file; throws ParseError (with line number) on
/// malformed lines and OrderingError if timestamps go backwards.
std::vector<ProbeEvent> read_capture(const std::filesystem::path& path);

/// Parses one capture line (no ordering check).
ProbeEvent parse_capture_line(std::string_view line, std::size_t line_no);

/// A pull-based stream of time-ordered probe events.
class ProbeSource {
public:
    virtual ~ProbeSource() = default;
    virtual std::optional<ProbeEvent> next() = 0;
};

class VectorProbeSource final : public ProbeSource {
public:
    explicit VectorProbeSource(std::vector<ProbeEvent> events) : events_(std::move(events)) {}
    std::optional<ProbeEvent> next() override {
        if (pos_ >= events_.size()) return std::nullopt;
        return events_[pos_++];
    }

private:
    std::vector<ProbeEvent> events_;
    std::size_t pos_ = 0;
};

/// Streams a capture file without loading it whole.
class CaptureFileSource final : public ProbeSource {
public:
    explicit CaptureFileSource(const std::filesystem::path& path);
    ~CaptureFileSource() override;
    std::optional<ProbeEvent> next() override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace senseflow
