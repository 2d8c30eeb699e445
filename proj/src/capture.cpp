#include "senseflow/capture.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

namespace senseflow {

namespace {

double parse_double(std::string_view s, const char* field, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("capture line " + std::to_string(line_no) + ": bad " + field + " \"" +
                         std::string(s) + "\"");
    return value;
}

long parse_int(std::string_view s, const char* field, std::size_t line_no) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("capture line " + std::to_string(line_no) + ": bad " + field + " \"" +
                         std::string(s) + "\"");
    return value;
}

} // namespace

std::string capture_line(const ProbeEvent& e) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f,%s,%.2f,%d", e.ts == 0.0 ? 0.0 : e.ts,
                  e.mac.str().c_str(), e.rssi == 0.0 ? 0.0 : e.rssi, e.gn);
    return buf;
}

void write_capture(const std::filesystem::path& path, const std::vector<ProbeEvent>& events) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open capture file for writing: " + path.string());
    out << kCaptureHeader << '\n';
    for (const auto& e : events) out << capture_line(e) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

ProbeEvent parse_capture_line(std::string_view line, std::size_t line_no) {
    std::array<std::string_view, 4> fields;
    std::size_t start = 0, n = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (n >= 4)
                throw ParseError("capture line " + std::to_string(line_no) + ": too many fields");
            fields[n++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    if (n != 4)
        throw ParseError("capture line " + std::to_string(line_no) + ": expected 4 fields ts,mac,rssi,gn");

    ProbeEvent e;
    e.ts = parse_double(fields[0], "ts", line_no);
    try {
        e.mac = MacAddress::parse(fields[1]);
    } catch (const ParseError& err) {
        throw ParseError("capture line " + std::to_string(line_no) + ": " + err.what());
    }
    e.rssi = parse_double(fields[2], "rssi", line_no);
    e.gn = static_cast<GatewayId>(parse_int(fields[3], "gn", line_no));
    try {
        validate_event(e);
    } catch (const InvariantError& err) {
        throw ParseError("capture line " + std::to_string(line_no) + ": " + err.what());
    }
    return e;
}

struct CaptureFileSource::Impl {
    std::ifstream in;
    std::string line;
    std::size_t line_no = 1;
    double last_ts = -std::numeric_limits<double>::infinity();
    std::string path;
};

CaptureFileSource::CaptureFileSource(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
    impl_->path = path.string();
    impl_->in.open(path, std::ios::binary);
    if (!impl_->in) throw IoError("cannot open capture file: " + impl_->path);
    if (!std::getline(impl_->in, impl_->line))
        throw ParseError("capture " + impl_->path + ": empty file (missing header)");
    if (!impl_->line.empty() && impl_->line.back() == '\r') impl_->line.pop_back();
    if (impl_->line != kCaptureHeader)
        throw ParseError("capture " + impl_->path + ": bad header \"" + impl_->line +
                         "\" (expected \"" + kCaptureHeader + "\")");
}

CaptureFileSource::~CaptureFileSource() = default;

std::optional<ProbeEvent> CaptureFileSource::next() {
    while (std::getline(impl_->in, impl_->line)) {
        ++impl_->line_no;
        if (!impl_->line.empty() && impl_->line.back() == '\r') impl_->line.pop_back();
        if (impl_->line.empty()) continue;
        ProbeEvent e = parse_capture_line(impl_->line, impl_->line_no);
        if (e.ts < impl_->last_ts)
            throw OrderingError("capture line " + std::to_string(impl_->line_no) +
                                ": timestamps go backwards");
        impl_->last_ts = e.ts;
        return e;
    }
    return std::nullopt;
}

std::vector<ProbeEvent> read_capture(const std::filesystem::path& path) {
    CaptureFileSource src(path);
    std::vector<ProbeEvent> events;
    while (auto e = src.next()) events.push_back(*e);
    return events;
}

} // namespace senseflow
