#include "senseflow/types.hpp"

#include <algorithm>
#include <cstdio>

namespace senseflow {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

MacAddress MacAddress::parse(std::string_view text) {
    if (text.size() != 17)
        throw ParseError("mac: expected 17 characters aa:bb:cc:dd:ee:ff, got \"" +
                         std::string(text) + "\"");
    MacAddress mac;
    for (std::size_t i = 0; i < 6; ++i) {
        std::size_t pos = i * 3;
        if (i > 0 && text[pos - 1] != ':')
            throw ParseError("mac: expected ':' separator in \"" + std::string(text) + "\"");
        int hi = hex_value(text[pos]);
        int lo = hex_value(text[pos + 1]);
        if (hi < 0 || lo < 0)
            throw ParseError("mac: invalid hex digit in \"" + std::string(text) + "\"");
        mac.octets[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return mac;
}

std::string MacAddress::str() const {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1],
                  octets[2], octets[3], octets[4], octets[5]);
    return std::string(buf, 17);
}

void validate_event(const ProbeEvent& e) {
    if (e.rssi < kRssiFloorDbm || e.rssi > kRssiCeilDbm)
        throw InvariantError("probe event rssi " + std::to_string(e.rssi) +
                             " outside [-120, 0] dBm");
    if (e.gn < 0) throw InvariantError("probe event gateway id must be non-negative");
    if (!std::isfinite(e.ts)) throw InvariantError("probe event timestamp must be finite");
}

DatasetPacket::DatasetPacket(GatewayId gn, Timestamp period_start, Timestamp period_end,
                             std::vector<PacketRecord> records)
    : gn_(gn),
      period_start_(quantize_ms(period_start)),
      period_end_(quantize_ms(period_end)),
      records_(std::move(records)) {
    if (gn_ < 0) throw InvariantError("packet gateway id must be non-negative");
    if (!(period_end_ > period_start_))
        throw InvariantError("packet period_end must be after period_start");

    for (auto& r : records_) {
        r.first_ts = quantize_ms(r.first_ts);
        r.last_ts = quantize_ms(r.last_ts);
        r.avg_rssi = quantize_dbm(r.avg_rssi);
    }
    std::sort(records_.begin(), records_.end(), [](const PacketRecord& a, const PacketRecord& b) {
        if (a.mac != b.mac) return a.mac < b.mac;
        return a.first_ts < b.first_ts;
    });

    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        auto at = [&](const char* what) {
            return InvariantError("record " + std::to_string(i) + ": " + what);
        };
        if (r.first_ts > r.last_ts) throw at("first_ts > last_ts");
        if (r.first_ts < period_start_ || r.last_ts > period_end_)
            throw at("timestamps outside packet period");
        if (r.avg_rssi < kRssiFloorDbm || r.avg_rssi > kRssiCeilDbm)
            throw at("avg_rssi outside [-120, 0] dBm");
        if (i > 0 && records_[i - 1].mac == r.mac && records_[i - 1].last_ts >= r.first_ts)
            throw at("overlaps previous record of the same mac");
    }
}

} // namespace senseflow
