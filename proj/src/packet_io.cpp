#include "senseflow/packet_io.hpp"

#include <cstdio>

#include "json.hpp"

namespace senseflow {

namespace {

std::string fixed(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v == 0.0 ? 0.0 : v);
    return buf;
}

} // namespace

std::string format_ts(double seconds) { return fixed(seconds, "%.3f"); }
std::string format_dbm(double dbm) { return fixed(dbm, "%.1f"); }

std::string serialize_packet(const DatasetPacket& p) {
    std::string out;
    out.reserve(64 + p.records().size() * 80);
    out += "{\"v\":";
    out += std::to_string(kPacketSchemaVersion);
    out += ",\"gn\":";
    out += std::to_string(p.gn());
    out += ",\"period_start\":";
    out += format_ts(p.period_start());
    out += ",\"period_end\":";
    out += format_ts(p.period_end());
    out += ",\"records\":[";
    bool first = true;
    for (const auto& r : p.records()) {
        if (!first) out += ',';
        first = false;
        out += "{\"mac\":\"";
        out += r.mac.str();
        out += "\",\"first_ts\":";
        out += format_ts(r.first_ts);
        out += ",\"last_ts\":";
        out += format_ts(r.last_ts);
        out += ",\"avg_rssi\":";
        out += format_dbm(r.avg_rssi);
        out += '}';
    }
    out += "]}\n";
    return out;
}

namespace {

using json = nlohmann::json;

const json& require(const json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(where + field + ": missing");
    return *it;
}

double require_number(const json& obj, const char* field, const std::string& where) {
    const json& v = require(obj, field, where);
    if (!v.is_number()) throw ParseError(where + field + ": expected a number");
    return v.get<double>();
}

} // namespace

DatasetPacket deserialize_packet(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("packet: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("packet: expected a JSON object");

    const json& v = require(doc, "v", "");
    if (!v.is_number_integer() || v.get<int>() != kPacketSchemaVersion)
        throw ParseError("v: unsupported packet schema version (expected " +
                         std::to_string(kPacketSchemaVersion) + ")");

    const json& gn = require(doc, "gn", "");
    if (!gn.is_number_integer() || gn.get<std::int64_t>() < 0)
        throw ParseError("gn: expected a non-negative integer");

    double period_start = require_number(doc, "period_start", "");
    double period_end = require_number(doc, "period_end", "");

    const json& records = require(doc, "records", "");
    if (!records.is_array()) throw ParseError("records: expected an array");

    std::vector<PacketRecord> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const json& r = records[i];
        std::string where = "records[" + std::to_string(i) + "].";
        if (!r.is_object()) throw ParseError(where + ": expected an object");
        const json& mac = require(r, "mac", where);
        if (!mac.is_string()) throw ParseError(where + "mac: expected a string");
        PacketRecord rec;
        try {
            rec.mac = MacAddress::parse(mac.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        }
        rec.first_ts = require_number(r, "first_ts", where);
        rec.last_ts = require_number(r, "last_ts", where);
        rec.avg_rssi = require_number(r, "avg_rssi", where);
        out.push_back(rec);
    }

    return DatasetPacket(static_cast<GatewayId>(gn.get<std::int64_t>()), period_start, period_end,
                         std::move(out));
}

std::string spool_filename(GatewayId gn, Timestamp period_start) {
    return std::to_string(gn) + "_" + format_ts(period_start) + ".ndjson";
}

} // namespace senseflow
