#include "senseflow/reports.hpp"

#include <fstream>

#include "json.hpp"
#include "senseflow/packet_io.hpp"

namespace senseflow {

namespace {
using ordered_json = nlohmann::ordered_json;

std::string trim_number(double v) {
    // %.3f keeps report times aligned with the wire precision
    return format_ts(v);
}

} // namespace

FlowReport flow_report(const PacketStore& store, const WindowGrid& grid,
                       const std::vector<GatewaySeq>& targets) {
    if (targets.empty()) throw InvariantError("flow report needs at least one target");
    FlowReport report;
    for (std::size_t i = 0; i < targets.size(); ++i)
        report.targets.push_back({i, targets[i], 0, 0});

    for (const auto& trajectory : observed_trajectories(store, grid)) {
        GatewaySeq ids = trajectory.ids();
        ++report.total_macs;
        for (auto& row : report.targets)
            if (matches_trajectory(ids, row.ids)) ++row.matches;
        auto recognized = recognize_trajectory(ids, targets);
        if (recognized)
            ++report.targets[*recognized].recognized;
        else
            ++report.ambiguous;
    }
    return report;
}

std::string seq_to_string(const GatewaySeq& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(seq[i]);
    }
    return out;
}

std::string density_csv(const DensitySeries& series) {
    std::string out = "gn,window_start,count\n";
    for (GatewayId gn : series.gateways)
        for (Timestamp ws : series.window_starts)
            out += std::to_string(gn) + "," + trim_number(ws) + "," +
                   std::to_string(series.at(gn, ws)) + "\n";
    return out;
}

std::string density_json(const DensitySeries& series) {
    ordered_json doc;
    doc["t_win"] = series.t_win;
    doc["series"] = ordered_json::array();
    for (GatewayId gn : series.gateways) {
        ordered_json row;
        row["gn"] = gn;
        row["points"] = ordered_json::array();
        for (Timestamp ws : series.window_starts)
            row["points"].push_back({{"window_start", ws}, {"count", series.at(gn, ws)}});
        doc["series"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

std::string dwell_csv(const DwellReport& report) {
    std::string out = "gn,bucket_start,bucket_end,count\n";
    for (const auto& [key, count] : report.histogram) {
        double lo = key.second * report.bucket_width;
        out += std::to_string(key.first) + "," + trim_number(lo) + "," +
               trim_number(lo + report.bucket_width) + "," + std::to_string(count) + "\n";
    }
    return out;
}

std::string dwell_detail_csv(const DwellReport& report) {
    std::string out = "gn,mac,seconds\n";
    for (const auto& [key, seconds] : report.durations)
        out += std::to_string(key.first) + "," + key.second.str() + "," + trim_number(seconds) +
               "\n";
    return out;
}

std::string dwell_json(const DwellReport& report) {
    ordered_json doc;
    doc["bucket_width"] = report.bucket_width;
    doc["histogram"] = ordered_json::array();
    for (const auto& [key, count] : report.histogram)
        doc["histogram"].push_back({{"gn", key.first},
                                    {"bucket_start", key.second * report.bucket_width},
                                    {"count", count}});
    doc["durations"] = ordered_json::array();
    for (const auto& [key, seconds] : report.durations)
        doc["durations"].push_back(
            {{"gn", key.first}, {"mac", key.second.str()}, {"seconds", seconds}});
    return doc.dump(2) + "\n";
}

std::string trajectories_csv(const std::vector<ObservedTrajectory>& trajectories) {
    std::string out = "mac,seq,window_start,gn\n";
    for (const auto& t : trajectories)
        for (std::size_t i = 0; i < t.steps.size(); ++i)
            out += t.mac.str() + "," + std::to_string(i) + "," +
                   trim_number(t.steps[i].window_start) + "," + std::to_string(t.steps[i].gn) +
                   "\n";
    return out;
}

std::string trajectories_json(const std::vector<ObservedTrajectory>& trajectories) {
    ordered_json doc = ordered_json::array();
    for (const auto& t : trajectories) {
        ordered_json row;
        row["mac"] = t.mac.str();
        row["steps"] = ordered_json::array();
        for (const auto& s : t.steps)
            row["steps"].push_back({{"window_start", s.window_start}, {"gn", s.gn}});
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

std::string flow_csv(const FlowReport& report) {
    std::string out = "target_index,target,matches,recognized,ambiguous,total_macs\n";
    for (const auto& row : report.targets)
        out += std::to_string(row.index) + "," + seq_to_string(row.ids) + "," +
               std::to_string(row.matches) + "," + std::to_string(row.recognized) + "," +
               std::to_string(report.ambiguous) + "," + std::to_string(report.total_macs) + "\n";
    return out;
}

std::string flow_json(const FlowReport& report) {
    ordered_json doc;
    doc["targets"] = ordered_json::array();
    for (const auto& row : report.targets)
        doc["targets"].push_back({{"index", row.index},
                                  {"ids", row.ids},
                                  {"matches", row.matches},
                                  {"recognized", row.recognized}});
    doc["ambiguous"] = report.ambiguous;
    doc["total_macs"] = report.total_macs;
    return doc.dump(2) + "\n";
}

std::string detection_csv(const std::vector<DetectionCell>& cells) {
    std::string out = "mode,speed,gn_count,replications,mean_rate,stderr\n";
    char buf[64];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%.2f,%d,%d,%.6f,%.6f", c.speed, c.gn_count,
                      c.replications, c.mean_rate, c.stderr_mean);
        out += c.mode.str() + "," + buf + "\n";
    }
    return out;
}

std::string flow_sweep_csv(const std::vector<FlowSummaryRow>& rows) {
    std::string out = "mode,target_index,os,mean_delta,recognition_rate\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.6f,%.6f", r.target_index,
                      to_string(r.os).c_str(), r.mean_delta, r.recognition_rate);
        out += r.mode.str() + "," + buf + "\n";
    }
    return out;
}

std::string traffic_csv(const std::vector<TrafficCell>& cells) {
    std::string out = "t_dataset,t_interval,bytes,packets,records\n";
    for (const auto& c : cells)
        out += trim_number(c.t_dataset) + "," + trim_number(c.t_interval) + "," +
               std::to_string(c.bytes) + "," + std::to_string(c.packets) + "," +
               std::to_string(c.records) + "\n";
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace senseflow
