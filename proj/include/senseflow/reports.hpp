#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "senseflow/analytics.hpp"
#include "senseflow/experiments.hpp"

namespace senseflow {

enum class ReportFormat { Csv, Json };

/// Flow report: per-target subsequence matches plus recognition outcomes
/// over the observed population.
struct FlowReport {
    struct TargetRow {
        std::size_t index = 0;
        GatewaySeq ids;
        std::uint32_t matches = 0;    // matches_trajectory(observed, target)
        std::uint32_t recognized = 0; // recognize_trajectory picked this target
    };
    std::vector<TargetRow> targets;
    std::uint32_t ambiguous = 0;
    std::uint32_t total_macs = 0;
};

FlowReport flow_report(const PacketStore& store, const WindowGrid& grid,
                       const std::vector<GatewaySeq>& targets);

// Plot-ready serializations. CSV columns:
//   density:       gn,window_start,count
//   dwell:         gn,bucket_start,bucket_end,count
//   dwell detail:  gn,mac,seconds
//   trajectories:  mac,seq,window_start,gn
//   flow:          target_index,target,matches,recognized,ambiguous,total_macs
//   detection:     mode,speed,gn_count,replications,mean_rate,stderr
//   flow sweep:    mode,target_index,os,mean_delta,recognition_rate
//   traffic:       t_dataset,t_interval,bytes,packets,records
std::string density_csv(const DensitySeries& series);
std::string density_json(const DensitySeries& series);
std::string dwell_csv(const DwellReport& report);
std::string dwell_detail_csv(const DwellReport& report);
std::string dwell_json(const DwellReport& report);
std::string trajectories_csv(const std::vector<ObservedTrajectory>& trajectories);
std::string trajectories_json(const std::vector<ObservedTrajectory>& trajectories);
std::string flow_csv(const FlowReport& report);
std::string flow_json(const FlowReport& report);
std::string detection_csv(const std::vector<DetectionCell>& cells);
std::string flow_sweep_csv(const std::vector<FlowSummaryRow>& rows);
std::string traffic_csv(const std::vector<TrafficCell>& cells);

std::string seq_to_string(const GatewaySeq& seq); // "1-2-3"

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace senseflow
