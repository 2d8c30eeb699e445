#pragma once

// Brute-force reference implementations used to check the real ones. These
// stay independent of the library code paths they verify.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "senseflow/types.hpp"

namespace oracle {

struct Segment {
    double first_ts;
    double last_ts;
    std::size_t count;
};

/// Gap segmentation of one phone's sorted probe times: a new segment starts
/// whenever the gap from the previous probe is >= t_interval.
inline std::vector<Segment> segment_times(const std::vector<double>& times, double t_interval) {
    std::vector<Segment> segments;
    for (double t : times) {
        if (segments.empty() || t - segments.back().last_ts >= t_interval) {
            segments.push_back({t, t, 1});
        } else {
            segments.back().last_ts = t;
            segments.back().count += 1;
        }
    }
    return segments;
}

/// Per (mac, period) segmentation: partition each phone's times by the
/// epoch-aligned period grid, then gap-segment within each period.
inline std::map<std::pair<senseflow::MacAddress, double>, std::vector<Segment>>
segment_stream(const std::vector<senseflow::ProbeEvent>& events, double t_dataset,
               double t_interval) {
    std::map<senseflow::MacAddress, std::vector<double>> per_mac;
    for (const auto& e : events) per_mac[e.mac].push_back(e.ts);

    std::map<std::pair<senseflow::MacAddress, double>, std::vector<Segment>> out;
    for (auto& [mac, times] : per_mac) {
        std::sort(times.begin(), times.end());
        std::map<double, std::vector<double>> by_period;
        for (double t : times) {
            // packets carry millisecond-quantized period starts
            double period = senseflow::quantize_ms(std::floor(t / t_dataset) * t_dataset);
            by_period[period].push_back(t);
        }
        for (auto& [period, ts] : by_period)
            out[{mac, period}] = segment_times(ts, t_interval);
    }
    return out;
}

/// Two-pointer subsequence test: is j a subsequence of x?
inline bool is_subsequence(const std::vector<senseflow::GatewayId>& x,
                           const std::vector<senseflow::GatewayId>& j) {
    std::size_t jp = 0;
    for (std::size_t xp = 0; xp < x.size() && jp < j.size(); ++xp)
        if (x[xp] == j[jp]) ++jp;
    return jp == j.size();
}

/// Plain recursive-free LCS length for cross-checking.
inline std::size_t lcs_length_ref(const std::vector<senseflow::GatewayId>& a,
                                  const std::vector<senseflow::GatewayId>& b) {
    std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                             std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                            : std::max(dp[i - 1][j], dp[i][j - 1]);
    return dp[a.size()][b.size()];
}

/// Unique scratch directory for a test.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("senseflow_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace oracle
