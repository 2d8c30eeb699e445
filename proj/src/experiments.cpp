#include "senseflow/experiments.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "senseflow/packet_io.hpp"
#include "senseflow/rng.hpp"

namespace senseflow {

std::vector<OperationalMode> all_modes() {
    return {{WifiState::NonRegistered, Screen::On},
            {WifiState::NonRegistered, Screen::Off},
            {WifiState::Registered, Screen::On},
            {WifiState::Registered, Screen::Off}};
}

namespace {

/// Runs fn(0..n-1) on up to `jobs` threads; results land in pre-sized slots
/// so the output order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    int workers = std::max(1, jobs);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

std::map<GatewayId, std::vector<ProbeEvent>> split_by_gateway(
    const std::vector<ProbeEvent>& events) {
    std::map<GatewayId, std::vector<ProbeEvent>> streams;
    for (const auto& e : events) streams[e.gn].push_back(e);
    return streams;
}

std::map<GatewayId, AgentSummary> run_agents(const std::vector<ProbeEvent>& events,
                                             const CollectionConfig& config, PacketStore& store) {
    std::map<GatewayId, AgentSummary> summaries;
    for (auto& [gn, stream] : split_by_gateway(events)) {
        VectorProbeSource source(std::move(stream));
        CollectorSink sink;
        summaries[gn] = run_agent(config, gn, source, sink);
        for (const auto& p : sink.packets) store.ingest(p);
    }
    return summaries;
}

std::vector<DetectionCell> detection_rate_experiment(const DetectionConfig& config) {
    if (config.replications < 1) throw InvariantError("replications must be >= 1");

    struct Cell {
        OperationalMode mode;
        double speed;
        int gn_count;
    };
    std::vector<Cell> grid;
    for (const auto& mode : config.modes)
        for (double speed : config.speeds)
            for (int gc : config.gn_counts) grid.push_back({mode, speed, gc});

    std::vector<DetectionCell> out(grid.size());
    parallel_for(grid.size(), config.jobs, [&](std::size_t ci) {
        const Cell& cell = grid[ci];
        std::vector<double> rates;
        rates.reserve(config.replications);
        double os_hits[3] = {0.0, 0.0, 0.0}; // ios, android, windows
        double os_totals[3] = {0.0, 0.0, 0.0};
        for (int rep = 0; rep < config.replications; ++rep) {
            std::uint64_t seed = derive_seed(config.seed, ci * 100003ULL + rep);
            Scenario s = speed_walkthrough_scenario(cell.mode.wifi, cell.mode.screen, cell.speed,
                                                    cell.gn_count, seed);
            SimResult sim = simulate(s);
            std::set<MacAddress> detected;
            for (const auto& e : sim.events) detected.insert(e.mac);
            rates.push_back(static_cast<double>(detected.size()) /
                            static_cast<double>(s.phones.size()));
            for (const auto& phone : s.phones) {
                int os = phone.model.os == PhoneOs::Ios ? 0
                         : phone.model.os == PhoneOs::Android ? 1
                                                              : 2;
                os_totals[os] += 1.0;
                if (detected.count(phone.mac)) os_hits[os] += 1.0;
            }
        }
        double mean = 0.0;
        for (double r : rates) mean += r;
        mean /= static_cast<double>(rates.size());
        double var = 0.0;
        if (rates.size() > 1) {
            for (double r : rates) var += (r - mean) * (r - mean);
            var /= static_cast<double>(rates.size() - 1);
        }
        DetectionCell result;
        result.mode = cell.mode;
        result.speed = cell.speed;
        result.gn_count = cell.gn_count;
        result.replications = config.replications;
        result.mean_rate = mean;
        result.stderr_mean = std::sqrt(var / static_cast<double>(rates.size()));
        result.mean_rate_ios = os_totals[0] > 0 ? os_hits[0] / os_totals[0] : 0.0;
        result.mean_rate_android = os_totals[1] > 0 ? os_hits[1] / os_totals[1] : 0.0;
        result.mean_rate_windows = os_totals[2] > 0 ? os_hits[2] / os_totals[2] : 0.0;
        out[ci] = result;
    });
    return out;
}

std::vector<FlowRun> flow_tracking_experiment(const FlowConfig& config) {
    if (config.replications < 1) throw InvariantError("replications must be >= 1");
    if (config.targets.empty()) throw InvariantError("flow experiment needs targets");

    struct Run {
        OperationalMode mode;
        std::size_t target_index;
        int replication;
    };
    std::vector<Run> grid;
    for (const auto& mode : config.modes)
        for (std::size_t ti = 0; ti < config.targets.size(); ++ti)
            for (int rep = 0; rep < config.replications; ++rep) grid.push_back({mode, ti, rep});

    std::vector<FlowRun> out(grid.size());
    parallel_for(grid.size(), config.jobs, [&](std::size_t ri) {
        const Run& run = grid[ri];
        const GatewaySeq& walked = config.targets[run.target_index];
        std::uint64_t seed = derive_seed(config.seed, ri * 1000003ULL + 17);
        Scenario s = flow_walk_scenario(walked, run.mode.wifi, run.mode.screen, config.speed,
                                        seed);
        SimResult sim = simulate(s);

        PacketStore store;
        run_agents(sim.events, config.collection, store);
        WindowGrid grid_win(0.0, s.duration, config.t_win);

        FlowRun result{run.mode, run.target_index, run.replication, {}};
        for (const auto& phone : sim.truth.phones) {
            ObservedTrajectory observed = observed_trajectory(store, phone.mac, grid_win);
            GatewaySeq ids = observed.ids();
            FlowPhoneResult pr;
            pr.mac = phone.mac;
            pr.os = phone.os;
            pr.delta = phone.planted.empty() ? 0.0 : tracking_accuracy(ids, phone.planted);
            pr.recognized = recognize_trajectory(ids, config.targets);
            pr.matched_walked = matches_trajectory(ids, walked);
            result.phones.push_back(std::move(pr));
        }
        out[ri] = std::move(result);
    });
    return out;
}

std::vector<FlowSummaryRow> summarize_flow(const std::vector<FlowRun>& runs) {
    struct Acc {
        double delta_sum = 0.0;
        int recognized = 0;
        int n = 0;
    };
    std::map<std::tuple<std::string, std::size_t, int>, Acc> acc;
    std::map<std::tuple<std::string, std::size_t, int>, std::pair<OperationalMode, PhoneOs>> keys;
    for (const auto& run : runs) {
        for (const auto& p : run.phones) {
            auto key = std::make_tuple(run.mode.str(), run.target_index, static_cast<int>(p.os));
            auto& a = acc[key];
            a.delta_sum += p.delta;
            a.recognized += (p.recognized && *p.recognized == run.target_index) ? 1 : 0;
            a.n += 1;
            keys[key] = {run.mode, p.os};
        }
    }
    std::vector<FlowSummaryRow> out;
    for (const auto& [key, a] : acc) {
        const auto& [mode, os] = keys[key];
        out.push_back({mode, std::get<1>(key), os, a.delta_sum / a.n,
                       static_cast<double>(a.recognized) / a.n});
    }
    return out;
}

std::vector<TrafficCell> traffic_sweep(const std::vector<ProbeEvent>& events,
                                       const std::vector<Duration>& t_datasets,
                                       const std::vector<Duration>& t_intervals, int jobs) {
    if (t_datasets.empty() || t_intervals.empty())
        throw InvariantError("traffic sweep needs non-empty parameter grids");

    auto streams = split_by_gateway(events);
    std::vector<std::pair<Duration, Duration>> grid;
    for (Duration td : t_datasets)
        for (Duration ti : t_intervals) grid.emplace_back(td, ti);

    std::vector<TrafficCell> out(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t ci) {
        auto [td, ti] = grid[ci];
        CollectionConfig config{td, ti};
        TrafficCell cell{td, ti, 0, 0, 0};
        for (const auto& [gn, stream] : streams) {
            VectorProbeSource source(stream);
            CollectorSink sink;
            AgentSummary summary = run_agent(config, gn, source, sink);
            cell.bytes += summary.bytes_uploaded;
            cell.packets += summary.packets_emitted;
            for (const auto& p : sink.packets) cell.records += p.records().size();
        }
        out[ci] = cell;
    });
    return out;
}

} // namespace senseflow
