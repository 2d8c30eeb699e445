#include "senseflow/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "senseflow/packet_io.hpp"

namespace senseflow {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Removes the paths registered with it unless commit() is called, so a
/// failing stage never leaves partial outputs behind.
class StageGuard {
public:
    explicit StageGuard(std::string stage) : stage_(std::move(stage)) {}
    ~StageGuard() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : paths_) std::filesystem::remove_all(p, ec);
    }
    void track(const std::filesystem::path& p) { paths_.push_back(p); }
    void commit() { committed_ = true; }

    template <typename Fn>
    auto run(Fn&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw StageError(stage_, e.what());
        } catch (const std::exception& e) {
            throw StageError(stage_, e.what());
        }
    }

private:
    std::string stage_;
    std::vector<std::filesystem::path> paths_;
    bool committed_ = false;
};

std::vector<GatewaySeq> parse_target_list(const ordered_json& arr, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where + ": expected an array of id sequences");
    std::vector<GatewaySeq> targets;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& t = arr[i];
        if (!t.is_array())
            throw ParseError(where + "[" + std::to_string(i) + "]: expected an id array");
        GatewaySeq seq;
        for (const auto& v : t) {
            if (!v.is_number_integer())
                throw ParseError(where + "[" + std::to_string(i) + "]: ids must be integers");
            seq.push_back(v.get<GatewayId>());
        }
        if (seq.empty())
            throw ParseError(where + "[" + std::to_string(i) + "]: empty target");
        targets.push_back(std::move(seq));
    }
    return targets;
}

} // namespace

std::vector<GatewaySeq> load_targets(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open targets file: " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + std::string(e.what()));
    }
    return parse_target_list(doc, path.string());
}

RunManifest RunManifest::from_json(const std::string& text,
                                   const std::filesystem::path& base_dir) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("manifest: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("manifest: expected a JSON object");

    RunManifest m;
    auto resolve = [&](const std::filesystem::path& p) {
        return p.is_absolute() ? p : base_dir / p;
    };
    if (doc.contains("scenario")) {
        if (!doc["scenario"].is_string()) throw ParseError("scenario: expected a string");
        m.scenario_path = resolve(doc["scenario"].get<std::string>());
    }
    if (doc.contains("capture")) {
        if (!doc["capture"].is_string()) throw ParseError("capture: expected a string");
        m.capture = resolve(doc["capture"].get<std::string>());
    }
    if (doc.contains("ground_truth")) {
        if (!doc["ground_truth"].is_string())
            throw ParseError("ground_truth: expected a string");
        m.ground_truth = resolve(doc["ground_truth"].get<std::string>());
    }
    if (m.scenario_path.empty() && !m.capture)
        throw ParseError("scenario: missing (a manifest needs a scenario or a capture)");

    if (doc.contains("collection")) {
        const auto& c = doc["collection"];
        if (c.contains("t_dataset")) m.collection.t_dataset = c["t_dataset"].get<double>();
        if (c.contains("t_interval")) m.collection.t_interval = c["t_interval"].get<double>();
    }
    m.collection.validate();

    if (doc.contains("analysis")) {
        const auto& a = doc["analysis"];
        if (a.contains("t_win")) m.analysis.t_win = a["t_win"].get<double>();
        if (a.contains("from")) m.analysis.from = a["from"].get<double>();
        if (a.contains("to")) m.analysis.to = a["to"].get<double>();
        if (a.contains("dwell_bucket")) m.analysis.dwell_bucket = a["dwell_bucket"].get<double>();
        if (a.contains("targets")) m.analysis.targets = parse_target_list(a["targets"], "targets");
    }

    if (!doc.contains("out_dir") || !doc["out_dir"].is_string())
        throw ParseError("out_dir: missing or not a string");
    std::filesystem::path out = doc["out_dir"].get<std::string>();
    m.out_dir = out.is_absolute() ? out : base_dir / out;

    if (doc.contains("seed")) m.seed = doc["seed"].get<std::uint64_t>();
    return m;
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return from_json(buf.str(), path.parent_path());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

PipelineResult run_pipeline(const RunManifest& manifest) {
    PipelineResult result;
    std::filesystem::create_directories(manifest.out_dir);

    // --- simulate (or adopt a recorded capture) ---------------------------
    GroundTruthLog truth;
    bool have_truth = false;
    std::string run_name;
    std::optional<Timestamp> truth_duration;
    if (!manifest.capture) {
        StageGuard guard("simulate");
        result.capture_path = manifest.out_dir / "capture.csv";
        result.ground_truth_path = manifest.out_dir / "ground_truth.json";
        guard.track(result.capture_path);
        guard.track(result.ground_truth_path);
        guard.run([&] {
            Scenario scenario = load_scenario(manifest.scenario_path);
            if (manifest.seed) scenario.seed = *manifest.seed;
            SimResult sim = simulate(scenario);
            write_capture(result.capture_path, sim.events);
            write_ground_truth(result.ground_truth_path, sim.truth);
            truth = std::move(sim.truth);
        });
        guard.commit();
        have_truth = true;
        run_name = truth.scenario_name;
        truth_duration = truth.duration;
    } else {
        result.capture_path = *manifest.capture;
        if (manifest.ground_truth) {
            StageGuard guard("ground-truth");
            guard.run([&] { truth = load_ground_truth(*manifest.ground_truth); });
            guard.commit();
            result.ground_truth_path = *manifest.ground_truth;
            have_truth = true;
            run_name = truth.scenario_name;
            truth_duration = truth.duration;
        } else {
            run_name = manifest.capture->filename().string();
        }
    }

    // --- agents (one per gateway, replayed from the capture file) ---------
    PacketStore store;
    {
        StageGuard guard("agent");
        result.packets_dir = manifest.out_dir / "packets";
        guard.track(result.packets_dir);
        guard.run([&] {
            std::filesystem::remove_all(result.packets_dir);
            std::filesystem::create_directories(result.packets_dir);
            auto events = read_capture(result.capture_path);
            SpoolSink spool(result.packets_dir);
            for (auto& [gn, stream] : split_by_gateway(events)) {
                VectorProbeSource source(std::move(stream));
                AgentSummary summary = run_agent(manifest.collection, gn, source, spool);
                if (summary.error) throw IoError(*summary.error);
                result.events += summary.events_ingested;
                result.packets += summary.packets_emitted;
                result.bytes_uploaded += summary.bytes_uploaded;
            }
        });
        guard.commit();
    }

    // --- ingest ------------------------------------------------------------
    {
        StageGuard guard("ingest");
        guard.run([&] { store = PacketStore::load_dir(result.packets_dir); });
        guard.commit();
    }

    // --- analyze -----------------------------------------------------------
    {
        StageGuard guard("analyze");
        result.reports_dir = manifest.out_dir / "reports";
        result.metrics_path = manifest.out_dir / "metrics.json";
        guard.track(result.reports_dir);
        guard.track(result.metrics_path);
        guard.run([&] {
            std::filesystem::remove_all(result.reports_dir);
            std::filesystem::create_directories(result.reports_dir);

            Timestamp from = manifest.analysis.from.value_or(0.0);
            Timestamp to = manifest.analysis.to.value_or(
                truth_duration.value_or(store.empty() ? from + manifest.analysis.t_win
                                                      : store.max_time()));
            WindowGrid grid(from, to, manifest.analysis.t_win);

            DensitySeries dens;
            std::vector<ObservedTrajectory> trajectories;
            if (!store.empty()) {
                dens = density(store, grid);
                trajectories = observed_trajectories(store, grid);
                write_text(result.reports_dir / "density.csv", density_csv(dens));
                DwellReport dwell =
                    dwell_durations(store, from, to, manifest.analysis.dwell_bucket);
                write_text(result.reports_dir / "dwell.csv", dwell_csv(dwell));
                write_text(result.reports_dir / "dwell_durations.csv", dwell_detail_csv(dwell));
                write_text(result.reports_dir / "trajectories.csv",
                           trajectories_csv(trajectories));
                if (!manifest.analysis.targets.empty())
                    write_text(result.reports_dir / "flow.csv",
                               flow_csv(flow_report(store, grid, manifest.analysis.targets)));
            } else {
                write_text(result.reports_dir / "density.csv", density_csv(dens));
            }

            ordered_json metrics;
            metrics["v"] = 1;
            metrics["scenario"] = run_name;
            metrics["events"] = result.events;
            metrics["packets"] = result.packets;
            metrics["bytes_uploaded"] = result.bytes_uploaded;

            // --- density vs ground-truth headcount (Eq. 1 cells) ----------
            result.density_matches_truth = true;
            if (have_truth) {
                auto truth_counts = true_headcount(truth, grid);
                std::set<GatewayId> all_gateways;
                for (const auto& g : truth.gateways) all_gateways.insert(g.id);
                for (GatewayId gn : store.gateways()) all_gateways.insert(gn);

                ordered_json cells = ordered_json::array();
                std::uint32_t neg = 0, zero = 0, pos = 0, mismatches = 0;
                double max_abs = 0.0;
                for (GatewayId gn : all_gateways) {
                    for (std::size_t k = 0; k < grid.count(); ++k) {
                        Timestamp ws = grid.start_of(k);
                        auto tit = truth_counts.find({gn, ws});
                        long expected = tit == truth_counts.end() ? 0 : tit->second;
                        long detected = store.empty() ? 0 : dens.at(gn, ws);
                        if (detected != expected) ++mismatches;
                        if (expected > 0) {
                            double err = detection_error(detected, expected);
                            max_abs = std::max(max_abs, std::abs(err));
                            if (err < 0.0)
                                ++neg;
                            else if (err > 0.0)
                                ++pos;
                            else
                                ++zero;
                            cells.push_back({{"gn", gn},
                                             {"window_start", ws},
                                             {"detected", detected},
                                             {"truth", expected},
                                             {"error", err}});
                        }
                    }
                }
                metrics["detection_error"] =
                    ordered_json{{"t_win", manifest.analysis.t_win},
                                 {"cells", std::move(cells)},
                                 {"max_abs_error", max_abs},
                                 {"counts", {{"neg", neg}, {"zero", zero}, {"pos", pos}}},
                                 {"density_mismatched_windows", mismatches}};
                result.max_abs_detection_error = max_abs;
                result.density_matches_truth = mismatches == 0;

                // --- tracking accuracy against planted walks (Eq. 2) ------
                ordered_json tracking = ordered_json::array();
                std::map<std::string, std::pair<double, int>> delta_by_os;
                for (const auto& phone : truth.phones) {
                    if (phone.planted.empty()) continue;
                    GatewaySeq observed;
                    for (const auto& t : trajectories)
                        if (t.mac == phone.mac) observed = t.ids();
                    double delta = tracking_accuracy(observed, phone.planted);
                    tracking.push_back({{"mac", phone.mac.str()},
                                        {"os", to_string(phone.os)},
                                        {"planted", phone.planted},
                                        {"observed", observed},
                                        {"delta", delta}});
                    auto& acc = delta_by_os[to_string(phone.os)];
                    acc.first += delta;
                    acc.second += 1;
                }
                if (!tracking.empty()) {
                    ordered_json by_os;
                    for (const auto& [os, acc] : delta_by_os)
                        by_os[os] = acc.first / acc.second;
                    metrics["tracking"] = ordered_json{{"phones", std::move(tracking)},
                                                       {"mean_delta_by_os", by_os}};
                }
            }

            if (!manifest.analysis.targets.empty() && !store.empty()) {
                FlowReport fr = flow_report(store, grid, manifest.analysis.targets);
                ordered_json targets = ordered_json::array();
                for (const auto& row : fr.targets)
                    targets.push_back({{"index", row.index},
                                       {"ids", row.ids},
                                       {"matches", row.matches},
                                       {"recognized", row.recognized}});
                metrics["recognition"] = ordered_json{{"targets", std::move(targets)},
                                                      {"ambiguous", fr.ambiguous},
                                                      {"total_macs", fr.total_macs}};
            }

            write_text(result.metrics_path, metrics.dump(2) + "\n");
        });
        guard.commit();
    }

    return result;
}

} // namespace senseflow
