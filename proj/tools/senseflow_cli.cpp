// senseflow command-line front end: simulator -> gateway agent -> server
// analytics, plus the experiment sweep runners.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "senseflow/catalog.hpp"
#include "senseflow/packet_io.hpp"
#include "senseflow/pipeline.hpp"
#include "senseflow/serve.hpp"

namespace sf = senseflow;

namespace {

volatile std::sig_atomic_t g_interrupted = 0;
void on_signal(int) { g_interrupted = 1; }

/// --out accepts "csv"/"json" (stdout) or a file path whose extension picks
/// the format.
struct OutSpec {
    std::string value = "csv";

    sf::ReportFormat format() const {
        if (value == "json") return sf::ReportFormat::Json;
        if (value == "csv") return sf::ReportFormat::Csv;
        auto ext = std::filesystem::path(value).extension();
        return ext == ".json" ? sf::ReportFormat::Json : sf::ReportFormat::Csv;
    }
    bool to_stdout() const { return value == "csv" || value == "json"; }

    void emit(const std::string& text) const {
        if (to_stdout())
            std::cout << text;
        else
            sf::write_text(value, text);
    }
};

std::vector<double> parse_duration_list(const std::string& csv, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw sf::ParseError(flag + ": bad number \"" + item + "\"");
        }
    }
    if (out.empty()) throw sf::ParseError(flag + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& csv, const std::string& flag) {
    std::vector<int> out;
    for (double v : parse_duration_list(csv, flag)) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<sf::OperationalMode> parse_modes(const std::string& spec) {
    if (spec == "all") return sf::all_modes();
    std::vector<sf::OperationalMode> modes;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto slash = item.find('/');
        if (slash == std::string::npos)
            throw sf::ParseError("--modes: expected wifi/screen pairs like "
                                 "non_registered/on, got \"" + item + "\"");
        modes.push_back({sf::wifi_from_string(item.substr(0, slash)),
                         sf::screen_from_string(item.substr(slash + 1))});
    }
    if (modes.empty()) throw sf::ParseError("--modes: empty list");
    return modes;
}

sf::CollectionConfig collection_from_args(const std::string& config_path, double t_dataset,
                                          double t_interval) {
    sf::CollectionConfig config;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw sf::IoError("cannot open config file: " + config_path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw sf::ParseError(config_path + ": malformed JSON: " + std::string(e.what()));
        }
        if (doc.contains("t_dataset")) config.t_dataset = doc["t_dataset"].get<double>();
        if (doc.contains("t_interval")) config.t_interval = doc["t_interval"].get<double>();
    }
    if (t_dataset > 0.0) config.t_dataset = t_dataset; // flags override the file
    if (t_interval > 0.0) config.t_interval = t_interval;
    config.validate();
    return config;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 std::int64_t seed) {
    sf::Scenario scenario = sf::load_scenario(scenario_path);
    if (seed >= 0) scenario.seed = static_cast<std::uint64_t>(seed);
    sf::SimResult sim = sf::simulate(scenario);

    std::filesystem::create_directories(out_dir);
    auto capture = std::filesystem::path(out_dir) / "capture.csv";
    auto truth = std::filesystem::path(out_dir) / "ground_truth.json";
    sf::write_capture(capture, sim.events);
    sf::write_ground_truth(truth, sim.truth);

    std::cout << "scenario: " << scenario.name << "\n"
              << "events:   " << sim.events.size() << "\n"
              << "phones:   " << scenario.phones.size() << "\n"
              << "gateways: " << scenario.gateways.size() << "\n"
              << "capture:  " << capture.string() << "\n"
              << "truth:    " << truth.string() << "\n";
    return 0;
}

int cmd_agent(const std::string& config_path, int gn, const std::string& input,
              const std::string& out, double t_dataset, double t_interval) {
    sf::CollectionConfig config = collection_from_args(config_path, t_dataset, t_interval);

    sf::CaptureFileSource source(input);
    std::unique_ptr<sf::PacketSink> sink;
    auto colon = out.rfind(':');
    if (colon != std::string::npos && out.find('/') == std::string::npos) {
        sink = std::make_unique<sf::TcpSink>(out.substr(0, colon),
                                             std::stoi(out.substr(colon + 1)));
    } else {
        sink = std::make_unique<sf::SpoolSink>(out);
    }

    sf::AgentSummary summary = sf::run_agent(config, gn, source, *sink);
    std::cout << "events:  " << summary.events_ingested << "\n"
              << "packets: " << summary.packets_emitted << "\n"
              << "bytes:   " << summary.bytes_uploaded << "\n";
    if (summary.error) {
        std::cerr << "error: upload incomplete: " << *summary.error << "\n";
        return 1;
    }
    return 0;
}

int cmd_serve(const std::string& store, const std::string& spool, const std::string& listen,
              double poll, bool once) {
    sf::ServeOptions options;
    options.store_dir = store;
    if (!spool.empty()) options.spool_dir = spool;
    if (!listen.empty()) {
        auto colon = listen.rfind(':');
        if (colon == std::string::npos)
            throw sf::ParseError("--listen expects host:port, got \"" + listen + "\"");
        options.listen_host = listen.substr(0, colon);
        options.listen_port = std::stoi(listen.substr(colon + 1));
    }
    options.poll_interval = poll;

    sf::IngestServer server(options);
    if (once) {
        std::size_t n = server.scan_spool();
        auto stats = server.stats();
        std::cout << "spool files ingested: " << n << "\n"
                  << "packets ingested:     " << stats.ingested << "\n"
                  << "duplicates:           " << stats.duplicates << "\n"
                  << "rejected:             " << stats.rejected << "\n";
        return stats.rejected == 0 ? 0 : 1;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.start();
    if (options.listen_port) std::cout << "listening on port " << server.port() << "\n";
    auto period = std::chrono::duration<double>(poll);
    while (!g_interrupted) {
        server.scan_spool();
        std::this_thread::sleep_for(period);
    }
    server.stop();
    auto stats = server.stats();
    std::cout << "packets ingested: " << stats.ingested << " (duplicates " << stats.duplicates
              << ", rejected " << stats.rejected << ")\n";
    return 0;
}

int cmd_analyze(const std::string& what, const std::string& store_dir, double t_win, double from,
                double to, const OutSpec& out, const std::string& targets_path, double bucket) {
    sf::PacketStore store = sf::PacketStore::load_dir(store_dir);
    if (store.empty()) throw sf::Error("store is empty: " + store_dir);

    double lo = from >= 0.0 ? from : store.min_time();
    double hi = to >= 0.0 ? to : store.max_time();
    sf::WindowGrid grid(lo, hi, t_win);

    if (what == "density") {
        auto series = sf::density(store, grid);
        out.emit(out.format() == sf::ReportFormat::Csv ? sf::density_csv(series)
                                                       : sf::density_json(series));
    } else if (what == "dwell") {
        auto report = sf::dwell_durations(store, lo, hi, bucket);
        out.emit(out.format() == sf::ReportFormat::Csv ? sf::dwell_csv(report)
                                                       : sf::dwell_json(report));
    } else if (what == "trajectories") {
        auto trajectories = sf::observed_trajectories(store, grid);
        out.emit(out.format() == sf::ReportFormat::Csv ? sf::trajectories_csv(trajectories)
                                                       : sf::trajectories_json(trajectories));
    } else if (what == "flow") {
        if (targets_path.empty()) throw sf::ParseError("analyze flow needs --targets");
        auto targets = sf::load_targets(targets_path);
        auto report = sf::flow_report(store, grid, targets);
        out.emit(out.format() == sf::ReportFormat::Csv ? sf::flow_csv(report)
                                                       : sf::flow_json(report));
    } else {
        throw sf::ParseError("unknown analysis \"" + what +
                             "\" (expected density|dwell|trajectories|flow)");
    }
    return 0;
}

int cmd_pipeline(const std::string& manifest_path, const std::string& out_dir_override,
                 std::int64_t seed_override) {
    sf::RunManifest manifest = sf::RunManifest::load(manifest_path);
    if (!out_dir_override.empty()) manifest.out_dir = out_dir_override;
    if (seed_override >= 0) manifest.seed = static_cast<std::uint64_t>(seed_override);

    sf::PipelineResult result = sf::run_pipeline(manifest);
    std::cout << "events:            " << result.events << "\n"
              << "packets:           " << result.packets << "\n"
              << "bytes uploaded:    " << result.bytes_uploaded << "\n"
              << "max |det. error|:  " << result.max_abs_detection_error << "\n"
              << "density == truth:  " << (result.density_matches_truth ? "yes" : "no") << "\n"
              << "reports:           " << result.reports_dir.string() << "\n"
              << "metrics:           " << result.metrics_path.string() << "\n";
    return 0;
}

int cmd_sweep_traffic(const std::string& scenario_path, const std::string& capture_path,
                      const std::string& t_datasets, const std::string& t_intervals,
                      const OutSpec& out, std::int64_t seed, int jobs) {
    std::vector<sf::ProbeEvent> events;
    if (!capture_path.empty()) {
        events = sf::read_capture(capture_path);
    } else {
        sf::Scenario scenario = sf::load_scenario(scenario_path);
        if (seed >= 0) scenario.seed = static_cast<std::uint64_t>(seed);
        events = sf::simulate(scenario).events;
    }
    auto cells = sf::traffic_sweep(events, parse_duration_list(t_datasets, "--t-dataset"),
                                   parse_duration_list(t_intervals, "--t-interval"), jobs);
    out.emit(sf::traffic_csv(cells));
    return 0;
}

int cmd_sweep_detection(const std::string& modes, const std::string& speeds,
                        const std::string& gn_counts, int replications, std::int64_t seed,
                        const OutSpec& out, int jobs) {
    sf::DetectionConfig config;
    config.modes = parse_modes(modes);
    config.speeds = parse_duration_list(speeds, "--speeds");
    config.gn_counts = parse_int_list(gn_counts, "--gn-counts");
    config.replications = replications;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    config.jobs = jobs;
    out.emit(sf::detection_csv(sf::detection_rate_experiment(config)));
    return 0;
}

int cmd_sweep_flow(const std::string& targets_path, const std::string& modes, double speed,
                   int replications, std::int64_t seed, double t_win, const OutSpec& out,
                   int jobs) {
    sf::FlowConfig config;
    if (!targets_path.empty()) config.targets = sf::load_targets(targets_path);
    config.modes = parse_modes(modes);
    config.speed = speed;
    config.replications = replications;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    config.t_win = t_win;
    config.jobs = jobs;
    auto runs = sf::flow_tracking_experiment(config);
    out.emit(sf::flow_sweep_csv(sf::summarize_flow(runs)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"passive probe-request people tracking: simulator, gateway agent, "
                 "server analytics and experiment sweeps"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a scenario to a capture + ground truth");
    std::string sim_scenario, sim_out = "out";
    std::int64_t sim_seed = -1;
    sim->add_option("--scenario", sim_scenario, "scenario JSON")->required();
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--seed", sim_seed, "override the scenario seed");

    // agent
    auto* agent = app.add_subcommand("agent", "replay a capture through one gateway agent");
    std::string ag_config, ag_input, ag_out = "spool";
    int ag_gn = 0;
    double ag_td = 0.0, ag_ti = 0.0;
    agent->add_option("--config", ag_config, "collection config JSON (t_dataset, t_interval)");
    agent->add_option("--gn", ag_gn, "gateway id of this agent")->required();
    agent->add_option("--input", ag_input, "capture CSV for this gateway")->required();
    agent->add_option("--out", ag_out, "spool directory or host:port");
    agent->add_option("--t-dataset", ag_td, "upload period, seconds (overrides --config)");
    agent->add_option("--t-interval", ag_ti, "record gap threshold, seconds (overrides --config)");

    // serve
    auto* serve = app.add_subcommand("serve", "spool/TCP packet ingestion daemon");
    std::string sv_store, sv_spool, sv_listen;
    double sv_poll = 0.5;
    bool sv_once = false;
    serve->add_option("--store", sv_store, "store directory")->required();
    serve->add_option("--spool", sv_spool, "spool directory to watch");
    serve->add_option("--listen", sv_listen, "host:port for TCP ingestion");
    serve->add_option("--poll", sv_poll, "spool poll interval, seconds");
    serve->add_flag("--once", sv_once, "scan the spool once and exit");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "density|dwell|trajectories|flow reports");
    std::string an_what, an_store, an_targets;
    double an_twin = 600.0, an_from = -1.0, an_to = -1.0, an_bucket = 600.0;
    OutSpec an_out;
    analyze->add_option("what", an_what, "density|dwell|trajectories|flow")->required();
    analyze->add_option("--store", an_store, "store directory")->required();
    analyze->add_option("--t-win", an_twin, "analysis window, seconds");
    analyze->add_option("--from", an_from, "range start (default: store min)");
    analyze->add_option("--to", an_to, "range end (default: store max)");
    analyze->add_option("--out", an_out.value, "csv|json for stdout, or an output path");
    analyze->add_option("--targets", an_targets, "targets JSON (flow only)");
    analyze->add_option("--bucket", an_bucket, "dwell histogram bucket, seconds");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "simulate -> agents -> store -> reports");
    std::string pl_manifest, pl_out;
    std::int64_t pl_seed = -1;
    pipeline->add_option("--manifest", pl_manifest, "run manifest JSON")->required();
    pipeline->add_option("--out-dir", pl_out, "override the manifest output directory");
    pipeline->add_option("--seed", pl_seed, "override the scenario seed");

    // sweep-traffic
    auto* traffic = app.add_subcommand("sweep-traffic", "uploaded bytes per collection config");
    std::string tr_scenario, tr_capture;
    std::string tr_td = "600,1800,3600,7200", tr_ti = "300,600,1200,1800";
    std::int64_t tr_seed = -1;
    int tr_jobs = 1;
    OutSpec tr_out;
    traffic->add_option("--scenario", tr_scenario, "scenario to simulate the capture from");
    traffic->add_option("--capture", tr_capture, "replay an existing capture instead");
    traffic->add_option("--t-dataset", tr_td, "comma-separated upload periods, seconds");
    traffic->add_option("--t-interval", tr_ti, "comma-separated gap thresholds, seconds");
    traffic->add_option("--seed", tr_seed, "override the scenario seed");
    traffic->add_option("--out", tr_out.value, "csv for stdout, or an output path");
    traffic->add_option("--jobs", tr_jobs, "concurrent sweep cells");

    // sweep-detection
    auto* detection = app.add_subcommand("sweep-detection",
                                         "detection rate vs walking speed and gateway count");
    std::string dt_modes = "all", dt_speeds = "1.25,2.25,2.6,4.5", dt_counts = "1,2,3,4";
    int dt_reps = 10, dt_jobs = 1;
    std::int64_t dt_seed = -1;
    OutSpec dt_out;
    detection->add_option("--modes", dt_modes, "all, or wifi/screen pairs");
    detection->add_option("--speeds", dt_speeds, "comma-separated speeds, m/s");
    detection->add_option("--gn-counts", dt_counts, "comma-separated gateway counts");
    detection->add_option("--replications", dt_reps, "replications per cell");
    detection->add_option("--seed", dt_seed, "experiment seed");
    detection->add_option("--out", dt_out.value, "csv for stdout, or an output path");
    detection->add_option("--jobs", dt_jobs, "concurrent sweep cells");

    // sweep-flow
    auto* flow = app.add_subcommand("sweep-flow", "tracking accuracy and trajectory recognition");
    std::string fl_targets, fl_modes = "all";
    double fl_speed = sf::kSpeedNormal, fl_twin = 30.0;
    int fl_reps = 10, fl_jobs = 1;
    std::int64_t fl_seed = -1;
    OutSpec fl_out;
    flow->add_option("--targets", fl_targets, "targets JSON (default: canonical pair)");
    flow->add_option("--modes", fl_modes, "all, or wifi/screen pairs");
    flow->add_option("--speed", fl_speed, "walking speed, m/s");
    flow->add_option("--replications", fl_reps, "replications per (mode, target)");
    flow->add_option("--seed", fl_seed, "experiment seed");
    flow->add_option("--t-win", fl_twin, "analysis window, seconds");
    flow->add_option("--out", fl_out.value, "csv for stdout, or an output path");
    flow->add_option("--jobs", fl_jobs, "concurrent runs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_scenario, sim_out, sim_seed);
        if (agent->parsed()) return cmd_agent(ag_config, ag_gn, ag_input, ag_out, ag_td, ag_ti);
        if (serve->parsed()) return cmd_serve(sv_store, sv_spool, sv_listen, sv_poll, sv_once);
        if (analyze->parsed())
            return cmd_analyze(an_what, an_store, an_twin, an_from, an_to, an_out, an_targets,
                               an_bucket);
        if (pipeline->parsed()) return cmd_pipeline(pl_manifest, pl_out, pl_seed);
        if (traffic->parsed())
            return cmd_sweep_traffic(tr_scenario, tr_capture, tr_td, tr_ti, tr_out, tr_seed,
                                     tr_jobs);
        if (detection->parsed())
            return cmd_sweep_detection(dt_modes, dt_speeds, dt_counts, dt_reps, dt_seed, dt_out,
                                       dt_jobs);
        if (flow->parsed())
            return cmd_sweep_flow(fl_targets, fl_modes, fl_speed, fl_reps, fl_seed, fl_twin,
                                  fl_out, fl_jobs);
    } catch (const sf::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
