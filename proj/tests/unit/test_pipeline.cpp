#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "senseflow/catalog.hpp"
#include "senseflow/pipeline.hpp"
#include "support/oracles.hpp"

using namespace senseflow;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Scenario tiny_scenario() {
    Scenario s;
    s.name = "tiny";
    s.duration = 1800.0;
    s.seed = 21;
    s.channel = {-40.0, 2.7, 0.0, 30.0};
    s.gateways.push_back({1, "a", Point{0.0, 0.0}});
    s.gateways.push_back({2, "b", Point{60.0, 0.0}});
    for (std::uint32_t i = 1; i <= 3; ++i) {
        SimPhone p;
        p.mac = phone_mac(i);
        p.model.os = PhoneOs::Android;
        p.model.wifi = WifiState::NonRegistered;
        p.model.screen = Screen::On;
        p.plan.kind = MobilityPlan::Kind::Stationary;
        p.plan.start_time = 100.0 * i;
        p.plan.waypoints = {{i % 2 == 0 ? 58.0 : 2.0, static_cast<double>(i)}};
        s.phones.push_back(p);
    }
    return s;
}

RunManifest manifest_for(const std::filesystem::path& dir, const Scenario& s) {
    save_scenario(dir / "scenario.json", s);
    RunManifest m;
    m.scenario_path = dir / "scenario.json";
    m.collection = {600.0, 300.0};
    m.analysis.t_win = 600.0;
    m.out_dir = dir / "out";
    return m;
}

} // namespace

TEST_CASE("pipeline produces the full report bundle with exact density") {
    oracle::TempDir dir("pipeline");
    RunManifest m = manifest_for(dir.path(), tiny_scenario());
    PipelineResult r = run_pipeline(m);

    CHECK(std::filesystem::exists(r.capture_path));
    CHECK(std::filesystem::exists(r.ground_truth_path));
    CHECK(std::filesystem::exists(r.reports_dir / "density.csv"));
    CHECK(std::filesystem::exists(r.reports_dir / "dwell.csv"));
    CHECK(std::filesystem::exists(r.reports_dir / "trajectories.csv"));
    CHECK(std::filesystem::exists(r.metrics_path));
    CHECK(r.events > 0);
    CHECK(r.packets > 0);
    CHECK(r.max_abs_detection_error == 0.0);
    CHECK(r.density_matches_truth);

    auto metrics = nlohmann::json::parse(slurp(r.metrics_path));
    CHECK(metrics["detection_error"]["counts"]["zero"].get<int>() > 0);
    CHECK(metrics["detection_error"]["counts"]["neg"].get<int>() == 0);
    CHECK(metrics["detection_error"]["counts"]["pos"].get<int>() == 0);
}

TEST_CASE("pipeline reruns are byte-identical") {
    oracle::TempDir dir("pipeline_det");
    RunManifest m = manifest_for(dir.path(), tiny_scenario());

    run_pipeline(m);
    auto capture1 = slurp(m.out_dir / "capture.csv");
    auto metrics1 = slurp(m.out_dir / "metrics.json");
    auto density1 = slurp(m.out_dir / "reports" / "density.csv");

    run_pipeline(m);
    CHECK(slurp(m.out_dir / "capture.csv") == capture1);
    CHECK(slurp(m.out_dir / "metrics.json") == metrics1);
    CHECK(slurp(m.out_dir / "reports" / "density.csv") == density1);
}

TEST_CASE("pipeline with an empty capture still succeeds with all-zero reports") {
    oracle::TempDir dir("pipeline_empty");
    Scenario s = tiny_scenario();
    s.phones.clear();
    RunManifest m = manifest_for(dir.path(), s);
    PipelineResult r = run_pipeline(m);
    CHECK(r.events == 0);
    CHECK(r.packets == 0);
    CHECK(r.density_matches_truth); // nothing expected, nothing detected
    CHECK(std::filesystem::exists(r.metrics_path));
}

TEST_CASE("a missing scenario fails in the simulate stage and cleans up") {
    oracle::TempDir dir("pipeline_missing");
    RunManifest m;
    m.scenario_path = dir.path() / "nope.json";
    m.out_dir = dir.path() / "out";
    try {
        run_pipeline(m);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "simulate");
    }
    CHECK(!std::filesystem::exists(m.out_dir / "capture.csv"));
}

TEST_CASE("manifest json parsing, overrides and target lists") {
    oracle::TempDir dir("manifest");
    save_scenario(dir.path() / "scenario.json", tiny_scenario());
    std::ofstream(dir.path() / "m.json") << R"({
        "scenario": "scenario.json",
        "collection": {"t_dataset": 300.0, "t_interval": 120.0},
        "analysis": {"t_win": 60.0, "targets": [[1,2],[2,1]]},
        "out_dir": "out",
        "seed": 5
    })";
    RunManifest m = RunManifest::load(dir.path() / "m.json");
    CHECK(m.scenario_path == dir.path() / "scenario.json");
    CHECK(m.collection.t_dataset == 300.0);
    CHECK(m.analysis.t_win == 60.0);
    REQUIRE(m.analysis.targets.size() == 2);
    CHECK(m.analysis.targets[1] == GatewaySeq{2, 1});
    CHECK(m.seed == 5);

    PipelineResult r = run_pipeline(m);
    CHECK(std::filesystem::exists(r.reports_dir / "flow.csv"));
}

TEST_CASE("manifest parse errors name the offending field") {
    oracle::TempDir dir("manifest_bad");
    std::ofstream(dir.path() / "m.json") << R"({"out_dir": "out"})";
    CHECK_THROWS_WITH_AS(RunManifest::load(dir.path() / "m.json"),
                         doctest::Contains("scenario"), ParseError);
}

TEST_CASE("a manifest referencing a missing capture fails in the agent stage") {
    oracle::TempDir dir("pipeline_nocapture");
    RunManifest m;
    m.capture = dir.path() / "missing.csv";
    m.out_dir = dir.path() / "out";
    try {
        run_pipeline(m);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "agent");
    }
}

TEST_CASE("replaying a recorded capture reproduces the scenario-driven reports") {
    oracle::TempDir dir("pipeline_replay");
    RunManifest scenario_run = manifest_for(dir.path(), tiny_scenario());
    run_pipeline(scenario_run);

    RunManifest replay;
    replay.capture = scenario_run.out_dir / "capture.csv";
    replay.ground_truth = scenario_run.out_dir / "ground_truth.json";
    replay.collection = scenario_run.collection;
    replay.analysis = scenario_run.analysis;
    replay.out_dir = dir.path() / "replay_out";
    PipelineResult r = run_pipeline(replay);

    CHECK(r.density_matches_truth);
    CHECK(slurp(replay.out_dir / "reports" / "density.csv") ==
          slurp(scenario_run.out_dir / "reports" / "density.csv"));
}

TEST_CASE("flow manifest: dense probing tracks every phone perfectly") {
    oracle::TempDir dir("pipeline_flow");
    Scenario s = flow_walk_scenario(flow_target_straight(), WifiState::NonRegistered,
                                    Screen::On, kSpeedNormal, 19);
    save_scenario(dir.path() / "flow.json", s);
    RunManifest m;
    m.scenario_path = dir.path() / "flow.json";
    m.collection = {600.0, 300.0};
    m.analysis.t_win = 30.0;
    m.analysis.targets = {flow_target_straight(), flow_target_detour()};
    m.out_dir = dir.path() / "out";
    PipelineResult r = run_pipeline(m);

    auto metrics = nlohmann::json::parse(slurp(r.metrics_path));
    REQUIRE(metrics.contains("tracking"));
    for (const auto& phone : metrics["tracking"]["phones"])
        CHECK(phone["delta"].get<double>() == 1.0);
    REQUIRE(metrics.contains("recognition"));
    CHECK(metrics["recognition"]["targets"][0]["recognized"].get<int>() == 5);
    CHECK(metrics["recognition"]["ambiguous"].get<int>() == 0);
    CHECK(std::filesystem::exists(r.reports_dir / "flow.csv"));
}
