#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "senseflow/catalog.hpp"
#include "senseflow/packet_io.hpp"
#include "senseflow/pipeline.hpp"

namespace py = pybind11;
namespace sf = senseflow;

namespace {

py::dict summary_dict(const sf::PipelineResult& r) {
    py::dict d;
    d["capture"] = r.capture_path.string();
    d["ground_truth"] = r.ground_truth_path.string();
    d["packets_dir"] = r.packets_dir.string();
    d["reports_dir"] = r.reports_dir.string();
    d["metrics"] = r.metrics_path.string();
    d["events"] = r.events;
    d["packets"] = r.packets;
    d["bytes_uploaded"] = r.bytes_uploaded;
    d["max_abs_detection_error"] = r.max_abs_detection_error;
    d["density_matches_truth"] = r.density_matches_truth;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "passive probe-request people tracking: core operations";

    py::register_exception<sf::Error>(m, "SenseflowError");

    // trajectory operations
    m.def("lcs", &sf::lcs, py::arg("a"), py::arg("b"),
          "longest common subsequence of two gateway-id sequences");
    m.def("lcs_length", &sf::lcs_length, py::arg("a"), py::arg("b"));
    m.def("matches_trajectory", &sf::matches_trajectory, py::arg("x"), py::arg("j"),
          "true iff the targeting trajectory j is a subsequence of x");
    m.def(
        "recognize_trajectory",
        [](const sf::GatewaySeq& x, const std::vector<sf::GatewaySeq>& candidates)
            -> py::object {
            auto r = sf::recognize_trajectory(x, candidates);
            if (!r) return py::none();
            return py::int_(*r);
        },
        py::arg("x"), py::arg("candidates"),
        "index of the candidate with the strictly longest LCS, or None when ambiguous");

    // metrics
    m.def("detection_error", &sf::detection_error, py::arg("detected"), py::arg("truth"));
    m.def("tracking_accuracy", &sf::tracking_accuracy, py::arg("observed"), py::arg("planted"));

    // simulator and pipeline over files
    m.def(
        "simulate",
        [](const std::string& scenario_path, const std::string& capture_path,
           const std::string& ground_truth_path) {
            sf::Scenario scenario = sf::load_scenario(scenario_path);
            sf::SimResult sim = sf::simulate(scenario);
            sf::write_capture(capture_path, sim.events);
            sf::write_ground_truth(ground_truth_path, sim.truth);
            py::dict d;
            d["events"] = sim.events.size();
            d["phones"] = scenario.phones.size();
            d["gateways"] = scenario.gateways.size();
            return d;
        },
        py::arg("scenario"), py::arg("capture"), py::arg("ground_truth"),
        "run a scenario file to a capture CSV and a ground-truth JSON");
    m.def(
        "run_agent",
        [](const std::string& capture_path, int gn, double t_dataset, double t_interval,
           const std::string& spool_dir) {
            sf::CaptureFileSource source(capture_path);
            sf::SpoolSink sink{std::filesystem::path(spool_dir)};
            sf::AgentSummary s =
                sf::run_agent({t_dataset, t_interval}, gn, source, sink);
            py::dict d;
            d["events"] = s.events_ingested;
            d["packets"] = s.packets_emitted;
            d["bytes"] = s.bytes_uploaded;
            return d;
        },
        py::arg("capture"), py::arg("gn"), py::arg("t_dataset"), py::arg("t_interval"),
        py::arg("spool_dir"), "replay one gateway's capture into a spool directory");
    m.def(
        "run_pipeline",
        [](const std::string& manifest_path) {
            return summary_dict(sf::run_pipeline(sf::RunManifest::load(manifest_path)));
        },
        py::arg("manifest"), "end-to-end run from a manifest JSON");

    // reports straight from a store directory
    m.def(
        "density",
        [](const std::string& store_dir, double t_win, double from, double to) {
            sf::PacketStore store = sf::PacketStore::load_dir(store_dir);
            sf::DensitySeries series = sf::density(store, sf::WindowGrid(from, to, t_win));
            std::vector<std::tuple<int, double, unsigned>> rows;
            for (sf::GatewayId gn : series.gateways)
                for (double ws : series.window_starts)
                    rows.emplace_back(gn, ws, series.at(gn, ws));
            return rows;
        },
        py::arg("store_dir"), py::arg("t_win"), py::arg("from_ts"), py::arg("to_ts"),
        "unique-phone counts as (gn, window_start, count) rows");
    m.def(
        "observed_trajectory",
        [](const std::string& store_dir, const std::string& mac, double t_win, double from,
           double to) {
            sf::PacketStore store = sf::PacketStore::load_dir(store_dir);
            auto t = sf::observed_trajectory(store, sf::MacAddress::parse(mac),
                                             sf::WindowGrid(from, to, t_win));
            return t.ids();
        },
        py::arg("store_dir"), py::arg("mac"), py::arg("t_win"), py::arg("from_ts"),
        py::arg("to_ts"), "one phone's gateway sequence after overhearing resolution");

    m.def("canonical_targets", [] {
        return std::vector<sf::GatewaySeq>{sf::flow_target_straight(), sf::flow_target_detour()};
    });

    m.attr("__version__") = "1.0.0";
}
