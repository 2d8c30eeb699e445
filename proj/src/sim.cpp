#include "senseflow/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "senseflow/rng.hpp"

namespace senseflow {

namespace {
using ordered_json = nlohmann::ordered_json;
constexpr double kEps = 1e-9;
} // namespace

Point PhoneTruth::position_at(Timestamp t) const {
    if (timeline.empty()) return {0.0, 0.0};
    if (t <= timeline.front().first) return timeline.front().second;
    for (std::size_t i = 1; i < timeline.size(); ++i) {
        if (t <= timeline[i].first) {
            const auto& [t0, p0] = timeline[i - 1];
            const auto& [t1, p1] = timeline[i];
            double f = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
            return {p0.x + f * (p1.x - p0.x), p0.y + f * (p1.y - p0.y)};
        }
    }
    return timeline.back().second;
}

namespace {

std::vector<std::pair<Timestamp, Point>> build_timeline(const MobilityPlan& plan,
                                                        Duration duration) {
    std::vector<std::pair<Timestamp, Point>> knots;
    knots.emplace_back(plan.start_time, plan.waypoints.front());
    if (plan.kind == MobilityPlan::Kind::Walk) {
        double t = plan.start_time;
        for (std::size_t i = 1; i < plan.waypoints.size(); ++i) {
            t += distance(plan.waypoints[i - 1], plan.waypoints[i]) / plan.speed;
            knots.emplace_back(t, plan.waypoints[i]);
        }
    }
    if (knots.back().first < duration) knots.emplace_back(duration, knots.back().second);
    return knots;
}

// In-coverage sub-intervals of one timeline segment against one gateway:
// position is linear in t, so |pos(t) - g|^2 <= r^2 is a quadratic
// inequality solved exactly.
void append_segment_coverage(Timestamp t0, Point p0, Timestamp t1, Point p1, Point g, double r,
                             std::vector<std::pair<Timestamp, Timestamp>>& out) {
    double dt = t1 - t0;
    if (dt <= 0.0) return;
    double vx = (p1.x - p0.x) / dt, vy = (p1.y - p0.y) / dt;
    double ex = p0.x - g.x, ey = p0.y - g.y;
    double a = vx * vx + vy * vy;
    double b = 2.0 * (ex * vx + ey * vy);
    double c = ex * ex + ey * ey - r * r;
    if (a < kEps) {
        if (c <= 0.0) out.emplace_back(t0, t1);
        return;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    double sq = std::sqrt(disc);
    double tau1 = (-b - sq) / (2.0 * a);
    double tau2 = (-b + sq) / (2.0 * a);
    double lo = std::max(0.0, tau1), hi = std::min(dt, tau2);
    if (lo <= hi) out.emplace_back(t0 + lo, t0 + hi);
}

std::vector<CoverageInterval> coverage_intervals(const PhoneTruth& phone,
                                                 const std::vector<GatewayInfo>& gateways,
                                                 double radius) {
    std::vector<CoverageInterval> result;
    for (const auto& g : gateways) {
        std::vector<std::pair<Timestamp, Timestamp>> raw;
        for (std::size_t i = 1; i < phone.timeline.size(); ++i)
            append_segment_coverage(phone.timeline[i - 1].first, phone.timeline[i - 1].second,
                                    phone.timeline[i].first, phone.timeline[i].second,
                                    *g.position, radius, raw);
        // merge touching intervals
        std::vector<std::pair<Timestamp, Timestamp>> merged;
        for (const auto& iv : raw) {
            if (!merged.empty() && iv.first <= merged.back().second + kEps)
                merged.back().second = std::max(merged.back().second, iv.second);
            else
                merged.push_back(iv);
        }
        for (const auto& iv : merged) result.push_back({g.id, iv.first, iv.second});
    }
    return result;
}

/// Nearest gateway within coverage at position p; ties to the smallest id.
std::optional<GatewayId> nearest_in_coverage(Point p, const std::vector<GatewayInfo>& gateways,
                                             double radius) {
    std::optional<GatewayId> best;
    double best_d = 0.0;
    for (const auto& g : gateways) {
        double d = distance(p, *g.position);
        if (d > radius) continue;
        if (!best || d < best_d || (d == best_d && g.id < *best)) {
            best = g.id;
            best_d = d;
        }
    }
    return best;
}

GatewaySeq planted_trajectory(const PhoneTruth& phone, const MobilityPlan& plan,
                              const std::vector<GatewayInfo>& gateways, double radius) {
    if (plan.kind != MobilityPlan::Kind::Walk) return {};
    GatewaySeq planted;
    double end = plan.end_time();
    for (double t = plan.start_time; t <= end; t += 1.0) {
        auto gn = nearest_in_coverage(phone.position_at(t), gateways, radius);
        if (gn && (planted.empty() || planted.back() != *gn)) planted.push_back(*gn);
    }
    return planted;
}

} // namespace

std::map<std::pair<GatewayId, Timestamp>, std::uint32_t> true_headcount(
    const GroundTruthLog& truth, const WindowGrid& grid) {
    std::map<std::pair<GatewayId, Timestamp>, std::uint32_t> counts;
    for (const auto& g : truth.gateways)
        for (std::size_t k = 0; k < grid.count(); ++k) counts[{g.id, grid.start_of(k)}] = 0;

    double radius = truth.channel.coverage_radius;
    for (const auto& phone : truth.phones) {
        bool moving = phone.timeline.size() > 1 &&
                      std::any_of(phone.timeline.begin() + 1, phone.timeline.end(),
                                  [&](const auto& knot) {
                                      return knot.second.x != phone.timeline.front().second.x ||
                                             knot.second.y != phone.timeline.front().second.y;
                                  });
        for (std::size_t k = 0; k < grid.count(); ++k) {
            double lo = std::max(grid.start_of(k), phone.present_from);
            double hi = std::min(grid.end_of(k), truth.duration);
            if (lo >= hi) continue;
            std::set<GatewayId> seen;
            if (!moving) {
                auto gn = nearest_in_coverage(phone.position_at(lo), truth.gateways, radius);
                if (gn) seen.insert(*gn);
            } else {
                for (double t = lo; t < hi; t += 1.0) {
                    auto gn = nearest_in_coverage(phone.position_at(t), truth.gateways, radius);
                    if (gn) seen.insert(*gn);
                }
            }
            for (GatewayId gn : seen) counts[{gn, grid.start_of(k)}] += 1;
        }
    }
    return counts;
}

SimResult simulate(const Scenario& scenario) {
    scenario.validate();

    SimResult result;
    result.truth.scenario_name = scenario.name;
    result.truth.duration = scenario.duration;
    result.truth.channel = scenario.channel;
    result.truth.gateways = scenario.gateways;

    const double radius = scenario.channel.coverage_radius;
    const double sigma = scenario.channel.shadowing_sigma;

    for (std::size_t pi = 0; pi < scenario.phones.size(); ++pi) {
        const SimPhone& phone = scenario.phones[pi];

        PhoneTruth truth;
        truth.mac = phone.mac;
        truth.os = phone.model.os;
        truth.screen = phone.model.screen;
        truth.wifi = phone.model.wifi;
        truth.present_from = phone.plan.start_time;
        truth.timeline = build_timeline(phone.plan, scenario.duration);
        truth.coverage = coverage_intervals(truth, scenario.gateways, radius);
        truth.planted = planted_trajectory(truth, phone.plan, scenario.gateways, radius);
        if (phone.model.radio_off()) {
            result.truth.phones.push_back(std::move(truth));
            continue; // transceiver is down: present, but silent
        }

        std::mt19937_64 rng(derive_seed(scenario.seed, pi));
        const double interval = phone.model.effective_interval();
        const double jitter = phone.model.jitter_fraction;

        // burst k fires at start + k*interval + jitter_sum*interval, which
        // keeps zero-jitter emission times free of accumulation drift
        double jitter_sum = 0.0;
        for (std::uint64_t k = 0;; ++k) {
            double t = phone.plan.start_time +
                       (static_cast<double>(k) + jitter_sum) * interval;
            if (t >= scenario.duration) break;
            for (int b = 0; b < phone.model.burst_size; ++b) {
                double ft = t + static_cast<double>(b) * phone.model.burst_spacing;
                if (ft >= scenario.duration) break;
                Point pos = truth.position_at(ft);
                for (const auto& g : scenario.gateways) {
                    double d = distance(pos, *g.position);
                    if (!scenario.channel.in_coverage(d)) continue;
                    double rssi = scenario.channel.expected_rssi(d);
                    if (sigma > 0.0) rssi += gaussian(rng, 0.0, sigma);
                    result.events.push_back(
                        {ft, phone.mac, scenario.channel.clamp_rssi(rssi), g.id});
                }
            }
            if (jitter > 0.0) jitter_sum += uniform_in(rng, -jitter, jitter);
        }
        result.truth.phones.push_back(std::move(truth));
    }

    std::sort(result.events.begin(), result.events.end(),
              [](const ProbeEvent& a, const ProbeEvent& b) {
                  if (a.ts != b.ts) return a.ts < b.ts;
                  if (a.gn != b.gn) return a.gn < b.gn;
                  return a.mac < b.mac;
              });
    return result;
}

std::string ground_truth_to_json(const GroundTruthLog& truth) {
    ordered_json doc;
    doc["v"] = 1;
    doc["name"] = truth.scenario_name;
    doc["duration"] = truth.duration;
    doc["channel"] = {{"rssi_at_reference", truth.channel.rssi_at_reference},
                      {"path_loss_exponent", truth.channel.path_loss_exponent},
                      {"shadowing_sigma", truth.channel.shadowing_sigma},
                      {"coverage_radius", truth.channel.coverage_radius}};
    doc["gateways"] = ordered_json::array();
    for (const auto& g : truth.gateways) {
        ordered_json jg;
        jg["id"] = g.id;
        if (!g.label.empty()) jg["label"] = g.label;
        jg["x"] = g.position ? g.position->x : 0.0;
        jg["y"] = g.position ? g.position->y : 0.0;
        doc["gateways"].push_back(std::move(jg));
    }
    doc["phones"] = ordered_json::array();
    for (const auto& p : truth.phones) {
        ordered_json jp;
        jp["mac"] = p.mac.str();
        jp["os"] = to_string(p.os);
        jp["screen"] = to_string(p.screen);
        jp["wifi"] = to_string(p.wifi);
        jp["present_from"] = p.present_from;
        jp["timeline"] = ordered_json::array();
        for (const auto& [t, pos] : p.timeline)
            jp["timeline"].push_back({{"t", t}, {"x", pos.x}, {"y", pos.y}});
        jp["coverage"] = ordered_json::array();
        for (const auto& iv : p.coverage)
            jp["coverage"].push_back({{"gn", iv.gn}, {"from", iv.from}, {"to", iv.to}});
        jp["planted"] = p.planted;
        doc["phones"].push_back(std::move(jp));
    }
    return doc.dump(2) + "\n";
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruthLog& truth) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string());
    out << ground_truth_to_json(truth);
    if (!out) throw IoError("write failed: " + path.string());
}

GroundTruthLog load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open ground-truth file: " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + std::string(e.what()));
    }

    GroundTruthLog truth;
    truth.scenario_name = doc.value("name", std::string());
    truth.duration = doc.at("duration").get<double>();
    const auto& c = doc.at("channel");
    truth.channel.rssi_at_reference = c.at("rssi_at_reference").get<double>();
    truth.channel.path_loss_exponent = c.at("path_loss_exponent").get<double>();
    truth.channel.shadowing_sigma = c.at("shadowing_sigma").get<double>();
    truth.channel.coverage_radius = c.at("coverage_radius").get<double>();
    for (const auto& jg : doc.at("gateways")) {
        GatewayInfo g;
        g.id = jg.at("id").get<GatewayId>();
        g.label = jg.value("label", std::string());
        g.position = Point{jg.at("x").get<double>(), jg.at("y").get<double>()};
        truth.gateways.push_back(std::move(g));
    }
    for (const auto& jp : doc.at("phones")) {
        PhoneTruth p;
        p.mac = MacAddress::parse(jp.at("mac").get<std::string>());
        p.os = phone_os_from_string(jp.at("os").get<std::string>());
        p.screen = screen_from_string(jp.at("screen").get<std::string>());
        p.wifi = wifi_from_string(jp.at("wifi").get<std::string>());
        p.present_from = jp.at("present_from").get<double>();
        for (const auto& k : jp.at("timeline"))
            p.timeline.emplace_back(k.at("t").get<double>(),
                                    Point{k.at("x").get<double>(), k.at("y").get<double>()});
        for (const auto& iv : jp.at("coverage"))
            p.coverage.push_back({iv.at("gn").get<GatewayId>(), iv.at("from").get<double>(),
                                  iv.at("to").get<double>()});
        for (const auto& gn : jp.at("planted")) p.planted.push_back(gn.get<GatewayId>());
        truth.phones.push_back(std::move(p));
    }
    return truth;
}

} // namespace senseflow
