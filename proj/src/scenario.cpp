#include "senseflow/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace senseflow {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string to_string(PhoneOs os) {
    switch (os) {
        case PhoneOs::Ios: return "ios";
        case PhoneOs::Android: return "android";
        case PhoneOs::Windows: return "windows";
    }
    return "?";
}

std::string to_string(Screen s) { return s == Screen::On ? "on" : "off"; }

std::string to_string(WifiState w) {
    return w == WifiState::Registered ? "registered" : "non_registered";
}

PhoneOs phone_os_from_string(const std::string& s) {
    if (s == "ios") return PhoneOs::Ios;
    if (s == "android") return PhoneOs::Android;
    if (s == "windows") return PhoneOs::Windows;
    throw ParseError("os: expected ios|android|windows, got \"" + s + "\"");
}

Screen screen_from_string(const std::string& s) {
    if (s == "on") return Screen::On;
    if (s == "off") return Screen::Off;
    throw ParseError("screen: expected on|off, got \"" + s + "\"");
}

WifiState wifi_from_string(const std::string& s) {
    if (s == "registered") return WifiState::Registered;
    if (s == "non_registered") return WifiState::NonRegistered;
    throw ParseError("wifi: expected registered|non_registered, got \"" + s + "\"");
}

double default_probe_interval(PhoneOs os, WifiState wifi, Screen screen) {
    // Measured averages per OS and operational mode, in seconds:
    // columns are (non-registered, screen on/off), (registered, screen on/off).
    static constexpr double kMatrix[3][4] = {
        {70.6, 109.8, 1200.8, 1204.4}, // ios
        {0.8, 1.0, 2.11, 2.15},        // android
        {10.9, 13.9, 1200.8, 1204.4},  // windows
    };
    int row = os == PhoneOs::Ios ? 0 : os == PhoneOs::Android ? 1 : 2;
    int col = (wifi == WifiState::Registered ? 2 : 0) + (screen == Screen::Off ? 1 : 0);
    return kMatrix[row][col];
}

void PhoneModel::validate() const {
    if (mean_probe_interval < 0.0) throw InvariantError("mean_probe_interval must be > 0");
    if (jitter_fraction < 0.0 || jitter_fraction >= 1.0)
        throw InvariantError("jitter_fraction must be in [0, 1)");
    if (burst_size < 1) throw InvariantError("burst_size must be >= 1");
    if (burst_spacing < 0.0) throw InvariantError("burst_spacing must be >= 0");
}

void Scenario::validate() const {
    if (!(duration > 0.0)) throw InvariantError("scenario duration must be > 0");
    channel.validate();
    if (gateways.empty()) throw InvariantError("scenario needs at least one gateway");
    std::set<GatewayId> ids;
    for (const auto& g : gateways) {
        if (g.id < 0) throw InvariantError("gateway ids must be non-negative");
        if (!ids.insert(g.id).second)
            throw InvariantError("duplicate gateway id " + std::to_string(g.id));
        if (!g.position) throw InvariantError("simulated gateways need a position");
    }
    std::set<MacAddress> macs;
    for (const auto& p : phones) {
        p.model.validate();
        p.plan.validate();
        if (!macs.insert(p.mac).second)
            throw InvariantError("duplicate phone mac " + p.mac.str());
    }
}

MacAddress phone_mac(std::uint32_t index) {
    MacAddress mac;
    mac.octets = {0x02, 0x00, 0x00, static_cast<std::uint8_t>((index >> 16) & 0xff),
                  static_cast<std::uint8_t>((index >> 8) & 0xff),
                  static_cast<std::uint8_t>(index & 0xff)};
    return mac;
}

namespace {

double get_number(const ordered_json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(where + field + ": missing");
    if (!it->is_number()) throw ParseError(where + field + ": expected a number");
    return it->get<double>();
}

std::string get_string(const ordered_json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(where + field + ": missing");
    if (!it->is_string()) throw ParseError(where + field + ": expected a string");
    return it->get<std::string>();
}

MobilityPlan parse_plan(const ordered_json& j, const std::string& where) {
    MobilityPlan plan;
    std::string kind = get_string(j, "kind", where);
    plan.start_time = j.contains("start_time") ? get_number(j, "start_time", where) : 0.0;
    if (kind == "stationary") {
        plan.kind = MobilityPlan::Kind::Stationary;
        plan.waypoints = {{get_number(j, "x", where), get_number(j, "y", where)}};
    } else if (kind == "walk") {
        plan.kind = MobilityPlan::Kind::Walk;
        if (j.contains("speed_name"))
            plan.speed = speed_by_name(get_string(j, "speed_name", where));
        else
            plan.speed = get_number(j, "speed", where);
        auto it = j.find("waypoints");
        if (it == j.end() || !it->is_array())
            throw ParseError(where + "waypoints: expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const auto& wp = (*it)[k];
            std::string wkey = where + "waypoints[" + std::to_string(k) + "].";
            plan.waypoints.push_back({get_number(wp, "x", wkey), get_number(wp, "y", wkey)});
        }
    } else {
        throw ParseError(where + "kind: expected stationary|walk, got \"" + kind + "\"");
    }
    plan.validate();
    return plan;
}

} // namespace

Scenario scenario_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario: expected a JSON object");

    Scenario s;
    if (doc.contains("name")) s.name = get_string(doc, "name", "");
    s.duration = get_number(doc, "duration", "");
    s.seed = static_cast<std::uint64_t>(get_number(doc, "seed", ""));

    if (doc.contains("channel")) {
        const auto& c = doc["channel"];
        if (!c.is_object()) throw ParseError("channel: expected an object");
        if (c.contains("rssi_at_reference"))
            s.channel.rssi_at_reference = get_number(c, "rssi_at_reference", "channel.");
        if (c.contains("path_loss_exponent"))
            s.channel.path_loss_exponent = get_number(c, "path_loss_exponent", "channel.");
        if (c.contains("shadowing_sigma"))
            s.channel.shadowing_sigma = get_number(c, "shadowing_sigma", "channel.");
        if (c.contains("coverage_radius"))
            s.channel.coverage_radius = get_number(c, "coverage_radius", "channel.");
    }

    auto gws = doc.find("gateways");
    if (gws == doc.end() || !gws->is_array()) throw ParseError("gateways: expected an array");
    for (std::size_t i = 0; i < gws->size(); ++i) {
        const auto& g = (*gws)[i];
        std::string where = "gateways[" + std::to_string(i) + "].";
        GatewayInfo info;
        info.id = static_cast<GatewayId>(get_number(g, "id", where));
        if (g.contains("label")) info.label = get_string(g, "label", where);
        info.position = Point{get_number(g, "x", where), get_number(g, "y", where)};
        s.gateways.push_back(std::move(info));
    }

    auto phones = doc.find("phones");
    if (phones == doc.end() || !phones->is_array()) throw ParseError("phones: expected an array");
    for (std::size_t i = 0; i < phones->size(); ++i) {
        const auto& p = (*phones)[i];
        std::string where = "phones[" + std::to_string(i) + "].";
        SimPhone phone;
        try {
            phone.mac = MacAddress::parse(get_string(p, "mac", where));
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        }
        phone.model.os = phone_os_from_string(get_string(p, "os", where));
        phone.model.screen = screen_from_string(get_string(p, "screen", where));
        phone.model.wifi = wifi_from_string(get_string(p, "wifi", where));
        if (p.contains("mean_probe_interval"))
            phone.model.mean_probe_interval = get_number(p, "mean_probe_interval", where);
        if (p.contains("jitter_fraction"))
            phone.model.jitter_fraction = get_number(p, "jitter_fraction", where);
        if (p.contains("radio_off_when_screen_off")) {
            if (!p["radio_off_when_screen_off"].is_boolean())
                throw ParseError(where + "radio_off_when_screen_off: expected a boolean");
            phone.model.radio_off_when_screen_off = p["radio_off_when_screen_off"].get<bool>();
        }
        if (p.contains("burst_size"))
            phone.model.burst_size = static_cast<int>(get_number(p, "burst_size", where));
        auto it = p.find("mobility");
        if (it == p.end() || !it->is_object())
            throw ParseError(where + "mobility: expected an object");
        phone.plan = parse_plan(*it, where + "mobility.");
        s.phones.push_back(std::move(phone));
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string scenario_to_json(const Scenario& s) {
    ordered_json doc;
    doc["v"] = 1;
    doc["name"] = s.name;
    doc["duration"] = s.duration;
    doc["seed"] = s.seed;
    doc["channel"] = {{"rssi_at_reference", s.channel.rssi_at_reference},
                      {"path_loss_exponent", s.channel.path_loss_exponent},
                      {"shadowing_sigma", s.channel.shadowing_sigma},
                      {"coverage_radius", s.channel.coverage_radius}};
    doc["gateways"] = ordered_json::array();
    for (const auto& g : s.gateways) {
        ordered_json jg;
        jg["id"] = g.id;
        if (!g.label.empty()) jg["label"] = g.label;
        jg["x"] = g.position ? g.position->x : 0.0;
        jg["y"] = g.position ? g.position->y : 0.0;
        doc["gateways"].push_back(std::move(jg));
    }
    doc["phones"] = ordered_json::array();
    for (const auto& p : s.phones) {
        ordered_json jp;
        jp["mac"] = p.mac.str();
        jp["os"] = to_string(p.model.os);
        jp["screen"] = to_string(p.model.screen);
        jp["wifi"] = to_string(p.model.wifi);
        if (p.model.mean_probe_interval > 0.0)
            jp["mean_probe_interval"] = p.model.mean_probe_interval;
        jp["jitter_fraction"] = p.model.jitter_fraction;
        if (p.model.radio_off_when_screen_off)
            jp["radio_off_when_screen_off"] = *p.model.radio_off_when_screen_off;
        if (p.model.burst_size != 1) jp["burst_size"] = p.model.burst_size;
        ordered_json jm;
        if (p.plan.kind == MobilityPlan::Kind::Stationary) {
            jm["kind"] = "stationary";
            jm["start_time"] = p.plan.start_time;
            jm["x"] = p.plan.waypoints.front().x;
            jm["y"] = p.plan.waypoints.front().y;
        } else {
            jm["kind"] = "walk";
            jm["start_time"] = p.plan.start_time;
            jm["speed"] = p.plan.speed;
            jm["waypoints"] = ordered_json::array();
            for (const auto& wp : p.plan.waypoints)
                jm["waypoints"].push_back({{"x", wp.x}, {"y", wp.y}});
        }
        jp["mobility"] = std::move(jm);
        doc["phones"].push_back(std::move(jp));
    }
    return doc.dump(2) + "\n";
}

void save_scenario(const std::filesystem::path& path, const Scenario& s) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string());
    out << scenario_to_json(s);
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace senseflow
