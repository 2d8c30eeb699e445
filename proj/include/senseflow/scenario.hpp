#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "senseflow/channel.hpp"
#include "senseflow/mobility.hpp"
#include "senseflow/types.hpp"

namespace senseflow {

enum class PhoneOs { Ios, Android, Windows };
enum class Screen { On, Off };
enum class WifiState { Registered, NonRegistered };

std::string to_string(PhoneOs os);
std::string to_string(Screen s);
std::string to_string(WifiState w);
PhoneOs phone_os_from_string(const std::string& s);
Screen screen_from_string(const std::string& s);
WifiState wifi_from_string(const std::string& s);

/// Measured average probe-request interval (seconds) for an OS in a given
/// (Wi-Fi registration, screen) operational mode.
double default_probe_interval(PhoneOs os, WifiState wifi, Screen screen);

/// Phone behaviour model. The default interval matrix covers the three OS
/// families and four operational modes; any value can be overridden per
/// phone. A Windows phone powers its radio down with the screen by default.
struct PhoneModel {
    PhoneOs os = PhoneOs::Android;
    Screen screen = Screen::On;
    WifiState wifi = WifiState::NonRegistered;
    double mean_probe_interval = 0.0; // 0 = use the default matrix
    double jitter_fraction = 0.1;     // uniform +-fraction on each interval
    std::optional<bool> radio_off_when_screen_off; // default: os == Windows
    int burst_size = 1;
    double burst_spacing = 0.01; // s between frames of one burst

    double effective_interval() const {
        return mean_probe_interval > 0.0 ? mean_probe_interval
                                         : default_probe_interval(os, wifi, screen);
    }
    bool radio_off() const {
        bool off_when_screen_off = radio_off_when_screen_off.value_or(os == PhoneOs::Windows);
        return screen == Screen::Off && off_when_screen_off;
    }
    void validate() const;
};

struct SimPhone {
    MacAddress mac;
    PhoneModel model;
    MobilityPlan plan;
};

/// A complete simulation input. The same scenario (seed included) always
/// produces byte-identical capture and ground-truth files.
struct Scenario {
    std::string name;
    Duration duration = 0.0;
    std::uint64_t seed = 0;
    ChannelModel channel;
    std::vector<GatewayInfo> gateways;
    std::vector<SimPhone> phones;

    void validate() const;
};

Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& s);
void save_scenario(const std::filesystem::path& path, const Scenario& s);

/// Deterministic locally-administered MAC for simulated phone #index.
MacAddress phone_mac(std::uint32_t index);

} // namespace senseflow
