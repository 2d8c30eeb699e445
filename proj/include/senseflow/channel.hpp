#pragma once

#include <algorithm>
#include <cmath>

#include "senseflow/types.hpp"

namespace senseflow {

/// Log-distance path loss with optional log-normal shadowing. Expected RSSI
/// at distance d (meters, d >= d0 = 1 m) is
///   rssi_at_reference - 10 * path_loss_exponent * log10(d / d0)
/// and received values are clamped to [-120, 0] dBm. Probes beyond
/// coverage_radius are never received. The defaults are conventional indoor
/// values and fully configurable.
struct ChannelModel {
    double rssi_at_reference = -40.0; // dBm at 1 m
    double path_loss_exponent = 2.7;
    double shadowing_sigma = 4.0; // dB
    double coverage_radius = 30.0; // m

    static constexpr double kReferenceDistance = 1.0;

    void validate() const {
        if (!(path_loss_exponent > 0.0)) throw InvariantError("path_loss_exponent must be > 0");
        if (shadowing_sigma < 0.0) throw InvariantError("shadowing_sigma must be >= 0");
        if (!(coverage_radius > 0.0)) throw InvariantError("coverage_radius must be > 0");
    }

    bool in_coverage(double distance_m) const { return distance_m <= coverage_radius; }

    double expected_rssi(double distance_m) const {
        double d = std::max(distance_m, kReferenceDistance);
        return rssi_at_reference - 10.0 * path_loss_exponent * std::log10(d / kReferenceDistance);
    }

    double clamp_rssi(double rssi) const { return std::clamp(rssi, kRssiFloorDbm, kRssiCeilDbm); }
};

} // namespace senseflow
