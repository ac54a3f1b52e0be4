// SPDX-License-Identifier: Apache-2.0
//
// covol - zero-forcing SINR fields and coherent-signal volumes for
// distributed-antenna multiuser downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

#include "covol/errors.hpp"

namespace covol {

/// Speed of light, m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Pathloss reference distance d0 = 1 m.
inline constexpr double kPathlossRefDistance = 1.0;

/// Carrier and propagation-statistics parameters. The pathloss constants
/// default to an urban-microcell-LOS-like exponent model (28 dB at 1 m,
/// exponent 2.2, 3 dB shadowing); they are calibration choices and every
/// config may override them.
struct PropagationParams {
    double carrier_hz = 1.9175e9;
    double rician_k = 0.0;           // linear LOS/NLOS power ratio, >= 0
    double pathloss_ref_db = 28.0;   // PL0 at d0 = 1 m
    double pathloss_exponent = 2.2;  // alpha
    double shadowing_sigma_db = 3.0;
    int cluster_count = 0;
    int rays_per_cluster = 1;
    double cluster_angle_spread_deg = 5.0;  // Laplacian spread around each cluster center
    std::uint64_t seed = 1;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    double wavenumber() const { return 2.0 * M_PI / wavelength(); }

    void validate() const {
        if (!(carrier_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
        if (!(rician_k >= 0.0)) throw ConfigError("rician_k must be >= 0");
        if (cluster_count < 0) throw ConfigError("cluster_count must be >= 0");
        if (rays_per_cluster < 1) throw ConfigError("rays_per_cluster must be >= 1");
        if (!(shadowing_sigma_db >= 0.0)) throw ConfigError("shadowing sigma must be >= 0");
    }
};

/// Amplitude (field) gain at the given distance:
///   g(d) = 10^(-(PL0 + 10*alpha*log10(d/d0)) / 20),  d0 = 1 m.
/// The exponent model squares to the usual power-law pathloss.
inline double pathloss_gain(double distance, const PropagationParams& p) {
    if (!(distance > 0.0)) {
        throw DegenerateGeometryError("pathloss_gain: distance must be positive");
    }
    const double pl_db =
        p.pathloss_ref_db + 10.0 * p.pathloss_exponent * std::log10(distance / kPathlossRefDistance);
    return std::pow(10.0, -pl_db / 20.0);
}

}  // namespace covol
