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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <vector>

#include "covol/complex_linalg.hpp"
#include "covol/geometry.hpp"
#include "covol/rng.hpp"
#include "covol/scenario.hpp"

namespace covol {

/// One propagation path between a transmit antenna and a user.
///
/// `direction` is the unit vector from the user location toward the point
/// the path arrives from (the antenna for LOS, the last-bounce scatterer
/// for NLOS). `amplitude` is the full nominal coefficient at the user's
/// original location: pathloss, Rician weighting, shadowing and phase are
/// all baked in, so the nominal channel coefficient is the plain sum of
/// path amplitudes.
///
/// `source` / `source_distance` anchor the path geometrically so that the
/// coefficient can be re-evaluated exactly (spherical wavefront) at a
/// displaced point.
struct PathComponent {
    Vec3 direction;           // unit, user -> source
    Complex amplitude;        // nominal coefficient contribution
    Vec3 source;              // antenna (LOS) or virtual scatterer (NLOS)
    double source_distance;   // |source - nominal user location|
    double gain_scale = 1.0;  // LOS: Rician amplitude factor applied onto g(d)
    bool line_of_sight = false;
};

/// All paths for one (user, antenna) link.
struct PathSet {
    std::size_t user = 0;
    std::size_t antenna = 0;
    std::vector<PathComponent> paths;

    /// Channel coefficient at the nominal user location.
    Complex nominal_coefficient() const {
        Complex acc{0.0, 0.0};
        for (const PathComponent& p : paths) acc += p.amplitude;
        return acc;
    }

    const PathComponent* los() const {
        for (const PathComponent& p : paths) {
            if (p.line_of_sight) return &p;
        }
        return nullptr;
    }
};

/// U x N table of path sets.
class PathTable {
  public:
    PathTable() = default;
    PathTable(std::size_t users, std::size_t antennas)
        : users_(users), antennas_(antennas), sets_(users * antennas) {}

    std::size_t num_users() const { return users_; }
    std::size_t num_antennas() const { return antennas_; }

    PathSet& at(std::size_t u, std::size_t n) { return sets_[u * antennas_ + n]; }
    const PathSet& at(std::size_t u, std::size_t n) const { return sets_[u * antennas_ + n]; }

  private:
    std::size_t users_ = 0;
    std::size_t antennas_ = 0;
    std::vector<PathSet> sets_;
};

namespace detail {

/// Draw a unit vector at Laplacian-distributed polar offset around `center`.
inline Vec3 spread_direction(const Vec3& center, double spread_rad, Rng& rng) {
    const double theta = std::abs(rng.laplacian(spread_rad));
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const Vec3 e1 = any_orthogonal(center);
    const Vec3 e2 = center.cross(e1);
    const Vec3 v = center * std::cos(theta) +
                   (e1 * std::cos(phi) + e2 * std::sin(phi)) * std::sin(theta);
    return unit(v);
}

/// Per-link seed keyed on the endpoint coordinates rather than on array
/// indices, so reordering users or antennas permutes the table without
/// changing any link's draws.
inline std::uint64_t link_seed(std::uint64_t scenario_seed, const Vec3& user, const Vec3& ant) {
    auto bits = [](double v) {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof b);
        return b;
    };
    std::uint64_t s = scenario_seed;
    for (double v : {user.x, user.y, user.z, ant.x, ant.y, ant.z}) s = Rng::mix(s, bits(v));
    return s;
}

inline PathSet build_link_paths(const Scenario& sc, std::size_t u, std::size_t n) {
    const PropagationParams& prop = sc.propagation;
    const Vec3 user = sc.users[u];
    const Vec3 ant = sc.antennas[n];
    const Vec3 sep = ant - user;
    const double dist = sep.norm();
    if (dist == 0.0) {
        throw DegenerateGeometryError("user " + std::to_string(u) + " coincides with antenna " +
                                      std::to_string(n));
    }

    const double k = prop.wavenumber();
    const double gain = pathloss_gain(dist, prop);
    const bool has_nlos = prop.cluster_count > 0 && prop.rays_per_cluster > 0;
    // With no scattered components configured the LOS path carries the full
    // link power, independent of the Rician factor.
    const double los_scale = has_nlos ? std::sqrt(prop.rician_k / (prop.rician_k + 1.0)) : 1.0;

    PathSet set;
    set.user = u;
    set.antenna = n;

    PathComponent los;
    los.direction = sep / dist;
    los.gain_scale = los_scale;
    los.amplitude = los_scale * gain * std::polar(1.0, -k * dist);
    los.source = ant;
    los.source_distance = dist;
    los.line_of_sight = true;
    set.paths.push_back(los);

    if (!has_nlos) return set;

    Rng rng(link_seed(prop.seed, user, ant));
    const double spread = prop.cluster_angle_spread_deg * M_PI / 180.0;
    const std::size_t first_nlos = set.paths.size();
    double raw_power = 0.0;

    for (int c = 0; c < prop.cluster_count; ++c) {
        const Vec3 center = rng.unit_sphere();
        const double shadow_amp = std::pow(10.0, prop.shadowing_sigma_db * rng.normal() / 20.0);
        for (int r = 0; r < prop.rays_per_cluster; ++r) {
            PathComponent ray;
            ray.direction = spread_direction(center, spread, rng);
            const double raw_amp = shadow_amp / std::sqrt(double(prop.rays_per_cluster));
            ray.amplitude = raw_amp * std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
            const double scatter_dist = rng.uniform(0.2, 0.5) * dist;
            ray.source = user + ray.direction * scatter_dist;
            ray.source_distance = scatter_dist;
            ray.line_of_sight = false;
            set.paths.push_back(ray);
            raw_power += raw_amp * raw_amp;
        }
    }

    // Scale scattered power to g(d)^2 / (K+1) so the Rician split holds
    // exactly; shadowing only redistributes power among clusters.
    const double target = gain * gain / (prop.rician_k + 1.0);
    const double scale = std::sqrt(target / raw_power);
    for (std::size_t p = first_nlos; p < set.paths.size(); ++p) {
        set.paths[p].amplitude *= scale;
    }
    return set;
}

}  // namespace detail

/// Build the full U x N path table for a scenario. Deterministic: the same
/// scenario (including seed) reproduces the table bit-identically.
inline PathTable build_paths(const Scenario& sc) {
    sc.validate();
    PathTable table(sc.num_users(), sc.num_antennas());
    for (std::size_t u = 0; u < sc.num_users(); ++u) {
        for (std::size_t n = 0; n < sc.num_antennas(); ++n) {
            table.at(u, n) = detail::build_link_paths(sc, u, n);
        }
    }
    return table;
}

}  // namespace covol
