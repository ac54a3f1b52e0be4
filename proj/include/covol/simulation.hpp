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
#include <cstddef>
#include <vector>

#include "covol/channel.hpp"
#include "covol/config.hpp"
#include "covol/field.hpp"
#include "covol/paths.hpp"
#include "covol/precoding.hpp"
#include "covol/scenario.hpp"
#include "covol/volume.hpp"

namespace covol {

/// A fully built run: geometry, paths, channel, precoder, resolved noise.
struct Simulation {
    ScenarioConfig config;
    Scenario scenario;  // meters; noise_power resolved
    PathTable paths;
    CMatrix h;
    Precoder w;
    std::vector<double> snr;  // per user, linear
    double inverse_condition = 0.0;
};

inline Simulation build_simulation(const ScenarioConfig& cfg) {
    cfg.validate();
    Simulation sim;
    sim.config = cfg;
    sim.scenario = cfg.to_scenario_geometry();
    sim.paths = build_paths(sim.scenario);
    sim.h = channel_matrix(sim.scenario, sim.paths);
    sim.inverse_condition = inverse_condition(sim.h);
    sim.w = zero_forcing(sim.h);
    if (!cfg.noise_power) {
        sim.scenario.noise_power = noise_for_median_snr(sim.h, sim.w, cfg.median_snr_db);
    }
    sim.snr.resize(sim.scenario.num_users());
    for (std::size_t u = 0; u < sim.snr.size(); ++u) {
        sim.snr[u] = snr_at_origin(sim.h, sim.w, u, sim.scenario.noise_power);
    }
    return sim;
}

/// Continuous SINR evaluator for one user, bound to the simulation.
inline SinrEvaluator make_evaluator(const Simulation& sim, std::size_t user) {
    return [&sim, user](const Vec3& displacement) {
        return sinr_exact(sim.scenario, sim.paths, sim.w, user, displacement, sim.config.mode)
            .value();
    };
}

/// Unit direction from a user toward the antenna centroid; the layout
/// reference used for elongation metrics.
inline Vec3 layout_reference(const Simulation& sim, std::size_t user) {
    Vec3 centroid{0, 0, 0};
    for (const Vec3& a : sim.scenario.antennas) centroid = centroid + a;
    centroid = centroid / double(sim.scenario.num_antennas());
    return unit(centroid - sim.scenario.users[user]);
}

inline SinrField sample_main_field(const Simulation& sim) {
    return sample_field(sim.scenario, sim.paths, sim.w, sim.config.to_grid(), sim.config.mode);
}

inline VolumeOptions volume_options_for(const Simulation& sim, std::size_t user, double max_radius) {
    VolumeOptions opts;
    const double lambda = sim.scenario.wavelength();
    opts.bisect_tol = lambda / 1000.0;
    opts.march_step = lambda / 32.0;
    opts.max_radius = max_radius;
    opts.reference_direction = layout_reference(sim, user);
    return opts;
}

/// Extract one volume per user per threshold according to the config's
/// volume source. Field-sourced masks reuse the supplied main field;
/// box-sourced masks sample a per-user cube around each user.
inline std::vector<CoherentVolume> extract_volumes(const Simulation& sim, const SinrField& field) {
    std::vector<CoherentVolume> out;
    if (sim.config.volume_source == VolumeSource::None) return out;
    const double lambda = sim.scenario.wavelength();
    const double unit_m = sim.config.unit_scale();

    for (double t_db : sim.config.thresholds_db) {
        const double threshold = std::pow(10.0, t_db / 10.0);
        for (std::size_t u = 0; u < sim.scenario.num_users(); ++u) {
            const SinrEvaluator eval = make_evaluator(sim, u);
            if (sim.config.volume_source == VolumeSource::Field) {
                double reach = 0.0;
                for (double e : field.grid.extents) reach = std::max(reach, e);
                const VolumeOptions opts = volume_options_for(sim, u, reach / 2.0 + 5.0 * lambda);
                out.push_back(
                    extract_volume(field, u, sim.scenario.users[u], threshold, eval, opts));
            } else {
                const GridSpec box = GridSpec::box(
                    sim.scenario.users[u], sim.config.volume_box_half * unit_m,
                    sim.config.volume_step * unit_m);
                const SinrField user_field = sample_user_field(sim.scenario, sim.paths, sim.w, box,
                                                               sim.config.mode, u);
                const VolumeOptions opts = volume_options_for(
                    sim, u, sim.config.volume_box_half * unit_m + 2.0 * lambda);
                out.push_back(
                    extract_volume(user_field, 0, sim.scenario.users[u], threshold, eval, opts));
            }
        }
    }
    return out;
}

}  // namespace covol
