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

// Batch front end: build a scenario from a config file or preset, sample
// the SINR field, extract coherent volumes and write the artifacts.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covol/config.hpp"
#include "covol/io.hpp"
#include "covol/se_table.hpp"
#include "covol/simulation.hpp"
#include "covol/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run(int argc, char** argv) {
    CLI::App app{"covol simulate: zero-forcing SINR fields and coherent-signal volumes"};
    app.set_version_flag("--version", COVOL_VERSION);

    std::string config_path, preset_name, out_dir = "out", mode_str, format_str, se_table_path;
    double grid_res = 0.0;
    std::vector<double> thresholds;
    std::int64_t seed = -1;

    app.add_option("--config", config_path, "scenario config file");
    app.add_option("--preset", preset_name, "built-in preset: fig2, fig3 or fig4");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--grid-res", grid_res, "field grid resolution, samples per wavelength");
    app.add_option("--threshold-db", thresholds, "coherence threshold(s), dB")->delimiter(',');
    app.add_option("--mode", mode_str, "channel evaluation: spherical or planewave");
    app.add_option("--seed", seed, "override the scenario seed");
    app.add_option("--format", format_str, "outputs to write: csv,pgm");
    app.add_option("--se-table", se_table_path, "override the SINR->SE table (csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (config_path.empty() == preset_name.empty()) {
        std::cerr << "exactly one of --config or --preset is required\n";
        return kExitConfig;
    }

    covol::ScenarioConfig cfg;
    if (config_path.empty()) {
        cfg = covol::preset(preset_name);
    } else {
        try {
            cfg = covol::parse_config(covol::read_file(config_path));
        } catch (const covol::IoError& e) {
            throw covol::ConfigError(e.what());
        }
    }

    if (seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (grid_res > 0.0) {
        cfg.grid_step = cfg.wavelength() / grid_res / cfg.unit_scale();
    }
    if (!thresholds.empty()) cfg.thresholds_db = thresholds;
    if (!mode_str.empty()) {
        if (mode_str == "spherical") {
            cfg.mode = covol::ChannelMode::Spherical;
        } else if (mode_str == "planewave") {
            cfg.mode = covol::ChannelMode::PlaneWave;
        } else {
            std::cerr << "--mode must be spherical or planewave\n";
            return kExitConfig;
        }
    }
    if (!format_str.empty()) {
        cfg.formats.clear();
        for (const std::string& f : covol::detail::split(format_str, ',')) {
            cfg.formats.push_back(f);
        }
    }
    if (!se_table_path.empty()) cfg.se_table_path = se_table_path;
    cfg.validate();

    const covol::SeTable se_table = cfg.se_table_path.empty()
                                        ? covol::default_se_table()
                                        : covol::parse_se_table(covol::read_file(cfg.se_table_path));

    const covol::Simulation sim = covol::build_simulation(cfg);
    const double lambda = sim.scenario.wavelength();
    std::printf("scenario: %zu antennas, %zu users, lambda %.4g m%s%s\n",
                sim.scenario.num_antennas(), sim.scenario.num_users(), lambda,
                cfg.preset_name.empty() ? "" : ", preset ", cfg.preset_name.c_str());
    std::printf("noise power %.6g (inverse channel condition %.3g)\n", sim.scenario.noise_power,
                sim.inverse_condition);
    for (std::size_t u = 0; u < sim.snr.size(); ++u) {
        const double snr_db = 10.0 * std::log10(sim.snr[u]);
        std::printf("user %zu: SNR %.2f dB  -> SE %.4g bps/Hz\n", u, snr_db,
                    covol::sinr_to_se(snr_db, se_table));
    }

    const covol::SinrField field = covol::sample_main_field(sim);
    std::printf("sampled %zu grid points (%zu users)\n", field.envelope.size(),
                field.user_ids.size());

    const std::vector<covol::CoherentVolume> volumes = covol::extract_volumes(sim, field);
    for (const covol::CoherentVolume& vol : volumes) {
        if (vol.empty) {
            std::printf("user %zu @ %.3g dB: empty volume\n", vol.user,
                        10.0 * std::log10(vol.threshold));
        } else {
            std::printf("user %zu @ %.3g dB: equivalent radius %.4g lambda%s\n", vol.user,
                        10.0 * std::log10(vol.threshold), vol.equivalent_radius / lambda,
                        vol.sub_resolution ? " (sub-resolution)" : "");
        }
    }

    const covol::OutputPaths paths =
        covol::write_outputs(field, volumes, sim, se_table, out_dir);
    std::printf("wrote %s\n", paths.metadata.parent_path().string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const covol::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const covol::SingularChannelError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const covol::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
