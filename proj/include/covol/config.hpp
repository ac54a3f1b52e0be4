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
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "covol/channel.hpp"
#include "covol/field.hpp"
#include "covol/geometry.hpp"
#include "covol/rng.hpp"
#include "covol/scenario.hpp"

namespace covol {

enum class LengthUnit { Meters, Lambda };

/// How coherent volumes are extracted in a run: as 2D masks from the main
/// field plane, from per-user 3D boxes, or not at all.
enum class VolumeSource { Field, Boxes, None };

/// Parsed run description. Lengths are stored as written (in `unit`);
/// conversion to meters happens in to_scenario()/to_grid() so that
/// emit/parse round-trips are exact.
struct ScenarioConfig {
    std::string preset_name;  // empty for file-based configs

    LengthUnit unit = LengthUnit::Meters;
    double carrier_hz = 1.9175e9;
    std::uint64_t seed = 1;

    // propagation statistics
    double rician_k = 0.0;
    int cluster_count = 0;
    int rays_per_cluster = 1;
    double pathloss_ref_db = 28.0;
    double pathloss_exponent = 2.2;
    double shadowing_sigma_db = 3.0;
    double cluster_angle_spread_deg = 5.0;

    std::vector<Vec3> antennas;  // in `unit`
    std::vector<Vec3> users;     // in `unit`

    // exactly one noise convention applies; explicit power wins if set
    std::optional<double> noise_power;
    double median_snr_db = 30.0;

    // sampling grid (in `unit`)
    Vec3 grid_center{0, 0, 0};
    std::vector<Vec3> grid_axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
    std::vector<double> grid_half_extent = {10.0, 10.0};
    double grid_step = 0.0625;
    std::size_t grid_cap = kDefaultGridCap;

    // volume extraction
    VolumeSource volume_source = VolumeSource::Field;
    double volume_box_half = 1.0;       // in `unit`
    double volume_step = 0.015625;      // in `unit`
    std::vector<double> thresholds_db = {5.0};

    ChannelMode mode = ChannelMode::Spherical;
    double db_min = -10.0;  // graymap mapping range
    double db_max = 40.0;
    std::vector<std::string> formats = {"csv", "pgm"};
    std::string se_table_path;  // optional override

    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    /// Meters per config length unit.
    double unit_scale() const { return unit == LengthUnit::Lambda ? wavelength() : 1.0; }

    void validate() const {
        if (!(carrier_hz > 0.0)) throw ConfigError("carrier_hz must be positive");
        if (users.empty()) throw ConfigError("config needs at least one `user`");
        if (antennas.empty()) throw ConfigError("config needs at least one `antenna`");
        if (antennas.size() < users.size()) {
            throw ConfigError("config violates N >= U (" + std::to_string(antennas.size()) +
                              " antennas, " + std::to_string(users.size()) + " users)");
        }
        if (noise_power && !(*noise_power > 0.0)) {
            throw ConfigError("noise_power must be positive");
        }
        if (!(grid_step > 0.0) || !(volume_step > 0.0)) {
            throw ConfigError("grid_step and volume_step must be positive");
        }
        if (grid_axes.size() != grid_half_extent.size()) {
            throw ConfigError("grid_axis and grid_half_extent counts differ");
        }
        if (thresholds_db.empty()) throw ConfigError("at least one threshold_db required");
        if (!(db_max > db_min)) throw ConfigError("db_max must exceed db_min");
        for (const std::string& f : formats) {
            if (f != "csv" && f != "pgm") throw ConfigError("unknown format '" + f + "'");
        }
        to_grid().validate();  // orthonormality, extents, cap
        to_scenario_geometry().validate();
    }

    /// Scenario with positions in meters; noise_power left at the explicit
    /// value or a placeholder (resolved later against the precoder when in
    /// median-SNR mode).
    Scenario to_scenario_geometry() const {
        Scenario sc;
        const double s = unit_scale();
        for (const Vec3& a : antennas) sc.antennas.push_back(a * s);
        for (const Vec3& u : users) sc.users.push_back(u * s);
        sc.propagation.carrier_hz = carrier_hz;
        sc.propagation.rician_k = rician_k;
        sc.propagation.cluster_count = cluster_count;
        sc.propagation.rays_per_cluster = rays_per_cluster;
        sc.propagation.pathloss_ref_db = pathloss_ref_db;
        sc.propagation.pathloss_exponent = pathloss_exponent;
        sc.propagation.shadowing_sigma_db = shadowing_sigma_db;
        sc.propagation.cluster_angle_spread_deg = cluster_angle_spread_deg;
        sc.propagation.seed = seed;
        sc.noise_power = noise_power.value_or(1.0);
        return sc;
    }

    GridSpec to_grid() const {
        GridSpec g;
        const double s = unit_scale();
        g.axes = grid_axes;
        for (Vec3& a : g.axes) a = ::covol::unit(a);
        g.samples.resize(grid_axes.size());
        g.extents.resize(grid_axes.size());
        for (std::size_t a = 0; a < grid_axes.size(); ++a) {
            g.samples[a] =
                2 * static_cast<int>(std::lround(grid_half_extent[a] / grid_step)) + 1;
            g.extents[a] = (g.samples[a] - 1) * grid_step * s;
        }
        g.origin = grid_center * s;
        for (std::size_t a = 0; a < grid_axes.size(); ++a) {
            g.origin = g.origin - g.axes[a] * (g.extents[a] / 2.0);
        }
        g.cap = grid_cap;
        return g;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": not a number: '" + v + "'");
    }
}

inline long long parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": not an integer: '" + v + "'");
    }
}

inline Vec3 parse_vec3(const std::string& v, int line) {
    const auto parts = split(v, ',');
    if (parts.size() != 3) {
        throw ConfigError("line " + std::to_string(line) + ": expected 'x, y, z', got '" + v + "'");
    }
    return Vec3{parse_double(parts[0], line), parse_double(parts[1], line),
                parse_double(parts[2], line)};
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Parse the key-value config format. Unknown keys, malformed values and
/// violated constraints are hard errors carrying the line number; a config
/// either parses completely or not at all.
inline ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    cfg.grid_axes.clear();
    cfg.grid_half_extent.clear();
    cfg.thresholds_db.clear();
    cfg.formats.clear();
    bool saw_axis = false, saw_threshold = false, saw_format = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        }
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (val.empty()) {
            throw ConfigError("line " + std::to_string(line) + ": empty value for '" + key + "'");
        }

        if (key == "unit") {
            if (val == "lambda") {
                cfg.unit = LengthUnit::Lambda;
            } else if (val == "meters") {
                cfg.unit = LengthUnit::Meters;
            } else {
                throw ConfigError("line " + std::to_string(line) +
                                  ": unit must be 'lambda' or 'meters'");
            }
        } else if (key == "carrier_hz") {
            cfg.carrier_hz = detail::parse_double(val, line);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(detail::parse_int(val, line));
        } else if (key == "rician_k") {
            cfg.rician_k = detail::parse_double(val, line);
        } else if (key == "cluster_count") {
            cfg.cluster_count = static_cast<int>(detail::parse_int(val, line));
        } else if (key == "rays_per_cluster") {
            cfg.rays_per_cluster = static_cast<int>(detail::parse_int(val, line));
        } else if (key == "pathloss_ref_db") {
            cfg.pathloss_ref_db = detail::parse_double(val, line);
        } else if (key == "pathloss_exponent") {
            cfg.pathloss_exponent = detail::parse_double(val, line);
        } else if (key == "shadowing_sigma_db") {
            cfg.shadowing_sigma_db = detail::parse_double(val, line);
        } else if (key == "cluster_angle_spread_deg") {
            cfg.cluster_angle_spread_deg = detail::parse_double(val, line);
        } else if (key == "antenna") {
            cfg.antennas.push_back(detail::parse_vec3(val, line));
        } else if (key == "user") {
            cfg.users.push_back(detail::parse_vec3(val, line));
        } else if (key == "noise_power") {
            cfg.noise_power = detail::parse_double(val, line);
        } else if (key == "median_snr_db") {
            cfg.median_snr_db = detail::parse_double(val, line);
        } else if (key == "grid_center") {
            cfg.grid_center = detail::parse_vec3(val, line);
        } else if (key == "grid_axis") {
            cfg.grid_axes.push_back(detail::parse_vec3(val, line));
            saw_axis = true;
        } else if (key == "grid_half_extent") {
            for (const std::string& part : detail::split(val, ',')) {
                cfg.grid_half_extent.push_back(detail::parse_double(part, line));
            }
        } else if (key == "grid_step") {
            cfg.grid_step = detail::parse_double(val, line);
        } else if (key == "grid_cap") {
            cfg.grid_cap = static_cast<std::size_t>(detail::parse_int(val, line));
        } else if (key == "volume_source") {
            if (val == "field") {
                cfg.volume_source = VolumeSource::Field;
            } else if (val == "boxes") {
                cfg.volume_source = VolumeSource::Boxes;
            } else if (val == "none") {
                cfg.volume_source = VolumeSource::None;
            } else {
                throw ConfigError("line " + std::to_string(line) +
                                  ": volume_source must be field|boxes|none");
            }
        } else if (key == "volume_box_half") {
            cfg.volume_box_half = detail::parse_double(val, line);
        } else if (key == "volume_step") {
            cfg.volume_step = detail::parse_double(val, line);
        } else if (key == "threshold_db") {
            for (const std::string& part : detail::split(val, ',')) {
                cfg.thresholds_db.push_back(detail::parse_double(part, line));
            }
            saw_threshold = true;
        } else if (key == "mode") {
            if (val == "spherical") {
                cfg.mode = ChannelMode::Spherical;
            } else if (val == "planewave") {
                cfg.mode = ChannelMode::PlaneWave;
            } else {
                throw ConfigError("line " + std::to_string(line) +
                                  ": mode must be spherical|planewave");
            }
        } else if (key == "db_min") {
            cfg.db_min = detail::parse_double(val, line);
        } else if (key == "db_max") {
            cfg.db_max = detail::parse_double(val, line);
        } else if (key == "formats") {
            for (const std::string& part : detail::split(val, ',')) cfg.formats.push_back(part);
            saw_format = true;
        } else if (key == "se_table") {
            cfg.se_table_path = val;
        } else if (key == "preset") {
            cfg.preset_name = val;
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }

    if (!saw_axis) cfg.grid_axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
    if (cfg.grid_half_extent.empty()) cfg.grid_half_extent = {10.0, 10.0};
    if (!saw_threshold) cfg.thresholds_db = {5.0};
    if (!saw_format) cfg.formats = {"csv", "pgm"};

    cfg.validate();
    return cfg;
}

/// Serialize a config; parse(emit(cfg)) reproduces cfg exactly.
inline std::string emit_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    auto num = [](double v) { return detail::format_double(v); };
    if (!cfg.preset_name.empty()) out << "preset = " << cfg.preset_name << "\n";
    out << "unit = " << (cfg.unit == LengthUnit::Lambda ? "lambda" : "meters") << "\n";
    out << "carrier_hz = " << num(cfg.carrier_hz) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "rician_k = " << num(cfg.rician_k) << "\n";
    out << "cluster_count = " << cfg.cluster_count << "\n";
    out << "rays_per_cluster = " << cfg.rays_per_cluster << "\n";
    out << "pathloss_ref_db = " << num(cfg.pathloss_ref_db) << "\n";
    out << "pathloss_exponent = " << num(cfg.pathloss_exponent) << "\n";
    out << "shadowing_sigma_db = " << num(cfg.shadowing_sigma_db) << "\n";
    out << "cluster_angle_spread_deg = " << num(cfg.cluster_angle_spread_deg) << "\n";
    for (const Vec3& a : cfg.antennas) {
        out << "antenna = " << num(a.x) << ", " << num(a.y) << ", " << num(a.z) << "\n";
    }
    for (const Vec3& u : cfg.users) {
        out << "user = " << num(u.x) << ", " << num(u.y) << ", " << num(u.z) << "\n";
    }
    if (cfg.noise_power) {
        out << "noise_power = " << num(*cfg.noise_power) << "\n";
    } else {
        out << "median_snr_db = " << num(cfg.median_snr_db) << "\n";
    }
    out << "grid_center = " << num(cfg.grid_center.x) << ", " << num(cfg.grid_center.y) << ", "
        << num(cfg.grid_center.z) << "\n";
    for (const Vec3& a : cfg.grid_axes) {
        out << "grid_axis = " << num(a.x) << ", " << num(a.y) << ", " << num(a.z) << "\n";
    }
    out << "grid_half_extent = ";
    for (std::size_t i = 0; i < cfg.grid_half_extent.size(); ++i) {
        out << (i ? ", " : "") << num(cfg.grid_half_extent[i]);
    }
    out << "\n";
    out << "grid_step = " << num(cfg.grid_step) << "\n";
    out << "grid_cap = " << cfg.grid_cap << "\n";
    out << "volume_source = "
        << (cfg.volume_source == VolumeSource::Field
                ? "field"
                : cfg.volume_source == VolumeSource::Boxes ? "boxes" : "none")
        << "\n";
    out << "volume_box_half = " << num(cfg.volume_box_half) << "\n";
    out << "volume_step = " << num(cfg.volume_step) << "\n";
    out << "threshold_db = ";
    for (std::size_t i = 0; i < cfg.thresholds_db.size(); ++i) {
        out << (i ? ", " : "") << num(cfg.thresholds_db[i]);
    }
    out << "\n";
    out << "mode = " << (cfg.mode == ChannelMode::Spherical ? "spherical" : "planewave") << "\n";
    out << "db_min = " << num(cfg.db_min) << "\n";
    out << "db_max = " << num(cfg.db_max) << "\n";
    out << "formats = ";
    for (std::size_t i = 0; i < cfg.formats.size(); ++i) out << (i ? "," : "") << cfg.formats[i];
    out << "\n";
    if (!cfg.se_table_path.empty()) out << "se_table = " << cfg.se_table_path << "\n";
    return out.str();
}

/// Built-in figure-style presets. Placements that the layouts leave to
/// chance are drawn once from fixed embedded seeds, so presets are
/// reproducible run to run; the seed lands in the run metadata.
///
/// Presets are pure LOS by default; an `_nlos` suffix (e.g. `fig3_nlos`)
/// switches on Rician scattering with K = 10 as a stand-in variant.
inline ScenarioConfig preset(const std::string& name) {
    std::string base = name;
    bool nlos = false;
    constexpr const char* kSuffix = "_nlos";
    if (base.size() > 5 && base.substr(base.size() - 5) == kSuffix) {
        base = base.substr(0, base.size() - 5);
        nlos = true;
    }

    ScenarioConfig cfg;
    cfg.preset_name = name;
    cfg.unit = LengthUnit::Lambda;
    cfg.carrier_hz = 1.9175e9;
    cfg.cluster_count = 0;  // presets are pure LOS
    cfg.thresholds_db = {5.0};
    cfg.mode = ChannelMode::Spherical;

    auto eight_users_on_x = [&]() {
        for (int u = 0; u < 8; ++u) {
            cfg.users.push_back(Vec3{(u - 3.5) * 4.0, 0.0, 0.0});
        }
    };

    if (base == "fig2") {
        cfg.seed = 2001;
        eight_users_on_x();
        for (int n = 0; n < 10; ++n) {
            cfg.antennas.push_back(Vec3{(n - 4.5) * 0.5, 50.0, 0.0});
        }
        cfg.grid_center = Vec3{0, 0, 0};
        cfg.grid_axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
        cfg.grid_half_extent = {24.0, 10.0};
        cfg.grid_step = 1.0 / 16.0;
        cfg.volume_source = VolumeSource::Field;
    } else if (base == "fig3") {
        cfg.seed = 3001;
        eight_users_on_x();
        Rng rng(cfg.seed);
        for (int n = 0; n < 10; ++n) {
            cfg.antennas.push_back(Vec3{rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0),
                                        rng.uniform(50.0, 200.0)});
        }
        cfg.grid_center = Vec3{0, 0, 0};
        cfg.grid_axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
        cfg.grid_half_extent = {24.0, 10.0};
        cfg.grid_step = 1.0 / 16.0;
        cfg.volume_source = VolumeSource::Field;
    } else if (base == "fig4") {
        cfg.seed = 4001;
        Rng rng(cfg.seed);
        for (int u = 0; u < 10; ++u) {
            cfg.users.push_back(
                Vec3{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
        }
        for (int n = 0; n < 16; ++n) {
            cfg.antennas.push_back(Vec3{rng.uniform(-300.0, 300.0), rng.uniform(-300.0, 300.0),
                                        rng.uniform(200.0, 300.0)});
        }
        cfg.grid_center = Vec3{0, 0, 0};
        cfg.grid_axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
        cfg.grid_half_extent = {11.0, 11.0};
        cfg.grid_step = 1.0 / 16.0;
        cfg.volume_source = VolumeSource::Boxes;
        cfg.volume_box_half = 1.0;
        cfg.volume_step = 1.0 / 64.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig2, fig3 or fig4)");
    }
    if (nlos) {
        cfg.rician_k = 10.0;
        cfg.cluster_count = 3;
        cfg.rays_per_cluster = 8;
    }
    cfg.validate();
    return cfg;
}

}  // namespace covol
