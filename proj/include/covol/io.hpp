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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "covol/config.hpp"
#include "covol/errors.hpp"
#include "covol/se_table.hpp"
#include "covol/simulation.hpp"
#include "covol/version.hpp"
#include "covol/volume.hpp"

namespace covol {

namespace detail {

/// 9 significant digits, the CSV number format.
inline std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Write-to-temp then rename: an interrupted run leaves no partial file
/// under the final name.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace detail

/// Field CSV: one row per (user, grid point) with the SINR in dB, plus the
/// envelope as pseudo-user -1. LF endings, 9 significant digits.
inline std::string render_field_csv(const SinrField& field) {
    std::string out;
    out.reserve(64 + field.envelope.size() * (field.user_ids.size() + 1) * 48);
    out += "x_m,y_m,z_m,user,sinr_db\n";
    const std::size_t npts = field.envelope.size();
    std::vector<Vec3> pts(npts);
    for (std::size_t lin = 0; lin < npts; ++lin) {
        pts[lin] = field.grid.point(field.grid.unravel(lin));
    }
    auto append_rows = [&](long user, const std::vector<double>& vals) {
        for (std::size_t lin = 0; lin < npts; ++lin) {
            const Vec3& p = pts[lin];
            out += detail::g9(p.x);
            out += ',';
            out += detail::g9(p.y);
            out += ',';
            out += detail::g9(p.z);
            out += ',';
            out += std::to_string(user);
            out += ',';
            out += detail::g9(detail::to_db(vals[lin]));
            out += '\n';
        }
    };
    for (std::size_t slot = 0; slot < field.user_ids.size(); ++slot) {
        append_rows(static_cast<long>(field.user_ids[slot]), field.values[slot]);
    }
    append_rows(-1, field.envelope);
    return out;
}

/// Binary 16-bit portable graymap of the envelope in dB, linearly mapped
/// from [db_min, db_max] to [0, 65535] (big-endian sample bytes).
inline std::string render_envelope_pgm(const SinrField& field, double db_min, double db_max) {
    if (field.grid.dims() != 2) {
        throw ConfigError("graymap output requires a 2D grid");
    }
    const int w = field.grid.samples[0];
    const int h = field.grid.samples[1];
    std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n65535\n";
    out.reserve(out.size() + static_cast<std::size_t>(w) * h * 2);
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const std::size_t lin = field.grid.linear_index({col, row});
            const double db = detail::to_db(field.envelope[lin]);
            const double t = std::clamp((db - db_min) / (db_max - db_min), 0.0, 1.0);
            const unsigned v = static_cast<unsigned>(std::lround(t * 65535.0));
            out += static_cast<char>((v >> 8) & 0xff);
            out += static_cast<char>(v & 0xff);
        }
    }
    return out;
}

/// Volume summary CSV, one row per extracted volume. The flag column is
/// empty for ordinary volumes, `empty` when the threshold exceeds the
/// user's SNR, `sub_resolution` when the radius is below one grid cell,
/// `clamped` when a directional ray hit the search range.
inline std::string render_volume_csv(const std::vector<CoherentVolume>& volumes,
                                     double wavelength, const Simulation& sim) {
    std::string out =
        "user,sinr_o_db,equivalent_radius_m,equivalent_radius_lambda,anisotropy,"
        "axial_radius_m,transverse_radius_m,flag\n";
    for (const CoherentVolume& vol : volumes) {
        std::string flag;
        double axial = 0.0, transverse = 0.0, anis = 0.0;
        if (vol.empty) {
            flag = "empty";
        } else {
            try {
                const ElongationMetrics m =
                    elongation_metrics(vol, layout_reference(sim, vol.user));
                axial = m.axial_radius;
                transverse = m.transverse_radius;
            } catch (const ConfigError&) {
                // Plane grid with the antenna centroid dead overhead: no
                // in-plane reference to measure along.
                flag = "no_reference";
            }
            anis = vol.anisotropy;
            if (vol.sub_resolution) flag = flag.empty() ? "sub_resolution" : flag;
            for (const DirectionalRadius& ray : vol.radii) {
                if (ray.clamped) {
                    flag = flag.empty() ? "clamped" : flag + "+clamped";
                    break;
                }
            }
        }
        out += std::to_string(vol.user);
        out += ',';
        out += detail::g9(detail::to_db(vol.threshold));
        out += ',';
        out += detail::g9(vol.empty ? 0.0 : vol.equivalent_radius);
        out += ',';
        out += detail::g9(vol.empty ? 0.0 : vol.equivalent_radius / wavelength);
        out += ',';
        out += detail::g9(anis);
        out += ',';
        out += detail::g9(axial);
        out += ',';
        out += detail::g9(transverse);
        out += ',';
        out += flag;
        out += '\n';
    }
    return out;
}

inline std::string render_metadata(const Simulation& sim, const SeTable& se_table) {
    std::ostringstream out;
    const double lambda = sim.scenario.wavelength();
    out << "covol_version = " << COVOL_VERSION << "\n";
    if (!sim.config.preset_name.empty()) out << "preset = " << sim.config.preset_name << "\n";
    out << "seed = " << sim.config.seed << "\n";
    out << "carrier_hz = " << detail::g9(sim.config.carrier_hz) << "\n";
    out << "wavelength_m = " << detail::g9(lambda) << "\n";
    out << "antennas = " << sim.scenario.num_antennas() << "\n";
    out << "users = " << sim.scenario.num_users() << "\n";
    out << "noise_power = " << detail::g9(sim.scenario.noise_power) << "\n";
    out << "channel_inverse_condition = " << detail::g9(sim.inverse_condition) << "\n";
    out << "mode = " << (sim.config.mode == ChannelMode::Spherical ? "spherical" : "planewave")
        << "\n";
    for (std::size_t u = 0; u < sim.snr.size(); ++u) {
        const double snr_db = detail::to_db(sim.snr[u]);
        out << "snr_db[" << u << "] = " << detail::g9(snr_db)
            << "  # se_bps_hz = " << detail::g9(sinr_to_se(snr_db, se_table)) << "\n";
    }
    return out.str();
}

struct OutputPaths {
    std::filesystem::path field_csv;
    std::filesystem::path envelope_pgm;
    std::filesystem::path volumes_csv;
    std::filesystem::path metadata;
    std::filesystem::path config_echo;
};

/// Write all requested artifacts into `dir`. Returns the paths written;
/// skipped formats leave empty paths.
inline OutputPaths write_outputs(const SinrField& field, const std::vector<CoherentVolume>& volumes,
                                 const Simulation& sim, const SeTable& se_table,
                                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());

    const auto& formats = sim.config.formats;
    const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    const bool want_pgm = std::find(formats.begin(), formats.end(), "pgm") != formats.end();

    OutputPaths paths;
    if (want_csv) {
        paths.field_csv = dir / "field.csv";
        detail::write_file_atomic(paths.field_csv, render_field_csv(field));
        paths.volumes_csv = dir / "volumes.csv";
        detail::write_file_atomic(paths.volumes_csv,
                                  render_volume_csv(volumes, sim.scenario.wavelength(), sim));
    }
    if (want_pgm && field.grid.dims() == 2) {
        paths.envelope_pgm = dir / "envelope.pgm";
        detail::write_file_atomic(paths.envelope_pgm,
                                  render_envelope_pgm(field, sim.config.db_min, sim.config.db_max));
    }
    paths.metadata = dir / "run_metadata.txt";
    detail::write_file_atomic(paths.metadata, render_metadata(sim, se_table));
    paths.config_echo = dir / "config_resolved.txt";
    detail::write_file_atomic(paths.config_echo, emit_config(sim.config));
    return paths;
}

/// Parse an SE table CSV: `min_sinr_db,se_bps_hz,label` per line.
inline SeTable parse_se_table(const std::string& text) {
    SeTable t;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto parts = detail::split(s, ',');
        if (parts.size() < 2) {
            throw ConfigError("se table line " + std::to_string(n) + ": expected 'sinr_db,se[,label]'");
        }
        SeRow row;
        row.min_sinr_db = detail::parse_double(parts[0], n);
        row.se_bps_hz = detail::parse_double(parts[1], n);
        row.label = parts.size() > 2 ? parts[2] : "";
        t.rows.push_back(row);
    }
    t.validate();
    return t;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace covol
