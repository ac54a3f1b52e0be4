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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "covol/field.hpp"
#include "covol/geometry.hpp"

namespace covol {

/// Linear SINR as a function of displacement from a user's nominal
/// location; the continuous counterpart of a sampled field layer.
using SinrEvaluator = std::function<double(const Vec3& displacement)>;

struct DirectionalRadius {
    Vec3 direction;
    double radius = 0.0;   // meters
    bool clamped = false;  // no crossing found within the search range
};

/// Connected region around one user where SINR stays above a threshold,
/// with a voxel mask over the sampled grid plus a bisected directional
/// radius profile. The mask keeps only the component containing the user's
/// own location; detached lobes are counted separately.
struct CoherentVolume {
    std::size_t user = 0;
    double threshold = 0.0;  // linear
    GridSpec grid;
    std::vector<std::uint8_t> mask;
    std::vector<DirectionalRadius> radii;
    double equivalent_radius = 0.0;  // sphere (3D) or disk (2D) of equal measure
    double anisotropy = 1.0;         // max/min finite directional radius
    std::size_t component_voxels = 0;
    std::size_t discarded_voxels = 0;  // above threshold but detached from the user
    bool empty = false;                // SINR below threshold already at the user location
    bool sub_resolution = false;       // equivalent radius below one grid cell

    /// Cell measure: area for plane grids, volume for box grids.
    double cell_measure() const {
        double m = 1.0;
        for (std::size_t a = 0; a < grid.dims(); ++a) m *= grid.spacing(a);
        return m;
    }
};

struct VolumeOptions {
    double bisect_tol = 1e-4;    // meters; preset pipelines pass lambda/1000
    double march_step = 5e-3;    // meters; initial bracketing step
    double max_radius = 1.0;     // meters; ray search range
    std::optional<Vec3> reference_direction;  // adds +/-ref and orthogonals
};

namespace detail {

/// 8 in-plane (2D) or 26 cube (3D) unit directions expressed in the grid
/// frame, a fixed deterministic fan for the radius profile.
inline std::vector<Vec3> profile_directions(const GridSpec& grid) {
    std::vector<Vec3> dirs;
    const bool flat = grid.dims() == 2;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            if (flat) {
                if (i == 0 && j == 0) continue;
                dirs.push_back(unit(grid.axes[0] * double(i) + grid.axes[1] * double(j)));
            } else {
                for (int k = -1; k <= 1; ++k) {
                    if (i == 0 && j == 0 && k == 0) continue;
                    dirs.push_back(unit(grid.axes[0] * double(i) + grid.axes[1] * double(j) +
                                        grid.axes[2] * double(k)));
                }
            }
        }
    }
    return dirs;
}

/// Project a direction onto the grid's span (plane grids cannot probe out
/// of plane); returns nullopt when the projection vanishes.
inline std::optional<Vec3> into_grid_span(const GridSpec& grid, const Vec3& dir) {
    if (grid.dims() == 3) return unit(dir);
    const Vec3 proj =
        grid.axes[0] * dir.dot(grid.axes[0]) + grid.axes[1] * dir.dot(grid.axes[1]);
    if (proj.norm() < 1e-12) return std::nullopt;
    return unit(proj);
}

/// First radius at which the evaluator drops below the threshold along
/// `dir`: bracket by marching, then bisect.
inline DirectionalRadius directional_radius(const SinrEvaluator& eval, double threshold,
                                            const Vec3& dir, const VolumeOptions& opts) {
    DirectionalRadius out;
    out.direction = dir;
    if (eval(Vec3{0, 0, 0}) < threshold) return out;  // radius 0
    double lo = 0.0;
    double hi = opts.march_step;
    while (hi < opts.max_radius && eval(dir * hi) >= threshold) {
        lo = hi;
        hi += opts.march_step;
    }
    if (hi >= opts.max_radius) {
        out.radius = opts.max_radius;
        out.clamped = true;
        return out;
    }
    while (hi - lo > opts.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        (eval(dir * mid) >= threshold ? lo : hi) = mid;
    }
    out.radius = 0.5 * (lo + hi);
    return out;
}

}  // namespace detail

/// Extract the coherent volume of the user in `field_slot` of a sampled
/// field. The mask is the thresholded 26-connectivity (8 in 2D) component
/// containing the user's location voxel; directional radii come from
/// bisection on the continuous evaluator.
inline CoherentVolume extract_volume(const SinrField& field, std::size_t field_slot,
                                     const Vec3& user_position, double threshold,
                                     const SinrEvaluator& eval, const VolumeOptions& opts) {
    if (field_slot >= field.values.size()) throw DimensionError("field slot out of range");
    const GridSpec& grid = field.grid;
    const std::vector<double>& vals = field.values[field_slot];

    CoherentVolume vol;
    vol.user = field.user_ids[field_slot];
    vol.threshold = threshold;
    vol.grid = grid;
    vol.mask.assign(vals.size(), 0);

    const std::vector<int> seed_idx = grid.nearest(user_position);
    if (seed_idx.empty()) {
        throw ConfigError("user location lies outside the sampling grid");
    }

    std::size_t above = 0;
    for (double v : vals) above += v >= threshold ? 1 : 0;

    const std::size_t seed_lin = grid.linear_index(seed_idx);
    if (vals[seed_lin] < threshold) {
        vol.empty = true;
        vol.discarded_voxels = above;
        for (const Vec3& d : detail::profile_directions(grid)) {
            vol.radii.push_back(DirectionalRadius{d, 0.0, false});
        }
        return vol;
    }

    // Flood fill over the full neighbor stencil.
    std::vector<std::size_t> stack{seed_lin};
    vol.mask[seed_lin] = 1;
    std::size_t count = 0;
    const std::size_t dims = grid.dims();
    while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        ++count;
        const std::vector<int> idx = grid.unravel(cur);
        std::vector<int> nb(idx);
        const int span = dims == 2 ? 8 : 26;
        for (int step = 0; step <= span; ++step) {
            int code = step;
            bool self = true;
            for (std::size_t a = 0; a < dims; ++a) {
                const int off = code % 3 - 1;
                code /= 3;
                nb[a] = idx[a] + off;
                self = self && off == 0;
            }
            if (self) continue;
            bool inside = true;
            for (std::size_t a = 0; a < dims; ++a) {
                inside = inside && nb[a] >= 0 && nb[a] < grid.samples[a];
            }
            if (!inside) continue;
            const std::size_t lin = grid.linear_index(nb);
            if (vol.mask[lin] == 0 && vals[lin] >= threshold) {
                vol.mask[lin] = 1;
                stack.push_back(lin);
            }
        }
    }
    vol.component_voxels = count;
    vol.discarded_voxels = above - count;

    const double measure = double(count) * vol.cell_measure();
    vol.equivalent_radius = dims == 2 ? std::sqrt(measure / M_PI)
                                      : std::cbrt(3.0 * measure / (4.0 * M_PI));
    double min_spacing = grid.spacing(0);
    for (std::size_t a = 1; a < dims; ++a) min_spacing = std::min(min_spacing, grid.spacing(a));
    vol.sub_resolution = vol.equivalent_radius < min_spacing;

    // Radius profile: fixed fan plus the layout reference and a ring of
    // directions orthogonal to it (for elongation metrics).
    std::vector<Vec3> dirs = detail::profile_directions(grid);
    if (opts.reference_direction) {
        if (const auto ref = detail::into_grid_span(grid, *opts.reference_direction)) {
            dirs.push_back(*ref);
            dirs.push_back(-*ref);
            const Vec3 e1 = dims == 2 ? unit(grid.axes[0].cross(grid.axes[1]).cross(*ref))
                                      : any_orthogonal(*ref);
            if (dims == 2) {
                dirs.push_back(e1);
                dirs.push_back(-e1);
            } else {
                const Vec3 e2 = unit(ref->cross(e1));
                for (int i = 0; i < 8; ++i) {
                    const double phi = 2.0 * M_PI * i / 8.0;
                    dirs.push_back(unit(e1 * std::cos(phi) + e2 * std::sin(phi)));
                }
            }
        }
    }
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (const Vec3& d : dirs) {
        const DirectionalRadius ray = detail::directional_radius(eval, threshold, d, opts);
        rmin = std::min(rmin, ray.radius);
        rmax = std::max(rmax, ray.radius);
        vol.radii.push_back(ray);
    }
    vol.anisotropy = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    return vol;
}

struct ElongationMetrics {
    double axial_radius = 0.0;
    double transverse_radius = 0.0;
    double ratio = 0.0;
};

/// Radius along +/- the reference direction (whichever larger) against the
/// largest radius over directions orthogonal to it. The reference must
/// have been supplied to extract_volume so the profile contains the
/// required directions.
inline ElongationMetrics elongation_metrics(const CoherentVolume& vol, const Vec3& reference) {
    if (vol.empty || vol.radii.empty()) {
        throw ConfigError("elongation metrics of an empty volume");
    }
    const auto ref = detail::into_grid_span(vol.grid, reference);
    if (!ref) throw ConfigError("reference direction perpendicular to a plane grid");
    ElongationMetrics m;
    bool have_axial = false, have_transverse = false;
    for (const DirectionalRadius& ray : vol.radii) {
        const double c = ray.direction.dot(*ref);
        if (std::abs(c) > 1.0 - 1e-9) {
            m.axial_radius = std::max(m.axial_radius, ray.radius);
            have_axial = true;
        } else if (std::abs(c) < 1e-9) {
            m.transverse_radius = std::max(m.transverse_radius, ray.radius);
            have_transverse = true;
        }
    }
    if (!have_axial || !have_transverse) {
        throw ConfigError("volume profile lacks the reference direction; "
                          "pass it to extract_volume");
    }
    m.ratio = m.transverse_radius > 0.0 ? m.axial_radius / m.transverse_radius
                                        : std::numeric_limits<double>::infinity();
    return m;
}

/// Per-user comparison row between two antenna layouts serving the same
/// users: equivalent radii, their a/b ratio, and the elongation of each
/// layout along its own reference direction.
struct LayoutComparisonRow {
    std::size_t user = 0;
    double radius_a = 0.0;
    double radius_b = 0.0;
    double radius_ratio = 0.0;  // a / b
    double elongation_a = 0.0;
    double elongation_b = 0.0;
};

inline std::vector<LayoutComparisonRow> compare_layouts(
    const std::vector<CoherentVolume>& a, const std::vector<CoherentVolume>& b,
    const std::vector<Vec3>& reference_a, const std::vector<Vec3>& reference_b) {
    if (a.size() != b.size() || a.size() != reference_a.size() ||
        a.size() != reference_b.size()) {
        throw DimensionError("layout comparison requires matching user sets");
    }
    std::vector<LayoutComparisonRow> rows;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].user != b[i].user) {
            throw DimensionError("layout comparison: user sets differ");
        }
        LayoutComparisonRow row;
        row.user = a[i].user;
        row.radius_a = a[i].equivalent_radius;
        row.radius_b = b[i].equivalent_radius;
        row.radius_ratio = row.radius_b > 0.0 ? row.radius_a / row.radius_b
                                              : std::numeric_limits<double>::infinity();
        row.elongation_a = elongation_metrics(a[i], reference_a[i]).ratio;
        row.elongation_b = elongation_metrics(b[i], reference_b[i]).ratio;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace covol
