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
#include <vector>

#include "covol/complex_linalg.hpp"
#include "covol/geometry.hpp"
#include "covol/paths.hpp"
#include "covol/scenario.hpp"

// Convention notes, fixed project-wide:
//
//  * The channel matrix H is U x N with H(u, n) holding the raw coefficient
//    c_un (sum of path amplitudes). The channel vector of user u is the
//    conjugated row, h_u = conj(H.row(u)), so hermitian_inner(h_u, w)
//    equals H.row(u) * w: the signal user u receives under weights w.
//
//  * Path directions point from the user toward the path source, so a
//    displacement r of the receive antenna changes each path's phase by
//    exp(+i k v.r): moving toward the source shortens the propagation
//    distance. Verified against the exact spherical evaluation; flipping
//    this sign is the classic conjugation bug.

namespace covol {

/// How displaced channel coefficients are evaluated.
enum class ChannelMode {
    /// Exact geometry: distances and pathloss recomputed from the path
    /// sources at the displaced point (spherical wavefronts). Used for
    /// field maps.
    Spherical,
    /// Local plane-wave approximation: per-path phase shift exp(+i k v.r)
    /// on the frozen nominal amplitudes. Used for multipole validation.
    PlaneWave,
};

/// Plane-wave coefficient of one link at displacement r from the nominal
/// user location.
inline Complex coefficient_planewave(const PathSet& set, double wavenumber, const Vec3& r) {
    Complex acc{0.0, 0.0};
    for (const PathComponent& p : set.paths) {
        acc += p.amplitude * std::polar(1.0, wavenumber * p.direction.dot(r));
    }
    return acc;
}

/// Exact coefficient of one link at an arbitrary point: every path is
/// re-evaluated as a spherical wave from its source, with the LOS pathloss
/// recomputed at the new distance.
inline Complex coefficient_exact(const PathSet& set, const PropagationParams& prop,
                                 const Vec3& point) {
    const double k = prop.wavenumber();
    Complex acc{0.0, 0.0};
    for (const PathComponent& p : set.paths) {
        const double d = (p.source - point).norm();
        if (d == 0.0) {
            throw DegenerateGeometryError("evaluation point coincides with a path source");
        }
        if (p.line_of_sight) {
            acc += p.gain_scale * pathloss_gain(d, prop) * std::polar(1.0, -k * d);
        } else {
            acc += p.amplitude * (p.source_distance / d) *
                   std::polar(1.0, -k * (d - p.source_distance));
        }
    }
    return acc;
}

/// Exact coefficient between `point` and antenna n, using user u's paths.
inline Complex channel_exact_at(const Scenario& sc, const PathTable& paths, std::size_t u,
                                std::size_t n, const Vec3& point) {
    return coefficient_exact(paths.at(u, n), sc.propagation, point);
}

/// Plane-wave coefficient of link (u, n) at displacement r.
inline Complex channel_planewave_displaced(const Scenario& sc, const PathTable& paths,
                                           std::size_t u, std::size_t n, const Vec3& r) {
    return coefficient_planewave(paths.at(u, n), sc.wavenumber(), r);
}

/// Nominal U x N channel matrix, rows indexed by user. Entry (u, n) is the
/// raw coefficient; the user-u channel vector is conj(row u).
inline CMatrix channel_matrix(const Scenario& sc, const PathTable& paths) {
    CMatrix h(sc.num_users(), sc.num_antennas());
    for (std::size_t u = 0; u < sc.num_users(); ++u) {
        for (std::size_t n = 0; n < sc.num_antennas(); ++n) {
            h.at(u, n) = paths.at(u, n).nominal_coefficient();
        }
    }
    if (!h.finite()) throw ConfigError("channel matrix has non-finite entries");
    return h;
}

/// Channel vector of user u in the conjugated-column convention.
inline CVector channel_vector(const CMatrix& h, std::size_t u) {
    CVector v(h.cols());
    for (std::size_t n = 0; n < h.cols(); ++n) v[n] = std::conj(h.at(u, n));
    return v;
}

/// Displaced channel vector of user u (conjugated-column convention).
/// In spherical mode the displacement is applied to the user's nominal
/// location and every coefficient is re-evaluated from exact geometry.
inline CVector displaced_channel_vector(const Scenario& sc, const PathTable& paths, std::size_t u,
                                        const Vec3& r, ChannelMode mode) {
    CVector v(sc.num_antennas());
    if (mode == ChannelMode::Spherical) {
        const Vec3 point = sc.users[u] + r;
        for (std::size_t n = 0; n < sc.num_antennas(); ++n) {
            v[n] = std::conj(coefficient_exact(paths.at(u, n), sc.propagation, point));
        }
    } else {
        const double k = sc.wavenumber();
        for (std::size_t n = 0; n < sc.num_antennas(); ++n) {
            v[n] = std::conj(coefficient_planewave(paths.at(u, n), k, r));
        }
    }
    return v;
}

}  // namespace covol
