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

#include <cstddef>
#include <string>
#include <vector>

#include "covol/errors.hpp"
#include "covol/geometry.hpp"
#include "covol/propagation.hpp"

namespace covol {

/// Immutable world model: N transmit antenna positions, U user positions,
/// propagation statistics and the noise power N_o (linear, relative to
/// unit per-stream transmit power). N >= U is required for zero-forcing.
struct Scenario {
    std::vector<Vec3> antennas;  // size N
    std::vector<Vec3> users;     // size U
    PropagationParams propagation;
    double noise_power = 1e-9;

    std::size_t num_antennas() const { return antennas.size(); }
    std::size_t num_users() const { return users.size(); }

    void validate() const {
        propagation.validate();
        const std::size_t n = antennas.size();
        const std::size_t u = users.size();
        if (u < 1) throw ConfigError("scenario needs at least one user");
        if (n < u) {
            throw ConfigError("scenario violates N >= U (" + std::to_string(n) + " antennas, " +
                              std::to_string(u) + " users)");
        }
        if (!(noise_power > 0.0)) throw ConfigError("noise power must be positive");
        auto check_distinct = [](const std::vector<Vec3>& pts, const char* what) {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (!pts[i].finite()) throw ConfigError(std::string(what) + " position not finite");
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    if ((pts[i] - pts[j]).norm() == 0.0) {
                        throw ConfigError(std::string("duplicate ") + what + " positions at index " +
                                          std::to_string(i) + " and " + std::to_string(j));
                    }
                }
            }
        };
        check_distinct(antennas, "antenna");
        check_distinct(users, "user");
        for (const Vec3& a : antennas) {
            for (const Vec3& u_pos : users) {
                if ((a - u_pos).norm() == 0.0) {
                    throw DegenerateGeometryError("user coincides with an antenna");
                }
            }
        }
    }

    double wavelength() const { return propagation.wavelength(); }
    double wavenumber() const { return propagation.wavenumber(); }
};

}  // namespace covol
