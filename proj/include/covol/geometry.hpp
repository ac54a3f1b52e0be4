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
#include <limits>

#include "covol/errors.hpp"

namespace covol {

/// Cartesian 3-vector in meters. Also used for unit direction vectors.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    constexpr double norm2() const { return dot(*this); }

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline Vec3 unit(const Vec3& v) {
    const double n = v.norm();
    if (n <= 0.0 || !std::isfinite(n)) {
        throw DegenerateGeometryError("cannot normalize zero or non-finite vector");
    }
    return v / n;
}

inline bool is_unit(const Vec3& v, double tol = 1e-12) {
    return std::abs(v.norm() - 1.0) <= tol;
}

/// Any unit vector orthogonal to v.
inline Vec3 any_orthogonal(const Vec3& v) {
    const Vec3 axis = std::abs(v.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    return unit(v.cross(axis));
}

/// Displacement from a nominal user location, split into norm and direction.
/// Encodes the vector distance * direction; direction must be unit length.
struct Displacement {
    double distance = 0.0;  // meters, >= 0
    Vec3 direction{1, 0, 0};

    Displacement() = default;
    Displacement(double r, const Vec3& r_hat) : distance(r), direction(r_hat) {
        if (r < 0.0 || !std::isfinite(r)) {
            throw DimensionError("displacement distance must be finite and nonnegative");
        }
        if (!is_unit(r_hat)) {
            throw DimensionError("displacement direction must be unit length");
        }
    }

    /// Decompose an arbitrary displacement vector. Zero maps to distance 0
    /// with an arbitrary (unused) direction.
    static Displacement from_vector(const Vec3& r) {
        const double n = r.norm();
        if (n == 0.0) return Displacement{};
        Displacement d;
        d.distance = n;
        d.direction = r / n;
        return d;
    }

    Vec3 vector() const { return direction * distance; }
};

}  // namespace covol
