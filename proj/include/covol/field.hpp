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
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "covol/errors.hpp"
#include "covol/geometry.hpp"
#include "covol/precoding.hpp"
#include "covol/sinr.hpp"

namespace covol {

/// Default cap on grid sample count; sampling refuses larger grids rather
/// than silently truncating.
inline constexpr std::size_t kDefaultGridCap = 20'000'000;

/// Regular sampling grid: a corner origin plus two or three orthonormal
/// axes, each with a physical extent and a sample count.
struct GridSpec {
    Vec3 origin;
    std::vector<Vec3> axes;       // 2 or 3, orthonormal
    std::vector<double> extents;  // meters per axis
    std::vector<int> samples;     // per axis, >= 2
    std::size_t cap = kDefaultGridCap;

    std::size_t dims() const { return axes.size(); }

    std::size_t num_points() const {
        std::size_t n = 1;
        for (int s : samples) n *= static_cast<std::size_t>(s);
        return n;
    }

    double spacing(std::size_t axis) const { return extents[axis] / (samples[axis] - 1); }

    void validate() const {
        if (axes.size() != 2 && axes.size() != 3) {
            throw ConfigError("grid needs 2 or 3 axes, got " + std::to_string(axes.size()));
        }
        if (extents.size() != axes.size() || samples.size() != axes.size()) {
            throw ConfigError("grid axes/extents/samples arity mismatch");
        }
        for (std::size_t a = 0; a < axes.size(); ++a) {
            if (!is_unit(axes[a], 1e-9)) throw ConfigError("grid axis not unit length");
            for (std::size_t b = a + 1; b < axes.size(); ++b) {
                if (std::abs(axes[a].dot(axes[b])) > 1e-9) {
                    throw ConfigError("grid axes not orthogonal");
                }
            }
            if (!(extents[a] > 0.0)) throw ConfigError("grid extent must be positive");
            if (samples[a] < 2) throw ConfigError("grid needs at least 2 samples per axis");
        }
        if (num_points() > cap) {
            throw ResourceError("grid has " + std::to_string(num_points()) +
                                " samples, above the cap of " + std::to_string(cap));
        }
    }

    /// Point at integer indices (i0 fastest axis).
    Vec3 point(const std::vector<int>& idx) const {
        Vec3 p = origin;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            p = p + axes[a] * (extents[a] * double(idx[a]) / double(samples[a] - 1));
        }
        return p;
    }

    std::size_t linear_index(const std::vector<int>& idx) const {
        std::size_t lin = 0;
        for (std::size_t a = axes.size(); a-- > 0;) {
            lin = lin * static_cast<std::size_t>(samples[a]) + static_cast<std::size_t>(idx[a]);
        }
        return lin;
    }

    std::vector<int> unravel(std::size_t lin) const {
        std::vector<int> idx(axes.size());
        for (std::size_t a = 0; a < axes.size(); ++a) {
            idx[a] = static_cast<int>(lin % static_cast<std::size_t>(samples[a]));
            lin /= static_cast<std::size_t>(samples[a]);
        }
        return idx;
    }

    /// Indices of the grid point nearest to p; empty if p is outside the
    /// grid (beyond half a cell past the border).
    std::vector<int> nearest(const Vec3& p) const {
        std::vector<int> idx(axes.size());
        const Vec3 rel = p - origin;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const double t = rel.dot(axes[a]) / spacing(a);
            const int i = static_cast<int>(std::lround(t));
            if (i < 0 || i >= samples[a]) return {};
            idx[a] = i;
        }
        return idx;
    }

    /// Centered plane grid spanned by two axes, half-extents and step size.
    static GridSpec plane(const Vec3& center, const Vec3& u_axis, const Vec3& v_axis,
                          double half_u, double half_v, double step) {
        GridSpec g;
        g.axes = {unit(u_axis), unit(v_axis)};
        g.samples = {2 * static_cast<int>(std::lround(half_u / step)) + 1,
                     2 * static_cast<int>(std::lround(half_v / step)) + 1};
        g.extents = {(g.samples[0] - 1) * step, (g.samples[1] - 1) * step};
        g.origin = center - g.axes[0] * (g.extents[0] / 2) - g.axes[1] * (g.extents[1] / 2);
        return g;
    }

    /// Centered axis-aligned cube grid.
    static GridSpec box(const Vec3& center, double half, double step) {
        GridSpec g;
        g.axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        const int n = 2 * static_cast<int>(std::lround(half / step)) + 1;
        g.samples = {n, n, n};
        const double extent = (n - 1) * step;
        g.extents = {extent, extent, extent};
        g.origin = center - Vec3{extent / 2, extent / 2, extent / 2};
        return g;
    }
};

/// Sampled SINR values over a grid: one layer per requested user plus the
/// pointwise envelope (max over the sampled users).
struct SinrField {
    GridSpec grid;
    std::vector<std::size_t> user_ids;        // scenario user indices
    std::vector<std::vector<double>> values;  // [user slot][point], linear
    std::vector<double> envelope;             // [point]
};

namespace detail {

inline unsigned field_thread_count() {
    if (const char* env = std::getenv("COVOL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 512) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace detail

/// Sample per-user SINR over a grid. Each point's displacement for user u
/// is point - user_u; evaluation is data-parallel over points and
/// deterministic regardless of thread count (set COVOL_THREADS to pin it).
inline SinrField sample_field(const Scenario& sc, const PathTable& paths, const Precoder& w,
                              const GridSpec& grid, ChannelMode mode,
                              std::vector<std::size_t> user_ids = {}) {
    grid.validate();
    if (user_ids.empty()) {
        user_ids.resize(sc.num_users());
        for (std::size_t u = 0; u < sc.num_users(); ++u) user_ids[u] = u;
    }
    for (std::size_t u : user_ids) {
        if (u >= sc.num_users()) throw DimensionError("field user index out of range");
    }

    SinrField field;
    field.grid = grid;
    field.user_ids = user_ids;
    const std::size_t npts = grid.num_points();
    field.values.assign(user_ids.size(), std::vector<double>(npts, 0.0));
    field.envelope.assign(npts, 0.0);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t lin = begin; lin < end; ++lin) {
            const Vec3 p = grid.point(grid.unravel(lin));
            double env = 0.0;
            for (std::size_t slot = 0; slot < user_ids.size(); ++slot) {
                const std::size_t u = user_ids[slot];
                const double v =
                    sinr_exact(sc, paths, w, u, p - sc.users[u], mode).value();
                field.values[slot][lin] = v;
                env = std::max(env, v);
            }
            field.envelope[lin] = env;
        }
    };

    const unsigned nthreads = std::min<std::size_t>(detail::field_thread_count(), npts);
    if (nthreads <= 1) {
        worker(0, npts);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nthreads);
        const std::size_t chunk = (npts + nthreads - 1) / nthreads;
        for (unsigned t = 0; t < nthreads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(npts, begin + chunk);
            if (begin >= end) continue;
            pool.emplace_back([&, t, begin, end] {
                try {
                    worker(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    return field;
}

/// Single-user field over the user's own neighborhood grid.
inline SinrField sample_user_field(const Scenario& sc, const PathTable& paths, const Precoder& w,
                                   const GridSpec& grid, ChannelMode mode, std::size_t user) {
    return sample_field(sc, paths, w, grid, mode, {user});
}

}  // namespace covol
