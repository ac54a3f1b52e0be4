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
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "covol/channel.hpp"
#include "covol/complex_linalg.hpp"
#include "covol/paths.hpp"
#include "covol/precoding.hpp"
#include "covol/special_functions.hpp"

namespace covol {

/// SINR split into its terms: value() = signal / (noise + interference).
struct SinrParts {
    double signal = 0.0;
    double interference = 0.0;
    double noise = 0.0;

    double value() const { return signal / (noise + interference); }
    double db() const { return 10.0 * std::log10(value()); }
};

/// Default series truncation: the Bessel factors only start decaying past
/// order kr, and ~30 extra orders buy ~1e-8 headroom (confirmed by the
/// convergence tests).
inline int default_truncation_order(double kr) {
    return std::min(kMaxOrder, static_cast<int>(std::ceil(kr)) + 30);
}

/// True when the capped order cannot deliver full series accuracy at this
/// displacement; callers may want to surface a warning.
inline bool truncation_saturated(double kr) {
    return static_cast<int>(std::ceil(kr)) + 30 > kMaxOrder;
}

/// Directional multipole coefficient vectors b_u^0 .. b_u^L for user u and
/// displacement direction r_hat, in the conjugated-column convention of
/// channel vectors: order 0 reproduces the nominal h_u exactly.
///
/// Entry n of order l is conj(sum_p a_p P_l(r_hat . v_p)) over the paths
/// of link (u, n).
inline std::vector<CVector> multipole_coeffs(const PathTable& paths, std::size_t u,
                                             const Vec3& r_hat, int max_order) {
    if (max_order < 0 || max_order > kMaxOrder) {
        throw std::invalid_argument("multipole order outside supported range");
    }
    const std::size_t n_ant = paths.num_antennas();
    std::vector<CVector> b(static_cast<std::size_t>(max_order) + 1, CVector(n_ant, {0.0, 0.0}));
    for (std::size_t n = 0; n < n_ant; ++n) {
        for (const PathComponent& p : paths.at(u, n).paths) {
            const std::vector<double> pl = legendre_p_array(max_order, r_hat.dot(p.direction));
            for (int l = 0; l <= max_order; ++l) {
                b[l][n] += std::conj(p.amplitude) * pl[l];
            }
        }
    }
    return b;
}

/// Truncated multipole reconstruction of the displaced channel vector:
///   h_u(r) = sum_l (-i)^l (2l+1) j_l(kr) b_u^l(r_hat).
/// The phase factor is (-i)^l here and (+i)^l in the scalar series below
/// because the inner product conjugates the stored vectors.
inline CVector channel_multipole(const std::vector<CVector>& coeffs, double wavenumber, double r,
                                 int max_order) {
    if (coeffs.empty()) throw DimensionError("channel_multipole: no coefficients");
    max_order = std::min<int>(max_order, static_cast<int>(coeffs.size()) - 1);
    const std::vector<double> j = spherical_bessel_j_array(max_order, wavenumber * r);
    CVector h(coeffs[0].size(), Complex{0.0, 0.0});
    Complex phase{1.0, 0.0};  // (-i)^l
    for (int l = 0; l <= max_order; ++l) {
        const double weight = (2.0 * l + 1.0) * j[l];
        if (weight != 0.0) {
            for (std::size_t n = 0; n < h.size(); ++n) h[n] += phase * weight * coeffs[l][n];
        }
        phase *= Complex{0.0, -1.0};
    }
    return h;
}

/// Exact SINR of user u displaced by r from its nominal location, for a
/// fixed precoder:
///   |<h_u(r), w_u>|^2 / (N_o + sum_{v != u} |<h_u(r), w_v>|^2).
/// `mode` selects spherical re-evaluation (field maps) or the local
/// plane-wave approximation (multipole validation).
inline SinrParts sinr_exact(const Scenario& sc, const PathTable& paths, const Precoder& w,
                            std::size_t u, const Vec3& r, ChannelMode mode) {
    const CVector h = displaced_channel_vector(sc, paths, u, r, mode);
    SinrParts parts;
    parts.noise = sc.noise_power;
    const std::size_t n_users = w.weights.cols();
    for (std::size_t v = 0; v < n_users; ++v) {
        Complex acc{0.0, 0.0};
        for (std::size_t n = 0; n < h.size(); ++n) {
            acc += std::conj(h[n]) * w.weights.at(n, v);
        }
        if (v == u) {
            parts.signal = std::norm(acc);
        } else {
            parts.interference += std::norm(acc);
        }
    }
    return parts;
}

/// SINR from the truncated multipole series. The interference sum starts
/// at order 1: with zero forcing the order-0 term <b_u^0, w_v> = <h_u, w_v>
/// vanishes, which is what confines the interference rise near the user.
/// Refuses non-zero-forcing precoders, where that cancellation is absent.
inline SinrParts sinr_multipole(const Scenario& sc, const PathTable& paths, const Precoder& w,
                                std::size_t u, const Displacement& d, int max_order) {
    if (!w.zero_forcing) {
        throw std::invalid_argument("sinr_multipole requires a zero-forcing precoder");
    }
    const double kr = sc.wavenumber() * d.distance;
    const std::vector<CVector> b = multipole_coeffs(paths, u, d.direction, max_order);
    const std::vector<double> j = spherical_bessel_j_array(max_order, kr);

    SinrParts parts;
    parts.noise = sc.noise_power;
    const std::size_t n_users = w.weights.cols();
    for (std::size_t v = 0; v < n_users; ++v) {
        const CVector wv = w.weights.col(v);
        Complex series{0.0, 0.0};
        Complex phase{1.0, 0.0};  // (+i)^l
        for (int l = 0; l <= max_order; ++l) {
            if (v == u || l >= 1) {
                const double weight = (2.0 * l + 1.0) * j[l];
                if (weight != 0.0) series += phase * weight * hermitian_inner(b[l], wv);
            }
            phase *= Complex{0.0, 1.0};
        }
        if (v == u) {
            parts.signal = std::norm(series);
        } else {
            parts.interference += std::norm(series);
        }
    }
    return parts;
}

/// Small-displacement approximation: only the order-1 interference term is
/// kept, with j_1(kr) ~ kr/3, giving
///   |<h_u, w_u>|^2 / (N_o + (kr)^2 sum_{v != u} |<b_u^1(r_hat), w_v>|^2).
inline SinrParts sinr_small_displacement(const Scenario& sc, const PathTable& paths,
                                         const CMatrix& h, const Precoder& w, std::size_t u,
                                         const Displacement& d) {
    const double kr = sc.wavenumber() * d.distance;
    const std::vector<CVector> b = multipole_coeffs(paths, u, d.direction, 1);
    SinrParts parts;
    parts.noise = sc.noise_power;
    Complex gain{0.0, 0.0};
    for (std::size_t n = 0; n < h.cols(); ++n) gain += h.at(u, n) * w.weights.at(n, u);
    parts.signal = std::norm(gain);
    for (std::size_t v = 0; v < w.weights.cols(); ++v) {
        if (v == u) continue;
        parts.interference += kr * kr * std::norm(hermitian_inner(b[1], w.weights.col(v)));
    }
    return parts;
}

/// Per-antenna power fractions and direction cosines of user u for a fixed
/// displacement direction. LOS-only geometry: xi_un is the fraction of the
/// user's channel power arriving from antenna n, cos_gamma_un the cosine
/// between the displacement direction and the LOS direction to antenna n.
struct GeometryFractions {
    std::size_t user = 0;
    std::vector<double> xi;         // sums to 1
    std::vector<double> cos_gamma;  // each in [-1, 1]
};

inline GeometryFractions geometry_fractions(const CMatrix& h, const PathTable& paths,
                                            std::size_t u, const Vec3& r_hat) {
    GeometryFractions g;
    g.user = u;
    const std::size_t n_ant = h.cols();
    g.xi.resize(n_ant);
    g.cos_gamma.resize(n_ant);
    double total = 0.0;
    for (std::size_t n = 0; n < n_ant; ++n) {
        g.xi[n] = std::norm(h.at(u, n));
        total += g.xi[n];
        const PathComponent* los = paths.at(u, n).los();
        if (los == nullptr) {
            throw ConfigError("geometry fractions require a LOS path on every link");
        }
        g.cos_gamma[n] = std::clamp(r_hat.dot(los->direction), -1.0, 1.0);
    }
    if (!(total > 0.0)) throw ConfigError("geometry fractions: zero channel power");
    for (double& x : g.xi) x /= total;
    return g;
}

/// Pairwise angular-spread factor sum_{s<t} xi_s xi_t (cos_s - cos_t)^2.
/// Kept in pairwise form: it must vanish exactly when all cosines are
/// equal, which the one-pass variance form cannot guarantee.
inline double angular_spread_factor(const GeometryFractions& g) {
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < g.xi.size(); ++s) {
        for (std::size_t t = s + 1; t < g.xi.size(); ++t) {
            const double d = g.cos_gamma[s] - g.cos_gamma[t];
            acc += g.xi[s] * g.xi[t] * d * d;
        }
    }
    return acc;
}

/// Orthogonal-channel Lorentzian SINR profile:
///   SNR_u / (1 + (kr)^2 SNR_u sum_{s<t} xi_s xi_t (cos_s - cos_t)^2).
/// Exact for N = U with orthogonal LOS channels; an approximate lower
/// bound for N > U.
inline double sinr_lorentzian(const GeometryFractions& g, double snr_u, double wavenumber,
                              double r) {
    const double kr = wavenumber * r;
    return snr_u / (1.0 + kr * kr * snr_u * angular_spread_factor(g));
}

/// Closed-form coherent-signal radius along one direction.
struct CoherentRadius {
    double meters = 0.0;
    /// All direction cosines coincide (centralized-array limit): the
    /// Lorentzian never crosses the threshold and the radius diverges.
    bool degenerate = false;

    bool is_infinite() const { return std::isinf(meters); }
};

/// Radius at which the Lorentzian profile falls to sinr_threshold:
///   R = (lambda / 2 pi) * spread^-1/2 * sqrt(1/SINR_o - 1/SNR_u).
/// Returns zero when the threshold is not below SNR_u, and an infinity
/// sentinel with the degenerate flag when the angular spread vanishes.
/// Quantitative only while R << lambda / 2 pi.
inline CoherentRadius coherent_radius(const GeometryFractions& g, double snr_u,
                                      double sinr_threshold, double wavelength) {
    CoherentRadius out;
    if (!(sinr_threshold > 0.0)) {
        throw std::invalid_argument("coherent_radius: threshold must be positive");
    }
    if (sinr_threshold >= snr_u) {
        out.meters = 0.0;
        return out;
    }
    const double spread = angular_spread_factor(g);
    if (spread < 1e-24) {
        out.meters = std::numeric_limits<double>::infinity();
        out.degenerate = true;
        return out;
    }
    out.meters = wavelength / (2.0 * M_PI) *
                 std::sqrt((1.0 / sinr_threshold - 1.0 / snr_u) / spread);
    return out;
}

}  // namespace covol
