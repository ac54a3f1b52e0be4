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
#include <vector>

#include "covol/channel.hpp"
#include "covol/complex_linalg.hpp"

namespace covol {

/// Transmit beamforming weights, one unit-norm column per user. Equal
/// per-user power is realized as unit-norm columns, which makes
/// SNR_u = |<h_u, w_u>|^2 / N_o hold verbatim and satisfies the sum power
/// constraint with unit-power independent user streams.
struct Precoder {
    CMatrix weights;           // N x U
    bool zero_forcing = true;  // the order-0 interference cancellation requires this

    CVector column(std::size_t u) const { return weights.col(u); }
};

namespace detail {

/// Normalize columns to unit norm and rotate each so the corresponding
/// diagonal gain <h_u, w_u> is real and positive. The rotation removes a
/// gauge freedom so golden outputs are stable.
inline void normalize_columns(const CMatrix& h, CMatrix& w) {
    for (std::size_t u = 0; u < w.cols(); ++u) {
        double nrm2 = 0.0;
        for (std::size_t n = 0; n < w.rows(); ++n) nrm2 += std::norm(w.at(n, u));
        const double nrm = std::sqrt(nrm2);
        if (!(nrm > 0.0)) {
            throw SingularChannelError("precoder column " + std::to_string(u) + " collapsed", 0.0);
        }
        // <h_u, w_u> = H.row(u) * w_u in the raw-coefficient convention.
        Complex diag{0.0, 0.0};
        for (std::size_t n = 0; n < w.rows(); ++n) diag += h.at(u, n) * w.at(n, u);
        const double mag = std::abs(diag);
        const Complex phase = mag > 0.0 ? std::conj(diag) / mag : Complex{1.0, 0.0};
        for (std::size_t n = 0; n < w.rows(); ++n) w.at(n, u) *= phase / nrm;
    }
}

}  // namespace detail

/// Linear zero-forcing precoder: columns of the minimum-norm right inverse
/// of H, rescaled to unit norm with a positive-real diagonal gain.
/// Throws SingularChannelError for rank-deficient channels.
inline Precoder zero_forcing(const CMatrix& h, double rank_tol = 1e-10) {
    const CMatrix pinv = right_pseudo_inverse(h, rank_tol);
    Precoder p;
    p.weights = pinv;
    p.zero_forcing = true;
    detail::normalize_columns(h, p.weights);
    return p;
}

/// Regularized (MMSE-style) variant behind the same interface:
/// W = H^dagger (H H^dagger + delta I)^-1, columns normalized. Kept as an
/// optional hook; presets do not use it and the multipole SINR form
/// refuses it.
inline Precoder regularized_zero_forcing(const CMatrix& h, double delta) {
    const Eigen::MatrixXcd e = detail::to_eigen(h);
    const Eigen::MatrixXcd gram =
        e * e.adjoint() + delta * Eigen::MatrixXcd::Identity(e.rows(), e.rows());
    Precoder p;
    p.weights = detail::from_eigen(e.adjoint() * gram.inverse());
    p.zero_forcing = false;
    detail::normalize_columns(h, p.weights);
    return p;
}

/// Zero-displacement SNR of user u: |<h_u, w_u>|^2 / N_o. With a
/// zero-forcing precoder the interference term vanishes at the origin, so
/// this is the SINR at the user's nominal location.
inline double snr_at_origin(const CMatrix& h, const Precoder& w, std::size_t u,
                            double noise_power) {
    Complex gain{0.0, 0.0};
    for (std::size_t n = 0; n < h.cols(); ++n) gain += h.at(u, n) * w.weights.at(n, u);
    return std::norm(gain) / noise_power;
}

/// Noise power that puts the median user's zero-displacement SNR at the
/// given level. Presets use 30 dB: well above the thresholds of interest,
/// so volumes are interference-limited rather than noise-limited.
inline double noise_for_median_snr(const CMatrix& h, const Precoder& w, double target_snr_db) {
    std::vector<double> gains(h.rows());
    for (std::size_t u = 0; u < h.rows(); ++u) {
        Complex gain{0.0, 0.0};
        for (std::size_t n = 0; n < h.cols(); ++n) gain += h.at(u, n) * w.weights.at(n, u);
        gains[u] = std::norm(gain);
    }
    std::sort(gains.begin(), gains.end());
    const std::size_t m = gains.size();
    const double median =
        m % 2 == 1 ? gains[m / 2] : 0.5 * (gains[m / 2 - 1] + gains[m / 2]);
    return median / std::pow(10.0, target_snr_db / 10.0);
}

}  // namespace covol
