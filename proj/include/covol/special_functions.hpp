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
#include <stdexcept>
#include <string>
#include <vector>

namespace covol {

/// Highest supported order for spherical Bessel / Legendre evaluation.
inline constexpr int kMaxOrder = 200;

/// Below this argument, j_l is evaluated by its leading-order form
/// rho^l / (2l+1)!! to avoid 0/0 in the recurrences.
inline constexpr double kBesselSmallArg = 1e-8;

namespace detail {

/// log((2l+1)!!) via lgamma; exact loop product would overflow past l ~ 140.
inline double log_odd_double_factorial(int l) {
    return std::lgamma(2.0 * l + 2.0) - l * std::log(2.0) - std::lgamma(l + 1.0);
}

/// rho^l / (2l+1)!!, evaluated in log space so large l underflows to 0
/// instead of producing inf/inf.
inline double bessel_leading_order(int l, double rho) {
    if (l == 0) return 1.0;
    if (rho == 0.0) return 0.0;
    if (l <= 140) {
        double df = 1.0;
        for (int m = 3; m <= 2 * l + 1; m += 2) df *= m;
        return std::pow(rho, l) / df;
    }
    const double lg = l * std::log(rho) - log_odd_double_factorial(l);
    return lg < -745.0 ? 0.0 : std::exp(lg);
}

}  // namespace detail

/// Spherical Bessel functions of the first kind, j_0(rho) .. j_lmax(rho),
/// in one pass. Upward recurrence is used when rho > lmax (stable there);
/// otherwise a Miller-style downward recurrence normalized against
/// j_0 = sin(rho)/rho or j_1, whichever is better conditioned.
inline std::vector<double> spherical_bessel_j_array(int lmax, double rho) {
    if (lmax < 0 || lmax > kMaxOrder) {
        throw std::invalid_argument("spherical_bessel_j: order " + std::to_string(lmax) +
                                    " outside supported range [0, " + std::to_string(kMaxOrder) +
                                    "]");
    }
    if (!(rho >= 0.0)) {
        throw std::invalid_argument("spherical_bessel_j: argument must be >= 0");
    }

    std::vector<double> j(static_cast<std::size_t>(lmax) + 1, 0.0);

    if (rho < kBesselSmallArg) {
        for (int l = 0; l <= lmax; ++l) j[l] = detail::bessel_leading_order(l, rho);
        return j;
    }

    const double j0 = std::sin(rho) / rho;
    const double j1 = j0 / rho - std::cos(rho) / rho;
    j[0] = j0;
    if (lmax == 0) return j;
    j[1] = j1;

    if (rho > lmax) {
        for (int l = 1; l < lmax; ++l) {
            j[l + 1] = (2.0 * l + 1.0) / rho * j[l] - j[l - 1];
        }
        return j;
    }

    // Miller downward pass, started far enough above lmax that the minimal
    // solution dominates by the time it reaches lmax.
    const int start = lmax + 32 + static_cast<int>(rho);
    double up = 0.0;        // trial j_{n+1}
    double cur = 1e-280;    // trial j_n
    for (int n = start; n > 0; --n) {
        const double down = (2.0 * n + 1.0) / rho * cur - up;
        up = cur;
        cur = down;
        if (n - 1 <= lmax) j[n - 1] = down;
        if (std::abs(cur) > 1e280) {
            const double rescale = 1e-280;
            cur *= rescale;
            up *= rescale;
            const int top = std::min(lmax, n - 1);
            for (int m = 0; m <= top; ++m) j[m] *= rescale;
        }
    }
    // Normalize against whichever closed form is away from its zeros.
    const double scale = std::abs(j0) >= std::abs(j1) ? j0 / j[0] : j1 / j[1];
    for (double& v : j) {
        v *= scale;
        if (!std::isfinite(v) || std::abs(v) < 5e-324) v = 0.0;
    }
    return j;
}

/// j_l(rho) for a single order.
inline double spherical_bessel_j(int l, double rho) {
    if (l < 0 || l > kMaxOrder) {
        throw std::invalid_argument("spherical_bessel_j: order " + std::to_string(l) +
                                    " outside supported range [0, " + std::to_string(kMaxOrder) +
                                    "]");
    }
    if (!(rho >= 0.0)) {
        throw std::invalid_argument("spherical_bessel_j: argument must be >= 0");
    }
    if (rho < kBesselSmallArg) return detail::bessel_leading_order(l, rho);
    if (l == 0) return std::sin(rho) / rho;
    return spherical_bessel_j_array(l, rho)[l];
}

/// Legendre polynomials P_0(x) .. P_lmax(x) by the three-term recurrence.
/// x is clamped to [-1, 1]; inputs are direction cosines that may carry
/// rounding a hair outside the interval.
inline std::vector<double> legendre_p_array(int lmax, double x) {
    if (lmax < 0 || lmax > kMaxOrder) {
        throw std::invalid_argument("legendre_p: degree " + std::to_string(lmax) +
                                    " outside supported range [0, " + std::to_string(kMaxOrder) +
                                    "]");
    }
    x = std::clamp(x, -1.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    p[0] = 1.0;
    if (lmax == 0) return p;
    p[1] = x;
    for (int l = 1; l < lmax; ++l) {
        p[l + 1] = ((2.0 * l + 1.0) * x * p[l] - l * p[l - 1]) / (l + 1.0);
    }
    return p;
}

/// P_l(x) for a single degree.
inline double legendre_p(int l, double x) {
    if (l < 0 || l > kMaxOrder) {
        throw std::invalid_argument("legendre_p: degree " + std::to_string(l) +
                                    " outside supported range [0, " + std::to_string(kMaxOrder) +
                                    "]");
    }
    x = std::clamp(x, -1.0, 1.0);
    if (l == 0) return 1.0;
    if (l == 1) return x;
    double pm = 1.0;
    double pc = x;
    for (int n = 1; n < l; ++n) {
        const double pn = ((2.0 * n + 1.0) * x * pc - n * pm) / (n + 1.0);
        pm = pc;
        pc = pn;
    }
    return pc;
}

}  // namespace covol
