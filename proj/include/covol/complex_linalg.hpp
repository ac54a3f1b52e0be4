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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "covol/errors.hpp"

namespace covol {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix. Small sizes only (antennas x users scale).
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex{0.0, 0.0}) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("matrix dimensions must be at least 1x1");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::span<const Complex> row(std::size_t r) const {
        return std::span<const Complex>(a_.data() + r * cols_, cols_);
    }
    std::span<Complex> row(std::size_t r) {
        return std::span<Complex>(a_.data() + r * cols_, cols_);
    }

    CVector col(std::size_t c) const {
        CVector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
        return v;
    }

    const std::vector<Complex>& data() const { return a_; }

    bool finite() const {
        for (const Complex& z : a_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> a_;
};

/// Inner product <a, b> = a^dagger b (conjugate-first). This is the one
/// convention used throughout: channel vectors are stored as conjugated
/// columns, so hermitian_inner(h_u, w) equals row u of the channel matrix
/// times w. Fixed here once to keep sign/conjugation bugs out of the SINR
/// code paths.
inline Complex hermitian_inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionError("hermitian_inner: length mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline Complex hermitian_inner(const CVector& a, const CVector& b) {
    return hermitian_inner(std::span<const Complex>(a), std::span<const Complex>(b));
}

inline double norm2(std::span<const Complex> a) {
    double acc = 0.0;
    for (const Complex& z : a) acc += std::norm(z);
    return acc;
}

inline double norm2(const CVector& a) { return norm2(std::span<const Complex>(a)); }

inline double vec_norm(std::span<const Complex> a) { return std::sqrt(norm2(a)); }

namespace detail {

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m.at(r, c);
    return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e) {
    CMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index r = 0; r < e.rows(); ++r)
        for (Eigen::Index c = 0; c < e.cols(); ++c)
            m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = e(r, c);
    return m;
}

}  // namespace detail

/// Ratio of largest to smallest singular value.
inline double condition_number(const CMatrix& m) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m));
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

/// Smallest/largest singular-value ratio (0 for singular matrices).
inline double inverse_condition(const CMatrix& m) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m));
    const auto& s = svd.singularValues();
    return s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
}

inline CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
    return detail::from_eigen(detail::to_eigen(a) * detail::to_eigen(b));
}

/// Minimum-norm right inverse of a fat full-row-rank matrix (U <= N):
/// H * right_pseudo_inverse(H) = I_U. Uses a rank-revealing orthogonal
/// decomposition; explicit (H H^dagger)^-1 loses half the digits on
/// near-orthogonal user sets.
///
/// Throws SingularChannelError when the smallest singular value is below
/// rank_tol times the largest.
inline CMatrix right_pseudo_inverse(const CMatrix& h, double rank_tol = 1e-10) {
    if (h.rows() > h.cols()) {
        throw DimensionError("right_pseudo_inverse expects rows <= cols");
    }
    const Eigen::MatrixXcd e = detail::to_eigen(h);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
    const auto& s = svd.singularValues();
    const double ratio = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
    if (ratio <= rank_tol) {
        throw SingularChannelError(
            "channel matrix is rank deficient (inverse condition " + std::to_string(ratio) + ")",
            ratio > 0.0 ? 1.0 / ratio : std::numeric_limits<double>::infinity());
    }
    return detail::from_eigen(e.completeOrthogonalDecomposition().pseudoInverse());
}

}  // namespace covol
