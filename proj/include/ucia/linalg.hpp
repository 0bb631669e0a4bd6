// SPDX-License-Identifier: Apache-2.0
//
// ucia: user-cooperation interference alignment for two-cell MIMO broadcast channels
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
// ------------------------------------------------------------------------

#ifndef UCIA_LINALG_HPP
#define UCIA_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ucia {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Error taxonomy shared by every module.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A probability-zero channel realization defeated a generic-rank assumption; callers redraw.
struct DegenerateRealization : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleRealization : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToleranceConfig {
    double rank_tol = 1e-10;  // relative singular-value threshold
    double align_tol = 1e-8;  // absolute residual / angle bound

    void validate() const {
        if (!(rank_tol > 0.0 && rank_tol < 1.0))
            throw InvalidInput("rank_tol must lie in (0, 1)");
        if (!(align_tol > 0.0 && align_tol < 1.0))
            throw InvalidInput("align_tol must lie in (0, 1)");
    }
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
    if (a.size() == 0)
        throw InvalidInput(std::string(what) + ": empty matrix");
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            const Complex z = a(r, c);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InvalidInput(std::string(what) + ": non-finite entry");
        }
}

inline Eigen::JacobiSVD<CMatrix> full_svd(const CMatrix& a) {
    return Eigen::JacobiSVD<CMatrix>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

inline Eigen::Index rank_from_singular_values(const Eigen::VectorXd& sv, double rank_tol) {
    if (sv.size() == 0 || sv(0) <= 0.0)
        return 0;
    const double threshold = rank_tol * sv(0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > threshold)
        ++r;
    return r;
}

} // namespace detail

// Rotates x by a unit-modulus scalar so that its first significant entry is real and positive.
// Entries below 1e-6 of the largest magnitude are treated as zero.
inline void canonicalize_phase(Eigen::Ref<CVector> x) {
    const double peak = x.cwiseAbs().maxCoeff();
    if (!(peak > 0.0))
        return;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double mag = std::abs(x(i));
        if (mag > 1e-6 * peak) {
            x *= std::conj(x(i)) / mag;
            x(i) = Complex(mag, 0.0);
            return;
        }
    }
}

inline Eigen::Index numeric_rank(const CMatrix& a, const ToleranceConfig& tol = {}) {
    detail::require_finite(a, "numeric_rank");
    Eigen::JacobiSVD<CMatrix> svd(a);
    return detail::rank_from_singular_values(svd.singularValues(), tol.rank_tol);
}

/// Orthonormal basis for the null space of `a`, one basis vector per column.
///
/// Columns are ordered by ascending singular value (the trailing right singular vectors
/// first) and each column carries the canonical phase, so two callers holding the same
/// matrix obtain bit-identical bases. The zero matrix has full nullity.
inline CMatrix null_space_basis(const CMatrix& a, const ToleranceConfig& tol = {}) {
    detail::require_finite(a, "null_space_basis");
    const auto svd = detail::full_svd(a);
    const Eigen::Index n = a.cols();
    const Eigen::Index rank = detail::rank_from_singular_values(svd.singularValues(), tol.rank_tol);
    const Eigen::Index nullity = n - rank;
    CMatrix basis(n, nullity);
    const CMatrix& v = svd.matrixV();
    for (Eigen::Index j = 0; j < nullity; ++j) {
        basis.col(j) = v.col(n - 1 - j);
        canonicalize_phase(basis.col(j));
    }
    return basis;
}

/// Principal angle between span(u) and span(v), in [0, pi/2].
///
/// Equal to arccos(|u^H v| / (|u| |v|)); evaluated through atan2 of the orthogonal and
/// parallel components so angles near zero keep full relative precision.
inline double collinearity_angle(const CVector& u, const CVector& v) {
    if (u.size() != v.size())
        throw InvalidInput("collinearity_angle: dimension mismatch");
    const double nu = u.norm();
    const double nv = v.norm();
    if (!(nu > 0.0) || !(nv > 0.0))
        throw InvalidInput("collinearity_angle: zero-norm argument");
    const CVector uh = u / nu;
    const CVector vh = v / nv;
    const Complex inner = uh.dot(vh);
    const double perp = (vh - uh * inner).norm();
    return std::atan2(perp, std::abs(inner));
}

/// Distance from x to span(b); `b` must have orthonormal columns.
inline double project_residual(const CVector& x, const CMatrix& b) {
    if (x.size() != b.rows())
        throw InvalidInput("project_residual: dimension mismatch");
    return (x - b * (b.adjoint() * x)).norm();
}

// Left singular vector of the largest singular value, canonical phase.
inline CVector dominant_left_singular_vector(const CMatrix& a) {
    detail::require_finite(a, "dominant_left_singular_vector");
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
    CVector u = svd.matrixU().col(0);
    canonicalize_phase(u);
    return u;
}

} // namespace ucia

#endif
