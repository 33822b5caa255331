#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qqchain/errors.hpp"
#include "qqchain/matrix.hpp"
#include "qqchain/tolerances.hpp"

namespace qqchain {

/// Full eigendecomposition of a Hermitian matrix.  values are ascending;
/// column k of vectors is the unit eigenvector for values[k].
struct EigenSystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

namespace detail {

// One complex Jacobi rotation annihilating a(p,q).  The rotation is
// U = diag(1, conj(phase)) * G with G the classical 2x2 rotation, so the
// transformed block is real before the angle is chosen.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;

    const cplx phase = apq / r;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // Column update: A <- A U with U[p][p]=c, U[p][q]=s,
    // U[q][p]=-s*conj(phase), U[q][q]=c*conj(phase).
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * c - akq * s * std::conj(phase);
        a(k, q) = akp * s + akq * c * std::conj(phase);
    }
    // Row update: A <- U^dagger A.
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = apk * c - aqk * s * phase;
        a(q, k) = apk * s + aqk * c * phase;
    }
    // Accumulate eigenvectors.
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * c - vkq * s * std::conj(phase);
        v(k, q) = vkp * s + vkq * c * std::conj(phase);
    }
    // The pivot is zero by construction; enforce it against roundoff.
    a(p, q) = 0.0;
    a(q, p) = 0.0;
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

} // namespace detail

/// Cyclic Jacobi diagonalization of a Hermitian matrix (d <= 16).
/// Throws NotHermitianError / BadShapeError up front and
/// NoConvergenceError if the sweep cap is hit.  Output is deterministic:
/// fixed pivot order, stable value sort.
inline EigenSystem hermitian_eigensystem(const ComplexMatrix& m,
                                         double hermiticity_tol = tol::hermitian) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw BadShapeError("eigensystem of non-square matrix");
    if (n == 0 || n > static_cast<std::size_t>(tol::max_eigen_dim))
        throw BadShapeError("eigensystem dimension out of supported range");
    if (!m.is_hermitian(hermiticity_tol))
        throw NotHermitianError("matrix is not Hermitian within tolerance");

    // Work on the exactly-Hermitian average so roundoff in the input
    // cannot leak into the iteration.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
            a(j, i) = std::conj(a(i, j));
        }
    }

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(frobenius_norm(a), 1.0);
    const double stop = scale * tol::jacobi_rel_stop;

    bool converged = (detail::off_diagonal_norm(a) <= stop);
    for (int sweep = 0; sweep < tol::jacobi_max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
        converged = (detail::off_diagonal_norm(a) <= stop);
    }
    if (!converged)
        throw NoConvergenceError("Jacobi iteration exceeded its sweep cap");

    // Sort ascending; stable so degenerate clusters keep pivot order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Eigenvalues only, ascending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                                 double hermiticity_tol = tol::hermitian) {
    return hermitian_eigensystem(m, hermiticity_tol).values;
}

} // namespace qqchain
