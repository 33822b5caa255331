#pragma once

#include <cmath>
#include <cstddef>

#include "qqchain/eigensolver.hpp"
#include "qqchain/errors.hpp"
#include "qqchain/matrix.hpp"
#include "qqchain/tolerances.hpp"

namespace qqchain {

// The chain Hilbert space is qutrit (x) qubit.  Product-basis ordering is
// fixed once for the whole library: index = 2*a + i with a the qutrit
// level (0,1,2 for Sz = +1,0,-1) and i the qubit level (0,1 for up,down),
// i.e. |1,up>, |1,dn>, |0,up>, |0,dn>, |-1,up>, |-1,dn>.
inline constexpr std::size_t qutrit_dim = 3;
inline constexpr std::size_t qubit_dim = 2;
inline constexpr std::size_t chain_dim = qutrit_dim * qubit_dim;

namespace detail {

inline void require_chain_shape(const ComplexMatrix& m) {
    if (m.rows() != chain_dim || m.cols() != chain_dim)
        throw BadShapeError("expected a 6x6 matrix on the qutrit-qubit space");
}

} // namespace detail

/// Transpose the qutrit factor only:
/// out[(a,i)][(b,j)] = in[(b,i)][(a,j)].  An involution; preserves trace
/// and Hermiticity.
inline ComplexMatrix partial_transpose_first(const ComplexMatrix& m) {
    detail::require_chain_shape(m);
    ComplexMatrix out(chain_dim, chain_dim);
    for (std::size_t a = 0; a < qutrit_dim; ++a)
        for (std::size_t b = 0; b < qutrit_dim; ++b)
            for (std::size_t i = 0; i < qubit_dim; ++i)
                for (std::size_t j = 0; j < qubit_dim; ++j)
                    out(qubit_dim * a + i, qubit_dim * b + j) =
                        m(qubit_dim * b + i, qubit_dim * a + j);
    return out;
}

enum class Keep { qutrit, qubit };

/// Reduced matrix of one factor: keep the qutrit (3x3) or the qubit (2x2).
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Keep keep) {
    detail::require_chain_shape(m);
    if (keep == Keep::qutrit) {
        ComplexMatrix out(qutrit_dim, qutrit_dim);
        for (std::size_t a = 0; a < qutrit_dim; ++a)
            for (std::size_t b = 0; b < qutrit_dim; ++b)
                for (std::size_t i = 0; i < qubit_dim; ++i)
                    out(a, b) += m(qubit_dim * a + i, qubit_dim * b + i);
        return out;
    }
    ComplexMatrix out(qubit_dim, qubit_dim);
    for (std::size_t i = 0; i < qubit_dim; ++i)
        for (std::size_t j = 0; j < qubit_dim; ++j)
            for (std::size_t a = 0; a < qutrit_dim; ++a)
                out(i, j) += m(qubit_dim * a + i, qubit_dim * a + j);
    return out;
}

/// Checks the density-matrix preconditions: Hermitian, unit trace, and
/// eigenvalues >= -psd_clamp.  Throws NotDensityMatrixError.
inline void require_density_matrix(const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols())
        throw NotDensityMatrixError("density matrix must be square");
    if (!rho.is_hermitian(tol::hermitian))
        throw NotDensityMatrixError("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol::unit_trace ||
        std::abs(rho.trace().imag()) > tol::unit_trace)
        throw NotDensityMatrixError("density matrix trace is not 1");
    const auto values = hermitian_eigenvalues(rho);
    if (values.front() < -tol::psd_clamp)
        throw NotDensityMatrixError("density matrix has a negative eigenvalue");
}

/// Von Neumann entropy in bits: S = -sum lambda log2 lambda, with
/// eigenvalues in [-psd_clamp, 0) clamped to zero.
inline double von_neumann_entropy(const ComplexMatrix& rho) {
    require_density_matrix(rho);
    double s = 0.0;
    for (double lambda : hermitian_eigenvalues(rho)) {
        if (lambda <= 0.0) continue; // clamp: 0 log 0 = 0
        s -= lambda * std::log2(lambda);
    }
    return s;
}

/// Trace norm of a Hermitian matrix: sum of |eigenvalues|.
inline double trace_norm(const ComplexMatrix& m) {
    if (!m.is_hermitian(tol::hermitian))
        throw NotHermitianError("trace norm implemented for Hermitian input only");
    double s = 0.0;
    for (double lambda : hermitian_eigenvalues(m)) s += std::abs(lambda);
    return s;
}

} // namespace qqchain
