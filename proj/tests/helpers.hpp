#pragma once

#include <cstddef>
#include <random>

#include "qqchain/qqchain.hpp"

namespace testutil {

using qqchain::ComplexMatrix;
using qqchain::cplx;

inline ComplexMatrix random_hermitian(std::mt19937& rng, std::size_t n) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

// G G^dagger normalized to unit trace: a full-rank random density matrix.
inline ComplexMatrix random_density(std::mt19937& rng, std::size_t n) {
    std::normal_distribution<double> g;
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    ComplexMatrix m = a * a.adjoint();
    m *= 1.0 / m.trace().real();
    return m;
}

// Eigenbasis of a random Hermitian matrix: Haar-ish unitary, good enough
// for basis-independence tests.
inline ComplexMatrix random_unitary(std::mt19937& rng, std::size_t n) {
    return qqchain::hermitian_eigensystem(random_hermitian(rng, n)).vectors;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return qqchain::max_abs(a - b);
}

} // namespace testutil
