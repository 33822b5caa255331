#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "qqchain/errors.hpp"
#include "qqchain/matrix.hpp"
#include "qqchain/model.hpp"
#include "qqchain/quantum.hpp"
#include "qqchain/tolerances.hpp"

namespace qqchain {

/// PPT negativity: sum of |negative eigenvalues| of the partial transpose
/// over the qutrit.  Eigenvalues in [-tol::negativity_zero, 0) are solver
/// noise and count as zero, so a separable state reports exactly 0.
inline double negativity(const ComplexMatrix& rho) {
    require_density_matrix(rho);
    const auto values = hermitian_eigenvalues(partial_transpose_first(rho));
    double total = 0.0;
    for (double v : values)
        if (v < -tol::negativity_zero) total -= v;
    return total;
}

/// Negativity straight from the analytic eigensystem, bypassing the
/// 6x6 solver entirely.  The partially transposed Gibbs state splits
/// into two 2x2 blocks, {(0,3)} and {(2,5)}, plus two free diagonal
/// entries, so the negative eigenvalues come from two quadratics.
inline double negativity_closed_form(const ModelParams& p) {
    if (p.T <= 0.0)
        throw NonPositiveTemperatureError("closed-form negativity requires T > 0");
    const Spectrum spec = closed_form_spectrum(p); // rejects tiny |J|
    const double z = partition_function(p);

    // Unnormalized rho entries on the template's support.  Every
    // closed-form eigenvector is real, so real accumulators suffice.
    double r00 = 0, r11 = 0, r22 = 0, r33 = 0, r44 = 0, r55 = 0;
    double r12 = 0, r34 = 0;
    for (const auto& level : spec.levels) {
        const double w = std::exp(-level.energy / p.T);
        std::array<double, chain_dim> s{};
        for (std::size_t i = 0; i < chain_dim; ++i) s[i] = level.state(i, 0).real();
        r00 += w * s[0] * s[0];
        r11 += w * s[1] * s[1];
        r22 += w * s[2] * s[2];
        r33 += w * s[3] * s[3];
        r44 += w * s[4] * s[4];
        r55 += w * s[5] * s[5];
        r12 += w * s[1] * s[2];
        r34 += w * s[3] * s[4];
    }

    // Partial transpose moves the sector coherences onto the corners:
    // block A = [[r00, r12], [r12, r33]], block B = [[r22, r34], [r34, r55]].
    // r11 and r44 stay put and are nonnegative.  Same zero threshold as
    // the numeric route, so separability calls agree between the two.
    const auto block_negativity = [z](double a, double b, double r) {
        const double low =
            0.5 * ((a + b) - std::sqrt((a - b) * (a - b) + 4.0 * r * r)) / z;
        return low < -tol::negativity_zero ? -low : 0.0;
    };
    return block_negativity(r00, r33, r12) + block_negativity(r22, r55, r34);
}

/// Dephase in the fixed product (computational) basis: keep the diagonal.
inline ComplexMatrix local_dephase(const ComplexMatrix& rho) {
    require_density_matrix(rho);
    ComplexMatrix out(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < rho.rows(); ++i) out(i, i) = rho(i, i).real();
    return out;
}

/// I(rho) = S(rho_qutrit) + S(rho_qubit) - S(rho), in bits.  Exact zero
/// for product states up to solver noise; the raw value may dip a hair
/// below zero.
inline double mutual_information(const ComplexMatrix& rho) {
    const double joint = von_neumann_entropy(rho);
    const double left = von_neumann_entropy(partial_trace(rho, Keep::qutrit));
    const double right = von_neumann_entropy(partial_trace(rho, Keep::qubit));
    return left + right - joint;
}

/// Dephasing basis built from the marginal eigenbases instead of the
/// fixed product basis, for states whose marginals are not diagonal.
/// When a marginal spectrum is (near) degenerate the basis is not unique
/// and the result is convention-dependent; the flag reports that.
struct MarginalDephase {
    ComplexMatrix state;
    bool degenerate_marginal = false;
};

namespace detail {

// Ascending-eigenvalue order with each column's first significant
// component rotated to the positive real axis, so the basis is
// deterministic whenever the spectrum is simple.
inline bool fix_marginal_basis(ComplexMatrix& vectors, const std::vector<double>& values) {
    bool degenerate = false;
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        if (values[k + 1] - values[k] < tol::marginal_degeneracy) degenerate = true;
    for (std::size_t k = 0; k < vectors.cols(); ++k) {
        for (std::size_t i = 0; i < vectors.rows(); ++i) {
            const cplx v = vectors(i, k);
            if (std::abs(v) > 1e-12) {
                const cplx phase = std::conj(v) / std::abs(v);
                for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, k) *= phase;
                break;
            }
        }
    }
    return degenerate;
}

} // namespace detail

inline MarginalDephase dephase_in_marginal_basis(const ComplexMatrix& rho) {
    require_density_matrix(rho);
    EigenSystem left = hermitian_eigensystem(partial_trace(rho, Keep::qutrit));
    EigenSystem right = hermitian_eigensystem(partial_trace(rho, Keep::qubit));
    bool degenerate = detail::fix_marginal_basis(left.vectors, left.values);
    degenerate = detail::fix_marginal_basis(right.vectors, right.values) || degenerate;

    const ComplexMatrix u = kron(left.vectors, right.vectors);
    const ComplexMatrix rotated = u.adjoint() * rho * u;
    ComplexMatrix diag(chain_dim, chain_dim);
    for (std::size_t i = 0; i < chain_dim; ++i) diag(i, i) = rotated(i, i).real();
    return MarginalDephase{u * diag * u.adjoint(), degenerate};
}

/// Everything the sweeps and the CLI report for one parameter point.
/// The *_raw fields keep the unclamped arithmetic; the headline fields
/// clamp tiny negative noise to zero.
struct CorrelationReport {
    ModelParams params;
    double Z = 0.0; ///< Boltzmann sum (ground degeneracy in the T -> 0 mode)
    double negativity = 0.0;
    double mutual_information = 0.0;
    double classical_correlation = 0.0; ///< mutual information left after dephasing
    double mid = 0.0;                   ///< measurement-induced disturbance
    double entropy_joint = 0.0;
    double entropy_qutrit = 0.0;
    double entropy_qubit = 0.0;
    double mutual_information_raw = 0.0;
    double classical_correlation_raw = 0.0;
    double mid_raw = 0.0;
};

/// Full report for one (J, B, T) point, entirely on the numeric path:
/// Gibbs state from the 6x6 eigensolver, dephasing in the fixed product
/// basis (the thermal state's marginals are diagonal in it).
inline CorrelationReport measure_correlations(const ModelParams& p,
                                              TemperatureMode mode = TemperatureMode::finite) {
    const ThermalState ts = thermal_state(p, mode);

    CorrelationReport rep;
    rep.params = p;
    rep.Z = ts.Z;
    rep.negativity = negativity(ts.rho);
    rep.entropy_joint = von_neumann_entropy(ts.rho);
    rep.entropy_qutrit = von_neumann_entropy(partial_trace(ts.rho, Keep::qutrit));
    rep.entropy_qubit = von_neumann_entropy(partial_trace(ts.rho, Keep::qubit));
    rep.mutual_information_raw = rep.entropy_qutrit + rep.entropy_qubit - rep.entropy_joint;

    const ComplexMatrix dephased = local_dephase(ts.rho);
    rep.classical_correlation_raw = mutual_information(dephased);
    rep.mid_raw = rep.mutual_information_raw - rep.classical_correlation_raw;

    rep.mutual_information = std::max(rep.mutual_information_raw, 0.0);
    rep.classical_correlation = std::max(rep.classical_correlation_raw, 0.0);
    rep.mid = std::max(rep.mid_raw, 0.0);
    return rep;
}

} // namespace qqchain
