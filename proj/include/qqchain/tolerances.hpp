#pragma once

namespace qqchain::tol {

// Numerical contracts used across the library.  Changing one of these
// changes observable behavior (error thresholds, clamping), so they live
// in one place.

/// Entrywise tolerance for accepting a matrix as Hermitian.
inline constexpr double hermitian = 1e-12;

/// Worst-case per-component eigen residual |M v - lambda v| the solver
/// guarantees on matrices within its size limit.
inline constexpr double eigen_residual = 1e-10;

/// Eigenvalues of a density matrix in [-psd_clamp, 0) are floating-point
/// noise and get clamped to zero before entropy / PSD decisions.
inline constexpr double psd_clamp = 1e-10;

/// Allowed |trace - 1| for a density matrix.
inline constexpr double unit_trace = 1e-10;

/// Partial-transpose eigenvalues in [-negativity_zero, 0) count as zero,
/// so separability calls are robust to solver noise.
inline constexpr double negativity_zero = 1e-12;

/// Energies within this of the minimum belong to the ground manifold.
inline constexpr double ground_degeneracy = 1e-9;

/// Marginal eigenvalues closer than this are flagged as degenerate when a
/// dephasing basis is built from them (the basis is then not unique).
inline constexpr double marginal_degeneracy = 1e-9;

/// Below this |J| the closed-form spectrum is numerically unreliable
/// (its amplitude ratios divide by J); callers are routed to the numeric
/// path.
inline constexpr double min_coupling = 1e-3;

/// Jacobi sweep cap before NoConvergenceError.
inline constexpr int jacobi_max_sweeps = 100;

/// Jacobi stops once the off-diagonal norm falls below this times the
/// input Frobenius norm.  Sits above the rotation roundoff floor
/// (~n*eps) with room to spare, and orders of magnitude inside the
/// eigen_residual contract.
inline constexpr double jacobi_rel_stop = 1e-14;

/// Largest matrix dimension the eigensolver accepts.
inline constexpr int max_eigen_dim = 16;

} // namespace qqchain::tol
