#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "qqchain/eigensolver.hpp"
#include "qqchain/errors.hpp"
#include "qqchain/matrix.hpp"
#include "qqchain/quantum.hpp"
#include "qqchain/tolerances.hpp"

namespace qqchain {

/// One physical configuration of the chain.  Dimensionless units, k_B = 1.
/// The qubit field B is restricted to B >= 0 by default; the override is
/// for symmetry experiments (the Hamiltonian itself is fine with B < 0).
struct ModelParams {
    double J = 0.0; ///< exchange coupling (J > 0 antiferromagnetic)
    double B = 0.0; ///< z field on the qubit
    double T = 0.0; ///< temperature
    bool allow_negative_field = false;
};

inline void validate_field(const ModelParams& p) {
    if (p.B < 0.0 && !p.allow_negative_field)
        throw InvalidParamsError("field B < 0 rejected (set allow_negative_field to override)");
    if (p.T < 0.0)
        throw InvalidParamsError("temperature must be nonnegative");
}

/// Spin-1 operators for the qutrit and Pauli matrices for the qubit.
/// Note the qubit carries full Pauli matrices (eigenvalues +-1), not
/// sigma/2: the |1,up> level must sit at energy J + B.
struct SpinOperators {
    ComplexMatrix s1x, s1y, s1z; // 3x3
    ComplexMatrix px, py, pz;    // 2x2
};

inline SpinOperators spin_operators() {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    SpinOperators ops;
    ops.s1x = ComplexMatrix(3, 3, {0, r, 0, r, 0, r, 0, r, 0});
    ops.s1y = ComplexMatrix(3, 3, {0, -r * i, 0, r * i, 0, -r * i, 0, r * i, 0});
    ops.s1z = ComplexMatrix(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, -1});
    ops.px = ComplexMatrix(2, 2, {0, 1, 1, 0});
    ops.py = ComplexMatrix(2, 2, {0, -i, i, 0});
    ops.pz = ComplexMatrix(2, 2, {1, 0, 0, -1});
    return ops;
}

/// H = J (S1x px + S1y py + S1z pz) + B (I3 pz), all terms Kronecker
/// products in the fixed basis ordering.  T is unused.
inline ComplexMatrix build_hamiltonian(const ModelParams& p) {
    validate_field(p);
    const SpinOperators ops = spin_operators();
    ComplexMatrix h = kron(ops.s1x, ops.px);
    h += kron(ops.s1y, ops.py);
    h += kron(ops.s1z, ops.pz);
    h *= p.J;
    h += p.B * kron(ComplexMatrix::identity(qutrit_dim), ops.pz);
    return h;
}

/// The six levels.  H block-diagonalizes over total magnetization
/// S1z + pz/2: two polarized product levels (+-3/2) and two mixed 2x2
/// sectors (+-1/2), each holding a ground and an excited level.
enum class LevelLabel {
    polarized_down,       // |-1,dn>, energy J - B
    polarized_up,         // |+1,up>, energy J + B
    minus_sector_ground,  // in span{|-1,up>, |0,dn>}
    minus_sector_excited,
    plus_sector_ground,   // in span{|0,up>, |+1,dn>}
    plus_sector_excited,
};

inline const char* to_string(LevelLabel label) {
    switch (label) {
        case LevelLabel::polarized_down: return "polarized_down";
        case LevelLabel::polarized_up: return "polarized_up";
        case LevelLabel::minus_sector_ground: return "minus_sector_ground";
        case LevelLabel::minus_sector_excited: return "minus_sector_excited";
        case LevelLabel::plus_sector_ground: return "plus_sector_ground";
        case LevelLabel::plus_sector_excited: return "plus_sector_excited";
    }
    return "?";
}

struct Level {
    LevelLabel label;
    double energy;
    ComplexMatrix state; // 6x1, unit norm
};

struct Spectrum {
    std::array<Level, 6> levels;
};

namespace detail {

inline ComplexMatrix basis_ket(std::size_t index) {
    ComplexMatrix v(chain_dim, 1);
    v(index, 0) = 1.0;
    return v;
}

// Unit vector u*|hi> + v*|lo> for one mixed sector.
inline ComplexMatrix sector_state(std::size_t hi, std::size_t lo, double u, double v) {
    const double n = std::sqrt(u * u + v * v);
    ComplexMatrix out(chain_dim, 1);
    out(hi, 0) = u / n;
    out(lo, 0) = v / n;
    return out;
}

} // namespace detail

/// Level splitting of the +-1/2 magnetization sectors.  sign = +1 picks
/// the plus sector.
inline double sector_splitting(double coupling, double field, double sign) {
    return std::sqrt(4.0 * field * field + sign * 4.0 * field * coupling +
                     9.0 * coupling * coupling);
}

/// Analytic eigensystem.  Requires |J| >= tol::min_coupling: the sector
/// amplitude ratios divide by J, so the closed form is ill-conditioned
/// near zero coupling and callers must take the numeric path there.
inline Spectrum closed_form_spectrum(const ModelParams& p) {
    validate_field(p);
    if (std::abs(p.J) < tol::min_coupling)
        throw DegenerateCouplingError("closed-form spectrum undefined at (or too near) J = 0");

    const double J = p.J;
    const double B = p.B;
    const double split_plus = sector_splitting(J, B, +1.0);
    const double split_minus = sector_splitting(J, B, -1.0);
    const double denom = 2.0 * std::sqrt(2.0) * J;

    // Plus sector on {|0,up> (index 2), |1,dn> (index 1)}: the state for
    // energy -(J + s*split)/2 is |0,up> - d |1,dn> with d = (J + s*split
    // + 2B)/denom.  In the minus sector on {|-1,up> (4), |0,dn> (3)} the
    // pairing crosses: energy -(J + s*split)/2 takes c = (J - s*split -
    // 2B)/denom on |0,dn>.  Both pairings are fixed by the residual tests.
    const double ratio_plus_ground = (J + split_plus + 2.0 * B) / denom;
    const double ratio_plus_excited = (J - split_plus + 2.0 * B) / denom;
    const double ratio_minus_ground = (J - split_minus - 2.0 * B) / denom;
    const double ratio_minus_excited = (J + split_minus - 2.0 * B) / denom;

    Spectrum out{{{
        {LevelLabel::polarized_down, J - B, detail::basis_ket(5)},
        {LevelLabel::polarized_up, J + B, detail::basis_ket(0)},
        {LevelLabel::minus_sector_ground, -(J + split_minus) / 2.0,
         detail::sector_state(4, 3, 1.0, ratio_minus_ground)},
        {LevelLabel::minus_sector_excited, -(J - split_minus) / 2.0,
         detail::sector_state(4, 3, 1.0, ratio_minus_excited)},
        {LevelLabel::plus_sector_ground, -(J + split_plus) / 2.0,
         detail::sector_state(2, 1, 1.0, -ratio_plus_ground)},
        {LevelLabel::plus_sector_excited, -(J - split_plus) / 2.0,
         detail::sector_state(2, 1, 1.0, -ratio_plus_excited)},
    }}};
    return out;
}

/// Closed-form partition function.  Works at any J (nothing divides by
/// J); requires T > 0.
inline double partition_function(const ModelParams& p) {
    validate_field(p);
    if (p.T <= 0.0)
        throw NonPositiveTemperatureError("partition function requires T > 0");
    const double beta = 1.0 / p.T;
    const double split_plus = sector_splitting(p.J, p.B, +1.0);
    const double split_minus = sector_splitting(p.J, p.B, -1.0);
    return 2.0 * std::exp(-p.J * beta) *
           (std::cosh(p.B * beta) +
            std::exp(1.5 * p.J * beta) *
                (std::cosh(0.5 * split_plus * beta) + std::cosh(0.5 * split_minus * beta)));
}

enum class TemperatureMode {
    finite,     ///< Gibbs state at T > 0
    zero_limit, ///< T -> 0+ limit: equal mixture of the ground manifold
};

/// Gibbs state of the chain.  rho is built from the numeric eigensystem
/// (the closed form is a cross-check, not the construction path).
struct ThermalState {
    ModelParams params;
    ComplexMatrix rho;
    /// Partition function in finite mode.  In zero_limit mode the Gibbs
    /// sum diverges trivially, so Z carries the finite limit datum
    /// instead: the ground-manifold degeneracy.
    double Z = 0.0;
};

inline ThermalState thermal_state(const ModelParams& p,
                                  TemperatureMode mode = TemperatureMode::finite) {
    validate_field(p);
    if (mode == TemperatureMode::finite && p.T <= 0.0)
        throw NonPositiveTemperatureError("finite-temperature Gibbs state requires T > 0");

    const EigenSystem eig = hermitian_eigensystem(build_hamiltonian(p));
    const double ground = eig.values.front();

    std::array<double, chain_dim> weight{};
    double z = 0.0;
    if (mode == TemperatureMode::finite) {
        // Weights relative to the ground level so nothing overflows; the
        // reported Z is the plain Boltzmann sum.
        double total = 0.0;
        for (std::size_t k = 0; k < chain_dim; ++k) {
            weight[k] = std::exp(-(eig.values[k] - ground) / p.T);
            total += weight[k];
            z += std::exp(-eig.values[k] / p.T);
        }
        for (auto& w : weight) w /= total;
    } else {
        std::size_t degeneracy = 0;
        for (std::size_t k = 0; k < chain_dim; ++k)
            if (eig.values[k] <= ground + tol::ground_degeneracy) ++degeneracy;
        for (std::size_t k = 0; k < degeneracy; ++k) weight[k] = 1.0 / degeneracy;
        z = static_cast<double>(degeneracy);
    }

    ComplexMatrix rho(chain_dim, chain_dim);
    for (std::size_t k = 0; k < chain_dim; ++k) {
        if (weight[k] == 0.0) continue;
        for (std::size_t i = 0; i < chain_dim; ++i)
            for (std::size_t j = 0; j < chain_dim; ++j)
                rho(i, j) += weight[k] * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return ThermalState{p, rho, z};
}

} // namespace qqchain
