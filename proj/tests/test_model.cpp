#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "qqchain/qqchain.hpp"

using namespace qqchain;
using testutil::max_abs_diff;

namespace {

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

double fidelity_with(const ComplexMatrix& state, const ComplexMatrix& rho) {
    return (state.adjoint() * rho * state)(0, 0).real();
}

} // namespace

TEST_CASE("spin operators match the defining matrices") {
    const SpinOperators ops = spin_operators();
    const double r = 1.0 / std::sqrt(2.0);

    CHECK(ops.s1z(0, 0) == cplx{1.0});
    CHECK(ops.s1z(1, 1) == cplx{0.0});
    CHECK(ops.s1z(2, 2) == cplx{-1.0});
    CHECK(ops.s1x(0, 1) == cplx{r});
    CHECK(ops.s1y(1, 0) == cplx(0, r));

    for (const auto* m : {&ops.s1x, &ops.s1y, &ops.s1z, &ops.px, &ops.py, &ops.pz})
        CHECK(m->is_hermitian(0.0));

    // S(S+1) = 2 for spin 1
    const ComplexMatrix casimir =
        ops.s1x * ops.s1x + ops.s1y * ops.s1y + ops.s1z * ops.s1z;
    CHECK(max_abs_diff(casimir, 2.0 * ComplexMatrix::identity(3)) < 1e-14);

    // su(2) algebra, spin-1 normalization: [Sx, Sy] = i Sz
    CHECK(max_abs_diff(commutator(ops.s1x, ops.s1y), cplx(0, 1) * ops.s1z) < 1e-14);
    CHECK(max_abs_diff(commutator(ops.s1y, ops.s1z), cplx(0, 1) * ops.s1x) < 1e-14);
    CHECK(max_abs_diff(commutator(ops.s1z, ops.s1x), cplx(0, 1) * ops.s1y) < 1e-14);

    // full Pauli matrices: [px, py] = 2i pz and eigenvalues +-1
    CHECK(max_abs_diff(commutator(ops.px, ops.py), cplx(0, 2) * ops.pz) < 1e-14);
    const auto pz_eigs = hermitian_eigenvalues(ops.pz);
    CHECK(pz_eigs[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(pz_eigs[1] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("hamiltonian structure") {
    CHECK(max_abs(build_hamiltonian({0.0, 0.0, 0.0, false})) == 0.0);

    const ComplexMatrix field_only = build_hamiltonian({0.0, 2.0, 0.0, false});
    const double expect[6] = {2, -2, 2, -2, 2, -2};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(field_only(i, i) == cplx{expect[i]});
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) CHECK(field_only(i, j) == cplx{});
    }

    // Full entry pattern: diagonal (J+B, -J-B, B, -B, -J+B, J-B) plus the
    // sqrt(2) J couplings inside each mixed-magnetization sector.
    const double J = 0.7, B = 0.3;
    const ComplexMatrix h = build_hamiltonian({J, B, 0.0, false});
    CHECK(h.is_hermitian(1e-14));
    const double diag[6] = {J + B, -J - B, B, -B, -J + B, J - B};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(h(i, i).real() == Catch::Approx(diag[i]).margin(1e-14));
    const double off = std::sqrt(2.0) * J;
    CHECK(h(1, 2).real() == Catch::Approx(off).margin(1e-14));
    CHECK(h(3, 4).real() == Catch::Approx(off).margin(1e-14));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j && !(i == 1 && j == 2) && !(i == 2 && j == 1) &&
                !(i == 3 && j == 4) && !(i == 4 && j == 3))
                CHECK(std::abs(h(i, j)) < 1e-14);

    // Isotropic point eigenvalues: {-2J, -2J, J, J, J, J} at B = 0.
    auto values = hermitian_eigenvalues(build_hamiltonian({1.0, 0.0, 0.0, false}));
    const std::vector<double> expected{-2, -2, 1, 1, 1, 1};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(values[i] == Catch::Approx(expected[i]).margin(1e-10));
}

TEST_CASE("parameter validation") {
    REQUIRE_THROWS_AS(build_hamiltonian({1.0, -0.5, 1.0, false}), InvalidParamsError);
    CHECK_NOTHROW(build_hamiltonian({1.0, -0.5, 1.0, true}));
    REQUIRE_THROWS_AS(thermal_state({1.0, 0.0, -1.0, false}), InvalidParamsError);
    REQUIRE_THROWS_AS(thermal_state({1.0, 0.0, 0.0, false}), NonPositiveTemperatureError);
    REQUIRE_THROWS_AS(partition_function({1.0, 0.0, 0.0, false}), NonPositiveTemperatureError);
}

TEST_CASE("closed-form spectrum at hand-checked points") {
    SECTION("isotropic point, B = 0") {
        const Spectrum s = closed_form_spectrum({1.0, 0.0, 1.0, false});
        for (const Level& level : s.levels) {
            const double e = level.energy;
            switch (level.label) {
                case LevelLabel::polarized_down:
                case LevelLabel::polarized_up:
                case LevelLabel::minus_sector_excited:
                case LevelLabel::plus_sector_excited:
                    CHECK(e == Catch::Approx(1.0).margin(1e-14));
                    break;
                case LevelLabel::minus_sector_ground:
                case LevelLabel::plus_sector_ground:
                    CHECK(e == Catch::Approx(-2.0).margin(1e-14));
                    break;
            }
            CHECK(frobenius_norm(level.state) == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("J = 1, B = 1 has a unique entangled ground state") {
        const Spectrum s = closed_form_spectrum({1.0, 1.0, 1.0, false});
        double ground = 1e300;
        LevelLabel ground_label = LevelLabel::polarized_up;
        for (const Level& level : s.levels)
            if (level.energy < ground) {
                ground = level.energy;
                ground_label = level.label;
            }
        CHECK(ground_label == LevelLabel::plus_sector_ground);
        CHECK(ground == Catch::Approx(-(1.0 + std::sqrt(17.0)) / 2.0).margin(1e-12));
    }
    SECTION("rejects couplings too small for the analytic ratios") {
        REQUIRE_THROWS_AS(closed_form_spectrum({0.0, 1.0, 1.0, false}), DegenerateCouplingError);
        REQUIRE_THROWS_AS(closed_form_spectrum({5e-4, 1.0, 1.0, false}), DegenerateCouplingError);
        CHECK_NOTHROW(closed_form_spectrum({1e-3, 1.0, 1.0, false}));
    }
}

TEST_CASE("closed-form spectrum agrees with brute-force diagonalization") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> draw_j(-2.0, 2.0), draw_b(0.0, 3.0);
    double worst_energy = 0.0, worst_residual = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        double J = draw_j(rng);
        while (std::abs(J) < 1e-3) J = draw_j(rng);
        const ModelParams p{J, draw_b(rng), 1.0, false};

        const ComplexMatrix h = build_hamiltonian(p);
        const auto numeric = hermitian_eigenvalues(h);
        const Spectrum closed = closed_form_spectrum(p);

        std::vector<double> analytic;
        for (const Level& level : closed.levels) analytic.push_back(level.energy);
        std::sort(analytic.begin(), analytic.end());
        for (std::size_t i = 0; i < 6; ++i)
            worst_energy = std::max(worst_energy, std::abs(analytic[i] - numeric[i]));

        for (const Level& level : closed.levels) {
            const ComplexMatrix r = h * level.state - level.energy * level.state;
            worst_residual = std::max(worst_residual, max_abs(r));
        }
    }
    CHECK(worst_energy <= 1e-10);
    CHECK(worst_residual <= 1e-10);
}

TEST_CASE("partition function") {
    CHECK(partition_function({0.0, 0.0, 1.0, false}) == Catch::Approx(6.0).margin(1e-12));
    CHECK(partition_function({0.0, 0.0, 0.3, false}) == Catch::Approx(6.0).margin(1e-12));

    // Boltzmann sum over {1,1,1,1,-2,-2} at T = 1
    const double direct = 4.0 * std::exp(-1.0) + 2.0 * std::exp(2.0);
    CHECK(partition_function({1.0, 0.0, 1.0, false}) ==
          Catch::Approx(direct).epsilon(1e-13));

    SECTION("matches the numeric Boltzmann trace across the plane") {
        double worst = 0.0;
        for (double B : {0.0, 1.0})
            for (int i = 0; i < 20; ++i)
                for (int k = 0; k < 20; ++k) {
                    const double J = -2.0 + 4.0 * i / 19.0;
                    const double T = 0.05 + (5.0 - 0.05) * k / 19.0;
                    const ModelParams p{J, B, T, false};
                    const auto values = hermitian_eigenvalues(build_hamiltonian(p));
                    double z = 0.0;
                    for (double e : values) z += std::exp(-e / T);
                    worst = std::max(worst,
                                     std::abs(partition_function(p) - z) / std::abs(z));
                }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("thermal state invariants") {
    SECTION("free point is maximally mixed") {
        const ThermalState ts = thermal_state({0.0, 0.0, 1.7, false});
        CHECK(max_abs_diff(ts.rho, 1.0 / 6.0 * ComplexMatrix::identity(6)) < 1e-14);
        CHECK(ts.Z == Catch::Approx(6.0).margin(1e-12));
    }
    SECTION("density-matrix contract and commutation with H") {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> draw_j(-2.0, 2.0), draw_b(0.0, 3.0),
            draw_t(0.05, 5.0);
        for (int trial = 0; trial < 100; ++trial) {
            const ModelParams p{draw_j(rng), draw_b(rng), draw_t(rng), false};
            const ThermalState ts = thermal_state(p);
            CHECK(ts.rho.is_hermitian(1e-12));
            CHECK(std::abs(ts.rho.trace().real() - 1.0) < 1e-12);
            CHECK(hermitian_eigenvalues(ts.rho).front() >= -1e-10);
            CHECK(ts.Z > 0.0);
            CHECK(ts.Z == Catch::Approx(partition_function(p)).epsilon(1e-12));

            const ComplexMatrix h = build_hamiltonian(p);
            CHECK(max_abs(h * ts.rho - ts.rho * h) <= 1e-10);
        }
    }
    SECTION("mean energy rises with temperature") {
        for (const auto& [J, B] : std::vector<std::pair<double, double>>{{1.0, 0.5},
                                                                         {-1.3, 2.0}}) {
            const ComplexMatrix h = build_hamiltonian({J, B, 1.0, false});
            double prev = -1e300;
            for (int k = 0; k < 30; ++k) {
                const double T = 0.05 + (5.0 - 0.05) * k / 29.0;
                const double e = (thermal_state({J, B, T, false}).rho * h).trace().real();
                CHECK(e >= prev - 1e-12);
                prev = e;
            }
        }
    }
}

TEST_CASE("zero-temperature limit") {
    SECTION("nondegenerate ground state becomes a pure projector") {
        const ThermalState ts = thermal_state({1.0, 1.0, 0.0, false}, TemperatureMode::zero_limit);
        CHECK(ts.Z == 1.0);
        const Spectrum s = closed_form_spectrum({1.0, 1.0, 0.0, false});
        for (const Level& level : s.levels)
            if (level.label == LevelLabel::plus_sector_ground)
                CHECK(fidelity_with(level.state, ts.rho) >= 1.0 - 1e-10);
    }
    SECTION("degenerate manifold becomes the equal mixture") {
        const ThermalState ts = thermal_state({1.0, 0.0, 0.0, false}, TemperatureMode::zero_limit);
        CHECK(ts.Z == 2.0);
        const Spectrum s = closed_form_spectrum({1.0, 0.0, 0.0, false});
        ComplexMatrix expected(6, 6);
        for (const Level& level : s.levels)
            if (level.label == LevelLabel::plus_sector_ground ||
                level.label == LevelLabel::minus_sector_ground)
                expected += 0.5 * (level.state * level.state.adjoint());
        CHECK(max_abs_diff(ts.rho, expected) < 1e-12);
    }
    SECTION("matches a very cold finite-temperature state") {
        const ModelParams cold{1.0, 0.7, 1e-4, false};
        const ThermalState finite = thermal_state(cold);
        const ThermalState limit = thermal_state(cold, TemperatureMode::zero_limit);
        CHECK(max_abs_diff(finite.rho, limit.rho) < 1e-3);
    }
    SECTION("ignores T in zero-limit mode") {
        CHECK_NOTHROW(thermal_state({1.0, 1.0, 0.0, false}, TemperatureMode::zero_limit));
    }
}

TEST_CASE("thermodynamic entropy identity") {
    // S(rho) = log2 Z + <H>/(T ln 2), an independent route to the entropy.
    const ModelParams p{1.0, 0.0, 1.0, false};
    const ThermalState ts = thermal_state(p);
    const double mean_energy = (ts.rho * build_hamiltonian(p)).trace().real();
    const double expected = std::log2(partition_function(p)) + mean_energy / (p.T * std::log(2.0));
    CHECK(von_neumann_entropy(ts.rho) == Catch::Approx(expected).margin(1e-10));
}
