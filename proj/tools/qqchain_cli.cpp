// Command-line front end: single-point evaluation, 2-D parameter sweeps,
// critical-temperature bisection, and spectrum inspection.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qqchain/qqchain.hpp"

namespace {

std::string fmt(double v) { return qqchain::detail::format_csv_value(v); }

void print_report(const qqchain::CorrelationReport& rep, bool t0, bool raw) {
    std::cout << "J: " << fmt(rep.params.J) << '\n'
              << "B: " << fmt(rep.params.B) << '\n';
    if (t0)
        std::cout << "T: 0 (ground-state limit)\n"
                  << "ground_degeneracy: " << fmt(rep.Z) << '\n';
    else
        std::cout << "T: " << fmt(rep.params.T) << '\n'
                  << "Z: " << fmt(rep.Z) << '\n';
    std::cout << "negativity: " << fmt(rep.negativity) << '\n'
              << "mid: " << fmt(rep.mid) << '\n'
              << "mutual_information: " << fmt(rep.mutual_information) << '\n'
              << "classical_correlation: " << fmt(rep.classical_correlation) << '\n'
              << "entropy_joint: " << fmt(rep.entropy_joint) << '\n'
              << "entropy_qutrit: " << fmt(rep.entropy_qutrit) << '\n'
              << "entropy_qubit: " << fmt(rep.entropy_qubit) << '\n';
    if (raw)
        std::cout << "mid_raw: " << fmt(rep.mid_raw) << '\n'
                  << "mutual_information_raw: " << fmt(rep.mutual_information_raw) << '\n'
                  << "classical_correlation_raw: " << fmt(rep.classical_correlation_raw)
                  << '\n';
}

void print_state_row(const qqchain::ComplexMatrix& state) {
    std::cout << " state = [";
    for (std::size_t i = 0; i < state.rows(); ++i) {
        const qqchain::cplx v = state(i, 0);
        if (i) std::cout << ", ";
        char buf[80];
        if (std::abs(v.imag()) < 1e-14)
            std::snprintf(buf, sizeof buf, "%.9g", v.real());
        else
            std::snprintf(buf, sizeof buf, "%.9g%+.9gi", v.real(), v.imag());
        std::cout << buf;
    }
    std::cout << "]\n";
}

void run_spectrum(const qqchain::ModelParams& p) {
    std::cout << "basis order: |1,up>, |1,dn>, |0,up>, |0,dn>, |-1,up>, |-1,dn>\n";
    std::cout << "closed form:\n";
    try {
        const qqchain::Spectrum spec = qqchain::closed_form_spectrum(p);
        for (const auto& level : spec.levels) {
            std::printf("  %-21s E = %- .12g", qqchain::to_string(level.label),
                        level.energy);
            print_state_row(level.state);
        }
    } catch (const qqchain::DegenerateCouplingError&) {
        std::cout << "  unavailable: |J| < " << qqchain::tol::min_coupling
                  << " (amplitude ratios divide by J); numeric path only\n";
    }
    std::cout << "numeric (ascending):\n";
    const auto eig = qqchain::hermitian_eigensystem(qqchain::build_hamiltonian(p));
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        std::printf("  level %zu                E = %- .12g", k, eig.values[k]);
        qqchain::ComplexMatrix col(qqchain::chain_dim, 1);
        for (std::size_t i = 0; i < qqchain::chain_dim; ++i) col(i, 0) = eig.vectors(i, k);
        print_state_row(col);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermal entanglement (negativity) and quantum correlation (MID) "
                 "for the exactly solvable qutrit-qubit exchange chain"};
    app.require_subcommand(1);

    double j = 0.0, b = 0.0, t = 0.0;
    bool t0 = false, raw = false, allow_neg = false, t0_row = false;
    std::string preset, spec_path, out_path;
    unsigned threads = 0;
    std::size_t x_steps = 0, y_steps = 0;
    double t_lo = 0.05, t_hi = 5.0, tc_tol = 1e-6;

    CLI::App* eval = app.add_subcommand("eval", "evaluate one (J, B, T) point");
    eval->add_option("--j", j, "coupling J")->required();
    eval->add_option("--b", b, "field B (>= 0 unless overridden)")->required();
    eval->add_option("--t", t, "temperature T > 0");
    eval->add_flag("--t0", t0, "evaluate the T -> 0 ground-state limit instead of --t");
    eval->add_flag("--raw", raw, "also print unclamped correlation values");
    eval->add_flag("--allow-negative-b", allow_neg, "accept B < 0");

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a 2-D parameter grid to CSV");
    sweep->add_option("--preset", preset, "built-in grid: fig1, fig2 or fig3");
    sweep->add_option("--spec", spec_path, "sweep spec file (flat key = value)");
    sweep->add_option("-o,--output", out_path, "CSV output path (default: stdout)");
    sweep->add_option("--x-steps", x_steps, "override x axis step count");
    sweep->add_option("--y-steps", y_steps, "override y axis step count");
    sweep->add_flag("--t0-row", t0_row, "append T = 0 rows in the ground-state mode");
    sweep->add_flag("--raw", raw, "emit unclamped companion columns");
    sweep->add_flag("--allow-negative-b", allow_neg, "accept B < 0");
    sweep->add_option("--threads", threads, "worker threads (default: all processors)");

    CLI::App* tc = app.add_subcommand("tc", "bisect the entanglement critical temperature");
    tc->add_option("--j", j, "coupling J")->required();
    tc->add_option("--b", b, "field B")->required();
    tc->add_option("--t-lo", t_lo, "bracket lower end (default 0.05)");
    tc->add_option("--t-hi", t_hi, "bracket upper end (default 5)");
    tc->add_option("--tol", tc_tol, "bisection width tolerance (default 1e-6)");
    tc->add_flag("--allow-negative-b", allow_neg, "accept B < 0");

    CLI::App* spectrum = app.add_subcommand("spectrum", "print the six levels, both paths");
    spectrum->add_option("--j", j, "coupling J")->required();
    spectrum->add_option("--b", b, "field B")->required();
    spectrum->add_flag("--allow-negative-b", allow_neg, "accept B < 0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            if (!t0 && eval->count("--t") == 0)
                throw qqchain::InvalidParamsError("eval needs --t (or --t0 for the T -> 0 limit)");
            qqchain::ModelParams p{j, b, t0 ? 0.0 : t, allow_neg};
            const auto rep = qqchain::eval_point(p, t0 ? qqchain::TemperatureMode::zero_limit
                                                       : qqchain::TemperatureMode::finite);
            print_report(rep, t0, raw);
        } else if (sweep->parsed()) {
            if (preset.empty() == spec_path.empty())
                throw qqchain::InvalidSpecError("sweep needs exactly one of --preset or --spec");
            qqchain::SweepSpec spec = preset.empty() ? qqchain::load_sweep_spec(spec_path)
                                                     : qqchain::preset_sweep(preset);
            // Flags trump whatever the spec or preset said.
            if (x_steps != 0) spec.x.steps = x_steps;
            if (y_steps != 0) spec.y.steps = y_steps;
            if (t0_row) spec.t0_row = true;
            if (raw) spec.raw_columns = true;
            if (allow_neg) spec.allow_negative_field = true;

            const qqchain::SweepResult result = qqchain::run_sweep(spec, threads);
            if (out_path.empty()) {
                qqchain::emit_csv(result, std::cout);
                qqchain::emit_metadata(result, std::cerr);
            } else {
                qqchain::write_csv_file(result, out_path);
                qqchain::emit_metadata(result, std::cout);
                std::cout << "output: " << out_path << '\n';
            }
        } else if (tc->parsed()) {
            qqchain::ModelParams p{j, b, 0.0, allow_neg};
            const auto found = qqchain::find_critical_temperature(p, t_lo, t_hi, tc_tol);
            if (found)
                std::cout << "T_c: " << fmt(*found) << '\n';
            else
                std::cout << "T_c: none (no entanglement boundary in [" << fmt(t_lo) << ", "
                          << fmt(t_hi) << "])\n";
        } else if (spectrum->parsed()) {
            run_spectrum(qqchain::ModelParams{j, b, 0.0, allow_neg});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
