#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qqchain/errors.hpp"
#include "qqchain/measures.hpp"
#include "qqchain/model.hpp"
#include "qqchain/tolerances.hpp"
#include "qqchain/version.hpp"

namespace qqchain {

enum class Param { coupling, field, temperature };

inline const char* param_name(Param p) {
    switch (p) {
        case Param::coupling: return "J";
        case Param::field: return "B";
        case Param::temperature: return "T";
    }
    return "?";
}

inline std::optional<Param> parse_param(std::string_view s) {
    if (s == "J" || s == "j") return Param::coupling;
    if (s == "B" || s == "b") return Param::field;
    if (s == "T" || s == "t") return Param::temperature;
    return std::nullopt;
}

enum class Quantity {
    negativity,
    mid,
    mutual_information,
    classical_correlation,
    partition_function,
};

inline const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::negativity: return "negativity";
        case Quantity::mid: return "mid";
        case Quantity::mutual_information: return "mutual_information";
        case Quantity::classical_correlation: return "classical_correlation";
        case Quantity::partition_function: return "Z";
    }
    return "?";
}

inline std::optional<Quantity> parse_quantity(std::string_view s) {
    if (s == "negativity") return Quantity::negativity;
    if (s == "mid") return Quantity::mid;
    if (s == "mutual_information") return Quantity::mutual_information;
    if (s == "classical_correlation") return Quantity::classical_correlation;
    if (s == "Z") return Quantity::partition_function;
    return std::nullopt;
}

/// Only the correlation measures carry clamped/raw pairs.
inline bool quantity_has_raw(Quantity q) {
    return q == Quantity::mid || q == Quantity::mutual_information ||
           q == Quantity::classical_correlation;
}

inline double quantity_value(const CorrelationReport& r, Quantity q, bool raw = false) {
    switch (q) {
        case Quantity::negativity: return r.negativity;
        case Quantity::mid: return raw ? r.mid_raw : r.mid;
        case Quantity::mutual_information:
            return raw ? r.mutual_information_raw : r.mutual_information;
        case Quantity::classical_correlation:
            return raw ? r.classical_correlation_raw : r.classical_correlation;
        case Quantity::partition_function: return r.Z;
    }
    return 0.0;
}

struct AxisSpec {
    Param param = Param::coupling;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 2; ///< number of grid points, endpoints included
};

/// A rectangular parameter sweep: two swept parameters, one held fixed.
struct SweepSpec {
    AxisSpec x;
    AxisSpec y;
    Param fixed = Param::field;
    double fixed_value = 0.0;
    std::vector<Quantity> quantities;
    bool t0_row = false;       ///< append T = 0 rows (ground-manifold mode)
    bool raw_columns = false;  ///< emit unclamped companions next to clamped columns
    bool allow_negative_field = false;
};

inline void validate_sweep_spec(const SweepSpec& s) {
    const auto check_axis = [&](const AxisSpec& a, const char* tag) {
        const std::string t(tag);
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi))
            throw InvalidSpecError(t + "_min/" + t + "_max must be finite");
        if (a.lo > a.hi)
            throw InvalidSpecError(t + "_min exceeds " + t + "_max");
        if (a.steps < 2)
            throw InvalidSpecError(t + "_steps must be at least 2");
        if (a.param == Param::temperature && a.lo <= 0.0)
            throw InvalidSpecError(t + "_min: temperature axis must start above 0 "
                                       "(use t0_row for the zero-temperature boundary)");
        if (a.param == Param::field && a.lo < 0.0 && !s.allow_negative_field)
            throw InvalidSpecError(t + "_min: field B < 0 needs the negative-field override");
    };
    if (s.x.param == s.y.param)
        throw InvalidSpecError("x and y name the same parameter");
    if (s.fixed == s.x.param || s.fixed == s.y.param)
        throw InvalidSpecError("fixed repeats a swept parameter");
    check_axis(s.x, "x");
    check_axis(s.y, "y");
    if (!std::isfinite(s.fixed_value))
        throw InvalidSpecError("fixed_value must be finite");
    if (s.fixed == Param::temperature && s.fixed_value <= 0.0)
        throw InvalidSpecError("fixed_value: fixed temperature must be above 0");
    if (s.fixed == Param::field && s.fixed_value < 0.0 && !s.allow_negative_field)
        throw InvalidSpecError("fixed_value: field B < 0 needs the negative-field override");
    if (s.quantities.empty())
        throw InvalidSpecError("quantities must name at least one output");
    for (std::size_t i = 0; i < s.quantities.size(); ++i)
        for (std::size_t j = i + 1; j < s.quantities.size(); ++j)
            if (s.quantities[i] == s.quantities[j])
                throw InvalidSpecError(std::string("duplicate quantity: ") +
                                       quantity_name(s.quantities[i]));
    if (s.t0_row && s.fixed == Param::temperature)
        throw InvalidSpecError("t0_row requires temperature on an axis");
}

inline std::vector<double> axis_points(const AxisSpec& a) {
    std::vector<double> pts(a.steps);
    for (std::size_t i = 0; i < a.steps; ++i)
        pts[i] = a.lo + (a.hi - a.lo) * (static_cast<double>(i) /
                                         static_cast<double>(a.steps - 1));
    pts.front() = a.lo;
    pts.back() = a.hi;
    return pts;
}

struct SweepRow {
    double x = 0.0;
    double y = 0.0;
    bool t0 = false; ///< evaluated in the T -> 0 mode; T coordinate prints as 0
    CorrelationReport report;
};

/// Rows plus run metadata.  The metadata never enters the CSV payload:
/// rows are a pure function of the spec, so resweeping identical inputs
/// reproduces the file byte for byte.
struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    std::string tool_version;
    std::string created_utc;
    double negativity_zero_tol = tol::negativity_zero;
    double psd_clamp_tol = tol::psd_clamp;
};

namespace detail {

inline void set_param(ModelParams& p, Param which, double value) {
    switch (which) {
        case Param::coupling: p.J = value; break;
        case Param::field: p.B = value; break;
        case Param::temperature: p.T = value; break;
    }
}

inline std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void evaluate_row(const SweepSpec& spec, SweepRow& row) {
    ModelParams p;
    p.allow_negative_field = spec.allow_negative_field;
    set_param(p, spec.x.param, row.x);
    set_param(p, spec.y.param, row.y);
    set_param(p, spec.fixed, spec.fixed_value);
    row.report = measure_correlations(
        p, row.t0 ? TemperatureMode::zero_limit : TemperatureMode::finite);
    for (Quantity q : spec.quantities) {
        const bool bad = !std::isfinite(quantity_value(row.report, q)) ||
                         (spec.raw_columns && quantity_has_raw(q) &&
                          !std::isfinite(quantity_value(row.report, q, true)));
        if (bad) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "non-finite %s at %s=%.12g, %s=%.12g, %s=%.12g",
                          quantity_name(q), param_name(spec.x.param), row.x,
                          param_name(spec.y.param), row.y, param_name(spec.fixed),
                          spec.fixed_value);
            throw Error(msg);
        }
    }
}

} // namespace detail

/// Report for one parameter point; what each sweep row holds.
inline CorrelationReport eval_point(const ModelParams& p,
                                    TemperatureMode mode = TemperatureMode::finite) {
    return measure_correlations(p, mode);
}

/// Evaluate the grid, y-major with x ascending, then any appended T = 0
/// rows.  Rows are claimed by a worker pool but each one is a pure
/// function of its coordinates, so the result does not depend on the
/// thread count.  threads = 0 means use the hardware count.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0) {
    validate_sweep_spec(spec);
    const std::vector<double> xs = axis_points(spec.x);
    const std::vector<double> ys = axis_points(spec.y);

    SweepResult res;
    res.spec = spec;
    res.tool_version = version;
    res.created_utc = detail::utc_now();
    res.rows.reserve(xs.size() * ys.size());
    for (double y : ys)
        for (double x : xs) res.rows.push_back(SweepRow{x, y, false, {}});
    if (spec.t0_row) {
        // One T = 0 row per value of the other swept parameter.
        if (spec.x.param == Param::temperature)
            for (double y : ys) res.rows.push_back(SweepRow{0.0, y, true, {}});
        else
            for (double x : xs) res.rows.push_back(SweepRow{x, 0.0, true, {}});
    }

    unsigned n = threads != 0 ? threads : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(res.rows.size())));

    if (n == 1) {
        for (SweepRow& row : res.rows) detail::evaluate_row(spec, row);
        return res;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(n);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t k = next.fetch_add(1); k < res.rows.size();
                     k = next.fetch_add(1))
                    detail::evaluate_row(spec, res.rows[k]);
            } catch (...) {
                failures[t] = std::current_exception();
                next.store(res.rows.size()); // stop the other workers soon
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return res;
}

namespace detail {

// %.12g with negative zero collapsed, so equal values always print as
// the same bytes.
inline std::string format_csv_value(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

/// Plain CSV: one header line, then one line per row, 12 significant
/// digits, LF line endings.  Metadata (version, timestamp, tolerances)
/// stays out of the payload on purpose.
inline void emit_csv(const SweepResult& res, std::ostream& out) {
    out << param_name(res.spec.x.param) << ',' << param_name(res.spec.y.param);
    for (Quantity q : res.spec.quantities) {
        out << ',' << quantity_name(q);
        if (res.spec.raw_columns && quantity_has_raw(q))
            out << ',' << quantity_name(q) << "_raw";
    }
    out << '\n';
    for (const SweepRow& row : res.rows) {
        out << detail::format_csv_value(row.x) << ','
            << detail::format_csv_value(row.y);
        for (Quantity q : res.spec.quantities) {
            out << ',' << detail::format_csv_value(quantity_value(row.report, q));
            if (res.spec.raw_columns && quantity_has_raw(q))
                out << ',' << detail::format_csv_value(quantity_value(row.report, q, true));
        }
        out << '\n';
    }
    if (!out)
        throw IoError("failed writing CSV stream");
}

inline void write_csv_file(const SweepResult& res, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    emit_csv(res, out);
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

/// Human-readable run metadata, kept separate from the CSV payload.
inline void emit_metadata(const SweepResult& res, std::ostream& out) {
    out << "tool_version: " << res.tool_version << '\n'
        << "created_utc: " << res.created_utc << '\n'
        << "rows: " << res.rows.size() << '\n'
        << "negativity_zero_tol: " << res.negativity_zero_tol << '\n'
        << "psd_clamp_tol: " << res.psd_clamp_tol << '\n';
}

/// Built-in grids matching the survey plots this engine reproduces.
inline SweepSpec preset_sweep(std::string_view name) {
    SweepSpec s;
    s.y = AxisSpec{Param::temperature, 0.05, 3.0, 60};
    if (name == "fig1") {
        s.x = AxisSpec{Param::coupling, -2.0, 2.0, 81};
        s.fixed = Param::field;
        s.fixed_value = 0.0;
        s.quantities = {Quantity::negativity, Quantity::mid};
    } else if (name == "fig2") {
        s.x = AxisSpec{Param::field, 0.0, 3.0, 81};
        s.fixed = Param::coupling;
        s.fixed_value = 1.0;
        s.quantities = {Quantity::negativity};
    } else if (name == "fig3") {
        s.x = AxisSpec{Param::field, 0.0, 3.0, 81};
        s.fixed = Param::coupling;
        s.fixed_value = 1.0;
        s.quantities = {Quantity::mid};
    } else {
        throw InvalidSpecError("unknown preset: " + std::string(name));
    }
    return s;
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline double parse_number(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw InvalidSpecError(key + ": not a number: '" + text + "'");
    return v;
}

inline std::size_t parse_steps(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || v < 0)
        throw InvalidSpecError(key + ": not a step count: '" + text + "'");
    return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw InvalidSpecError(key + ": expected true or false, got '" + text + "'");
}

inline Param parse_param_or_throw(const std::string& key, const std::string& text) {
    const auto p = parse_param(text);
    if (!p) throw InvalidSpecError(key + ": unknown parameter '" + text + "' (use J, B or T)");
    return *p;
}

} // namespace detail

/// Flat key = value format, one pair per line, # comments, blank lines
/// ignored.  Required keys: x, x_min, x_max, x_steps, y, y_min, y_max,
/// y_steps, fixed, fixed_value, quantities (comma separated).  Optional:
/// t0_row, raw, allow_negative_b (all booleans, default false).
inline SweepSpec parse_sweep_spec(std::istream& in) {
    SweepSpec s;
    std::vector<std::string> seen;
    bool have_quantities = false;

    const auto mark = [&](const std::string& key) {
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw InvalidSpecError("duplicate key: " + key);
        seen.push_back(key);
    };
    const auto require = [&](const char* key) {
        if (std::find(seen.begin(), seen.end(), key) == seen.end())
            throw InvalidSpecError(std::string("missing key: ") + key);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw InvalidSpecError("line " + std::to_string(line_no) +
                                   ": expected key = value");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw InvalidSpecError("line " + std::to_string(line_no) +
                                   ": expected key = value");
        mark(key);

        if (key == "x") s.x.param = detail::parse_param_or_throw(key, value);
        else if (key == "x_min") s.x.lo = detail::parse_number(key, value);
        else if (key == "x_max") s.x.hi = detail::parse_number(key, value);
        else if (key == "x_steps") s.x.steps = detail::parse_steps(key, value);
        else if (key == "y") s.y.param = detail::parse_param_or_throw(key, value);
        else if (key == "y_min") s.y.lo = detail::parse_number(key, value);
        else if (key == "y_max") s.y.hi = detail::parse_number(key, value);
        else if (key == "y_steps") s.y.steps = detail::parse_steps(key, value);
        else if (key == "fixed") s.fixed = detail::parse_param_or_throw(key, value);
        else if (key == "fixed_value") s.fixed_value = detail::parse_number(key, value);
        else if (key == "t0_row") s.t0_row = detail::parse_bool(key, value);
        else if (key == "raw") s.raw_columns = detail::parse_bool(key, value);
        else if (key == "allow_negative_b")
            s.allow_negative_field = detail::parse_bool(key, value);
        else if (key == "quantities") {
            have_quantities = true;
            std::size_t start = 0;
            while (start <= value.size()) {
                const auto comma = value.find(',', start);
                const std::string token = detail::trim(
                    value.substr(start, comma == std::string::npos ? std::string::npos
                                                                   : comma - start));
                if (token.empty())
                    throw InvalidSpecError("quantities: empty entry");
                const auto q = parse_quantity(token);
                if (!q) throw InvalidSpecError("quantities: unknown quantity '" + token + "'");
                s.quantities.push_back(*q);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        } else {
            throw InvalidSpecError("unknown key: " + key);
        }
    }

    for (const char* key : {"x", "x_min", "x_max", "x_steps", "y", "y_min", "y_max",
                            "y_steps", "fixed", "fixed_value"})
        require(key);
    if (!have_quantities) require("quantities");
    return s;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sweep spec: " + path);
    return parse_sweep_spec(in);
}

/// Bisect for the temperature where thermal entanglement dies.  Returns
/// nullopt when the bracket shows no boundary (not entangled at t_lo, or
/// still entangled at t_hi).  Throws InvalidBracketError on a malformed
/// bracket.  Uses the numeric route throughout.
inline std::optional<double> find_critical_temperature(const ModelParams& base,
                                                       double t_lo = 0.05,
                                                       double t_hi = 10.0,
                                                       double tolerance = 1e-8) {
    validate_field(base);
    if (!(t_lo > 0.0) || !(t_lo < t_hi) || !std::isfinite(t_lo) || !std::isfinite(t_hi))
        throw InvalidBracketError("need 0 < t_lo < t_hi");
    if (!(tolerance > 0.0))
        throw InvalidBracketError("tolerance must be positive");

    const auto entangled_at = [&base](double t) {
        ModelParams p = base;
        p.T = t;
        return negativity(thermal_state(p).rho) > tol::negativity_zero;
    };
    if (!entangled_at(t_lo) || entangled_at(t_hi)) return std::nullopt;

    while (t_hi - t_lo > tolerance) {
        const double mid = 0.5 * (t_lo + t_hi);
        (entangled_at(mid) ? t_lo : t_hi) = mid;
    }
    return 0.5 * (t_lo + t_hi);
}

} // namespace qqchain
