#ifndef FIGINT_CLI_HPP
#define FIGINT_CLI_HPP

/// Run-configuration model and study dispatch for the command-line
/// driver: jordan / green / gauss / additivity.  The flag surface lives
/// in the binary; everything testable is here.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "figint/fields.hpp"
#include "figint/gauss3d.hpp"
#include "figint/integral.hpp"
#include "figint/io.hpp"
#include "figint/rectfn.hpp"
#include "figint/shapes.hpp"
#include "figint/verify.hpp"

namespace figint {

/// Configuration problems exit with status 2, distinct from a study that
/// ran and failed (status 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Jordan, Green, Gauss, Additivity };

struct RunConfig {
    Command command = Command::Jordan;
    std::string region;                          // generator spec or file path
    std::string field;                           // "name" or "name:k=v,..."
    std::optional<std::pair<int, int>> levels;   // default: 4..9 (2D), 3..6 (3D)
    std::optional<double> tol_line;              // default 1e-4
    std::optional<double> tol_figure;            // default: achieved gap
    int order = 8;
    double hq = 0.0;                             // <= 0: finest cell side
    std::optional<double> max_seg;               // default 2e-5
    int flux_depth = 2;
    std::optional<std::vector<double>> domain;   // x0,x1,y0,y1[,z0,z1]
    std::string out;                             // empty: CSV to stdout
    unsigned threads = 1;
    int samples = 1000;
    std::uint64_t seed = 1;
};

namespace detail {

inline double config_number(const std::string& v, const std::string& what) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(what + ": expected a number, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError(what + ": trailing characters in '" + v + "'");
    return x;
}

inline long long config_integer(const std::string& v, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used, 10);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(what + ": expected an integer, got '" + v + "'");
    }
}

} // namespace detail

/// "a..b" with integer a <= b.
[[nodiscard]] inline std::pair<int, int> parse_levels(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw ConfigError("levels: expected 'a..b', got '" + s + "'");
    const int a = static_cast<int>(detail::config_integer(s.substr(0, dots), "levels"));
    const int b = static_cast<int>(detail::config_integer(s.substr(dots + 2), "levels"));
    if (a > b) throw ConfigError("levels: range '" + s + "' is empty (min > max)");
    return {a, b};
}

/// Comma-separated coordinate list, "x0,x1,y0,y1" or with ",z0,z1".
[[nodiscard]] inline std::vector<double> parse_domain(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const std::string item =
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(detail::config_number(item, "domain"));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != 4 && out.size() != 6)
        throw ConfigError("domain: expected 4 (2D) or 6 (3D) comma-separated numbers");
    return out;
}

[[nodiscard]] inline Command parse_command(const std::string& s) {
    if (s == "jordan") return Command::Jordan;
    if (s == "green") return Command::Green;
    if (s == "gauss") return Command::Gauss;
    if (s == "additivity") return Command::Additivity;
    throw ConfigError("unknown command '" + s + "'");
}

// --- config file ------------------------------------------------------------

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Flat `key = value` manifest with optional `[command]` sections; keys
/// outside any section apply to every command, sectioned keys only to the
/// named one.  `#` starts a comment.
[[nodiscard]] inline std::vector<ConfigEntry> parse_config_file(std::istream& in, Command active,
                                                                const std::string& label) {
    std::vector<ConfigEntry> out;
    std::string raw;
    int lineno = 0;
    bool section_matches = true;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(label + ":" + std::to_string(lineno) + ": unterminated section header");
            const std::string section = trim(line.substr(1, line.size() - 2));
            try {
                section_matches = parse_command(section) == active;
            } catch (const ConfigError&) {
                throw ConfigError(label + ":" + std::to_string(lineno) + ": unknown section '" +
                                  section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(label + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(label + ":" + std::to_string(lineno) + ": empty key");
        if (section_matches) out.push_back({key, value, lineno});
    }
    return out;
}

[[nodiscard]] inline std::vector<ConfigEntry> load_config_file(const std::string& path, Command active) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config_file(in, active, path);
}

/// Applies one config key.  Throws ConfigError on unknown keys or bad
/// values; the caller prefixes file:line context.
inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "region")
        cfg.region = value;
    else if (key == "field")
        cfg.field = value;
    else if (key == "levels")
        cfg.levels = parse_levels(value);
    else if (key == "tol-line")
        cfg.tol_line = detail::config_number(value, key);
    else if (key == "tol-figure")
        cfg.tol_figure = detail::config_number(value, key);
    else if (key == "order")
        cfg.order = static_cast<int>(detail::config_integer(value, key));
    else if (key == "hq")
        cfg.hq = detail::config_number(value, key);
    else if (key == "max-seg")
        cfg.max_seg = detail::config_number(value, key);
    else if (key == "flux-depth")
        cfg.flux_depth = static_cast<int>(detail::config_integer(value, key));
    else if (key == "domain")
        cfg.domain = parse_domain(value);
    else if (key == "out")
        cfg.out = value;
    else if (key == "threads")
        cfg.threads = static_cast<unsigned>(detail::config_integer(value, key));
    else if (key == "samples")
        cfg.samples = static_cast<int>(detail::config_integer(value, key));
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(detail::config_integer(value, key));
    else
        throw ConfigError("unknown config key '" + key + "'");
}

// --- region / domain resolution ----------------------------------------------

[[nodiscard]] inline Curve make_region2(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    if (name == "square") return make_square_curve();
    if (name == "lshape") return make_lshape_curve();
    if (name == "disk") {
        if (colon == std::string::npos) throw ConfigError("region disk needs a vertex count: disk:N");
        return make_disk_curve(static_cast<int>(detail::config_integer(spec.substr(colon + 1), "disk")));
    }
    return load_curve(spec); // anything else is a file path
}

[[nodiscard]] inline TriMesh make_region3(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    if (name == "cube") return make_cube_mesh();
    if (name == "icosphere") {
        if (colon == std::string::npos)
            throw ConfigError("region icosphere needs a depth: icosphere:D");
        return make_icosphere(
            static_cast<int>(detail::config_integer(spec.substr(colon + 1), "icosphere")));
    }
    return load_mesh(spec);
}

namespace detail {

inline void validate_common(const RunConfig& cfg, int n_min, int n_max) {
    if (n_min < 1) throw ConfigError("levels: n_min must be >= 1");
    if (n_max > 14) throw ConfigError("levels: n_max must be <= 14 (desk-scale guard)");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    if (cfg.order < 1 || cfg.order > 64) throw ConfigError("order must be in 1..64");
    if (cfg.tol_line && !(*cfg.tol_line > 0.0)) throw ConfigError("tol-line must be > 0");
    if (cfg.tol_figure && !(*cfg.tol_figure > 0.0)) throw ConfigError("tol-figure must be > 0");
    if (cfg.max_seg && !(*cfg.max_seg > 0.0)) throw ConfigError("max-seg must be > 0");
    if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
    if (cfg.flux_depth < 0) throw ConfigError("flux-depth must be >= 0");
}

inline Rect domain_rect(const std::vector<double>& v) {
    const Rect r{v[0], v[1], v[2], v[3]};
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) throw ConfigError("domain: spans must be nonempty");
    return r;
}

inline Box3 domain_box(const std::vector<double>& v) {
    const Box3 b{v[0], v[1], v[2], v[3], v[4], v[5]};
    if (!(b.x0 < b.x1 && b.y0 < b.y1 && b.z0 < b.z1))
        throw ConfigError("domain: spans must be nonempty");
    return b;
}

inline void emit_csv(const RunConfig& cfg, const std::string& csv, std::ostream& console) {
    if (cfg.out.empty()) {
        console << csv;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ConfigError(cfg.out + ": cannot open output file");
    f << csv;
    if (!f) throw ConfigError(cfg.out + ": write failed");
}

inline std::string short_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace detail

struct AdditivityRow {
    std::string function;
    int samples = 0;
    double max_defect = 0.0;
    bool exact_requirement = false; // area must come out identically zero
};

/// Random axis-parallel rectangles with panel-aligned cuts.  Corners are
/// drawn from a dyadic lattice so the area function's additivity defect
/// is exactly representable arithmetic, not merely small.
[[nodiscard]] inline std::vector<AdditivityRow> run_additivity_study(
    const std::vector<std::pair<std::string, RectangleFunction>>& functions, const Rect& domain,
    double panel_width, int samples, std::uint64_t seed) {
    if (!(panel_width > 0.0)) throw ConfigError("additivity study needs hq > 0");
    constexpr double kLattice = 1.0 / 4096.0;
    const auto lat_count_x = static_cast<long long>(std::floor(domain.width() / kLattice));
    const auto lat_count_y = static_cast<long long>(std::floor(domain.height() / kLattice));
    const auto min_span = static_cast<long long>(std::ceil(2.0 * panel_width / kLattice)) + 1;
    if (lat_count_x <= min_span || lat_count_y <= min_span)
        throw ConfigError("additivity study: domain too small for the panel width");

    std::mt19937_64 rng(seed);
    struct Sample {
        Rect r;
        Axis2 axis;
        double cut;
    };
    std::vector<Sample> cases;
    cases.reserve(static_cast<std::size_t>(samples));
    auto lattice_pair = [&](double lo, long long count) {
        std::uniform_int_distribution<long long> d(0, count);
        long long a = d(rng), b = d(rng);
        while (b - a < min_span && a - b < min_span) b = d(rng); // enforce span > 2 panels
        if (a > b) std::swap(a, b);
        return std::pair{lo + static_cast<double>(a) * kLattice,
                         lo + static_cast<double>(b) * kLattice};
    };
    for (int i = 0; i < samples; ++i) {
        const auto [x0, x1] = lattice_pair(domain.x0, lat_count_x);
        const auto [y0, y1] = lattice_pair(domain.y0, lat_count_y);
        const Axis2 axis = (rng() & 1u) ? Axis2::X : Axis2::Y;
        const double lo = axis == Axis2::X ? x0 : y0;
        const double hi = axis == Axis2::X ? x1 : y1;
        // first panel boundary strictly inside (lo, hi)
        double cut = (std::floor(lo / panel_width) + 1.0) * panel_width;
        if (cut <= lo) cut += panel_width;
        if (!(lo < cut && cut < hi))
            throw std::logic_error("additivity study: no interior panel boundary");
        cases.push_back({Rect{x0, x1, y0, y1}, axis, cut});
    }

    std::vector<AdditivityRow> rows;
    for (const auto& [name, fn] : functions) {
        std::vector<double> defects(cases.size());
        parallel_for(cases.size(), [&](std::size_t i) {
            defects[i] = additivity_defect(fn, cases[i].r, cases[i].axis, cases[i].cut);
        });
        double mx = 0.0;
        for (double d : defects) mx = std::max(mx, d);
        rows.push_back({name, samples, mx, name == "area"});
    }
    return rows;
}

[[nodiscard]] inline std::string additivity_csv(const std::vector<AdditivityRow>& rows, double tol) {
    std::string out = kCsvSchemaLine;
    out += "function,samples,max_defect,tol,pass\n";
    for (const auto& r : rows) {
        out += r.function;
        out += ',';
        detail::csv_int(out, r.samples);
        out += ',';
        detail::csv_number(out, r.max_defect);
        out += ',';
        detail::csv_number(out, tol);
        out += ',';
        const bool ok = r.exact_requirement ? (r.max_defect == 0.0) : (r.max_defect <= tol);
        detail::csv_int(out, ok ? 1 : 0);
        out += '\n';
    }
    return out;
}

// --- command dispatch ---------------------------------------------------------

namespace detail {

inline int run_jordan(const RunConfig& cfg, std::ostream& console) {
    if (cfg.region.empty()) throw ConfigError("jordan requires a region");
    const auto [n_min, n_max] = cfg.levels.value_or(std::pair{4, 9});
    validate_common(cfg, n_min, n_max);
    std::optional<Rect> bounds;
    if (cfg.domain) {
        if (cfg.domain->size() != 4) throw ConfigError("jordan domain must have 4 coordinates");
        bounds = domain_rect(*cfg.domain);
    }
    const Curve curve = make_region2(cfg.region);
    const ConvergenceReport rep = jordan_content(curve, n_min, n_max, bounds);
    emit_csv(cfg, convergence_csv(rep), console);
    const double gap = rep.last().gap;
    const bool pass = cfg.tol_figure ? std::abs(gap) <= *cfg.tol_figure : true;
    console << "jordan " << (pass ? "PASS" : "FAIL") << " estimate=" << short_num(rep.estimate)
            << " gap=" << short_num(gap) << " levels=" << n_min << ".." << n_max << "\n";
    return pass ? 0 : 1;
}

inline int run_green(const RunConfig& cfg, std::ostream& console) {
    if (cfg.region.empty()) throw ConfigError("green requires a region");
    if (cfg.field.empty()) throw ConfigError("green requires a field");
    const auto [n_min, n_max] = cfg.levels.value_or(std::pair{4, 9});
    validate_common(cfg, n_min, n_max);

    GreenParams p;
    p.n_min = n_min;
    p.n_max = n_max;
    if (cfg.domain) {
        if (cfg.domain->size() != 4) throw ConfigError("green domain must have 4 coordinates");
        p.bounds = domain_rect(*cfg.domain);
    }
    if (cfg.tol_line) p.tol_line = *cfg.tol_line;
    p.tol_figure = cfg.tol_figure;
    p.quadrature = QuadratureSpec{cfg.order, cfg.hq};
    if (cfg.max_seg) p.max_seg = *cfg.max_seg;

    VectorField2 field;
    try {
        field = make_field2(cfg.field);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const Curve curve = make_region2(cfg.region);
    const GreenReport rep = green_verify(field, curve, p);
    emit_csv(cfg, green_csv(rep), console);
    console << "green " << (rep.pass ? "PASS" : "FAIL") << " lhs=" << short_num(rep.lhs)
            << " rhs=" << short_num(rep.rhs.estimate)
            << " discrepancy=" << short_num(rep.discrepancy)
            << " gap=" << short_num(rep.rhs.last().gap) << " bracket=" << (rep.bracket ? 1 : 0)
            << " levels=" << n_min << ".." << n_max << "\n";
    return rep.pass ? 0 : 1;
}

inline int run_gauss(const RunConfig& cfg, std::ostream& console) {
    if (cfg.region.empty()) throw ConfigError("gauss requires a region");
    if (cfg.field.empty()) throw ConfigError("gauss requires a field");
    const auto [n_min, n_max] = cfg.levels.value_or(std::pair{3, 6});
    validate_common(cfg, n_min, n_max);

    GaussParams p;
    p.n_min = n_min;
    p.n_max = n_max;
    if (cfg.domain) {
        if (cfg.domain->size() != 6) throw ConfigError("gauss domain must have 6 coordinates");
        p.bounds = domain_box(*cfg.domain);
    }
    if (cfg.tol_line) p.tol_flux = *cfg.tol_line;
    p.tol_figure = cfg.tol_figure;
    p.quadrature = QuadratureSpec{cfg.order, cfg.hq};
    p.flux_depth = cfg.flux_depth;

    VectorField3 field;
    try {
        field = make_field3(cfg.field);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const TriMesh mesh = make_region3(cfg.region);
    const GaussReport rep = gauss_verify(field, mesh, p);
    emit_csv(cfg, gauss_csv(rep), console);
    console << "gauss " << (rep.pass ? "PASS" : "FAIL") << " lhs=" << short_num(rep.lhs)
            << " rhs=" << short_num(rep.rhs.estimate)
            << " discrepancy=" << short_num(rep.discrepancy)
            << " gap=" << short_num(rep.rhs.last().gap) << " bracket=" << (rep.bracket ? 1 : 0)
            << " levels=" << n_min << ".." << n_max << "\n";
    return rep.pass ? 0 : 1;
}

inline int run_additivity(const RunConfig& cfg, std::ostream& console) {
    validate_common(cfg, 1, 1);
    Rect domain{-2.0, 2.0, -2.0, 2.0};
    if (cfg.domain) {
        if (cfg.domain->size() != 4) throw ConfigError("additivity domain must have 4 coordinates");
        domain = domain_rect(*cfg.domain);
    }
    const double hq = cfg.hq > 0.0 ? cfg.hq : 0.0625;
    const QuadratureSpec q{cfg.order, hq};

    std::vector<std::pair<std::string, RectangleFunction>> functions;
    functions.emplace_back("area", area_function());
    if (cfg.field.empty()) {
        for (const VectorField2& f : catalog().fields2)
            functions.emplace_back("circulation[" + f.name + "]", circulation_function(f, q));
    } else {
        VectorField2 f;
        try {
            f = make_field2(cfg.field);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        functions.emplace_back("circulation[" + f.name + "]", circulation_function(f, q));
    }

    const double tol = cfg.tol_figure.value_or(1e-10);
    const auto rows = run_additivity_study(functions, domain, hq, cfg.samples, cfg.seed);
    emit_csv(cfg, additivity_csv(rows, tol), console);

    bool pass = true;
    double worst = 0.0;
    for (const auto& r : rows) {
        worst = std::max(worst, r.max_defect);
        pass = pass && (r.exact_requirement ? r.max_defect == 0.0 : r.max_defect <= tol);
    }
    console << "additivity " << (pass ? "PASS" : "FAIL") << " max_defect=" << short_num(worst)
            << " tol=" << short_num(tol) << " samples=" << cfg.samples << "\n";
    return pass ? 0 : 1;
}

} // namespace detail

/// Executes the configured study.  Returns the process exit status:
/// 0 pass, 1 fail/non-convergence; configuration problems throw
/// ConfigError (run them through main's handler for status 2).
inline int run(const RunConfig& cfg, std::ostream& console = std::cout) {
    set_thread_count(cfg.threads);
    switch (cfg.command) {
    case Command::Jordan: return detail::run_jordan(cfg, console);
    case Command::Green: return detail::run_green(cfg, console);
    case Command::Gauss: return detail::run_gauss(cfg, console);
    case Command::Additivity: return detail::run_additivity(cfg, console);
    }
    throw ConfigError("unknown command");
}

} // namespace figint

#endif // FIGINT_CLI_HPP
