#ifndef FIGINT_IO_HPP
#define FIGINT_IO_HPP

/// Plain-text ingestion: closed-curve files (key = value header plus
/// "x y" vertex rows) and triangle meshes (either the "vertices N
/// triangles M" soup format or the common v/f polygon format restricted
/// to triangles).  All parse errors carry file:line positions.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "figint/gauss3d.hpp"
#include "figint/region2d.hpp"

namespace figint {

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& label, int line, const std::string& msg) {
    throw std::runtime_error(label + ":" + std::to_string(line) + ": " + msg);
}

inline std::string strip_comment(std::string s) {
    if (const auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    return s;
}

inline std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline double parse_number(const std::string& tok, const std::string& label, int line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        parse_fail(label, line, "expected a number, got '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(label, line, "trailing characters in number '" + tok + "'");
    return v;
}

inline long long parse_index(const std::string& tok, const std::string& label, int line) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, nullptr, 10);
        used = tok.size(); // validated below by round-trip check
    } catch (const std::exception&) {
        parse_fail(label, line, "expected an integer, got '" + tok + "'");
    }
    if (std::to_string(v) != tok) parse_fail(label, line, "expected an integer, got '" + tok + "'");
    (void)used;
    return v;
}

} // namespace detail

/// Curve file: optional `closed = true`, `epsilon = <val>`, `orientation =
/// auto|ccw|cw` header lines in any order, then one `x y` row per vertex.
/// `#` starts a comment.
[[nodiscard]] inline Curve parse_curve(std::istream& in, const std::string& label = "<curve>") {
    std::vector<Point2> verts;
    double eps = 0.0;
    std::string orientation = "auto";
    bool closed = true;

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        if (const auto eq = line.find('='); eq != std::string::npos) {
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key == "closed") {
                if (val == "true")
                    closed = true;
                else if (val == "false")
                    closed = false;
                else
                    detail::parse_fail(label, lineno, "closed must be true or false");
            } else if (key == "epsilon") {
                eps = detail::parse_number(val, label, lineno);
                if (!(eps >= 0.0)) detail::parse_fail(label, lineno, "epsilon must be >= 0");
            } else if (key == "orientation") {
                if (val != "auto" && val != "ccw" && val != "cw")
                    detail::parse_fail(label, lineno, "orientation must be auto, ccw, or cw");
                orientation = val;
            } else {
                detail::parse_fail(label, lineno, "unknown key '" + key + "'");
            }
            continue;
        }
        const auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 2)
            detail::parse_fail(label, lineno, "vertex row must be 'x y'");
        verts.push_back({detail::parse_number(toks[0], label, lineno),
                         detail::parse_number(toks[1], label, lineno)});
    }
    if (!closed)
        throw std::runtime_error(label + ": only closed curves are supported (closed=false)");
    Curve c = Curve::make(std::move(verts), eps);
    if (orientation == "ccw" && c.orientation_sign() < 0) return c.reversed();
    if (orientation == "cw" && c.orientation_sign() > 0) return c.reversed();
    return c;
}

[[nodiscard]] inline Curve load_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open curve file");
    return parse_curve(in, path);
}

namespace detail {

[[nodiscard]] inline TriMesh parse_mesh_soup(std::istream& in, const std::string& label) {
    std::string raw;
    int lineno = 0;
    long long nverts = -1, ntris = -1;
    TriMesh m;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto toks = tokenize(strip_comment(raw));
        if (toks.empty()) continue;
        if (nverts < 0) {
            if (toks.size() != 4 || toks[0] != "vertices" || toks[2] != "triangles")
                parse_fail(label, lineno, "expected header 'vertices N triangles M'");
            nverts = parse_index(toks[1], label, lineno);
            ntris = parse_index(toks[3], label, lineno);
            if (nverts < 0 || ntris < 0) parse_fail(label, lineno, "negative count");
            m.vertices.reserve(static_cast<std::size_t>(nverts));
            m.triangles.reserve(static_cast<std::size_t>(ntris));
            continue;
        }
        if (std::ssize(m.vertices) < nverts) {
            if (toks.size() != 3) parse_fail(label, lineno, "vertex row must be 'x y z'");
            m.vertices.push_back({parse_number(toks[0], label, lineno),
                                  parse_number(toks[1], label, lineno),
                                  parse_number(toks[2], label, lineno)});
            continue;
        }
        if (std::ssize(m.triangles) < ntris) {
            if (toks.size() != 3) parse_fail(label, lineno, "triangle row must be 'i j k'");
            std::array<std::int32_t, 3> tri{};
            for (int e = 0; e < 3; ++e) {
                const long long idx = parse_index(toks[e], label, lineno);
                if (idx < 0 || idx >= nverts) parse_fail(label, lineno, "vertex index out of range");
                tri[e] = static_cast<std::int32_t>(idx);
            }
            m.triangles.push_back(tri);
            continue;
        }
        parse_fail(label, lineno, "unexpected extra row");
    }
    if (nverts < 0) throw std::runtime_error(label + ": empty mesh file");
    if (std::ssize(m.vertices) != nverts || std::ssize(m.triangles) != ntris)
        throw std::runtime_error(label + ": row count does not match header");
    return m;
}

[[nodiscard]] inline TriMesh parse_mesh_obj(std::istream& in, const std::string& label) {
    std::string raw;
    int lineno = 0;
    TriMesh m;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto toks = tokenize(strip_comment(raw));
        if (toks.empty()) continue;
        const std::string& kind = toks[0];
        if (kind == "v") {
            if (toks.size() < 4) parse_fail(label, lineno, "v row needs x y z");
            m.vertices.push_back({parse_number(toks[1], label, lineno),
                                  parse_number(toks[2], label, lineno),
                                  parse_number(toks[3], label, lineno)});
        } else if (kind == "f") {
            if (toks.size() != 4) parse_fail(label, lineno, "only triangular faces are supported");
            std::array<std::int32_t, 3> tri{};
            for (int e = 0; e < 3; ++e) {
                // "i", "i/t", "i//n", "i/t/n": the vertex index leads
                const std::string head = toks[e + 1].substr(0, toks[e + 1].find('/'));
                const long long idx = parse_index(head, label, lineno);
                if (idx < 1 || idx > std::ssize(m.vertices))
                    parse_fail(label, lineno, "face references vertex " + std::to_string(idx) +
                                                  " which is not (yet) defined");
                tri[e] = static_cast<std::int32_t>(idx - 1);
            }
            m.triangles.push_back(tri);
        } else if (kind == "vn" || kind == "vt" || kind == "o" || kind == "g" || kind == "s" ||
                   kind == "usemtl" || kind == "mtllib") {
            // geometry-irrelevant rows
        } else {
            parse_fail(label, lineno, "unsupported row type '" + kind + "'");
        }
    }
    if (m.triangles.empty()) throw std::runtime_error(label + ": mesh has no faces");
    return m;
}

} // namespace detail

/// Sniffs the format from the first meaningful token: "vertices" selects
/// the soup format, "v"/"f"/other polygon-format keywords select that.
[[nodiscard]] inline TriMesh parse_mesh(std::istream& in, const std::string& label = "<mesh>") {
    std::string content(std::istreambuf_iterator<char>(in), {});
    std::istringstream first_pass(content);
    std::string raw;
    std::string first_tok;
    while (std::getline(first_pass, raw)) {
        const auto toks = detail::tokenize(detail::strip_comment(raw));
        if (!toks.empty()) {
            first_tok = toks[0];
            break;
        }
    }
    std::istringstream body(content);
    if (first_tok == "vertices") return detail::parse_mesh_soup(body, label);
    if (first_tok == "v" || first_tok == "f" || first_tok == "vn" || first_tok == "vt" ||
        first_tok == "o" || first_tok == "g" || first_tok == "s" || first_tok == "usemtl" ||
        first_tok == "mtllib")
        return detail::parse_mesh_obj(body, label);
    throw std::runtime_error(label + ": unrecognized mesh format");
}

[[nodiscard]] inline TriMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open mesh file");
    return parse_mesh(in, path);
}

} // namespace figint

#endif // FIGINT_IO_HPP
