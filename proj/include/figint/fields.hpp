#ifndef FIGINT_FIELDS_HPP
#define FIGINT_FIELDS_HPP

/// Catalog of 2D/3D scalar and vector fields used as integrands.  All
/// evaluators are pure and reentrant.  The Weierstrass-type entries are
/// continuous but nowhere differentiable in the limit; the shipped
/// truncation keeps the tail below 1e-9.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace figint {

enum class Smoothness : unsigned char { Smooth, ContinuousOnly };

struct ScalarField2 {
    std::function<double(double, double)> eval;
    std::string name;
    Smoothness smoothness = Smoothness::Smooth;

    double operator()(double x, double y) const { return eval(x, y); }
};

struct VectorField2 {
    ScalarField2 P;
    ScalarField2 Q;
    std::string name;
    // dQ/dx - dP/dy, present only for smooth entries
    std::optional<std::function<double(double, double)>> curl_z;

    [[nodiscard]] Smoothness smoothness() const noexcept {
        return (P.smoothness == Smoothness::Smooth && Q.smoothness == Smoothness::Smooth)
                   ? Smoothness::Smooth
                   : Smoothness::ContinuousOnly;
    }
};

struct VectorField3 {
    std::function<double(double, double, double)> u, v, w;
    std::string name;
    Smoothness smoothness = Smoothness::Smooth;
    std::optional<std::function<double(double, double, double)>> divergence;
};

/// Truncated Weierstrass series W(t) = sum_{k=0}^{K} a^k cos(b^k pi t).
/// Requires 0 < a < 1 and odd integer b >= 3; the truncation error is at
/// most a^{K+1} / (1 - a).
inline double weierstrass(double a, int b, int K, double t) {
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("weierstrass: amplitude ratio a must satisfy 0 < a < 1");
    if (b < 3 || b % 2 == 0)
        throw std::domain_error("weierstrass: frequency base b must be an odd integer >= 3");
    if (K < 0)
        throw std::domain_error("weierstrass: truncation order K must be >= 0");
    double ak = 1.0;
    double bk = 1.0;
    double sum = 0.0;
    for (int k = 0; k <= K; ++k) {
        sum += ak * std::cos(bk * std::numbers::pi * t);
        ak *= a;
        bk *= static_cast<double>(b);
    }
    return sum;
}

inline double weierstrass_truncation_bound(double a, int K) noexcept {
    return std::pow(a, K + 1) / (1.0 - a);
}

struct WeierstrassParams {
    double a = 0.5;
    int b = 3;
    int K = 30;
};

// --- 2D catalog -----------------------------------------------------------

inline VectorField2 make_const2(double c1 = 1.0, double c2 = 1.0) {
    VectorField2 f;
    f.name = "const2";
    f.P = {[c1](double, double) { return c1; }, "P=c1", Smoothness::Smooth};
    f.Q = {[c2](double, double) { return c2; }, "Q=c2", Smoothness::Smooth};
    f.curl_z = [](double, double) { return 0.0; };
    return f;
}

/// (-y/2, x/2); curl_z == 1, so its circulation around any loop is the
/// enclosed area.
inline VectorField2 make_rot() {
    VectorField2 f;
    f.name = "rot";
    f.P = {[](double, double y) { return -0.5 * y; }, "P=-y/2", Smoothness::Smooth};
    f.Q = {[](double x, double) { return 0.5 * x; }, "Q=x/2", Smoothness::Smooth};
    f.curl_z = [](double, double) { return 1.0; };
    return f;
}

/// Gradient of phi = x^2 y; conservative, curl_z == 0.
inline VectorField2 make_grad() {
    VectorField2 f;
    f.name = "grad";
    f.P = {[](double x, double y) { return 2.0 * x * y; }, "P=2xy", Smoothness::Smooth};
    f.Q = {[](double x, double) { return x * x; }, "Q=x^2", Smoothness::Smooth};
    f.curl_z = [](double, double) { return 0.0; };
    return f;
}

/// (W(y), W(x)) for the truncated Weierstrass W; continuous-only.
inline VectorField2 make_weier(WeierstrassParams p = {}) {
    VectorField2 f;
    f.name = "weier";
    f.P = {[p](double, double y) { return weierstrass(p.a, p.b, p.K, y); },
           "P=W(y)", Smoothness::ContinuousOnly};
    f.Q = {[p](double x, double) { return weierstrass(p.a, p.b, p.K, x); },
           "Q=W(x)", Smoothness::ContinuousOnly};
    return f;
}

// --- 3D catalog -----------------------------------------------------------

inline VectorField3 make_const3(double c1 = 1.0, double c2 = 1.0, double c3 = 1.0) {
    VectorField3 f;
    f.name = "const3";
    f.u = [c1](double, double, double) { return c1; };
    f.v = [c2](double, double, double) { return c2; };
    f.w = [c3](double, double, double) { return c3; };
    f.divergence = [](double, double, double) { return 0.0; };
    return f;
}

/// (x, y, z)/3; divergence == 1, so its flux through a closed surface is
/// the enclosed volume.
inline VectorField3 make_radial() {
    VectorField3 f;
    f.name = "radial";
    f.u = [](double x, double, double) { return x / 3.0; };
    f.v = [](double, double y, double) { return y / 3.0; };
    f.w = [](double, double, double z) { return z / 3.0; };
    f.divergence = [](double, double, double) { return 1.0; };
    return f;
}

/// (W(y), W(z), W(x)); continuous-only, no declared divergence.
inline VectorField3 make_weier3(WeierstrassParams p = {}) {
    VectorField3 f;
    f.name = "weier3";
    f.smoothness = Smoothness::ContinuousOnly;
    f.u = [p](double, double y, double) { return weierstrass(p.a, p.b, p.K, y); };
    f.v = [p](double, double, double z) { return weierstrass(p.a, p.b, p.K, z); };
    f.w = [p](double x, double, double) { return weierstrass(p.a, p.b, p.K, x); };
    return f;
}

struct FieldCatalog {
    std::vector<VectorField2> fields2;
    std::vector<VectorField3> fields3;
};

inline FieldCatalog catalog() {
    FieldCatalog c;
    c.fields2 = {make_const2(), make_rot(), make_grad(), make_weier()};
    c.fields3 = {make_const3(), make_radial(), make_weier3()};
    return c;
}

// --- field spec parsing ----------------------------------------------------
// "name" or "name:key=value,key=value", e.g. "weier:a=0.5,b=3,K=30".

namespace detail {

inline std::vector<std::pair<std::string, double>> parse_params(const std::string& s) {
    std::vector<std::pair<std::string, double>> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("field spec: expected key=value, got '" + item + "'");
        std::size_t used = 0;
        double val = 0;
        try {
            val = std::stod(item.substr(eq + 1), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("field spec: bad number in '" + item + "'");
        }
        if (used != item.size() - eq - 1)
            throw std::invalid_argument("field spec: bad number in '" + item + "'");
        out.emplace_back(item.substr(0, eq), val);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline double param_or(const std::vector<std::pair<std::string, double>>& ps,
                       const std::string& key, double dflt) {
    for (const auto& [k, v] : ps)
        if (k == key) return v;
    return dflt;
}

inline WeierstrassParams weier_params(const std::vector<std::pair<std::string, double>>& ps) {
    WeierstrassParams w;
    w.a = param_or(ps, "a", w.a);
    w.b = static_cast<int>(param_or(ps, "b", w.b));
    w.K = static_cast<int>(param_or(ps, "K", w.K));
    return w;
}

} // namespace detail

inline VectorField2 make_field2(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const auto params = colon == std::string::npos
                            ? std::vector<std::pair<std::string, double>>{}
                            : detail::parse_params(spec.substr(colon + 1));
    if (name == "const2")
        return make_const2(detail::param_or(params, "c1", 1.0), detail::param_or(params, "c2", 1.0));
    if (name == "rot") return make_rot();
    if (name == "grad") return make_grad();
    if (name == "weier") return make_weier(detail::weier_params(params));
    throw std::invalid_argument("unknown 2D field '" + name + "'");
}

inline VectorField3 make_field3(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const auto params = colon == std::string::npos
                            ? std::vector<std::pair<std::string, double>>{}
                            : detail::parse_params(spec.substr(colon + 1));
    if (name == "const3")
        return make_const3(detail::param_or(params, "c1", 1.0), detail::param_or(params, "c2", 1.0),
                           detail::param_or(params, "c3", 1.0));
    if (name == "radial") return make_radial();
    if (name == "weier3") return make_weier3(detail::weier_params(params));
    throw std::invalid_argument("unknown 3D field '" + name + "'");
}

} // namespace figint

#endif // FIGINT_FIELDS_HPP
