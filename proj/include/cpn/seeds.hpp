#pragma once

/**
    \file
    \brief holomorphic polynomial seeds f(xi) of the CP^{N-1} ladder

    A seed is an N-vector of polynomials in xi with complex coefficients stored in ascending degree. Rational seeds
    are handled by clearing denominators first: multiplying every component by a common scalar factor leaves all
    projectors unchanged, so regularize_seed and normalize_common_factor move between equivalent seeds.
*/

#include "errors.hpp"
#include "matrix_jet.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cpn {

using Polynomial = std::vector<complex>;

struct SeedVector
{
    int dim = 0;
    std::vector<Polynomial> components;
    std::string label;

    friend auto operator==(SeedVector const&, SeedVector const&) -> bool = default;
};

// ---------------------------------------------------------------------------------------------------------------------
// polynomial helpers
// ---------------------------------------------------------------------------------------------------------------------

namespace poly {

/// drop vanishing top coefficients; the zero polynomial becomes empty
inline auto trimmed(Polynomial p, double rel_tol = 0.0) -> Polynomial
{
    auto scale = 0.0;
    for (auto const& c : p) scale = std::max(scale, std::abs(c));
    while (!p.empty() && std::abs(p.back()) <= rel_tol * scale) p.pop_back();
    return p;
}

inline auto degree(Polynomial const& p) -> int { return static_cast<int>(trimmed(p).size()) - 1; }

inline auto evaluate(Polynomial const& p, complex x) -> complex
{
    auto sum = complex{};
    for (auto it = p.rbegin(); it != p.rend(); ++it) sum = sum * x + *it;
    return sum;
}

/// first derivative as a polynomial
inline auto derivative(Polynomial const& p) -> Polynomial
{
    if (p.size() <= 1) return {};
    auto out = Polynomial(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<double>(i);
    return out;
}

inline auto multiply(Polynomial const& a, Polynomial const& b) -> Polynomial
{
    if (a.empty() || b.empty()) return {};
    auto out = Polynomial(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// quotient of p by (x - root), remainder discarded
inline auto deflate(Polynomial const& p, complex root) -> Polynomial
{
    if (p.size() <= 1) return {};
    auto out = Polynomial(p.size() - 1);
    auto carry = complex{};
    for (auto i = p.size(); i-- > 1;)
    {
        carry = p[i] + carry * root;
        out[i - 1] = carry;
    }
    return out;
}

/// roots from the eigenvalues of the companion matrix
inline auto roots(Polynomial const& p) -> std::vector<complex>
{
    auto const q = trimmed(p);
    auto const n = static_cast<Eigen::Index>(q.size()) - 1;
    if (n <= 0) return {};
    auto companion = Matrix::Zero(n, n).eval();
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -q[static_cast<std::size_t>(i)] / q.back();
    auto const eig = Eigen::ComplexEigenSolver<Matrix>{companion, false}.eigenvalues();
    return {eig.data(), eig.data() + eig.size()};
}

/// |p(x)| relative to the magnitude of the terms that were summed
inline auto relative_residual(Polynomial const& p, complex x) -> double
{
    auto scale = 0.0;
    auto power = 1.0;
    for (auto const& c : p)
    {
        scale += std::abs(c) * power;
        power *= std::abs(x);
    }
    return scale == 0.0 ? 0.0 : std::abs(evaluate(p, x)) / scale;
}

} // namespace poly

// ---------------------------------------------------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------------------------------------------------

/// throws InvalidDimension / Error when the seed breaks its invariants
inline void validate_seed(SeedVector const& s)
{
    if (s.dim < 2) throw InvalidDimension{"seed dimension must be at least 2, got " + std::to_string(s.dim)};
    if (static_cast<int>(s.components.size()) != s.dim)
        throw InvalidDimension{"seed declares n = " + std::to_string(s.dim) + " but has " +
                               std::to_string(s.components.size()) + " components"};
    auto const nonzero = std::any_of(s.components.begin(), s.components.end(),
                                     [](Polynomial const& p) { return !poly::trimmed(p).empty(); });
    if (!nonzero) throw ZeroVectorError{"seed has no nonzero component"};
}

/// f_j = sqrt(binomial(N-1, j)) xi^j
inline auto veronese_seed(int n) -> SeedVector
{
    if (n < 2) throw InvalidDimension{"Veronese seed needs N >= 2, got " + std::to_string(n)};
    auto s = SeedVector{n, {}, "veronese-" + std::to_string(n)};
    auto binomial = 1.0;
    for (auto j = 0; j < n; ++j)
    {
        auto p = Polynomial(static_cast<std::size_t>(j + 1));
        p.back() = std::sqrt(binomial);
        s.components.push_back(std::move(p));
        binomial = binomial * (n - 1 - j) / (j + 1);
    }
    return s;
}

inline auto max_degree(SeedVector const& s) -> int
{
    auto d = 0;
    for (auto const& p : s.components) d = std::max(d, poly::degree(p));
    return d;
}

/// Horner evaluation in jet arithmetic; every component is holomorphic so all xibar coefficients vanish
inline auto evaluate_seed(SeedVector const& s, complex base, int order) -> JetVector
{
    auto const xi = jet_lift(0.0, base, order, JetRole::variable_xi);
    auto out = JetVector{};
    out.reserve(s.components.size());
    for (auto const& p : s.components)
    {
        auto acc = Jet{base, order};
        for (auto it = p.rbegin(); it != p.rend(); ++it)
        {
            acc = acc * xi;
            acc(0, 0) += *it;
        }
        out.push_back(std::move(acc));
    }
    return out;
}

/// seed in the chart eta = 1/xi: eta^d f(1/eta) with d the maximal degree
inline auto invert_seed(SeedVector const& s) -> SeedVector
{
    auto const d = static_cast<std::size_t>(max_degree(s));
    auto out = SeedVector{s.dim, {}, s.label};
    for (auto const& p : s.components)
    {
        auto q = Polynomial(d + 1);
        auto const t = poly::trimmed(p);
        for (std::size_t i = 0; i < t.size(); ++i) q[d - i] = t[i];
        out.components.push_back(std::move(q));
    }
    return out;
}

/// multiply every component by (xi - pole)^p
inline auto regularize_seed(SeedVector const& s, complex pole, int p) -> SeedVector
{
    if (p < 0) throw Error{"regularization order must be non-negative"};
    auto factor = Polynomial{1.0};
    for (auto i = 0; i < p; ++i) factor = poly::multiply(factor, Polynomial{-pole, 1.0});
    auto out = s;
    for (auto& c : out.components) c = poly::trimmed(poly::multiply(c, factor));
    return out;
}

/// multiply every component by an arbitrary scalar polynomial
inline auto scale_seed(SeedVector const& s, Polynomial const& factor) -> SeedVector
{
    auto out = s;
    for (auto& c : out.components) c = poly::trimmed(poly::multiply(c, factor));
    return out;
}

inline constexpr double common_root_tolerance = 1e-9;

/// divide all components by their polynomial GCD, found as the set of shared roots
inline auto normalize_common_factor(SeedVector const& s) -> SeedVector
{
    validate_seed(s);
    auto out = s;
    for (auto& c : out.components) c = poly::trimmed(c, 1e-14);

    for (;;)
    {
        // lowest-degree nonzero component bounds the common factor
        Polynomial const* pivot = nullptr;
        for (auto const& c : out.components)
        {
            if (c.empty()) continue;
            if (pivot == nullptr || c.size() < pivot->size()) pivot = &c;
        }
        if (pivot == nullptr || pivot->size() <= 1) break;

        auto found = false;
        for (auto const& r : poly::roots(*pivot))
        {
            auto const shared = std::all_of(out.components.begin(), out.components.end(), [&](Polynomial const& c) {
                return poly::relative_residual(c, r) <= common_root_tolerance;
            });
            if (!shared) continue;
            for (auto& c : out.components) c = poly::trimmed(poly::deflate(c, r), 1e-14);
            found = true;
            break;
        }
        if (!found) break;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------------------------------
// JSON I/O
// ---------------------------------------------------------------------------------------------------------------------

namespace detail {

inline auto line_of(std::string const& text, std::size_t byte) -> int
{
    auto const end = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

inline auto parse_decimal(nlohmann::json const& j, std::string const& field) -> double
{
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw ParseError{"expected a decimal string", 0, field};
    auto const& s = j.get_ref<std::string const&>();
    auto value = 0.0;
    auto const* first = s.data();
    auto const* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto const [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || s.empty()) throw ParseError{"'" + s + "' is not a decimal number", 0, field};
    return value;
}

inline auto format_decimal(double v) -> std::string
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline auto seed_to_json(SeedVector const& s) -> nlohmann::json
{
    auto components = nlohmann::json::array();
    for (auto const& p : s.components)
    {
        auto coeffs = nlohmann::json::array();
        for (auto const& c : p)
            coeffs.push_back({{"re", detail::format_decimal(c.real())}, {"im", detail::format_decimal(c.imag())}});
        components.push_back(std::move(coeffs));
    }
    return {{"n", s.dim}, {"label", s.label}, {"components", std::move(components)}};
}

inline auto seed_from_json(nlohmann::json const& j) -> SeedVector
{
    if (!j.is_object()) throw ParseError{"seed must be a JSON object"};
    for (auto const* key : {"n", "components"})
        if (!j.contains(key)) throw ParseError{"missing required field", 0, key};
    if (!j["n"].is_number_integer()) throw ParseError{"expected an integer", 0, "n"};

    auto s = SeedVector{};
    s.dim = j["n"].get<int>();
    if (j.contains("label"))
    {
        if (!j["label"].is_string()) throw ParseError{"expected a string", 0, "label"};
        s.label = j["label"].get<std::string>();
    }
    auto const& comps = j["components"];
    if (!comps.is_array()) throw ParseError{"expected an array of coefficient lists", 0, "components"};
    for (std::size_t i = 0; i < comps.size(); ++i)
    {
        auto const path = "components[" + std::to_string(i) + "]";
        if (!comps[i].is_array()) throw ParseError{"expected an array of coefficients", 0, path};
        auto p = Polynomial{};
        for (std::size_t k = 0; k < comps[i].size(); ++k)
        {
            auto const& c = comps[i][k];
            auto const cpath = path + "[" + std::to_string(k) + "]";
            if (!c.is_object() || !c.contains("re") || !c.contains("im"))
                throw ParseError{"expected {\"re\": ..., \"im\": ...}", 0, cpath};
            p.emplace_back(detail::parse_decimal(c["re"], cpath + ".re"), detail::parse_decimal(c["im"], cpath + ".im"));
        }
        s.components.push_back(std::move(p));
    }
    validate_seed(s);
    return s;
}

inline auto parse_seed(std::string const& text) -> SeedVector
{
    auto j = nlohmann::json{};
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw ParseError{e.what(), detail::line_of(text, e.byte)};
    }
    return seed_from_json(j);
}

inline auto load_seed(std::string const& path) -> SeedVector
{
    auto in = std::ifstream{path};
    if (!in) throw ParseError{"cannot open seed file '" + path + "'"};
    auto buffer = std::stringstream{};
    buffer << in.rdbuf();
    return parse_seed(buffer.str());
}

inline void save_seed(SeedVector const& s, std::string const& path)
{
    auto out = std::ofstream{path};
    if (!out) throw Error{"cannot write seed file '" + path + "'"};
    out << seed_to_json(s).dump(2) << '\n';
}

} // namespace cpn
