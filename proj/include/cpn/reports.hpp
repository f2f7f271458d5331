#pragma once

/**
    \file
    \brief verification suite, geometry tables and mesh export behind the command-line tool

    Reports are plain structs with JSON/CSV writers. Nothing here records wall-clock time or host data, so two runs
    with the same configuration produce byte-identical output.
*/

#include "errors.hpp"
#include "geometry.hpp"
#include "ladder.hpp"
#include "seeds.hpp"
#include "spectral.hpp"
#include "surfaces.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cpn {

inline constexpr char const* tool_version = "0.3.0";

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------------------------------------------------
// small parsers shared with the CLI
// ---------------------------------------------------------------------------------------------------------------------

namespace detail {

inline auto trim(std::string_view s) -> std::string_view
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline auto split(std::string_view s, char sep) -> std::vector<std::string_view>
{
    auto out = std::vector<std::string_view>{};
    for (;;)
    {
        auto const pos = s.find(sep);
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) return out;
        s.remove_prefix(pos + 1);
    }
}

inline auto to_double(std::string_view s, std::string_view whole) -> double
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto v = 0.0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError{"cannot read '" + std::string{whole} + "' as a number"};
    return v;
}

} // namespace detail

/// accepts 2, -0.5, 0.5i, i, -3+1i, 1e-3-2i
inline auto parse_complex(std::string_view text) -> complex
{
    auto const s = detail::trim(text);
    if (s.empty()) throw ConfigError{"empty complex number"};
    if (s.back() != 'i' && s.back() != 'j') return {detail::to_double(s, text), 0.0};

    auto const body = s.substr(0, s.size() - 1);
    auto split_at = std::string_view::npos;
    for (auto p = body.size(); p-- > 1;)
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E')
        {
            split_at = p;
            break;
        }
    auto const imag_of = [&](std::string_view im) {
        if (im.empty() || im == "+") return 1.0;
        if (im == "-") return -1.0;
        return detail::to_double(im, text);
    };
    if (split_at == std::string_view::npos) return {0.0, imag_of(body)};
    return {detail::to_double(body.substr(0, split_at), text), imag_of(body.substr(split_at))};
}

inline auto parse_complex_list(std::string_view text) -> std::vector<complex>
{
    auto out = std::vector<complex>{};
    for (auto part : detail::split(text, ',')) out.push_back(parse_complex(part));
    return out;
}

/// "all" or a comma list of rungs, each checked against N
inline auto parse_rungs(std::string_view text, int n) -> std::vector<int>
{
    auto out = std::vector<int>{};
    if (detail::trim(text) == "all" || detail::trim(text).empty())
    {
        for (auto k = 0; k < n; ++k) out.push_back(k);
        return out;
    }
    for (auto part : detail::split(text, ','))
    {
        auto v = 0;
        auto const [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
            throw ConfigError{"cannot read rung '" + std::string{part} + "'"};
        if (v < 0 || v >= n) throw ConfigError{"rung " + std::to_string(v) + " outside 0.." + std::to_string(n - 1)};
        out.push_back(v);
    }
    return out;
}

inline auto complex_json(complex z) -> ordered_json { return {{"re", z.real()}, {"im", z.imag()}}; }

inline auto matrix_json(Matrix const& m) -> ordered_json
{
    auto rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        auto row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// exception class name for report records
inline auto error_kind(Error const& e) -> std::string
{
#define CPN_KIND(T) \
    if (dynamic_cast<T const*>(&e)) return #T;
    CPN_KIND(ShapeError)
    CPN_KIND(DivisionByZeroAtBasePoint)
    CPN_KIND(JetOrderError)
    CPN_KIND(InvalidDimension)
    CPN_KIND(ParseError)
    CPN_KIND(ZeroVectorError)
    CPN_KIND(DegenerateSeedError)
    CPN_KIND(LadderEndError)
    CPN_KIND(InvalidProjectorError)
    CPN_KIND(RungError)
    CPN_KIND(SpectralPoleError)
    CPN_KIND(InconsistentSurfaceError)
    CPN_KIND(DegenerateMetricError)
    CPN_KIND(QuadratureError)
    CPN_KIND(ConfigError)
#undef CPN_KIND
    return "Error";
}

// ---------------------------------------------------------------------------------------------------------------------
// finite differences of projector values
// ---------------------------------------------------------------------------------------------------------------------

namespace detail {

/// Fornberg weights for the m-th derivative at 0 on the integer nodes -s..s
inline auto central_weights(int m, int s) -> std::vector<double>
{
    auto const n = static_cast<std::size_t>(2 * s + 1);
    auto const order = static_cast<std::size_t>(m);
    auto x = std::vector<double>(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) - s;
    auto c = std::vector<std::vector<double>>(n, std::vector<double>(order + 1, 0.0));
    auto c1 = 1.0;
    auto c4 = x[0];
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i)
    {
        auto const mn = std::min(i, order);
        auto c2 = 1.0;
        auto const c5 = c4;
        c4 = x[i];
        for (std::size_t j = 0; j < i; ++j)
        {
            auto const c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1)
            {
                for (auto k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (auto k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    auto out = std::vector<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i][order];
    return out;
}

inline auto binomial(int n, int k) -> double
{
    auto r = 1.0;
    for (auto i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace detail

/// largest |jet coefficient - finite difference| over rungs' coefficients of total order <= max_order, scaled by the
/// largest coefficient of each rung (at least 1)
inline auto jet_finite_difference_error(SeedVector const& seed, Ladder const& ladder, int max_order = 3)
    -> std::vector<double>
{
    constexpr auto s = 6;
    auto const point = ladder.front().base();
    auto const n = static_cast<int>(ladder.size());
    auto const top = ladder.back().rung;

    // values[i][j] = ladder at point + (i-s) h + i (j-s) h, one grid per step size
    using Grid = std::vector<std::vector<Ladder>>;
    auto grids = std::map<double, Grid>{};
    auto const grid_for = [&](double h) -> Grid const& {
        auto [it, fresh] = grids.try_emplace(h);
        if (fresh)
        {
            it->second.assign(2 * s + 1, std::vector<Ladder>(2 * s + 1));
            for (auto i = 0; i <= 2 * s; ++i)
                for (auto j = 0; j <= 2 * s; ++j)
                    it->second[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        build_ladder(seed, point + complex{(i - s) * h, (j - s) * h}, 0, top);
        }
        return it->second;
    };

    auto weights = std::vector<std::vector<double>>{};
    for (auto m = 0; m <= max_order; ++m) weights.push_back(detail::central_weights(m, s));

    // mixed partial d^mx_x d^my_y of rung k
    auto const partial = [&](Grid const& values, double h, int k, int mx, int my) {
        auto sum = Matrix::Zero(ladder.front().dim(), ladder.front().dim()).eval();
        for (auto i = 0; i <= 2 * s; ++i)
            for (auto j = 0; j <= 2 * s; ++j)
            {
                auto const w = weights[static_cast<std::size_t>(mx)][static_cast<std::size_t>(i)] *
                               weights[static_cast<std::size_t>(my)][static_cast<std::size_t>(j)];
                if (w != 0.0)
                    sum += w * values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].matrix.value();
            }
        return (sum / std::pow(h, mx + my)).eval();
    };

    auto errors = std::vector<double>(static_cast<std::size_t>(n), 0.0);
    for (auto k = 0; k < n; ++k)
    {
        auto const& P = ladder[static_cast<std::size_t>(k)].matrix;
        auto const order = std::min(max_order, P.order());
        auto const scale = std::max(1.0, P.max_abs());
        // large coefficients mean a nearby branch point; the stencil shrinks with them
        auto const h = 0.005 * (1.0 + std::abs(point)) / std::cbrt(scale);
        auto const& values = grid_for(h);
        for (auto a = 0; a <= order; ++a)
            for (auto b = 0; a + b <= order; ++b)
            {
                // d^a dbar^b = 2^-(a+b) (dx - i dy)^a (dx + i dy)^b
                auto fd = Matrix::Zero(P.dim(), P.dim()).eval();
                for (auto p = 0; p <= a; ++p)
                    for (auto q = 0; q <= b; ++q)
                    {
                        auto const c = detail::binomial(a, p) * detail::binomial(b, q) *
                                       std::pow(complex{0.0, -1.0}, p) * std::pow(complex{0.0, 1.0}, q);
                        fd += c * partial(values, h, k, a + b - p - q, p + q);
                    }
                auto const fact = std::tgamma(a + 1.0) * std::tgamma(b + 1.0);
                fd /= std::pow(2.0, a + b) * fact;
                auto const err = (fd - P.coefficient(a, b)).cwiseAbs().maxCoeff() / scale;
                errors[static_cast<std::size_t>(k)] = std::max(errors[static_cast<std::size_t>(k)], err);
            }
    }
    return errors;
}

// ---------------------------------------------------------------------------------------------------------------------
// verification suite
// ---------------------------------------------------------------------------------------------------------------------

struct CheckRecord
{
    std::string name;
    int rung = -1; // -1 for checks that do not belong to one rung
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string error;
};

struct EnvironmentStamp
{
    std::string tool_version = cpn::tool_version;
    int jet_order = default_jet_order;
    std::vector<complex> lambda_panel;
    std::vector<complex> points;
    double tolerance = 0.0;
    std::optional<double> quad_tol;
};

struct VerificationReport
{
    std::string seed_label;
    int dim = 0;
    std::vector<CheckRecord> checks;
    EnvironmentStamp environment;

    auto passed() const -> bool
    {
        return std::all_of(checks.begin(), checks.end(), [](auto const& c) { return c.pass; });
    }
    auto failures() const -> int
    {
        return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](auto const& c) { return !c.pass; }));
    }
    /// true when the seed itself could not be loaded
    auto seed_error() const -> bool { return !checks.empty() && checks.front().name == "load_seed" && !checks.front().pass; }
};

struct VerifyConfig
{
    double tol = 1e-8;
    std::vector<complex> lambdas{complex{2.0, 0.0}, complex{0.0, 0.5}, complex{-3.0, 1.0}, complex{0.1, 0.0}};
    std::vector<complex> points{complex{0.3, -0.2}, complex{-0.7, 0.45}, complex{1.6, 0.9}};
    int jet_order = default_jet_order;
    bool integrals = true;
    double quad_tol = 1e-8;
    double finite_difference_tol = 1e-6;
};

namespace detail {

class CheckTable
{
public:
    void declare(std::string const& name, int rung, double tolerance)
    {
        records_.push_back({name, rung, 0.0, tolerance, true, {}});
    }

    template <typename F>
    void run(std::string const& name, int rung, F&& f)
    {
        auto& r = find(name, rung);
        try
        {
            update(r, f());
        }
        catch (Error const& e)
        {
            fail(r, error_kind(e) + ": " + e.what());
        }
    }

    void fail(std::string const& name, int rung, std::string const& error) { fail(find(name, rung), error); }

    auto records() && -> std::vector<CheckRecord> { return std::move(records_); }

private:
    auto find(std::string const& name, int rung) -> CheckRecord&
    {
        for (auto& r : records_)
            if (r.name == name && r.rung == rung) return r;
        throw Error{"undeclared check " + name};
    }

    static void update(CheckRecord& r, double residual)
    {
        if (!(residual <= r.max_residual)) r.max_residual = residual; // NaN propagates
        if (!(r.max_residual <= r.tolerance)) r.pass = false;
    }

    static void fail(CheckRecord& r, std::string const& error)
    {
        r.pass = false;
        if (r.error.empty()) r.error = error;
    }

    std::vector<CheckRecord> records_;
};

inline auto identity_like(MatrixJet const& m) -> MatrixJet { return MatrixJet::identity(m.dim(), m.base(), m.order()); }

/// max |a - b| over the coefficients both carry
inline auto distance(MatrixJet const& a, MatrixJet const& b) -> double
{
    auto const order = std::min(a.order(), b.order());
    return (a.truncated(order) - b.truncated(order)).max_abs();
}

inline auto ladder_surfaces(Ladder const& ladder) -> std::vector<Surface>
{
    auto out = std::vector<Surface>{};
    for (auto k = 0; k < static_cast<int>(ladder.size()); ++k) out.push_back(x_k_gy(ladder, k));
    return out;
}

} // namespace detail

/// the full identity suite on an already loaded seed
inline auto verify_seed(SeedVector const& seed, VerifyConfig const& config) -> VerificationReport
{
    if (config.points.empty()) throw ConfigError{"verification needs at least one point"};
    if (!(config.tol > 0.0)) throw ConfigError{"tolerance must be positive"};
    if (config.jet_order < 3) throw ConfigError{"verification needs jets of order >= 3"};

    auto const n = seed.dim;
    auto const tol = config.tol;
    auto table = detail::CheckTable{};
    auto const per_rung = [&](std::string const& name, int first, int last, double t) {
        for (auto k = first; k <= last; ++k) table.declare(name, k, t);
    };

    table.declare("load_seed", -1, 0.0);
    table.declare("ladder_build", -1, 0.0);
    per_rung("projector", 0, n - 1, tol);
    table.declare("partition_of_unity", -1, tol);
    per_rung("pi_plus_route", 1, n - 1, tol);
    per_rung("pi_minus_route", 0, n - 2, tol);
    per_rung("pi_round_trip", 0, n - 2, tol);
    per_rung("pi_forms", 0, n - 2, tol);
    table.declare("ladder_end_top", n - 1, 0.0);
    table.declare("ladder_end_bottom", 0, 0.0);
    per_rung("euler_lagrange", 0, n - 1, tol);
    per_rung("scaling_invariance", 0, n - 1, tol);
    per_rung("jet_finite_difference", 0, n - 1, config.finite_difference_tol);
    per_rung("lax_residual", 0, n - 1, tol);
    per_rung("zero_curvature", 0, n - 1, tol);
    per_rung("phi_inverse", 0, n - 1, tol);
    per_rung("psi_sum_rule", 0, n - 1, tol);
    per_rung("lambda_plus", 0, n - 2, tol);
    per_rung("lambda_minus", 1, n - 1, tol);
    per_rung("lambda_round_trip", 0, n - 2, tol);
    per_rung("surface_defects", 0, n - 1, tol);
    per_rung("x_sym_tafel", 0, n - 1, tol);
    per_rung("x_limit", 0, n - 1, tol);
    per_rung("projector_from_surface", 0, n - 1, tol);
    per_rung("projector_chain", 0, n - 1, tol);
    per_rung("chi_plus", 0, n - 2, tol);
    per_rung("chi_minus", 1, n - 1, tol);
    per_rung("chi_round_trip", 0, n - 2, tol);
    per_rung("conformality", 0, n - 1, tol);
    per_rung("metric_routes", 0, n - 1, tol);
    per_rung("metric_positive", 0, n - 1, 0.0);
    if (config.integrals)
    {
        table.declare("sphere_area", -1, config.quad_tol * 10);
        per_rung("charge_integer", 0, n - 1, integer_snap_tolerance);
        per_rung("euler_integer", 0, n - 1, integer_snap_tolerance);
        per_rung("gauss_bonnet", 0, n - 1, 1e-5);
    }

    for (auto const point : config.points)
    {
        auto ladder = Ladder{};
        try
        {
            ladder = build_ladder(seed, point, config.jet_order);
        }
        catch (Error const& e)
        {
            table.fail("ladder_build", -1, error_kind(e) + " at " + detail::lambda_text(point) + ": " + e.what());
            continue;
        }
        auto const& L = ladder;
        auto const P = [&](int k) -> Projector const& { return L[static_cast<std::size_t>(k)]; };

        // ladder
        for (auto k = 0; k < n; ++k)
        {
            table.run("projector", k, [&] {
                auto const d = projector_defects(P(k));
                return std::max({d.idempotency, d.hermiticity, d.trace});
            });
            table.run("euler_lagrange", k, [&] { return el_residual(P(k)).max_abs(); });
            table.run("scaling_invariance", k, [&] {
                auto const scaled = scale_seed(seed, Polynomial{-(point + 1.0), 1.0});
                return detail::distance(build_ladder(scaled, point, config.jet_order, k)[static_cast<std::size_t>(k)].matrix,
                                        P(k).matrix);
            });
            if (k >= 1) table.run("pi_plus_route", k, [&] { return detail::distance(pi_plus(P(k - 1)).matrix, P(k).matrix); });
            if (k <= n - 2)
            {
                table.run("pi_minus_route", k, [&] { return detail::distance(pi_minus(P(k + 1)).matrix, P(k).matrix); });
                table.run("pi_round_trip", k, [&] { return detail::distance(pi_minus(pi_plus(P(k))).matrix, P(k).matrix); });
                table.run("pi_forms", k, [&] { return pi_form_deviation(P(k), LadderDirection::up); });
            }
        }
        table.run("partition_of_unity", -1, [&] {
            auto sum = MatrixJet{n, point, config.jet_order};
            for (auto const& p : L) sum += p.matrix;
            return (sum - detail::identity_like(sum)).max_abs();
        });
        auto const expect_end = [&](std::string const& name, int k, LadderDirection dir) {
            try
            {
                pi_step(P(k), dir);
                table.fail(name, k, "ladder end not detected");
            }
            catch (LadderEndError const&)
            {
            }
            catch (Error const& e)
            {
                table.fail(name, k, error_kind(e) + ": " + e.what());
            }
        };
        expect_end("ladder_end_top", n - 1, LadderDirection::up);
        expect_end("ladder_end_bottom", 0, LadderDirection::down);
        try
        {
            auto const fd = jet_finite_difference_error(seed, L);
            for (auto k = 0; k < n; ++k) table.run("jet_finite_difference", k, [&] { return fd[static_cast<std::size_t>(k)]; });
        }
        catch (Error const& e)
        {
            for (auto k = 0; k < n; ++k) table.fail("jet_finite_difference", k, error_kind(e) + ": " + e.what());
        }

        // spectral, per lambda
        for (auto const lambda : config.lambdas)
            for (auto k = 0; k < n; ++k)
            {
                table.run("lax_residual", k, [&] {
                    auto const [a, b] = lax_residual(L, k, lambda);
                    return std::max(a.max_abs(), b.max_abs());
                });
                table.run("zero_curvature", k, [&] { return zero_curvature_residual(P(k), lambda).max_abs(); });
                table.run("phi_inverse", k, [&] {
                    auto const phi = phi_k(L, k, lambda).matrix;
                    auto const inv = phi_k_inverse(L, k, lambda).matrix;
                    auto const neg = phi_k(L, k, -lambda).matrix;
                    auto const id = detail::identity_like(phi);
                    return std::max((phi * inv - id).max_abs(), (phi * neg - id).max_abs());
                });
                table.run("psi_sum_rule", k, [&] {
                    auto const psi = psi_k(L, k, lambda);
                    auto const sum_closed = psi.matrix + psi_k(L, k, -lambda).matrix;
                    auto const sum_negated = psi.matrix + psi_negate(psi).matrix;
                    auto const four_p = P(k).matrix * 4.0;
                    return std::max(detail::distance(sum_closed, four_p), detail::distance(sum_negated, four_p));
                });
                if (k <= n - 2)
                {
                    table.run("lambda_plus", k, [&] {
                        return detail::distance(lambda_plus(psi_k(L, k, lambda)).matrix, psi_k(L, k + 1, lambda).matrix);
                    });
                    table.run("lambda_round_trip", k, [&] {
                        auto const psi = psi_k(L, k, lambda);
                        return detail::distance(lambda_minus(lambda_plus(psi)).matrix, psi.matrix);
                    });
                }
                if (k >= 1)
                    table.run("lambda_minus", k, [&] {
                        return detail::distance(lambda_minus(psi_k(L, k, lambda)).matrix, psi_k(L, k - 1, lambda).matrix);
                    });
                table.run("x_sym_tafel", k, [&] {
                    return detail::distance(x_k_sym_tafel(L, k, lambda).matrix, x_k_gy(L, k).matrix);
                });
            }

        // surfaces
        auto surfaces = std::vector<Surface>{};
        try
        {
            surfaces = detail::ladder_surfaces(L);
        }
        catch (Error const& e)
        {
            for (auto k = 0; k < n; ++k) table.fail("surface_defects", k, error_kind(e) + ": " + e.what());
            continue;
        }
        auto const X = [&](int k) -> Surface const& { return surfaces[static_cast<std::size_t>(k)]; };
        for (auto k = 0; k < n; ++k)
        {
            table.run("surface_defects", k, [&] {
                auto const d = surface_defects(X(k));
                return std::max({d.anti_hermiticity, d.trace, d.square_trace});
            });
            table.run("x_limit", k, [&] { return detail::distance(x_k_limit(L, k).matrix, X(k).matrix); });
            table.run("projector_from_surface", k,
                      [&] { return detail::distance(projector_from_surface(X(k)).matrix, P(k).matrix); });
            table.run("projector_chain", k,
                      [&] { return detail::distance(projector_from_surface_chain(surfaces, k).matrix, P(k).matrix); });
            if (k <= n - 2)
            {
                table.run("chi_plus", k, [&] { return detail::distance(chi_plus(X(k)).matrix, X(k + 1).matrix); });
                table.run("chi_round_trip", k,
                          [&] { return detail::distance(chi_minus(chi_plus(X(k))).matrix, X(k).matrix); });
            }
            if (k >= 1) table.run("chi_minus", k, [&] { return detail::distance(chi_minus(X(k)).matrix, X(k - 1).matrix); });

            // geometry
            table.run("conformality", k, [&] {
                auto const m = metric_at(L, k);
                return std::max({std::abs(m.J), std::abs(m.Jbar), std::abs(m.J_projector), std::abs(m.Jbar_projector)});
            });
            table.run("metric_routes", k, [&] {
                auto const m = metric_at(L, k);
                return std::abs(m.g12 - m.g12_projector);
            });
            table.run("metric_positive", k, [&] { return std::max(0.0, -metric_at(L, k).g12); });
        }
    }

    if (config.integrals)
    {
        table.run("sphere_area", -1, [&] {
            auto const r = sphere_integral(
                [](complex z) { return 1.0 / (std::numbers::pi * std::pow(1.0 + std::norm(z), 2)); }, config.quad_tol);
            return std::abs(r.value - 1.0);
        });
        for (auto k = 0; k < n; ++k)
        {
            try
            {
                auto const g = global_invariants(seed, k, config.quad_tol);
                table.run("charge_integer", k, [&] { return std::abs(g.charge - std::round(g.charge)); });
                table.run("euler_integer", k, [&] { return std::abs(g.euler - std::round(g.euler)); });
                table.run("gauss_bonnet", k, [&] { return std::abs(g.euler - g.euler_gauss_bonnet); });
            }
            catch (Error const& e)
            {
                auto const msg = error_kind(e) + ": " + e.what();
                for (auto const* name : {"charge_integer", "euler_integer", "gauss_bonnet"}) table.fail(name, k, msg);
            }
        }
    }

    auto report = VerificationReport{seed.label, n, std::move(table).records(), {}};
    report.environment.jet_order = config.jet_order;
    report.environment.lambda_panel = config.lambdas;
    report.environment.points = config.points;
    report.environment.tolerance = tol;
    if (config.integrals) report.environment.quad_tol = config.quad_tol;
    return report;
}

/// load the seed and run the suite; a seed that cannot be read becomes a failed load_seed record
inline auto run_verify(std::string const& seed_path, VerifyConfig const& config) -> VerificationReport
{
    auto seed = SeedVector{};
    try
    {
        seed = load_seed(seed_path);
    }
    catch (Error const& e)
    {
        auto report = VerificationReport{};
        report.checks.push_back({"load_seed", -1, std::numeric_limits<double>::quiet_NaN(), 0.0, false,
                                 error_kind(e) + ": " + e.what()});
        report.environment.jet_order = config.jet_order;
        report.environment.lambda_panel = config.lambdas;
        report.environment.points = config.points;
        report.environment.tolerance = config.tol;
        if (config.integrals) report.environment.quad_tol = config.quad_tol;
        return report;
    }
    return verify_seed(seed, config);
}

namespace detail {

inline auto environment_json(EnvironmentStamp const& env) -> ordered_json
{
    auto lambdas = ordered_json::array();
    for (auto l : env.lambda_panel) lambdas.push_back(complex_json(l));
    auto points = ordered_json::array();
    for (auto p : env.points) points.push_back(complex_json(p));
    auto out = ordered_json{{"tool_version", env.tool_version},
                            {"jet_order", env.jet_order},
                            {"tolerance", env.tolerance},
                            {"lambda_panel", std::move(lambdas)},
                            {"points", std::move(points)}};
    out["quad_tol"] = env.quad_tol ? ordered_json(*env.quad_tol) : ordered_json(nullptr);
    return out;
}

inline auto csv_number(double v) -> std::string
{
    if (!std::isfinite(v)) return "nan";
    return format_decimal(v);
}

} // namespace detail

inline auto to_json(VerificationReport const& r) -> ordered_json
{
    auto checks = ordered_json::array();
    for (auto const& c : r.checks)
    {
        auto j = ordered_json{{"check", c.name}};
        j["rung"] = c.rung < 0 ? ordered_json(nullptr) : ordered_json(c.rung);
        j["max_residual"] = c.max_residual;
        j["tolerance"] = c.tolerance;
        j["pass"] = c.pass;
        if (!c.error.empty()) j["error"] = c.error;
        checks.push_back(std::move(j));
    }
    return {{"seed", {{"label", r.seed_label}, {"n", r.dim}}},
            {"environment", detail::environment_json(r.environment)},
            {"checks", std::move(checks)},
            {"summary", {{"total", r.checks.size()}, {"failed", r.failures()}, {"pass", r.passed()}}}};
}

inline void write_csv(VerificationReport const& r, std::ostream& out)
{
    out << "check,rung,max_residual,tolerance,pass,error\n";
    for (auto const& c : r.checks)
    {
        auto error = c.error;
        std::replace(error.begin(), error.end(), '"', '\'');
        out << c.name << ',' << (c.rung < 0 ? std::string{} : std::to_string(c.rung)) << ','
            << detail::csv_number(c.max_residual) << ',' << detail::csv_number(c.tolerance) << ','
            << (c.pass ? "true" : "false") << ",\"" << error << "\"\n";
    }
}

// ---------------------------------------------------------------------------------------------------------------------
// geometry report
// ---------------------------------------------------------------------------------------------------------------------

/// equal-area latitude grid on the sphere, pulled back to xi by stereographic projection from the north pole;
/// latitude rows are offset by half a step so no sample lands on a pole
inline auto sphere_grid(int grid) -> std::vector<complex>
{
    auto out = std::vector<complex>{};
    out.reserve(static_cast<std::size_t>(grid * grid));
    for (auto i = 0; i < grid; ++i)
    {
        auto const z = 1.0 - 2.0 * (i + 0.5) / grid;
        auto const rho = std::sqrt(1.0 - z * z);
        for (auto j = 0; j < grid; ++j)
            out.push_back(std::polar(rho / (1.0 - z), 2.0 * std::numbers::pi * j / grid));
    }
    return out;
}

struct GeometryPoint
{
    complex point;
    double g12 = 0.0; // in the xi chart
    double gauss_K = 0.0;
    double H_norm_sq = 0.0;
    double J_abs = 0.0;
};

struct RungGeometry
{
    int rung = 0;
    double K_min = 0.0, K_max = 0.0;
    double Hnorm_min = 0.0, Hnorm_max = 0.0;
    std::vector<GeometryPoint> samples{};
    std::optional<GlobalInvariants> integrals{};
    std::string error{};
};

struct GeometryConfig
{
    std::vector<int> rungs; // empty: every rung
    bool integrals = true;
    double quad_tol = 1e-8;
    int grid = 8;
};

struct GeometryReport
{
    std::string seed_label;
    int dim = 0;
    GeometryConfig config;
    std::vector<RungGeometry> rows;
    std::string error; // seed could not be loaded

    auto ok() const -> bool
    {
        return error.empty() && std::all_of(rows.begin(), rows.end(), [](auto const& r) { return r.error.empty(); });
    }
};

/// local sample in whichever chart contains the point; g12 and J are converted to the xi chart
inline auto geometry_point(SeedVector const& seed, SeedVector const& inverted, int k, complex xi) -> GeometryPoint
{
    auto const chart = ladder_on_sphere(seed, inverted, xi, curvature_jet_order, k);
    auto const c = curvature_at(chart.ladder, k);
    auto const m = metric_at(chart.ladder, k);
    auto const r4 = chart.inverted ? std::pow(std::abs(xi), 4) : 1.0;
    return {xi, c.g12 / r4, c.gauss_K, c.H_norm_sq, std::max(std::abs(m.J), std::abs(m.Jbar)) / r4};
}

inline auto geometry_seed(SeedVector const& raw, GeometryConfig const& config) -> GeometryReport
{
    if (config.grid < 1) throw ConfigError{"grid must be positive"};
    auto const seed = normalize_common_factor(raw);
    auto const inverted = invert_seed(seed);
    auto report = GeometryReport{raw.label, raw.dim, config, {}, {}};
    auto rungs = config.rungs;
    if (rungs.empty())
        for (auto k = 0; k < seed.dim; ++k) rungs.push_back(k);
    auto const points = sphere_grid(config.grid);

    for (auto const k : rungs)
    {
        auto row = RungGeometry{k};
        try
        {
            if (k < 0 || k >= seed.dim) throw RungError{"rung " + std::to_string(k) + " outside the ladder"};
            row.K_min = row.Hnorm_min = std::numeric_limits<double>::infinity();
            row.K_max = row.Hnorm_max = -std::numeric_limits<double>::infinity();
            for (auto const xi : points)
            {
                auto const s = geometry_point(seed, inverted, k, xi);
                row.K_min = std::min(row.K_min, s.gauss_K);
                row.K_max = std::max(row.K_max, s.gauss_K);
                row.Hnorm_min = std::min(row.Hnorm_min, s.H_norm_sq);
                row.Hnorm_max = std::max(row.Hnorm_max, s.H_norm_sq);
                row.samples.push_back(s);
            }
            if (config.integrals) row.integrals = global_invariants(seed, k, config.quad_tol);
        }
        catch (Error const& e)
        {
            row.error = error_kind(e) + ": " + e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline auto run_geometry(std::string const& seed_path, GeometryConfig const& config) -> GeometryReport
{
    auto seed = SeedVector{};
    try
    {
        seed = load_seed(seed_path);
    }
    catch (Error const& e)
    {
        auto report = GeometryReport{};
        report.config = config;
        report.error = error_kind(e) + ": " + e.what();
        return report;
    }
    return geometry_seed(seed, config);
}

namespace detail {

inline auto quad_error(GlobalInvariants const& g) -> double
{
    return std::max({g.willmore_error, g.charge_error, g.euler_error, g.euler_gauss_bonnet_error});
}

} // namespace detail

inline auto to_json(GeometryReport const& r) -> ordered_json
{
    auto rows = ordered_json::array();
    for (auto const& row : r.rows)
    {
        auto j = ordered_json{{"k", row.rung}};
        if (!row.samples.empty())
        {
            j["K_min"] = row.K_min;
            j["K_max"] = row.K_max;
            j["Hnorm_min"] = row.Hnorm_min;
            j["Hnorm_max"] = row.Hnorm_max;
        }
        if (row.integrals)
        {
            auto const& g = *row.integrals;
            j["W"] = g.willmore;
            j["Q"] = g.charge;
            j["Delta"] = g.euler;
            j["Delta_gauss_bonnet"] = g.euler_gauss_bonnet;
            j["quad_err"] = {{"W", g.willmore_error},
                             {"Q", g.charge_error},
                             {"Delta", g.euler_error},
                             {"Delta_gauss_bonnet", g.euler_gauss_bonnet_error}};
            j["cells"] = g.cells;
        }
        if (!row.error.empty()) j["error"] = row.error;
        auto samples = ordered_json::array();
        for (auto const& s : row.samples)
            samples.push_back({{"point", complex_json(s.point)},
                               {"g12", s.g12},
                               {"K", s.gauss_K},
                               {"H_norm_sq", s.H_norm_sq},
                               {"J_abs", s.J_abs}});
        j["samples"] = std::move(samples);
        rows.push_back(std::move(j));
    }
    auto out = ordered_json{{"seed", {{"label", r.seed_label}, {"n", r.dim}}},
                            {"environment",
                             {{"tool_version", tool_version},
                              {"jet_order", curvature_jet_order},
                              {"grid", r.config.grid},
                              {"quad_tol", r.config.integrals ? ordered_json(r.config.quad_tol) : ordered_json(nullptr)}}},
                            {"rungs", std::move(rows)}};
    if (!r.error.empty()) out["error"] = r.error;
    out["pass"] = r.ok();
    return out;
}

inline void write_csv(GeometryReport const& r, std::ostream& out)
{
    out << "k,K_min,K_max,Hnorm_min,Hnorm_max,W,Q,Delta,quad_err\n";
    for (auto const& row : r.rows)
    {
        auto const num = [](double v) { return detail::csv_number(v); };
        out << row.rung << ',';
        if (row.samples.empty())
            out << ",,,,";
        else
            out << num(row.K_min) << ',' << num(row.K_max) << ',' << num(row.Hnorm_min) << ',' << num(row.Hnorm_max) << ',';
        if (row.integrals)
            out << num(row.integrals->willmore) << ',' << num(row.integrals->charge) << ',' << num(row.integrals->euler)
                << ',' << num(detail::quad_error(*row.integrals)) << '\n';
        else
            out << ",,,\n";
    }
}

// ---------------------------------------------------------------------------------------------------------------------
// ladder listing
// ---------------------------------------------------------------------------------------------------------------------

inline auto ladder_json(SeedVector const& seed, complex point, std::vector<int> const& rungs,
                        int order = default_jet_order) -> ordered_json
{
    auto const ladder = build_ladder(seed, point, order);
    auto out = ordered_json{{"seed", {{"label", seed.label}, {"n", seed.dim}}}, {"point", complex_json(point)}};
    auto list = ordered_json::array();
    for (auto const k : rungs)
    {
        auto const& P = ladder[static_cast<std::size_t>(k)];
        auto const d = projector_defects(P);
        auto const m = metric_at(ladder, k);
        list.push_back({{"k", k},
                        {"projector", matrix_json(P.matrix.value())},
                        {"surface", matrix_json(x_k_gy(ladder, k).value())},
                        {"g12", m.g12},
                        {"defects", {{"idempotency", d.idempotency}, {"hermiticity", d.hermiticity}, {"trace", d.trace}}}});
    }
    out["rungs"] = std::move(list);
    return out;
}

inline void write_ladder_csv(SeedVector const& seed, complex point, std::vector<int> const& rungs, std::ostream& out)
{
    auto const ladder = build_ladder(seed, point, 1);
    out << "k,i,j,P_re,P_im,X_re,X_im\n";
    for (auto const k : rungs)
    {
        auto const p = ladder[static_cast<std::size_t>(k)].matrix.value();
        auto const x = x_k_gy(ladder, k).value();
        for (Eigen::Index i = 0; i < p.rows(); ++i)
            for (Eigen::Index j = 0; j < p.cols(); ++j)
                out << k << ',' << i << ',' << j << ',' << detail::csv_number(p(i, j).real()) << ','
                    << detail::csv_number(p(i, j).imag()) << ',' << detail::csv_number(x(i, j).real()) << ','
                    << detail::csv_number(x(i, j).imag()) << '\n';
    }
}

// ---------------------------------------------------------------------------------------------------------------------
// mesh export
// ---------------------------------------------------------------------------------------------------------------------

struct MeshFile
{
    int grid = 0;
    int rung = 0;
    std::array<int, 3> projection{};
    std::vector<std::array<double, 3>> vertices{};
    std::vector<std::array<int, 4>> faces{};
    std::vector<double> K{};
    std::vector<double> Hsq{};
    std::vector<double> g12{};
};

inline auto build_mesh(SeedVector const& raw, int k, std::array<int, 3> projection, int grid) -> MeshFile
{
    auto const n = raw.dim;
    if (grid < 8) throw ConfigError{"mesh grid must be at least 8"};
    if (k < 0 || k >= n) throw ConfigError{"rung " + std::to_string(k) + " outside 0.." + std::to_string(n - 1)};
    auto const coords = n * n - 1;
    for (auto const p : projection)
        if (p < 0 || p >= coords)
            throw ConfigError{"projection index " + std::to_string(p) + " outside 0.." + std::to_string(coords - 1)};

    auto const seed = normalize_common_factor(raw);
    auto const inverted = invert_seed(seed);
    auto const basis = gell_mann_basis(n);
    auto mesh = MeshFile{grid, k, projection};
    for (auto const xi : sphere_grid(grid))
    {
        auto const chart = ladder_on_sphere(seed, inverted, xi, curvature_jet_order, k);
        auto const c = embed_coordinates(x_k_gy(chart.ladder, k), basis);
        mesh.vertices.push_back({c[static_cast<std::size_t>(projection[0])], c[static_cast<std::size_t>(projection[1])],
                                 c[static_cast<std::size_t>(projection[2])]});
        auto const s = geometry_point(seed, inverted, k, xi);
        mesh.K.push_back(s.gauss_K);
        mesh.Hsq.push_back(s.H_norm_sq);
        mesh.g12.push_back(s.g12);
    }
    for (auto i = 0; i + 1 < grid; ++i)
        for (auto j = 0; j + 1 < grid; ++j)
        {
            auto const v = i * grid + j;
            mesh.faces.push_back({v, v + 1, v + grid + 1, v + grid});
        }
    return mesh;
}

/// ASCII PLY
inline void write_mesh(MeshFile const& mesh, std::ostream& out)
{
    out << "ply\nformat ascii 1.0\n";
    out << "comment surface X_" << mesh.rung << " projected on coordinates " << mesh.projection[0] << ' '
        << mesh.projection[1] << ' ' << mesh.projection[2] << '\n';
    out << "element vertex " << mesh.vertices.size() << '\n';
    for (auto const* name : {"x", "y", "z", "K", "Hsq", "g12"}) out << "property double " << name << '\n';
    out << "element face " << mesh.faces.size() << '\n';
    out << "property list uchar int vertex_indices\nend_header\n";
    auto const num = [](double v) { return detail::csv_number(v); };
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    {
        auto const& v = mesh.vertices[i];
        out << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << ' ' << num(mesh.K[i]) << ' ' << num(mesh.Hsq[i])
            << ' ' << num(mesh.g12[i]) << '\n';
    }
    for (auto const& f : mesh.faces) out << "4 " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
}

inline auto export_mesh(std::string const& seed_path, int k, std::array<int, 3> projection, int grid,
                        std::string const& out_path) -> MeshFile
{
    auto const mesh = build_mesh(load_seed(seed_path), k, projection, grid);
    auto out = std::ofstream{out_path};
    if (!out) throw ConfigError{"cannot write mesh file '" + out_path + "'"};
    write_mesh(mesh, out);
    return mesh;
}

} // namespace cpn
