#pragma once

/**
    \file
    \brief adaptive integration over the Riemann sphere

    The sphere is covered by two unit disks: |xi| <= 1 and the inverted chart eta = 1/xi covering |xi| >= 1. Each
    disk is integrated in polar coordinates with a tensor 15-point Gauss-Kronrod rule whose embedded 7-point
    Gauss-Legendre rule supplies the error estimate. The cell with the largest estimate is bisected in both
    directions until the summed estimate meets the tolerance. Cell order and summation order depend only on the
    integrand values, so results are bit-reproducible.
*/

#include "errors.hpp"
#include "jet.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <numbers>
#include <vector>

namespace cpn {

struct QuadratureResult
{
    double value = 0.0;
    double error_estimate = 0.0;
    int cells = 0;
};

template <std::size_t M>
struct QuadratureVectorResult
{
    std::array<double, M> value{};
    std::array<double, M> error_estimate{};
    int cells = 0;
};

inline constexpr int default_max_cells = 4096;

namespace detail {

struct KronrodRule
{
    std::array<double, 15> nodes{};
    std::array<double, 15> kronrod{};
    std::array<double, 15> gauss{};
};

inline auto kronrod_rule() -> KronrodRule const&
{
    static auto const rule = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        auto const& kx = gauss_kronrod<double, 15>::abscissa();
        auto const& kw = gauss_kronrod<double, 15>::weights();
        auto const& gx = gauss<double, 7>::abscissa();
        auto const& gw = gauss<double, 7>::weights();
        auto r = KronrodRule{};
        auto i = std::size_t{0};
        auto add = [&](double x, std::size_t k) {
            r.nodes[i] = x;
            r.kronrod[i] = kw[k];
            for (std::size_t g = 0; g < gx.size(); ++g)
                if (std::abs(std::abs(x) - gx[g]) < 1e-14) r.gauss[i] = gw[g];
            ++i;
        };
        for (std::size_t k = kx.size(); k-- > 1;) add(-kx[k], k);
        for (std::size_t k = 0; k < kx.size(); ++k) add(kx[k], k);
        return r;
    }();
    return rule;
}

template <std::size_t M>
struct Cell
{
    double r0, r1, t0, t1;
    std::array<double, M> value{};
    std::array<double, M> error{};
    double worst = 0.0;
};

template <std::size_t M, typename F>
auto integrate_cell(F const& f, double r0, double r1, double t0, double t1) -> Cell<M>
{
    auto const& rule = kronrod_rule();
    auto const rh = 0.5 * (r1 - r0);
    auto const rc = 0.5 * (r1 + r0);
    auto const th = 0.5 * (t1 - t0);
    auto const tc = 0.5 * (t1 + t0);
    auto kron = std::array<double, M>{};
    auto gauss = std::array<double, M>{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    {
        auto const r = rc + rh * rule.nodes[i];
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        {
            auto const t = tc + th * rule.nodes[j];
            auto const values = f(std::polar(r, t));
            auto const wk = rule.kronrod[i] * rule.kronrod[j] * r;
            auto const wg = rule.gauss[i] * rule.gauss[j] * r;
            for (std::size_t c = 0; c < M; ++c)
            {
                kron[c] += wk * values[c];
                gauss[c] += wg * values[c];
            }
        }
    }
    auto cell = Cell<M>{r0, r1, t0, t1};
    for (std::size_t c = 0; c < M; ++c)
    {
        cell.value[c] = kron[c] * rh * th;
        cell.error[c] = std::abs(kron[c] - gauss[c]) * rh * th;
        if (!std::isfinite(cell.value[c])) cell.error[c] = std::numeric_limits<double>::infinity();
        cell.worst = std::max(cell.worst, cell.error[c]);
    }
    return cell;
}

template <std::size_t M>
auto totals(std::vector<Cell<M>> const& cells) -> QuadratureVectorResult<M>
{
    auto out = QuadratureVectorResult<M>{};
    for (auto const& cell : cells)
        for (std::size_t c = 0; c < M; ++c)
        {
            out.value[c] += cell.value[c];
            out.error_estimate[c] += cell.error[c];
        }
    out.cells = static_cast<int>(cells.size());
    return out;
}

template <std::size_t M>
auto worst_component(QuadratureVectorResult<M> const& r) -> double
{
    return *std::max_element(r.error_estimate.begin(), r.error_estimate.end());
}

} // namespace detail

/// integral of a vector-valued density over the unit disk, |z| <= 1, against dx dy
template <std::size_t M, typename F>
auto integrate_unit_disk(F const& f, double tol, int max_cells = default_max_cells) -> QuadratureVectorResult<M>
{
    if (!(tol > 0.0)) throw Error{"quadrature tolerance must be positive"};
    constexpr auto two_pi = 2.0 * std::numbers::pi;
    auto cells = std::vector<detail::Cell<M>>{};
    for (auto i = 0; i < 2; ++i)
        for (auto j = 0; j < 4; ++j)
            cells.push_back(detail::integrate_cell<M>(f, 0.5 * i, 0.5 * (i + 1), two_pi * j / 4, two_pi * (j + 1) / 4));

    for (;;)
    {
        auto const result = detail::totals(cells);
        if (detail::worst_component(result) <= tol) return result;
        if (static_cast<int>(cells.size()) + 3 > max_cells)
            throw QuadratureError{"quadrature did not converge within " + std::to_string(max_cells) + " cells",
                                  result.value[0], detail::worst_component(result)};

        auto const it = std::max_element(cells.begin(), cells.end(),
                                          [](auto const& a, auto const& b) { return a.worst < b.worst; });
        auto const c = *it;
        auto const rm = 0.5 * (c.r0 + c.r1);
        auto const tm = 0.5 * (c.t0 + c.t1);
        *it = detail::integrate_cell<M>(f, c.r0, rm, c.t0, tm);
        cells.push_back(detail::integrate_cell<M>(f, c.r0, rm, tm, c.t1));
        cells.push_back(detail::integrate_cell<M>(f, rm, c.r1, c.t0, tm));
        cells.push_back(detail::integrate_cell<M>(f, rm, c.r1, tm, c.t1));
    }
}

/// integral over the sphere given densities already expressed in each chart's own coordinate
template <std::size_t M, typename Inner, typename Outer>
auto integrate_sphere_charts(Inner const& inner, Outer const& outer, double tol, int max_cells = default_max_cells)
    -> QuadratureVectorResult<M>
{
    auto const a = integrate_unit_disk<M>(inner, 0.5 * tol, max_cells);
    auto const b = integrate_unit_disk<M>(outer, 0.5 * tol, max_cells);
    auto out = QuadratureVectorResult<M>{};
    for (std::size_t c = 0; c < M; ++c)
    {
        out.value[c] = a.value[c] + b.value[c];
        out.error_estimate[c] = a.error_estimate[c] + b.error_estimate[c];
    }
    out.cells = a.cells + b.cells;
    return out;
}

/// integral of a density in the xi plane over the whole sphere; the outer chart uses the pullback |eta|^-4
inline auto sphere_integral(std::function<double(complex)> const& density, double tol,
                            int max_cells = default_max_cells) -> QuadratureResult
{
    auto const inner = [&](complex xi) { return std::array<double, 1>{density(xi)}; };
    auto const outer = [&](complex eta) {
        auto const r2 = std::norm(eta);
        return std::array<double, 1>{density(1.0 / eta) / (r2 * r2)};
    };
    auto const r = integrate_sphere_charts<1>(inner, outer, tol, max_cells);
    return {r.value[0], r.error_estimate[0], r.cells};
}

} // namespace cpn
