#pragma once

/**
    \file
    \brief metric, curvature and global invariants of the surfaces X_k

    All local quantities come from the jets of the GY surface at one base point. In conformal gauge the only
    metric component is g12 = -1/2 tr(dX dbarX); the currents J = -1/2 tr(dX dX) and Jbar vanish for every rung of a
    finite-action ladder. The global integrals are taken over the Riemann sphere with the seed re-expanded in the
    chart eta = 1/xi for |xi| > 1. Every density integrated here is a conformally invariant 2-form, so each chart
    evaluates it in its own coordinate without a Jacobian.
*/

#include "errors.hpp"
#include "ladder.hpp"
#include "quadrature.hpp"
#include "surfaces.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace cpn {

struct MetricSample
{
    complex point;
    int rung = 0;
    double g12 = 0.0;           // -1/2 tr(dX dbarX)
    double g12_projector = 0.0; // same quantity from pivoted entries of P, dP, dbarP
    complex J{};                  // -1/2 tr(dX dX)
    complex Jbar{};               // -1/2 tr(dbarX dbarX)
    complex J_projector{};        // [(dP)^2 P]_pp / P_pp
    complex Jbar_projector{};     // [(dbarP)^2 P]_pp / P_pp
};

struct CurvatureSample
{
    complex point;
    int rung = 0;
    double g12 = 0.0;
    double gauss_K = 0.0;
    Matrix mean_H{};
    double H_norm_sq = 0.0;
    complex christoffel_111{};
    complex christoffel_222{};
    /// coefficients of dxi^2, dxi dxibar and dxibar^2 in the second fundamental form
    std::array<Matrix, 3> second_form{};
};

struct GlobalInvariants
{
    int rung = 0;
    double willmore = 0.0;
    double charge = 0.0;
    double euler = 0.0;
    double euler_gauss_bonnet = 0.0; // (1/pi) int K g12 dA, the curvature route to the same number
    double willmore_error = 0.0;
    double charge_error = 0.0;
    double euler_error = 0.0;
    double euler_gauss_bonnet_error = 0.0;
    int cells = 0;
};

inline constexpr double integer_snap_tolerance = 1e-4;
inline constexpr double degenerate_metric_tolerance = 1e-12;

// ---------------------------------------------------------------------------------------------------------------------
// local data
// ---------------------------------------------------------------------------------------------------------------------

inline auto metric_at(Ladder const& ladder, int k) -> MetricSample
{
    auto const X = x_k_gy(ladder, k);
    if (X.matrix.order() < 1) throw JetOrderError{"metric needs a ladder of order >= 1"};
    auto const dx = matrix_derive(X.matrix, Derivative::holomorphic).value();
    auto const dbarx = matrix_derive(X.matrix, Derivative::antiholomorphic).value();

    auto const& P = ladder[static_cast<std::size_t>(k)].matrix;
    auto const p = pivot_index(P);
    auto const ppp = P(p, p).value();
    if (std::abs(ppp) < 1e-12) throw InvalidProjectorError{"projector has no usable diagonal entry"};
    auto const p0 = P.value();
    auto const dp = matrix_derive(P, Derivative::holomorphic).value();
    auto const dbarp = matrix_derive(P, Derivative::antiholomorphic).value();

    auto sample = MetricSample{P.base(), k};
    sample.g12 = -0.5 * (dx * dbarx).trace().real();
    sample.g12_projector = 0.5 * ((dbarp * dp * p0)(p, p) + (dp * dbarp * p0)(p, p)).real() / ppp.real();
    sample.J = -0.5 * (dx * dx).trace();
    sample.Jbar = -0.5 * (dbarx * dbarx).trace();
    sample.J_projector = (dp * dp * p0)(p, p) / ppp;
    sample.Jbar_projector = (dbarp * dbarp * p0)(p, p) / ppp;
    return sample;
}

namespace detail {

struct LocalGeometry
{
    MatrixJet surface;
    Jet g12;  // order of the surface minus one
    Jet log_g12;
};

inline auto local_geometry(Ladder const& ladder, int k) -> LocalGeometry
{
    auto X = x_k_gy(ladder, k).matrix;
    if (X.order() < 3) throw JetOrderError{"curvature needs a ladder of order >= 3"};
    auto const dx = matrix_derive(X, Derivative::holomorphic);
    auto const dbarx = matrix_derive(X, Derivative::antiholomorphic);
    auto g = matrix_trace(dx * dbarx) * complex{-0.5};
    if (g.value().real() < degenerate_metric_tolerance)
        throw DegenerateMetricError{"induced metric degenerates at this point (g12 = " +
                                    std::to_string(g.value().real()) + ")"};
    auto lg = jet_log(g);
    return {std::move(X), std::move(g), std::move(lg)};
}

} // namespace detail

inline auto curvature_at(Ladder const& ladder, int k) -> CurvatureSample
{
    auto const geo = detail::local_geometry(ladder, k);
    auto const g = geo.g12.value().real();
    auto const& X = geo.surface;

    auto sample = CurvatureSample{X.base(), k, g};
    sample.gauss_K = -geo.log_g12(1, 1).real() / g;
    auto const mixed = X.coefficient(1, 1); // d dbar X
    sample.mean_H = mixed * (2.0 / g);
    sample.H_norm_sq = su_product(sample.mean_H, sample.mean_H);
    sample.christoffel_111 = geo.log_g12(1, 0);
    sample.christoffel_222 = geo.log_g12(0, 1);
    sample.second_form = {2.0 * X.coefficient(2, 0) - sample.christoffel_111 * X.coefficient(1, 0), 2.0 * mixed,
                          2.0 * X.coefficient(0, 2) - sample.christoffel_222 * X.coefficient(0, 1)};
    return sample;
}

inline auto metric_at(SeedVector const& seed, int k, complex point, int order = default_jet_order) -> MetricSample
{
    return metric_at(build_ladder(seed, point, order), k);
}

inline auto curvature_at(SeedVector const& seed, int k, complex point, int order = default_jet_order)
    -> CurvatureSample
{
    return curvature_at(build_ladder(seed, point, order), k);
}

// ---------------------------------------------------------------------------------------------------------------------
// densities of the global integrals, per unit coordinate area dxi^1 dxi^2
// ---------------------------------------------------------------------------------------------------------------------

struct InvariantDensities
{
    double willmore = 0.0;      // 1/4 ||H||^2 g12
    double charge = 0.0;        // -1/pi tr(P [dP, dbarP])
    double euler = 0.0;         // -1/pi d dbar ln g12
    double gauss_bonnet = 0.0;  // 1/pi K g12
};

inline auto invariant_densities(Ladder const& ladder, int k) -> InvariantDensities
{
    auto const geo = detail::local_geometry(ladder, k);
    auto const g = geo.g12.value().real();
    auto const mixed = geo.surface.coefficient(1, 1);
    auto const hsq = su_product(mixed, mixed) * 4.0 / (g * g);
    auto const laplace_log = geo.log_g12(1, 1).real();
    auto const gauss_k = -laplace_log / g;

    auto const& P = ladder[static_cast<std::size_t>(k)].matrix;
    auto const p0 = P.value();
    auto const dp = matrix_derive(P, Derivative::holomorphic).value();
    auto const dbarp = matrix_derive(P, Derivative::antiholomorphic).value();
    auto const charge = (p0 * (dp * dbarp - dbarp * dp)).trace().real();

    constexpr auto pi = std::numbers::pi;
    return {0.25 * hsq * g, -charge / pi, -laplace_log / pi, gauss_k * g / pi};
}

// ---------------------------------------------------------------------------------------------------------------------
// global invariants
// ---------------------------------------------------------------------------------------------------------------------

/// order needed for every curvature quantity of a rung
inline constexpr int curvature_jet_order = 3;

/// ladder of the seed at a point of the sphere, evaluated in whichever chart contains it
struct ChartLadder
{
    Ladder ladder;
    bool inverted = false; // true when built in eta = 1/xi
};

inline auto ladder_on_sphere(SeedVector const& seed, SeedVector const& inverted, complex xi, int order, int last_rung)
    -> ChartLadder
{
    if (std::abs(xi) <= 1.0) return {build_ladder(seed, xi, order, last_rung), false};
    return {build_ladder(inverted, 1.0 / xi, order, last_rung), true};
}

inline auto global_invariants(SeedVector const& seed, int k, double tol, int max_cells = default_max_cells)
    -> GlobalInvariants
{
    auto const s = normalize_common_factor(seed);
    if (k < 0 || k >= s.dim) throw RungError{"rung " + std::to_string(k) + " outside 0.." + std::to_string(s.dim - 1)};
    auto const inv = invert_seed(s);
    auto const density = [k](SeedVector const& chart_seed) {
        return [k, &chart_seed](complex z) {
            auto const d = invariant_densities(build_ladder(chart_seed, z, curvature_jet_order, k), k);
            return std::array<double, 4>{d.willmore, d.charge, d.euler, d.gauss_bonnet};
        };
    };
    auto const r = integrate_sphere_charts<4>(density(s), density(inv), tol, max_cells);

    auto out = GlobalInvariants{k};
    out.willmore = r.value[0];
    out.charge = r.value[1];
    out.euler = r.value[2];
    out.euler_gauss_bonnet = r.value[3];
    out.willmore_error = r.error_estimate[0];
    out.charge_error = r.error_estimate[1];
    out.euler_error = r.error_estimate[2];
    out.euler_gauss_bonnet_error = r.error_estimate[3];
    out.cells = r.cells;

    auto const snap = [](double v, char const* name) {
        if (std::abs(v - std::round(v)) > integer_snap_tolerance)
            throw QuadratureError{std::string{name} + " = " + std::to_string(v) + " is not an integer", v,
                                  std::abs(v - std::round(v))};
    };
    snap(out.charge, "topological charge");
    snap(out.euler, "Euler characteristic");
    return out;
}

} // namespace cpn
