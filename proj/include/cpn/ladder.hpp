#pragma once

/**
    \file
    \brief rank-1 projector ladder P_0 .. P_{N-1}

    Two constructions are provided. build_ladder runs the Gram-Schmidt recursion f_{k+1} = (I - P_k) d f_k on the
    homogeneous field and projects each rung. pi_plus / pi_minus act on projectors directly,

        Pi_+(P) = dP P dbarP / tr(dP P dbarP),     Pi_-(P) = dbarP P dP / tr(dbarP P dP),

    and never touch the unnormalized field, so they are invariant under f -> phi(xi) f. Each step of either
    construction consumes one jet order.
*/

#include "errors.hpp"
#include "matrix_jet.hpp"
#include "seeds.hpp"

#include <array>
#include <string>
#include <vector>

namespace cpn {

struct Projector
{
    MatrixJet matrix;
    int rung = 0;

    auto dim() const noexcept -> int { return matrix.dim(); }
    auto order() const noexcept -> int { return matrix.order(); }
    auto base() const noexcept -> complex { return matrix.base(); }
};

using Ladder = std::vector<Projector>;

/// relative threshold separating the 0/0 ladder end from a small but valid Pi_+- denominator
inline constexpr double ladder_end_tolerance = 1e-12;

/// relative threshold below which a Gram-Schmidt step is treated as a collapsed ladder
inline constexpr double ladder_collapse_tolerance = 1e-12;

// ---------------------------------------------------------------------------------------------------------------------
// vectors and projectors
// ---------------------------------------------------------------------------------------------------------------------

/// P = f (x) f^dagger / (f^dagger f)
inline auto projector_from_vector(JetVector const& f, int rung = 0) -> Projector
{
    auto const norm = inner(f, f);
    if (!(norm.value().real() > 0.0))
        throw ZeroVectorError{"field vector vanishes at the base point; renormalize the seed"};
    return {outer(f, f) * jet_reciprocal(norm), rung};
}

namespace detail {

inline auto complement_apply(JetVector const& f, JetVector const& df) -> JetVector
{
    auto const p = projector_from_vector(f).matrix.truncated(df.front().order());
    auto const pdf = p * df;
    auto out = df;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= pdf[i];
    return out;
}

} // namespace detail

/// creation step (I - P) d f
inline auto p_plus(JetVector const& f) -> JetVector
{
    return detail::complement_apply(f, derive(f, Derivative::holomorphic));
}

/// annihilation step (I - P) dbar f
inline auto p_minus(JetVector const& f) -> JetVector
{
    return detail::complement_apply(f, derive(f, Derivative::antiholomorphic));
}

/// Gram-Schmidt ladder of the seed at one base point; every projector is returned at the requested order.
/// A non-negative last_rung stops the construction early.
inline auto build_ladder(SeedVector const& seed, complex base, int order = default_jet_order, int last_rung = -1)
    -> Ladder
{
    validate_seed(seed);
    auto const n = seed.dim;
    auto const top = (last_rung < 0 || last_rung >= n) ? n - 1 : last_rung;
    auto f = evaluate_seed(seed, base, order + top);
    auto ladder = Ladder{};
    ladder.reserve(static_cast<std::size_t>(top + 1));
    ladder.push_back(projector_from_vector(f, 0));
    for (auto k = 1; k <= top; ++k)
    {
        auto const df = derive(f, Derivative::holomorphic);
        auto next = detail::complement_apply(f, df);
        auto const scale = std::sqrt(inner(df, df).value().real());
        auto const size = std::sqrt(inner(next, next).value().real());
        if (!(size > ladder_collapse_tolerance * scale))
            throw DegenerateSeedError{"ladder collapses at rung " + std::to_string(k) +
                                          "; the seed spans fewer than N dimensions here",
                                      k};
        ladder.push_back(projector_from_vector(next, k));
        f = std::move(next);
    }
    for (auto& p : ladder) p.matrix = p.matrix.truncated(order);
    return ladder;
}

// ---------------------------------------------------------------------------------------------------------------------
// invariant recurrences
// ---------------------------------------------------------------------------------------------------------------------

enum class LadderDirection
{
    up,   // Pi_+
    down, // Pi_-
};

namespace detail {

struct PiTerms
{
    MatrixJet first;  // lead derivative
    MatrixJet second; // trailing derivative
    MatrixJet p;      // P truncated to the derivative order
    Jet denominator;
};

inline auto pi_terms(Projector const& P, LadderDirection dir) -> PiTerms
{
    if (P.order() < 1) throw JetOrderError{"Pi operators need a projector jet of order >= 1"};
    auto const d = matrix_derive(P.matrix, Derivative::holomorphic);
    auto const dbar = matrix_derive(P.matrix, Derivative::antiholomorphic);
    auto const p = P.matrix.truncated(P.order() - 1);
    auto const& first = dir == LadderDirection::up ? d : dbar;
    auto const& second = dir == LadderDirection::up ? dbar : d;
    auto denominator = matrix_trace(first * p * second);
    auto const scale = std::abs(matrix_trace(d * dbar).value());
    if (std::abs(denominator.value()) <= ladder_end_tolerance * scale)
        throw LadderEndError{std::string{"Pi_"} + (dir == LadderDirection::up ? "+" : "-") +
                             " reached the end of the ladder (0/0 denominator)"};
    return {first, second, p, std::move(denominator)};
}

inline auto target_rung(Projector const& P, LadderDirection dir) -> int
{
    return dir == LadderDirection::up ? P.rung + 1 : P.rung - 1;
}

} // namespace detail

inline auto pi_step(Projector const& P, LadderDirection dir) -> Projector
{
    auto const t = detail::pi_terms(P, dir);
    return {t.first * t.p * t.second * jet_reciprocal(t.denominator), detail::target_rung(P, dir)};
}

inline auto pi_plus(Projector const& P) -> Projector { return pi_step(P, LadderDirection::up); }
inline auto pi_minus(Projector const& P) -> Projector { return pi_step(P, LadderDirection::down); }

/// the three algebraically equal forms  A P B,  (I - P) A B,  A B (I - P)  over the common trace
inline auto pi_forms(Projector const& P, LadderDirection dir) -> std::array<MatrixJet, 3>
{
    auto const t = detail::pi_terms(P, dir);
    auto const inv = jet_reciprocal(t.denominator);
    auto const complement = MatrixJet::identity(P.dim(), P.base(), t.p.order()) - t.p;
    return {t.first * t.p * t.second * inv, complement * t.first * t.second * inv,
            t.first * t.second * complement * inv};
}

/// largest coefficient difference between the three forms of Pi_+-
inline auto pi_form_deviation(Projector const& P, LadderDirection dir) -> double
{
    auto const forms = pi_forms(P, dir);
    return std::max({(forms[0] - forms[1]).max_abs(), (forms[0] - forms[2]).max_abs(), (forms[1] - forms[2]).max_abs()});
}

// ---------------------------------------------------------------------------------------------------------------------
// extraction and residuals
// ---------------------------------------------------------------------------------------------------------------------

/// index of the largest diagonal entry at the base point
inline auto pivot_index(MatrixJet const& P) -> int
{
    auto best = 0;
    for (auto i = 1; i < P.dim(); ++i)
        if (std::abs(P(i, i).value()) > std::abs(P(best, best).value())) best = i;
    return best;
}

/// column of P through the largest diagonal entry; projector_from_vector of it gives P back
inline auto extract_vector(Projector const& P) -> JetVector
{
    auto const c = pivot_index(P.matrix);
    if (std::abs(P.matrix(c, c).value()) < 1e-12) throw InvalidProjectorError{"projector has no usable diagonal entry"};
    auto f = JetVector{};
    f.reserve(static_cast<std::size_t>(P.dim()));
    for (auto i = 0; i < P.dim(); ++i) f.push_back(P.matrix(i, c));
    return f;
}

/// d[dbarP, P] + dbar[dP, P]; vanishes for solutions of the Euler-Lagrange equations
inline auto el_residual(Projector const& P) -> MatrixJet
{
    if (P.order() < 2) throw JetOrderError{"Euler-Lagrange residual needs a projector jet of order >= 2"};
    auto const p = P.matrix.truncated(P.order() - 1);
    auto const d = matrix_derive(P.matrix, Derivative::holomorphic);
    auto const dbar = matrix_derive(P.matrix, Derivative::antiholomorphic);
    return matrix_derive(commutator(dbar, p), Derivative::holomorphic) +
           matrix_derive(commutator(d, p), Derivative::antiholomorphic);
}

struct ProjectorDefects
{
    double idempotency = 0.0; // max |P P - P| over all coefficients
    double hermiticity = 0.0; // max |P^dagger - P|
    double trace = 0.0;       // |tr P - 1| at the base point
};

inline auto projector_defects(Projector const& P) -> ProjectorDefects
{
    auto const& m = P.matrix;
    return {(m * m - m).max_abs(), (matrix_adjoint(m) - m).max_abs(), std::abs(matrix_trace(m).value() - 1.0)};
}

} // namespace cpn
