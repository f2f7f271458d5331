#pragma once

/**
    \file
    \brief wave functions of the linear spectral problem and their recurrences

    For the ladder P_0 .. P_{N-1} the spectral problem

        d Phi_k    = 2/(1+lambda) [dP_k, P_k] Phi_k
        dbar Phi_k = 2/(1-lambda) [dbarP_k, P_k] Phi_k

    has the closed-form solution

        Phi_k = I + 4 lambda/(1-lambda)^2 sum_{j<k} P_j - 2/(1-lambda) P_k,

    whose inverse is Phi_k evaluated at -lambda. The recurrences Lambda_+- act on the auxiliary function
    Psi_k = (1-lambda)^2 (I - Phi_k), which is polynomial in lambda.

    The lambda dependence is always kept in closed form; only the (xi, xibar) dependence is carried by jets.
*/

#include "errors.hpp"
#include "ladder.hpp"

#include <string>
#include <utility>

namespace cpn {

enum class WaveKind
{
    phi,
    phi_inverse,
    psi,
};

struct WaveSample
{
    MatrixJet matrix;
    complex lambda;
    int rung = 0;
    WaveKind kind = WaveKind::phi;

    /// value at the base point
    auto value() const -> Matrix { return matrix.value(); }
};

namespace detail {

inline void check_rung(Ladder const& ladder, int k)
{
    if (k < 0 || k >= static_cast<int>(ladder.size()))
        throw RungError{"rung " + std::to_string(k) + " outside 0.." + std::to_string(ladder.size() - 1)};
}

/// sum_{j<k} P_j
inline auto lower_sum(Ladder const& ladder, int k) -> MatrixJet
{
    auto const& p = ladder.front().matrix;
    auto sum = MatrixJet{p.dim(), p.base(), p.order()};
    for (auto j = 0; j < k; ++j) sum += ladder[static_cast<std::size_t>(j)].matrix;
    return sum;
}

/// I + a sum_{j<k} P_j + b P_k
inline auto ladder_combination(Ladder const& ladder, int k, complex identity, complex a, complex b) -> MatrixJet
{
    auto const& pk = ladder[static_cast<std::size_t>(k)].matrix;
    auto out = MatrixJet::identity(pk.dim(), pk.base(), pk.order()) * identity;
    out += lower_sum(ladder, k) * a;
    out += pk * b;
    return out;
}

inline auto lambda_text(complex lambda) -> std::string
{
    return "(" + std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ")";
}

} // namespace detail

inline auto phi_k(Ladder const& ladder, int k, complex lambda) -> WaveSample
{
    detail::check_rung(ladder, k);
    if (lambda == 1.0) throw SpectralPoleError{"Phi_k has a pole at lambda = 1"};
    auto const m = 1.0 - lambda;
    return {detail::ladder_combination(ladder, k, 1.0, 4.0 * lambda / (m * m), -2.0 / m), lambda, k, WaveKind::phi};
}

inline auto phi_k_inverse(Ladder const& ladder, int k, complex lambda) -> WaveSample
{
    detail::check_rung(ladder, k);
    if (lambda == -1.0) throw SpectralPoleError{"Phi_k^{-1} has a pole at lambda = -1"};
    auto const p = 1.0 + lambda;
    return {detail::ladder_combination(ladder, k, 1.0, -4.0 * lambda / (p * p), -2.0 / p), lambda, k,
            WaveKind::phi_inverse};
}

/// d Phi_k / d lambda
inline auto phi_k_lambda_derivative(Ladder const& ladder, int k, complex lambda) -> MatrixJet
{
    detail::check_rung(ladder, k);
    if (lambda == 1.0) throw SpectralPoleError{"d Phi_k / d lambda has a pole at lambda = 1"};
    auto const m = 1.0 - lambda;
    return detail::ladder_combination(ladder, k, 0.0, 4.0 * (1.0 + lambda) / (m * m * m), -2.0 / (m * m));
}

/// Psi_k = (1-lambda)^2 (I - Phi_k) = -4 lambda sum_{j<k} P_j + 2 (1-lambda) P_k, regular for every lambda
inline auto psi_k(Ladder const& ladder, int k, complex lambda) -> WaveSample
{
    detail::check_rung(ladder, k);
    return {detail::ladder_combination(ladder, k, 0.0, -4.0 * lambda, 2.0 * (1.0 - lambda)), lambda, k,
            WaveKind::psi};
}

/// Psi(-lambda) = -(1+lambda)^2 Psi(lambda) [(1-lambda)^2 I - Psi(lambda)]^{-1}
inline auto psi_negate(WaveSample const& psi) -> WaveSample
{
    if (psi.kind != WaveKind::psi) throw Error{"psi_negate expects a Psi sample"};
    auto const lambda = psi.lambda;
    auto const m = 1.0 - lambda;
    auto const p = 1.0 + lambda;
    auto const& Psi = psi.matrix;
    auto const bracket = MatrixJet::identity(Psi.dim(), Psi.base(), Psi.order()) * (m * m) - Psi;
    auto inverse = MatrixJet{};
    try
    {
        inverse = matrix_inverse(bracket, 1e12);
    }
    catch (DivisionByZeroAtBasePoint const&)
    {
        throw SpectralPoleError{"(1-lambda)^2 I - Psi is singular at lambda = " + detail::lambda_text(lambda)};
    }
    return {Psi * inverse * (-(p * p)), -lambda, psi.rung, WaveKind::psi};
}

/// the projector (1/4)[Psi(lambda) + Psi(-lambda)] = P_k hidden in a Psi sample
inline auto psi_projector(WaveSample const& psi) -> Projector
{
    auto const negated = psi_negate(psi);
    auto p = Projector{(psi.matrix + negated.matrix) * 0.25, psi.rung};
    auto const defects = projector_defects(p);
    if (defects.idempotency > 1e-8 || defects.hermiticity > 1e-8 || defects.trace > 1e-8)
        throw InvalidProjectorError{"(Psi(lambda) + Psi(-lambda))/4 is not a rank-1 projector"};
    return p;
}

namespace detail {

inline auto lambda_step(WaveSample const& psi, int dim, LadderDirection dir) -> WaveSample
{
    if (psi.kind != WaveKind::psi) throw Error{"Lambda operators act on Psi samples"};
    if (psi.rung < 0 || psi.rung >= dim) throw RungError{"Psi sample carries rung " + std::to_string(psi.rung)};
    auto const lambda = psi.lambda;
    auto const negated = psi_negate(psi);
    auto const p = psi_projector(psi);
    auto const next = pi_step(p, dir);
    auto const order = next.order();
    // up:   1/2 [(1-l) Psi(l) - (1+l) Psi(-l)] + 2 (1-l) Pi_+(P)
    // down: 1/2 [(1+l) Psi(l) - (1-l) Psi(-l)] + 2 (1+l) Pi_-(P)
    auto const own = dir == LadderDirection::up ? 1.0 - lambda : 1.0 + lambda;
    auto const other = dir == LadderDirection::up ? 1.0 + lambda : 1.0 - lambda;
    auto out = psi.matrix.truncated(order) * (0.5 * own) - negated.matrix.truncated(order) * (0.5 * other);
    out += next.matrix * (2.0 * own);
    return {std::move(out), lambda, next.rung, WaveKind::psi};
}

} // namespace detail

inline auto lambda_plus(WaveSample const& psi) -> WaveSample
{
    return detail::lambda_step(psi, psi.matrix.dim(), LadderDirection::up);
}

inline auto lambda_minus(WaveSample const& psi) -> WaveSample
{
    return detail::lambda_step(psi, psi.matrix.dim(), LadderDirection::down);
}

// ---------------------------------------------------------------------------------------------------------------------
// Lax pair
// ---------------------------------------------------------------------------------------------------------------------

/// the two connection matrices U = 2/(1+l) [dP, P] and V = 2/(1-l) [dbarP, P]
inline auto lax_connection(Projector const& P, complex lambda) -> std::pair<MatrixJet, MatrixJet>
{
    if (lambda == 1.0 || lambda == -1.0) throw SpectralPoleError{"the Lax pair is singular at lambda = +-1"};
    auto const p = P.matrix.truncated(P.order() - 1);
    auto u = commutator(matrix_derive(P.matrix, Derivative::holomorphic), p) * (2.0 / (1.0 + lambda));
    auto v = commutator(matrix_derive(P.matrix, Derivative::antiholomorphic), p) * (2.0 / (1.0 - lambda));
    return {std::move(u), std::move(v)};
}

/// (d Phi - U Phi, dbar Phi - V Phi) for an arbitrary Phi
inline auto lax_residual(MatrixJet const& phi, Projector const& P, complex lambda) -> std::pair<MatrixJet, MatrixJet>
{
    if (phi.order() < 1 || P.order() < 1) throw JetOrderError{"Lax residual needs jets of order >= 1"};
    auto const [u, v] = lax_connection(P, lambda);
    auto const phi0 = phi.truncated(phi.order() - 1);
    return {matrix_derive(phi, Derivative::holomorphic) - u * phi0,
            matrix_derive(phi, Derivative::antiholomorphic) - v * phi0};
}

/// residual of the closed-form Phi_k built from the ladder
inline auto lax_residual(Ladder const& ladder, int k, complex lambda) -> std::pair<MatrixJet, MatrixJet>
{
    if (lambda == 1.0 || lambda == -1.0) throw SpectralPoleError{"the Lax pair is singular at lambda = +-1"};
    return lax_residual(phi_k(ladder, k, lambda).matrix, ladder[static_cast<std::size_t>(k)], lambda);
}

/// dbar U - d V + [U, V]; the integrability condition of the Lax pair
inline auto zero_curvature_residual(Projector const& P, complex lambda) -> MatrixJet
{
    if (P.order() < 2) throw JetOrderError{"zero-curvature residual needs a projector jet of order >= 2"};
    auto const [u, v] = lax_connection(P, lambda);
    auto const order = P.order() - 2;
    return matrix_derive(u, Derivative::antiholomorphic) - matrix_derive(v, Derivative::holomorphic) +
           commutator(u.truncated(order), v.truncated(order));
}

} // namespace cpn
