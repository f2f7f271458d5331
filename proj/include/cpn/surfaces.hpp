#pragma once

/**
    \file
    \brief soliton surfaces X_k in su(N)

    X_k is obtained three ways, all of which must agree:

      - from the projectors,     X_k = -i (P_k + 2 sum_{j<k} P_j) + i (2k+1)/N I
      - from the wave function,  X_k = -(i / alpha) Phi_k^{-1} d_lambda Phi_k + i (2k+1)/N I,  alpha = 2/(1-lambda^2)
      - from the asymptote,      X_k = i (2k+1)/N I + (i/2) lim_{lambda -> inf} lambda (I - Phi_k)

    The surface determines its projector again through a quadratic (projector_from_surface) or, given all lower
    surfaces, through a linear chain (projector_from_surface_chain).
*/

#include "errors.hpp"
#include "ladder.hpp"
#include "spectral.hpp"

#include <string>
#include <vector>

namespace cpn {

struct Surface
{
    MatrixJet matrix;
    int rung = 0;
    int dim = 0;

    /// k = N-1 lies outside the range for which the immersion is usually stated
    auto top_rung() const noexcept -> bool { return rung == dim - 1; }
    auto value() const -> Matrix { return matrix.value(); }
};

namespace detail {

inline auto trace_shift(int k, int n) -> double { return (2.0 * k + 1.0) / n; }

inline auto with_shift(MatrixJet m, int k) -> MatrixJet
{
    auto const shift = complex{0.0, trace_shift(k, m.dim())};
    for (auto i = 0; i < m.dim(); ++i) m(i, i)(0, 0) += shift;
    return m;
}

} // namespace detail

inline auto x_k_gy(Ladder const& ladder, int k) -> Surface
{
    detail::check_rung(ladder, k);
    auto const n = ladder.front().dim();
    auto m = detail::ladder_combination(ladder, k, 0.0, complex{0.0, -2.0}, complex{0.0, -1.0});
    return {detail::with_shift(std::move(m), k), k, n};
}

/// Sym-Tafel route; independent of lambda
inline auto x_k_sym_tafel(Ladder const& ladder, int k, complex lambda) -> Surface
{
    if (lambda == 1.0 || lambda == -1.0) throw SpectralPoleError{"the Sym-Tafel formula is singular at lambda = +-1"};
    auto const alpha = 2.0 / (1.0 - lambda * lambda);
    auto const inv = phi_k_inverse(ladder, k, lambda).matrix;
    auto const dphi = phi_k_lambda_derivative(ladder, k, lambda);
    auto m = inv * dphi * (complex{0.0, -1.0} / alpha);
    return {detail::with_shift(std::move(m), k), k, ladder.front().dim()};
}

/// lim_{lambda -> inf} lambda (I - Phi_k)
inline auto phi_asymptote(Ladder const& ladder, int k) -> MatrixJet
{
    detail::check_rung(ladder, k);
    // lambda (I - Phi_k) = -4 lambda^2/(1-lambda)^2 sum_{j<k} P_j + 2 lambda/(1-lambda) P_k
    //   lambda^2/(1-lambda)^2 -> 1,  lambda/(1-lambda) -> -1
    return detail::ladder_combination(ladder, k, 0.0, -4.0, -2.0);
}

inline auto x_k_limit(Ladder const& ladder, int k) -> Surface
{
    auto m = phi_asymptote(ladder, k) * complex{0.0, 0.5};
    return {detail::with_shift(std::move(m), k), k, ladder.front().dim()};
}

struct SurfaceDefects
{
    double anti_hermiticity = 0.0; // max |X^dagger + X|
    double trace = 0.0;            // |tr X| at the base point
    double square_trace = 0.0;     // |tr X^2 + (4k+1) - (2k+1)^2/N| at the base point
};

/// tr X_k^2 = (2k+1)^2/N - (4k+1)
inline auto expected_square_trace(int k, int n) -> double
{
    return (2.0 * k + 1.0) * (2.0 * k + 1.0) / n - (4.0 * k + 1.0);
}

inline auto surface_defects(Surface const& X) -> SurfaceDefects
{
    auto const& m = X.matrix;
    auto const x0 = m.value();
    return {(matrix_adjoint(m) + m).max_abs(), std::abs(x0.trace()),
            std::abs((x0 * x0).trace() - expected_square_trace(X.rung, X.dim))};
}

/// P_k = X^2 - 2i(c-1) X - c(c-2) I with c = (2k+1)/N
inline auto projector_from_surface(Surface const& X) -> Projector
{
    auto const c = detail::trace_shift(X.rung, X.dim);
    auto const& m = X.matrix;
    auto p = m * m - m * complex{0.0, 2.0 * (c - 1.0)};
    for (auto i = 0; i < X.dim; ++i) p(i, i)(0, 0) -= c * (c - 2.0);
    auto out = Projector{std::move(p), X.rung};
    auto const defects = projector_defects(out);
    if (defects.idempotency > 1e-8 || defects.hermiticity > 1e-8 || defects.trace > 1e-8)
        throw InconsistentSurfaceError{"surface does not reproduce a rank-1 projector at rung " +
                                       std::to_string(X.rung)};
    return out;
}

namespace detail {

inline auto chi_step(Surface const& X, LadderDirection dir) -> Surface
{
    auto const p = projector_from_surface(X);
    auto const next = pi_step(p, dir);
    auto const order = next.order();
    // down: X + i[Pi_-(P) + P] - (2i/N) I,   up: X - i[Pi_+(P) + P] + (2i/N) I
    auto const sign = dir == LadderDirection::down ? 1.0 : -1.0;
    auto m = X.matrix.truncated(order) + (next.matrix + p.matrix.truncated(order)) * complex{0.0, sign};
    for (auto i = 0; i < X.dim; ++i) m(i, i)(0, 0) -= complex{0.0, sign * 2.0 / X.dim};
    return {std::move(m), next.rung, X.dim};
}

} // namespace detail

inline auto chi_minus(Surface const& X) -> Surface { return detail::chi_step(X, LadderDirection::down); }
inline auto chi_plus(Surface const& X) -> Surface { return detail::chi_step(X, LadderDirection::up); }

/// P_k = i sum_{j=1..k} (-1)^{k-j} (X_j - X_{j-1}) + (-1)^k i X_0 + I/N
inline auto projector_from_surface_chain(std::vector<Surface> const& surfaces, int k) -> Projector
{
    if (k < 0 || k >= static_cast<int>(surfaces.size()))
        throw RungError{"need surfaces X_0 .. X_" + std::to_string(k)};
    for (auto j = 0; j <= k; ++j)
        if (surfaces[static_cast<std::size_t>(j)].rung != j)
            throw RungError{"surface at position " + std::to_string(j) + " carries rung " +
                            std::to_string(surfaces[static_cast<std::size_t>(j)].rung)};
    auto const& x0 = surfaces.front().matrix;
    auto const sign = [](int e) { return e % 2 == 0 ? 1.0 : -1.0; };
    auto sum = x0 * complex{0.0, sign(k)};
    for (auto j = 1; j <= k; ++j)
    {
        auto const diff = surfaces[static_cast<std::size_t>(j)].matrix - surfaces[static_cast<std::size_t>(j - 1)].matrix;
        sum += diff * complex{0.0, sign(k - j)};
    }
    auto const n = x0.dim();
    for (auto i = 0; i < n; ++i) sum(i, i)(0, 0) += 1.0 / n;
    return {std::move(sum), k};
}

// ---------------------------------------------------------------------------------------------------------------------
// su(N) coordinates
// ---------------------------------------------------------------------------------------------------------------------

/// generalized Gell-Mann matrices: traceless Hermitian, tr(B_a B_b) = 2 delta_ab
struct EmbeddingBasis
{
    int dim = 0;
    std::vector<Matrix> matrices;
};

/// ordered symmetric (j<k), antisymmetric (j<k), then diagonal
inline auto gell_mann_basis(int n) -> EmbeddingBasis
{
    if (n < 2) throw InvalidDimension{"embedding basis needs N >= 2"};
    auto basis = EmbeddingBasis{n, {}};
    for (auto j = 0; j < n; ++j)
        for (auto k = j + 1; k < n; ++k)
        {
            auto m = Matrix::Zero(n, n).eval();
            m(j, k) = m(k, j) = 1.0;
            basis.matrices.push_back(std::move(m));
        }
    for (auto j = 0; j < n; ++j)
        for (auto k = j + 1; k < n; ++k)
        {
            auto m = Matrix::Zero(n, n).eval();
            m(j, k) = complex{0.0, -1.0};
            m(k, j) = complex{0.0, 1.0};
            basis.matrices.push_back(std::move(m));
        }
    for (auto l = 1; l < n; ++l)
    {
        auto m = Matrix::Zero(n, n).eval();
        auto const s = std::sqrt(2.0 / (l * (l + 1.0)));
        for (auto j = 0; j < l; ++j) m(j, j) = s;
        m(l, l) = -s * l;
        basis.matrices.push_back(std::move(m));
    }
    return basis;
}

/// (A, B) = -1/2 tr(A B)
inline auto su_product(Matrix const& a, Matrix const& b) -> double { return -0.5 * (a * b).trace().real(); }

/// c_a = (X, i B_a)
inline auto embed_coordinates(Matrix const& x, EmbeddingBasis const& basis) -> std::vector<double>
{
    if (x.rows() != basis.dim) throw ShapeError{"surface and basis dimensions differ"};
    auto out = std::vector<double>{};
    out.reserve(basis.matrices.size());
    for (auto const& b : basis.matrices) out.push_back(su_product(x, complex{0.0, 1.0} * b));
    return out;
}

inline auto embed_coordinates(Surface const& x, EmbeddingBasis const& basis) -> std::vector<double>
{
    return embed_coordinates(x.value(), basis);
}

/// sum_a c_a i B_a
inline auto reconstruct(std::vector<double> const& coords, EmbeddingBasis const& basis) -> Matrix
{
    auto m = Matrix::Zero(basis.dim, basis.dim).eval();
    for (std::size_t a = 0; a < coords.size(); ++a) m += complex{0.0, coords[a]} * basis.matrices[a];
    return m;
}

} // namespace cpn
