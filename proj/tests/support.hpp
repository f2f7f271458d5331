#pragma once

// test oracles: random seeds, projectors from plain linear algebra, finite differences, closed-form CP^2/CP^3
// matrices

#include <cpn/cpn.hpp>

#include <Eigen/QR>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace cpn::test {

inline auto rng(std::uint64_t salt = 0) -> std::mt19937_64 { return std::mt19937_64{0x5eed1234ull + salt}; }

inline auto random_complex(std::mt19937_64& gen, double radius = 1.0) -> complex
{
    auto u = std::uniform_real_distribution<double>{-radius, radius};
    for (;;)
    {
        auto const z = complex{u(gen), u(gen)};
        if (std::abs(z) <= radius) return z;
    }
}

/// generic seed: each component has random degree in [n-1, max_degree] so the ladder spans C^n
inline auto random_seed(std::mt19937_64& gen, int n, int max_degree = 4) -> SeedVector
{
    auto deg = std::uniform_int_distribution<int>{std::max(0, n - 1), std::max(n - 1, max_degree)};
    auto s = SeedVector{n, {}, "random"};
    for (auto i = 0; i < n; ++i)
    {
        auto p = Polynomial{};
        auto const d = deg(gen);
        for (auto j = 0; j <= d; ++j) p.push_back(random_complex(gen));
        s.components.push_back(std::move(p));
    }
    return s;
}

// ---------------------------------------------------------------------------------------------------------------------
// projectors without jets
// ---------------------------------------------------------------------------------------------------------------------

inline auto poly_value(Polynomial const& p, complex x, int derivative) -> complex
{
    auto sum = complex{};
    for (auto j = static_cast<int>(p.size()) - 1; j >= derivative; --j)
    {
        auto falling = 1.0;
        for (auto t = 0; t < derivative; ++t) falling *= j - t;
        sum = sum * x + falling * p[static_cast<std::size_t>(j)];
    }
    return sum;
}

/// orthogonal projector onto span{f, f', ..., f^(m)}
inline auto span_projector(SeedVector const& s, complex xi, int m) -> Matrix
{
    auto a = Matrix(s.dim, m + 1);
    for (auto j = 0; j <= m; ++j)
        for (auto i = 0; i < s.dim; ++i) a(i, j) = poly_value(s.components[static_cast<std::size_t>(i)], xi, j);
    auto qr = Eigen::HouseholderQR<Matrix>{a};
    auto const q = (qr.householderQ() * Matrix::Identity(s.dim, m + 1)).eval();
    return q * q.adjoint();
}

/// P_k is the difference of consecutive span projectors
inline auto oracle_projector(SeedVector const& s, complex xi, int k) -> Matrix
{
    auto const upper = span_projector(s, xi, k);
    if (k == 0) return upper;
    return upper - span_projector(s, xi, k - 1);
}

/// -i (P_k + 2 sum_{j<k} P_j) + i (2k+1)/N I
inline auto oracle_surface(SeedVector const& s, complex xi, int k) -> Matrix
{
    auto const n = s.dim;
    auto const lower = k == 0 ? Matrix::Zero(n, n).eval() : span_projector(s, xi, k - 1);
    auto const pk = oracle_projector(s, xi, k);
    return complex{0.0, -1.0} * (pk + 2.0 * lower) + complex{0.0, (2.0 * k + 1.0) / n} * Matrix::Identity(n, n);
}

// ---------------------------------------------------------------------------------------------------------------------
// finite differences
// ---------------------------------------------------------------------------------------------------------------------

using MatrixField = std::function<Matrix(complex)>;

namespace detail {

/// fourth-order central stencils on nodes -3..3 for derivatives 0..3
inline auto stencil(int m) -> std::array<double, 7>
{
    switch (m)
    {
    case 0: return {0, 0, 0, 1, 0, 0, 0};
    case 1: return {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0};
    case 2: return {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0};
    default: return {1.0 / 8, -1.0, 13.0 / 8, 0, -13.0 / 8, 1.0, -1.0 / 8};
    }
}

inline auto partial(MatrixField const& f, complex xi, int mx, int my, double h) -> Matrix
{
    auto const sx = stencil(mx);
    auto const sy = stencil(my);
    auto sum = Matrix{};
    for (auto i = 0; i < 7; ++i)
        for (auto j = 0; j < 7; ++j)
        {
            auto const w = sx[static_cast<std::size_t>(i)] * sy[static_cast<std::size_t>(j)];
            if (w == 0.0) continue;
            auto const v = f(xi + complex{(i - 3) * h, (j - 3) * h});
            if (sum.size() == 0) sum = Matrix::Zero(v.rows(), v.cols());
            sum += w * v;
        }
    return sum / std::pow(h, mx + my);
}

inline auto choose(int n, int k) -> double
{
    auto r = 1.0;
    for (auto i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline auto coefficient_at_step(MatrixField const& f, complex xi, int a, int b, double h) -> Matrix
{
    auto out = Matrix{};
    for (auto p = 0; p <= a; ++p)
        for (auto q = 0; q <= b; ++q)
        {
            auto const c = choose(a, p) * choose(b, q) * std::pow(complex{0.0, -1.0}, p) * std::pow(complex{0.0, 1.0}, q);
            auto const term = (c * partial(f, xi, a + b - p - q, p + q, h)).eval();
            out = out.size() == 0 ? term : (out + term).eval();
        }
    return out / (std::pow(2.0, a + b) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0));
}

} // namespace detail

/// Taylor coefficient d^a dbar^b f / (a! b!) by central differences with one Richardson step
inline auto fd_coefficient(MatrixField const& f, complex xi, int a, int b, double h = 0.01) -> Matrix
{
    if (a + b == 0) return f(xi);
    auto const coarse = detail::coefficient_at_step(f, xi, a, b, h);
    auto const fine = detail::coefficient_at_step(f, xi, a, b, h / 2);
    return (16.0 * fine - coarse) / 15.0;
}

// ---------------------------------------------------------------------------------------------------------------------
// closed-form matrices for the Veronese ladders
// ---------------------------------------------------------------------------------------------------------------------

namespace veronese {

inline auto cp2_p0(complex xi) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s2 = std::sqrt(2.0);
    auto m = Matrix(3, 3);
    m << 1.0, s2 * xb, xb * xb,
         s2 * x, 2.0 * r, s2 * r * xb,
         x * x, s2 * r * x, r * r;
    return m / std::pow(1.0 + r, 2);
}

inline auto cp2_p1(complex xi) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s2 = std::sqrt(2.0);
    auto m = Matrix(3, 3);
    m << 2.0 * r, s2 * (r - 1.0) * xb, -2.0 * xb * xb,
         s2 * (r - 1.0) * x, (r - 1.0) * (r - 1.0), -s2 * (r - 1.0) * xb,
         -2.0 * x * x, -s2 * (r - 1.0) * x, 2.0 * r;
    return m / std::pow(1.0 + r, 2);
}

/// i/3 I - i P_0
inline auto cp2_x0(complex xi) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s2 = std::sqrt(2.0);
    auto const i = complex{0.0, 1.0};
    auto m = Matrix(3, 3);
    m << i, i * s2 * xb, i * xb * xb,
         i * s2 * x, 2.0 * i * r, i * s2 * r * xb,
         i * x * x, i * s2 * r * x, i * r * r;
    return (i / 3.0) * Matrix::Identity(3, 3) - m / std::pow(1.0 + r, 2);
}

inline auto cp2_x1(complex xi) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s2 = std::sqrt(2.0);
    auto const i = complex{0.0, 1.0};
    auto m = Matrix(3, 3);
    m << 2.0 * i, i * s2 * xb, 0.0,
         i * s2 * x, i * (r + 1.0), i * s2 * xb,
         0.0, i * s2 * x, 2.0 * i * r;
    return i * Matrix::Identity(3, 3) - m / (1.0 + r);
}

inline auto cp2_h0(complex xi) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s2 = std::sqrt(2.0);
    auto m = Matrix(3, 3);
    m << 1.0 - 2.0 * r, s2 * (2.0 - r) * xb, 3.0 * xb * xb,
         s2 * (2.0 - r) * x, -(r * r - 4.0 * r + 1.0), s2 * (2.0 * r - 1.0) * xb,
         3.0 * x * x, s2 * (2.0 * r - 1.0) * x, r * (r - 2.0);
    return m * (complex{0.0, 4.0} / std::pow(1.0 + r, 2));
}

inline auto cp3_psi0(complex xi, complex lambda) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s3 = std::sqrt(3.0);
    auto m = Matrix(4, 4);
    m << 1.0, s3 * xb, s3 * xb * xb, xb * xb * xb,
         s3 * x, 3.0 * r, 3.0 * r * xb, s3 * r * xb * xb,
         s3 * x * x, 3.0 * r * x, 3.0 * r * r, s3 * r * r * xb,
         x * x * x, s3 * r * x * x, s3 * r * r * x, r * r * r;
    return m * (2.0 * (1.0 - lambda) / std::pow(1.0 + r, 3));
}

inline auto cp3_psi1(complex xi, complex l) -> Matrix
{
    auto const r = std::norm(xi);
    auto const x = xi;
    auto const xb = std::conj(xi);
    auto const s3 = std::sqrt(3.0);
    auto m = Matrix(4, 4);
    m << 3.0 * (l - 1.0) * r + 2.0 * l, s3 * (2.0 * (l - 1.0) * r + l + 1.0) * xb,
         s3 * ((l - 1.0) * r + 2.0) * xb * xb, (3.0 - l) * xb * xb * xb,
         s3 * (2.0 * (l - 1.0) * r + l + 1.0) * x, 4.0 * (l - 1.0) * r * r + 2.0 * (l + 2.0) * r + l - 1.0,
         (2.0 * (l - 1.0) * r * r + (l + 5.0) * r + 2.0 * (l - 1.0)) * xb, s3 * (2.0 * r + l - 1.0) * xb * xb,
         s3 * ((l - 1.0) * r + 2.0) * x * x, (2.0 * (l - 1.0) * r * r + (l + 5.0) * r + 2.0 * (l - 1.0)) * x,
         r * ((l - 1.0) * r * r + 2.0 * (l + 2.0) * r + 4.0 * (l - 1.0)), s3 * r * ((l + 1.0) * r + 2.0 * (l - 1.0)) * xb,
         (3.0 - l) * x * x * x, s3 * (2.0 * r + l - 1.0) * x * x, s3 * r * ((l + 1.0) * r + 2.0 * (l - 1.0)) * x,
         r * r * ((2.0 * r + 3.0) * l - 3.0);
    return m * (-2.0 / std::pow(1.0 + r, 3));
}

} // namespace veronese

inline auto max_diff(Matrix const& a, Matrix const& b) -> double { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace cpn::test
