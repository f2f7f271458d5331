#pragma once

/**
    \file
    \brief truncated bivariate Taylor jets in (xi, xibar)

    A Jet stores the Taylor expansion of a complex function F(xi, xibar) around a base point xi0, treating xi and
    xibar as independent variables. Coefficient (a, b) is

        d^a dbar^b F(xi0, conj(xi0)) / (a! b!)

    for every a + b <= order. Arithmetic is truncated Cauchy-product arithmetic, so every coefficient that is kept is
    exact (up to rounding); truncation never contaminates lower orders.
*/

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cpn {

using complex = std::complex<double>;

/// Jet order used when the caller does not ask for one. Gaussian curvature needs third derivatives of P.
inline constexpr int default_jet_order = 4;

enum class JetRole
{
    constant,
    variable_xi,
    variable_xibar,
};

enum class JetOp
{
    add,
    sub,
    mul,
};

enum class Derivative
{
    holomorphic,     // d/dxi
    antiholomorphic, // d/dxibar
};

class Jet
{
public:
    Jet() : Jet{complex{}, 0} {}

    /// zero jet
    Jet(complex base, int order) : base_{base}, order_{order}, coeffs_(size_for(order))
    {
        if (order < 0) throw JetOrderError{"jet order must be non-negative"};
    }

    static auto size_for(int order) noexcept -> std::size_t
    {
        return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
    }

    // coefficients are laid out by total degree: d = a + b, then by b
    static auto index(int a, int b) noexcept -> std::size_t
    {
        auto const d = a + b;
        return static_cast<std::size_t>(d * (d + 1) / 2 + b);
    }

    auto base() const noexcept -> complex { return base_; }
    auto order() const noexcept -> int { return order_; }
    auto value() const noexcept -> complex { return coeffs_[0]; }
    auto coeffs() const noexcept -> std::span<complex const> { return coeffs_; }
    auto coeffs() noexcept -> std::span<complex> { return coeffs_; }

    auto operator()(int a, int b) const -> complex const& { return coeffs_[index(a, b)]; }
    auto operator()(int a, int b) -> complex& { return coeffs_[index(a, b)]; }

    /// coefficient (a, b), or zero when a + b exceeds the order
    auto coeff_or_zero(int a, int b) const noexcept -> complex
    {
        return (a + b <= order_) ? coeffs_[index(a, b)] : complex{};
    }

    /// d^a dbar^b F at the base point
    auto derivative(int a, int b) const -> complex { return (*this)(a, b) * factorial(a) * factorial(b); }

    /// sum of the Taylor polynomial at xi0 + h
    auto evaluate(complex h) const -> complex
    {
        auto sum = complex{};
        auto hbar = std::conj(h);
        for (auto a = 0; a <= order_; ++a)
        {
            for (auto b = 0; a + b <= order_; ++b)
                sum += (*this)(a, b) * std::pow(h, a) * std::pow(hbar, b);
        }
        return sum;
    }

    auto truncated(int order) const -> Jet
    {
        auto out = Jet{base_, std::min(order, order_)};
        std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
        return out;
    }

    auto max_abs() const noexcept -> double
    {
        auto m = 0.0;
        for (auto const& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    auto operator-() const -> Jet
    {
        auto out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }

    auto operator+=(Jet const& rhs) -> Jet&
    {
        check_compatible(rhs);
        if (rhs.order_ < order_) *this = truncated(rhs.order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
        return *this;
    }

    auto operator-=(Jet const& rhs) -> Jet&
    {
        check_compatible(rhs);
        if (rhs.order_ < order_) *this = truncated(rhs.order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
        return *this;
    }

    auto operator*=(complex s) -> Jet&
    {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    auto operator+=(complex s) -> Jet&
    {
        coeffs_[0] += s;
        return *this;
    }

    friend auto operator+(Jet lhs, Jet const& rhs) -> Jet { return lhs += rhs; }
    friend auto operator-(Jet lhs, Jet const& rhs) -> Jet { return lhs -= rhs; }
    friend auto operator*(Jet lhs, complex s) -> Jet { return lhs *= s; }
    friend auto operator*(complex s, Jet rhs) -> Jet { return rhs *= s; }
    friend auto operator+(Jet lhs, complex s) -> Jet { return lhs += s; }

    friend auto operator*(Jet const& lhs, Jet const& rhs) -> Jet
    {
        lhs.check_compatible(rhs);
        auto const order = std::min(lhs.order_, rhs.order_);
        auto out = Jet{lhs.base_, order};
        multiply_accumulate(lhs, rhs, out);
        return out;
    }

    friend auto operator==(Jet const&, Jet const&) -> bool = default;

    void check_compatible(Jet const& rhs) const
    {
        if (base_ != rhs.base_) throw ShapeError{"jets expanded around different base points"};
    }

    /// out += lhs * rhs truncated to out.order(); out must share the base point
    static void multiply_accumulate(Jet const& lhs, Jet const& rhs, Jet& out)
    {
        auto const order = out.order_;
        auto const* x = lhs.coeffs_.data();
        auto const* y = rhs.coeffs_.data();
        auto* z = out.coeffs_.data();
        for (auto d1 = 0; d1 <= order; ++d1)
        {
            for (auto b1 = 0; b1 <= d1; ++b1)
            {
                auto const xv = x[index(d1 - b1, b1)];
                if (xv == complex{}) continue;
                for (auto d2 = 0; d1 + d2 <= order; ++d2)
                {
                    auto const row = index(d2, 0);
                    auto const target = index(d1 + d2, 0) + static_cast<std::size_t>(b1);
                    for (auto b2 = 0; b2 <= d2; ++b2) z[target + b2] += xv * y[row + b2];
                }
            }
        }
    }

private:
    static auto factorial(int n) -> double
    {
        auto f = 1.0;
        for (auto i = 2; i <= n; ++i) f *= i;
        return f;
    }

    complex base_;
    int order_;
    std::vector<complex> coeffs_;
};

inline auto jet_lift(complex value, complex base, int order, JetRole role) -> Jet
{
    auto out = Jet{base, order};
    switch (role)
    {
    case JetRole::constant:
        out(0, 0) = value;
        break;
    case JetRole::variable_xi:
        out(0, 0) = base;
        if (order >= 1) out(1, 0) = 1.0;
        break;
    case JetRole::variable_xibar:
        out(0, 0) = std::conj(base);
        if (order >= 1) out(0, 1) = 1.0;
        break;
    }
    return out;
}

inline auto jet_combine(Jet const& a, Jet const& b, JetOp op) -> Jet
{
    switch (op)
    {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    }
    throw Error{"unknown jet operation"};
}

/// complex conjugate of the represented function: (a, b) -> (b, a) with conjugated coefficients
inline auto jet_conjugate(Jet const& a) -> Jet
{
    auto out = Jet{a.base(), a.order()};
    for (auto d = 0; d <= a.order(); ++d)
    {
        for (auto b = 0; b <= d; ++b) out(d - b, b) = std::conj(a(b, d - b));
    }
    return out;
}

inline auto jet_reciprocal(Jet const& a) -> Jet
{
    auto const a0 = a.value();
    if (a0 == complex{}) throw DivisionByZeroAtBasePoint{"reciprocal of a jet with vanishing constant term"};
    auto out = Jet{a.base(), a.order()};
    auto const inv = 1.0 / a0;
    out(0, 0) = inv;
    // a * out = 1, solved degree by degree
    for (auto d = 1; d <= a.order(); ++d)
    {
        for (auto b = 0; b <= d; ++b)
        {
            auto const p = d - b;
            auto sum = complex{};
            for (auto i = 0; i <= p; ++i)
            {
                for (auto j = 0; j <= b; ++j)
                {
                    if (i == 0 && j == 0) continue;
                    sum += a(i, j) * out(p - i, b - j);
                }
            }
            out(p, b) = -sum * inv;
        }
    }
    return out;
}

inline auto operator/(Jet const& lhs, Jet const& rhs) -> Jet { return lhs * jet_reciprocal(rhs); }

/// principal-branch logarithm
inline auto jet_log(Jet const& a) -> Jet
{
    auto const a0 = a.value();
    if (a0 == complex{}) throw DivisionByZeroAtBasePoint{"logarithm of a jet with vanishing constant term"};
    auto h = a * (1.0 / a0);
    h(0, 0) = 0.0;
    auto out = Jet{a.base(), a.order()};
    auto power = h;
    for (auto n = 1; n <= a.order(); ++n)
    {
        out += power * complex{(n % 2 == 1 ? 1.0 : -1.0) / n};
        power = power * h;
    }
    out(0, 0) = std::log(a0);
    return out;
}

/// d/dxi or d/dxibar; the result has order one less than the argument
inline auto jet_derive(Jet const& a, Derivative which) -> Jet
{
    if (a.order() < 1) throw JetOrderError{"differentiation needs a jet of order >= 1"};
    auto out = Jet{a.base(), a.order() - 1};
    for (auto d = 0; d < a.order(); ++d)
    {
        for (auto b = 0; b <= d; ++b)
        {
            auto const p = d - b;
            out(p, b) = which == Derivative::holomorphic ? a(p + 1, b) * static_cast<double>(p + 1)
                                                         : a(p, b + 1) * static_cast<double>(b + 1);
        }
    }
    return out;
}

} // namespace cpn
