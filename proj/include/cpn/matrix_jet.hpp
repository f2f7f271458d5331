#pragma once

/**
    \file
    \brief N x N matrices and N-vectors of jets sharing one base point and one order
*/

#include "jet.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace cpn {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class MatrixOp
{
    mul,
    add,
    sub,
    commutator,
};

/// column vector of jets, e.g. a homogeneous field f
using JetVector = std::vector<Jet>;

class MatrixJet
{
public:
    MatrixJet() = default;

    MatrixJet(int dim, complex base, int order)
        : dim_{dim}, entries_(static_cast<std::size_t>(dim * dim), Jet{base, order})
    {
        if (dim < 1) throw ShapeError{"matrix dimension must be positive"};
    }

    static auto identity(int dim, complex base, int order) -> MatrixJet
    {
        auto out = MatrixJet{dim, base, order};
        for (auto i = 0; i < dim; ++i) out(i, i)(0, 0) = 1.0;
        return out;
    }

    /// lift a plain matrix to a jet matrix that is constant in (xi, xibar)
    static auto constant(Matrix const& m, complex base, int order) -> MatrixJet
    {
        if (m.rows() != m.cols()) throw ShapeError{"constant matrix must be square"};
        auto out = MatrixJet{static_cast<int>(m.rows()), base, order};
        for (auto i = 0; i < out.dim_; ++i)
            for (auto j = 0; j < out.dim_; ++j) out(i, j)(0, 0) = m(i, j);
        return out;
    }

    auto dim() const noexcept -> int { return dim_; }
    auto base() const noexcept -> complex { return entries_.front().base(); }
    auto order() const noexcept -> int { return entries_.front().order(); }

    auto operator()(int i, int j) const -> Jet const& { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
    auto operator()(int i, int j) -> Jet& { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }

    /// plain matrix of constant terms, i.e. the value at the base point
    auto value() const -> Matrix
    {
        auto m = Matrix{dim_, dim_};
        for (auto i = 0; i < dim_; ++i)
            for (auto j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j).value();
        return m;
    }

    /// matrix of coefficient (a, b) of every entry
    auto coefficient(int a, int b) const -> Matrix
    {
        auto m = Matrix{dim_, dim_};
        for (auto i = 0; i < dim_; ++i)
            for (auto j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j)(a, b);
        return m;
    }

    auto truncated(int order) const -> MatrixJet
    {
        auto out = *this;
        for (auto& e : out.entries_) e = e.truncated(order);
        return out;
    }

    /// largest coefficient magnitude over all entries and all orders
    auto max_abs() const noexcept -> double
    {
        auto m = 0.0;
        for (auto const& e : entries_) m = std::max(m, e.max_abs());
        return m;
    }

    auto operator+=(MatrixJet const& rhs) -> MatrixJet&
    {
        check_shape(rhs);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
        return *this;
    }

    auto operator-=(MatrixJet const& rhs) -> MatrixJet&
    {
        check_shape(rhs);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
        return *this;
    }

    auto operator*=(complex s) -> MatrixJet&
    {
        for (auto& e : entries_) e *= s;
        return *this;
    }

    /// entrywise multiplication by a scalar field
    auto operator*=(Jet const& s) -> MatrixJet&
    {
        for (auto& e : entries_) e = e * s;
        return *this;
    }

    auto operator-() const -> MatrixJet
    {
        auto out = *this;
        out *= complex{-1.0};
        return out;
    }

    friend auto operator+(MatrixJet lhs, MatrixJet const& rhs) -> MatrixJet { return lhs += rhs; }
    friend auto operator-(MatrixJet lhs, MatrixJet const& rhs) -> MatrixJet { return lhs -= rhs; }
    friend auto operator*(MatrixJet lhs, complex s) -> MatrixJet { return lhs *= s; }
    friend auto operator*(complex s, MatrixJet rhs) -> MatrixJet { return rhs *= s; }
    friend auto operator*(MatrixJet lhs, Jet const& s) -> MatrixJet { return lhs *= s; }
    friend auto operator*(Jet const& s, MatrixJet rhs) -> MatrixJet { return rhs *= s; }

    friend auto operator*(MatrixJet const& lhs, MatrixJet const& rhs) -> MatrixJet
    {
        lhs.check_shape(rhs);
        auto const n = lhs.dim_;
        auto out = MatrixJet{n, lhs.base(), std::min(lhs.order(), rhs.order())};
        for (auto i = 0; i < n; ++i)
            for (auto j = 0; j < n; ++j)
                for (auto k = 0; k < n; ++k) Jet::multiply_accumulate(lhs(i, k), rhs(k, j), out(i, j));
        return out;
    }

    friend auto operator*(MatrixJet const& lhs, JetVector const& rhs) -> JetVector
    {
        if (static_cast<int>(rhs.size()) != lhs.dim_) throw ShapeError{"matrix-vector dimension mismatch"};
        auto const order = std::min(lhs.order(), rhs.front().order());
        auto out = JetVector(rhs.size(), Jet{lhs.base(), order});
        for (auto i = 0; i < lhs.dim_; ++i)
            for (auto k = 0; k < lhs.dim_; ++k)
            {
                rhs[static_cast<std::size_t>(k)].check_compatible(lhs(i, k));
                Jet::multiply_accumulate(lhs(i, k), rhs[static_cast<std::size_t>(k)], out[static_cast<std::size_t>(i)]);
            }
        return out;
    }

    void check_shape(MatrixJet const& rhs) const
    {
        if (dim_ != rhs.dim_) throw ShapeError{"matrix dimension mismatch"};
        if (base() != rhs.base()) throw ShapeError{"matrices expanded around different base points"};
    }

private:
    int dim_ = 0;
    std::vector<Jet> entries_;
};

inline auto matrix_ops(MatrixJet const& a, MatrixJet const& b, MatrixOp op) -> MatrixJet
{
    switch (op)
    {
    case MatrixOp::mul: return a * b;
    case MatrixOp::add: return a + b;
    case MatrixOp::sub: return a - b;
    case MatrixOp::commutator: return a * b - b * a;
    }
    throw Error{"unknown matrix operation"};
}

inline auto commutator(MatrixJet const& a, MatrixJet const& b) -> MatrixJet { return a * b - b * a; }

inline auto matrix_adjoint(MatrixJet const& a) -> MatrixJet
{
    auto out = MatrixJet{a.dim(), a.base(), a.order()};
    for (auto i = 0; i < a.dim(); ++i)
        for (auto j = 0; j < a.dim(); ++j) out(i, j) = jet_conjugate(a(j, i));
    return out;
}

inline auto matrix_trace(MatrixJet const& a) -> Jet
{
    auto out = Jet{a.base(), a.order()};
    for (auto i = 0; i < a.dim(); ++i) out += a(i, i);
    return out;
}

inline auto matrix_derive(MatrixJet const& a, Derivative which) -> MatrixJet
{
    if (a.order() < 1) throw JetOrderError{"differentiation needs a matrix jet of order >= 1"};
    auto out = MatrixJet{a.dim(), a.base(), a.order() - 1};
    for (auto i = 0; i < a.dim(); ++i)
        for (auto j = 0; j < a.dim(); ++j) out(i, j) = jet_derive(a(i, j), which);
    return out;
}

/// inverse via the constant-term inverse and a terminating Neumann series in the nilpotent remainder
inline auto matrix_inverse(MatrixJet const& a, double max_condition = 1e12) -> MatrixJet
{
    auto const a0 = a.value();
    auto const sv = Eigen::JacobiSVD<Matrix>{a0}.singularValues();
    auto const smin = sv(sv.size() - 1);
    if (smin == 0.0 || sv(0) / smin > max_condition)
        throw DivisionByZeroAtBasePoint{"matrix jet is singular at the base point"};
    auto const inv0 = MatrixJet::constant(a0.inverse(), a.base(), a.order());
    auto const remainder = MatrixJet::identity(a.dim(), a.base(), a.order()) - inv0 * a;
    auto sum = MatrixJet::identity(a.dim(), a.base(), a.order());
    auto power = sum;
    for (auto n = 1; n <= a.order(); ++n)
    {
        power = power * remainder;
        sum += power;
    }
    return sum * inv0;
}

// ---------------------------------------------------------------------------------------------------------------------
// vectors of jets
// ---------------------------------------------------------------------------------------------------------------------

inline auto derive(JetVector const& f, Derivative which) -> JetVector
{
    auto out = JetVector{};
    out.reserve(f.size());
    for (auto const& c : f) out.push_back(jet_derive(c, which));
    return out;
}

inline auto truncated(JetVector const& f, int order) -> JetVector
{
    auto out = JetVector{};
    out.reserve(f.size());
    for (auto const& c : f) out.push_back(c.truncated(order));
    return out;
}

/// f^dagger g
inline auto inner(JetVector const& f, JetVector const& g) -> Jet
{
    if (f.size() != g.size()) throw ShapeError{"vector dimension mismatch"};
    auto out = Jet{f.front().base(), std::min(f.front().order(), g.front().order())};
    for (std::size_t i = 0; i < f.size(); ++i) Jet::multiply_accumulate(jet_conjugate(f[i]), g[i], out);
    return out;
}

/// f (x) g^dagger
inline auto outer(JetVector const& f, JetVector const& g) -> MatrixJet
{
    if (f.size() != g.size()) throw ShapeError{"vector dimension mismatch"};
    auto const n = static_cast<int>(f.size());
    auto out = MatrixJet{n, f.front().base(), std::min(f.front().order(), g.front().order())};
    for (auto j = 0; j < n; ++j)
    {
        auto const gbar = jet_conjugate(g[static_cast<std::size_t>(j)]);
        for (auto i = 0; i < n; ++i) Jet::multiply_accumulate(f[static_cast<std::size_t>(i)], gbar, out(i, j));
    }
    return out;
}

inline auto value(JetVector const& f) -> Vector
{
    auto v = Vector{static_cast<Eigen::Index>(f.size())};
    for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i].value();
    return v;
}

} // namespace cpn
