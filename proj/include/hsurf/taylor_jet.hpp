#pragma once

/**
 * @file taylor_jet.hpp
 * @brief Truncated Taylor arithmetic of fixed order.
 *
 * A TaylorJet<S, N> carries the Taylor coefficients c_0..c_N of a function
 * around a point. All arithmetic propagates them exactly (up to rounding),
 * so the k-th derivative of any composed expression is available as
 * k! * c_k without numeric differencing.
 *
 * S is either double (real jets along one coordinate) or std::complex<double>
 * (holomorphic jets in z).
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsurf {

using Complex = std::complex<double>;

/// Raised when an operation leaves the domain of the function being evaluated
/// (pole, branch point, log of zero) or produces a non-finite value.
class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_finite(double x) noexcept { return std::isfinite(x); }
inline bool is_finite(const Complex &x) noexcept { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

inline double magnitude(double x) noexcept { return std::abs(x); }
inline double magnitude(const Complex &x) noexcept { return std::abs(x); }

constexpr double factorial(std::size_t k) noexcept
{
    double r = 1.0;
    for (std::size_t i = 2; i <= k; ++i) r *= static_cast<double>(i);
    return r;
}

} // namespace detail

template <typename S, std::size_t N>
struct TaylorJet {
    using scalar_type = S;
    static constexpr std::size_t order = N;

    std::array<S, N + 1> c{};

    constexpr TaylorJet() = default;
    constexpr TaylorJet(S value) { c[0] = value; }

    /// The jet of the identity map at x: x + 1*(t - x).
    static constexpr TaylorJet variable(S x)
    {
        TaylorJet j(x);
        if constexpr (N >= 1) j.c[1] = S(1);
        return j;
    }

    static TaylorJet from_derivatives(const std::array<S, N + 1> &d)
    {
        TaylorJet j;
        for (std::size_t k = 0; k <= N; ++k) j.c[k] = d[k] / detail::factorial(k);
        return j;
    }

    constexpr const S &value() const { return c[0]; }

    /// k-th derivative.
    S derivative(std::size_t k) const { return c[k] * detail::factorial(k); }

    bool finite() const
    {
        for (const auto &x : c)
            if (!detail::is_finite(x)) return false;
        return true;
    }

    TaylorJet operator-() const
    {
        TaylorJet r;
        for (std::size_t k = 0; k <= N; ++k) r.c[k] = -c[k];
        return r;
    }

    TaylorJet &operator+=(const TaylorJet &o)
    {
        for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
        return *this;
    }
    TaylorJet &operator-=(const TaylorJet &o)
    {
        for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
        return *this;
    }
    TaylorJet &operator*=(const TaylorJet &o) { return *this = *this * o; }
    TaylorJet &operator/=(const TaylorJet &o) { return *this = *this / o; }

    friend TaylorJet operator+(TaylorJet a, const TaylorJet &b) { return a += b; }
    friend TaylorJet operator-(TaylorJet a, const TaylorJet &b) { return a -= b; }

    friend TaylorJet operator*(const TaylorJet &a, const TaylorJet &b)
    {
        TaylorJet r;
        for (std::size_t k = 0; k <= N; ++k) {
            S acc{};
            for (std::size_t j = 0; j <= k; ++j) acc += a.c[j] * b.c[k - j];
            r.c[k] = acc;
        }
        return r;
    }

    friend TaylorJet operator/(const TaylorJet &a, const TaylorJet &b)
    {
        if (b.c[0] == S(0)) throw domain_error("division by zero");
        TaylorJet r;
        for (std::size_t k = 0; k <= N; ++k) {
            S acc = a.c[k];
            for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * r.c[k - j];
            r.c[k] = acc / b.c[0];
        }
        return r;
    }

    friend TaylorJet operator*(S s, TaylorJet a)
    {
        for (auto &x : a.c) x *= s;
        return a;
    }
    friend TaylorJet operator*(TaylorJet a, S s) { return s * a; }
};

// Elementary functions. Each uses the standard first-order ODE recurrence of
// the function (y' = y a' for exp, and so on), which holds for any order.

template <typename S, std::size_t N>
TaylorJet<S, N> exp(const TaylorJet<S, N> &a)
{
    using std::exp;
    TaylorJet<S, N> r;
    r.c[0] = exp(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        S acc{};
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c[j] * r.c[k - j];
        r.c[k] = acc / static_cast<double>(k);
    }
    return r;
}

template <typename S, std::size_t N>
TaylorJet<S, N> log(const TaylorJet<S, N> &a)
{
    using std::log;
    if (a.c[0] == S(0)) throw domain_error("log of zero");
    TaylorJet<S, N> r;
    r.c[0] = log(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        S acc = a.c[k];
        for (std::size_t j = 1; j < k; ++j) acc -= (static_cast<double>(j) / static_cast<double>(k)) * r.c[j] * a.c[k - j];
        r.c[k] = acc / a.c[0];
    }
    return r;
}

namespace detail {

// Simultaneous recurrence for (sin, cos) when sign = -1 and (sinh, cosh) when sign = +1.
template <typename S, std::size_t N>
void sin_cos_pair(const TaylorJet<S, N> &a, TaylorJet<S, N> &s, TaylorJet<S, N> &co, double sign, S s0, S c0)
{
    s.c[0] = s0;
    co.c[0] = c0;
    for (std::size_t k = 1; k <= N; ++k) {
        S as{}, ac{};
        for (std::size_t j = 1; j <= k; ++j) {
            as += static_cast<double>(j) * a.c[j] * co.c[k - j];
            ac += static_cast<double>(j) * a.c[j] * s.c[k - j];
        }
        s.c[k] = as / static_cast<double>(k);
        co.c[k] = sign * ac / static_cast<double>(k);
    }
}

} // namespace detail

template <typename S, std::size_t N>
TaylorJet<S, N> sin(const TaylorJet<S, N> &a)
{
    using std::cos;
    using std::sin;
    TaylorJet<S, N> s, c;
    detail::sin_cos_pair(a, s, c, -1.0, sin(a.c[0]), cos(a.c[0]));
    return s;
}

template <typename S, std::size_t N>
TaylorJet<S, N> cos(const TaylorJet<S, N> &a)
{
    using std::cos;
    using std::sin;
    TaylorJet<S, N> s, c;
    detail::sin_cos_pair(a, s, c, -1.0, sin(a.c[0]), cos(a.c[0]));
    return c;
}

template <typename S, std::size_t N>
TaylorJet<S, N> sinh(const TaylorJet<S, N> &a)
{
    using std::cosh;
    using std::sinh;
    TaylorJet<S, N> s, c;
    detail::sin_cos_pair(a, s, c, 1.0, sinh(a.c[0]), cosh(a.c[0]));
    return s;
}

template <typename S, std::size_t N>
TaylorJet<S, N> cosh(const TaylorJet<S, N> &a)
{
    using std::cosh;
    using std::sinh;
    TaylorJet<S, N> s, c;
    detail::sin_cos_pair(a, s, c, 1.0, sinh(a.c[0]), cosh(a.c[0]));
    return c;
}

template <typename S, std::size_t N>
TaylorJet<S, N> tanh(const TaylorJet<S, N> &a)
{
    return sinh(a) / cosh(a);
}

/// Integer power by repeated squaring; valid at a zero base.
template <typename S, std::size_t N>
TaylorJet<S, N> powi(TaylorJet<S, N> base, long long n)
{
    if (n < 0) return TaylorJet<S, N>(S(1)) / powi(base, -n);
    TaylorJet<S, N> r(S(1));
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return r;
}

/// Principal-branch real power. Integer exponents are dispatched to powi.
template <typename S, std::size_t N>
TaylorJet<S, N> pow(const TaylorJet<S, N> &a, double p)
{
    using std::pow;
    if (std::trunc(p) == p && std::abs(p) < 1e9) return powi(a, static_cast<long long>(p));
    if (a.c[0] == S(0)) throw domain_error("non-integer power at zero");
    if constexpr (std::is_same_v<S, double>) {
        if (a.c[0] < 0.0) throw domain_error("non-integer power of a negative real");
    }
    TaylorJet<S, N> r;
    r.c[0] = pow(a.c[0], p);
    for (std::size_t k = 1; k <= N; ++k) {
        S acc{};
        for (std::size_t j = 1; j <= k; ++j)
            acc += ((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a.c[j] * r.c[k - j];
        r.c[k] = acc / (static_cast<double>(k) * a.c[0]);
    }
    return r;
}

template <typename S, std::size_t N>
TaylorJet<S, N> sqrt(const TaylorJet<S, N> &a)
{
    using std::sqrt;
    if (a.c[0] == S(0)) throw domain_error("sqrt at zero");
    TaylorJet<S, N> r;
    r.c[0] = sqrt(a.c[0]);
    // r^2 = a
    for (std::size_t k = 1; k <= N; ++k) {
        S acc = a.c[k];
        for (std::size_t j = 1; j < k; ++j) acc -= r.c[j] * r.c[k - j];
        r.c[k] = acc / (2.0 * r.c[0]);
    }
    return r;
}

/**
 * Value and first two complex derivatives of a holomorphic function at a point.
 */
struct Jet2 {
    Complex f{};
    Complex df{};
    Complex d2f{};

    template <std::size_t N>
    static Jet2 from(const TaylorJet<Complex, N> &t)
    {
        static_assert(N >= 2);
        return {t.derivative(0), t.derivative(1), t.derivative(2)};
    }
};

} // namespace hsurf
