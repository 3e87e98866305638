#pragma once

#include "taylor_jet.hpp"

namespace hsurf {

/**
 * Second-order jet of a real scalar field on the (u, v) plane:
 * value, gradient (g1 = d/du, g2 = d/dv) and Hessian (h11, h12, h22).
 */
struct RealJet2 {
    double val = 0.0;
    double g1 = 0.0, g2 = 0.0;
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;

    static RealJet2 constant(double c) { return {c}; }

    double laplacian() const { return h11 + h22; }
    Complex gradient() const { return {g1, g2}; }

    RealJet2 operator-() const { return {-val, -g1, -g2, -h11, -h12, -h22}; }

    friend RealJet2 operator+(const RealJet2 &a, const RealJet2 &b)
    {
        return {a.val + b.val, a.g1 + b.g1, a.g2 + b.g2, a.h11 + b.h11, a.h12 + b.h12, a.h22 + b.h22};
    }
    friend RealJet2 operator-(const RealJet2 &a, const RealJet2 &b) { return a + (-b); }

    friend RealJet2 operator*(double s, const RealJet2 &a)
    {
        return {s * a.val, s * a.g1, s * a.g2, s * a.h11, s * a.h12, s * a.h22};
    }

    friend RealJet2 operator*(const RealJet2 &a, const RealJet2 &b)
    {
        return {a.val * b.val,
                a.g1 * b.val + a.val * b.g1,
                a.g2 * b.val + a.val * b.g2,
                a.h11 * b.val + 2.0 * a.g1 * b.g1 + a.val * b.h11,
                a.h12 * b.val + a.g1 * b.g2 + a.g2 * b.g1 + a.val * b.h12,
                a.h22 * b.val + 2.0 * a.g2 * b.g2 + a.val * b.h22};
    }

    friend RealJet2 reciprocal(const RealJet2 &b)
    {
        if (b.val == 0.0) throw domain_error("division by a vanishing field");
        const double r = 1.0 / b.val, r2 = r * r, r3 = r2 * r;
        return {r,
                -b.g1 * r2,
                -b.g2 * r2,
                -b.h11 * r2 + 2.0 * b.g1 * b.g1 * r3,
                -b.h12 * r2 + 2.0 * b.g1 * b.g2 * r3,
                -b.h22 * r2 + 2.0 * b.g2 * b.g2 * r3};
    }

    friend RealJet2 operator/(const RealJet2 &a, const RealJet2 &b) { return a * reciprocal(b); }
};

// With z = u + iv and f holomorphic: f_u = f', f_v = i f', f_uu = f'', f_uv = i f'', f_vv = -f''.

inline RealJet2 real_part(const Jet2 &f)
{
    return {f.f.real(), f.df.real(), -f.df.imag(), f.d2f.real(), -f.d2f.imag(), -f.d2f.real()};
}

inline RealJet2 imag_part(const Jet2 &f)
{
    return {f.f.imag(), f.df.imag(), f.df.real(), f.d2f.imag(), f.d2f.real(), -f.d2f.imag()};
}

/// <f, g> = Re f Re g + Im f Im g for holomorphic f, g.
inline RealJet2 inner(const Jet2 &f, const Jet2 &g)
{
    return real_part(f) * real_part(g) + imag_part(f) * imag_part(g);
}

/// Jet of the holomorphic constant 1.
inline Jet2 unit_jet() { return {Complex(1.0), Complex(0.0), Complex(0.0)}; }

} // namespace hsurf
