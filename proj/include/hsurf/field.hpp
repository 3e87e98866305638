#pragma once

/**
 * @file field.hpp
 * @brief The scalar field h and the holomorphic data it is built from.
 *
 * Every constructor below returns a Field: an immutable evaluator that maps
 * z = u + iv to the RealJet2 of h at (u, v), together with the holomorphic
 * function g that parameterizes the unit sphere. Derivatives come from jet
 * arithmetic only.
 */

#include "quadrature.hpp"
#include "real_jet.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hsurf {

enum class SurfaceClass { H1, H2 };

inline std::string to_string(SurfaceClass c) { return c == SurfaceClass::H1 ? "h1" : "h2"; }

class Field {
public:
    using Evaluator = std::function<RealJet2(Complex)>;

    Field(HoloExpr g, Evaluator h, SurfaceClass cls, std::string description)
        : g_(std::move(g)), h_(std::move(h)), cls_(cls), description_(std::move(description))
    {
    }

    RealJet2 operator()(Complex z) const { return h_(z); }
    Jet2 g_jet(Complex z) const { return eval_jet(g_, z); }

    const HoloExpr &g() const noexcept { return g_; }
    SurfaceClass surface_class() const noexcept { return cls_; }
    const std::string &description() const noexcept { return description_; }

private:
    HoloExpr g_;
    Evaluator h_;
    SurfaceClass cls_;
    std::string description_;
};

/// h = (<1, A> + <g, B>) / (1 + |g|^2) from jets of g, A, B at one point.
inline RealJet2 combine_h(const Jet2 &g, const Jet2 &A, const Jet2 &B)
{
    const RealJet2 T = RealJet2::constant(1.0) + inner(g, g);
    return (real_part(A) + inner(g, B)) / T;
}

inline Field build_h2_field(const HoloExpr &g, const HoloExpr &A, const HoloExpr &B)
{
    auto eval_h = [g, A, B](Complex z) { return combine_h(eval_jet(g, z), eval_jet(A, z), eval_jet(B, z)); };
    return Field(g, eval_h, SurfaceClass::H2,
                 "h2 g=" + format_expr(g) + " A=" + format_expr(A) + " B=" + format_expr(B));
}

/// Where the antiderivative B of an H1 field is anchored and how it is reached.
struct AntiderivativeBase {
    Complex z0{0.0, 0.0};
    Complex B0{0.0, 0.0};            ///< value assigned to B(z0)
    std::vector<Complex> via;        ///< intermediate polyline vertices, may be empty
    QuadratureOptions quadrature{};
};

/**
 * Integrand A'g - A g' + i c1 g' of B, as a jet. Its value is B', its
 * derivative B''.
 */
inline Jet2 h1_integrand_jet(const Jet2 &g, const Jet2 &A, double c1)
{
    const Complex ic1(0.0, c1);
    return {A.df * g.f - A.f * g.df + ic1 * g.df, A.d2f * g.f - A.f * g.d2f + ic1 * g.d2f, Complex(0.0)};
}

inline Complex h1_antiderivative(const HoloExpr &g, const HoloExpr &A, double c1, const AntiderivativeBase &base, Complex z)
{
    auto integrand = [&](Complex w) {
        const auto gt = eval_taylor<1>(g, w);
        const auto at = eval_taylor<1>(A, w);
        return at.derivative(1) * gt.value() - at.value() * gt.derivative(1) + Complex(0.0, c1) * gt.derivative(1);
    };
    std::vector<Complex> path;
    path.reserve(base.via.size() + 2);
    path.push_back(base.z0);
    path.insert(path.end(), base.via.begin(), base.via.end());
    path.push_back(z);
    return base.B0 + integrate_polyline(integrand, std::span<const Complex>(path), base.quadrature);
}

/**
 * H1 field: B is the antiderivative of A'g - Ag' + i c1 g' normalized by
 * B(z0) = B0. The value of B comes from quadrature; B' and B'' come from the
 * integrand jet, never from differentiating the quadrature.
 */
inline Field build_h1_field(const HoloExpr &g, const HoloExpr &A, double c1, AntiderivativeBase base = {})
{
    auto eval_h = [g, A, c1, base](Complex z) {
        const Jet2 gj = eval_jet(g, z);
        const Jet2 aj = eval_jet(A, z);
        const Jet2 integrand = h1_integrand_jet(gj, aj, c1);
        const Jet2 bj{h1_antiderivative(g, A, c1, base, z), integrand.f, integrand.df};
        return combine_h(gj, aj, bj);
    };
    return Field(g, eval_h, SurfaceClass::H1,
                 "h1 g=" + format_expr(g) + " A=" + format_expr(A) + " c1=" + detail::format_real(c1));
}

/**
 * H1 field h = <1, f'(g)> - 2 <g, f(g)> / (1 + |g|^2).
 *
 * f is evaluated to third order at w = g(z) so that f'(g(z)) has an exact
 * second derivative after composition with g.
 */
inline Field build_propf_field(const HoloExpr &f, const HoloExpr &g)
{
    auto eval_h = [f, g](Complex z) {
        const Jet2 gj = eval_jet(g, z);
        const auto ft = eval_taylor<3>(f, gj.f);
        const Complex F0 = ft.derivative(0), F1 = ft.derivative(1), F2 = ft.derivative(2), F3 = ft.derivative(3);
        const Complex g1 = gj.df, g2 = gj.d2f;
        const Jet2 f_of_g{F0, F1 * g1, F2 * g1 * g1 + F1 * g2};
        const Jet2 df_of_g{F1, F2 * g1, F3 * g1 * g1 + F2 * g2};
        const RealJet2 T = RealJet2::constant(1.0) + inner(gj, gj);
        return real_part(df_of_g) - 2.0 * (inner(gj, f_of_g) / T);
    };
    return Field(g, eval_h, SurfaceClass::H1, "propf f=" + format_expr(f) + " g=" + format_expr(g));
}

/// Holomorphic input of a surface: g, A and (for H2) B, plus the constants c, c1.
struct HoloData {
    SurfaceClass cls = SurfaceClass::H1;
    HoloExpr g = HoloExpr::var();
    HoloExpr A = HoloExpr::constant(Complex(1.0));
    std::optional<HoloExpr> B; ///< required for H2, ignored for H1
    double c = 1.0;
    double c1 = 0.0;
    AntiderivativeBase base{};
};

inline Field make_field(const HoloData &data)
{
    if (data.c == 0.0) throw std::invalid_argument("the constant c must be nonzero");
    if (data.cls == SurfaceClass::H2) {
        if (!data.B) throw std::invalid_argument("H2 data requires B");
        return build_h2_field(data.g, data.A, *data.B);
    }
    return build_h1_field(data.g, data.A, data.c1, data.base);
}

} // namespace hsurf
