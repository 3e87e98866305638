#include "hsurf/field.hpp"
#include "hsurf/verify.hpp"

#include <gtest/gtest.h>

using namespace hsurf;

namespace {

/// <f, g> for complex numbers as plane vectors.
double dotc(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Central-difference gradient and Hessian of field values, the oracle for jet derivatives.
RealJet2 fd_jet(const Field &f, Complex z, double h)
{
    auto v = [&](double du, double dv) { return f(z + Complex(du, dv)).val; };
    RealJet2 r;
    r.val = v(0, 0);
    r.g1 = (v(h, 0) - v(-h, 0)) / (2 * h);
    r.g2 = (v(0, h) - v(0, -h)) / (2 * h);
    r.h11 = (v(h, 0) - 2 * r.val + v(-h, 0)) / (h * h);
    r.h22 = (v(0, h) - 2 * r.val + v(0, -h)) / (h * h);
    r.h12 = (v(h, h) - v(h, -h) - v(-h, h) + v(-h, -h)) / (4 * h * h);
    return r;
}

std::vector<Complex> points(std::size_t n, std::uint64_t seed, double r_in = 0.2, double r_out = 1.8)
{
    return sample_points(SampleDomain::annulus(r_in, r_out), n, seed);
}

} // namespace

TEST(InnerProduct, MatchesPlaneDotProduct)
{
    const HoloExpr f = parse_expr("z^2+i"), g = parse_expr("sin z");
    for (Complex z : points(20, 1)) {
        const RealJet2 ip = inner(eval_jet(f, z), eval_jet(g, z));
        EXPECT_NEAR(ip.val, dotc(eval(f, z), eval(g, z)), 1e-14);
    }
}

TEST(InnerProduct, DerivativeRules)
{
    // <f,g>_u = <f',g> + <f,g'> and <f,g>_v = <i f',g> + <f,i g'>
    const HoloExpr f = parse_expr("e^z"), g = parse_expr("z^3-z");
    const Complex I(0.0, 1.0);
    for (Complex z : points(30, 2)) {
        const Jet2 a = eval_jet(f, z), b = eval_jet(g, z);
        const RealJet2 ip = inner(a, b);
        EXPECT_NEAR(ip.g1, dotc(a.df, b.f) + dotc(a.f, b.df), 1e-12);
        EXPECT_NEAR(ip.g2, dotc(I * a.df, b.f) + dotc(a.f, I * b.df), 1e-12);
        EXPECT_NEAR(ip.h11 + ip.h22, 4.0 * dotc(a.df, b.df), 1e-11);
    }
}

TEST(InnerProduct, JetAgreesWithFiniteDifferences)
{
    const HoloExpr f = parse_expr("cos z"), g = parse_expr("z^2");
    const double h = 1e-5;
    for (Complex z : points(30, 3)) {
        const RealJet2 ip = inner(eval_jet(f, z), eval_jet(g, z));
        auto v = [&](Complex w) { return dotc(eval(f, w), eval(g, w)); };
        EXPECT_NEAR(ip.g1, (v(z + h) - v(z - h)) / (2 * h), 1e-6);
        EXPECT_NEAR(ip.g2, (v(z + Complex(0, h)) - v(z - Complex(0, h))) / (2 * h), 1e-6);
    }
}

TEST(InnerProduct, HolomorphicRealPartIsHarmonic)
{
    const Jet2 j = eval_jet(parse_expr("e^z*sin z"), Complex(0.3, 0.8));
    EXPECT_NEAR(real_part(j).laplacian(), 0.0, 1e-13);
    EXPECT_NEAR(imag_part(j).laplacian(), 0.0, 1e-13);
}

TEST(H2Field, ConstantSphereData)
{
    const Field f = build_h2_field(parse_expr("z"), parse_expr("1"), parse_expr("z"));
    for (Complex z : points(20, 4, 0.0, 3.0)) {
        const RealJet2 h = f(z);
        EXPECT_NEAR(h.val, 1.0, 1e-14);
        EXPECT_NEAR(h.g1, 0.0, 1e-14);
        EXPECT_NEAR(h.g2, 0.0, 1e-14);
        EXPECT_NEAR(h.laplacian(), 0.0, 1e-13);
    }
}

TEST(H2Field, DirectSubstitutionAtOrigin)
{
    const Field f = build_h2_field(parse_expr("z"), parse_expr("e^z"), parse_expr("cos z"));
    // (Re e^0 + <0, cos 0>) / (1 + 0) = 1
    EXPECT_NEAR(f(Complex(0.0)).val, 1.0, 1e-15);
    const Complex z(0.7, -0.4);
    const Complex g = z, A = std::exp(z), B = std::cos(z);
    EXPECT_NEAR(f(z).val, (A.real() + dotc(g, B)) / (1.0 + std::norm(g)), 1e-14);
}

TEST(H2Field, JetMatchesFiniteDifferences)
{
    const Field f = build_h2_field(parse_expr("sinh z"), parse_expr("cosh z"), parse_expr("z^2"));
    for (Complex z : points(20, 5)) {
        const RealJet2 a = f(z), b = fd_jet(f, z, 1e-4);
        EXPECT_NEAR(a.g1, b.g1, 1e-6);
        EXPECT_NEAR(a.g2, b.g2, 1e-6);
        EXPECT_NEAR(a.h11, b.h11, 1e-5);
        EXPECT_NEAR(a.h12, b.h12, 1e-5);
        EXPECT_NEAR(a.h22, b.h22, 1e-5);
    }
}

TEST(H1Field, MatchesClosedFormExponential)
{
    // B = e^z (z - 2) + 2 satisfies B' = A'g - Ag' and B(0) = 0
    const Field f = build_h1_field(parse_expr("z"), parse_expr("e^z"), 0.0);
    const Field closed = build_h2_field(parse_expr("z"), parse_expr("e^z"), parse_expr("e^z*(z-2)+2"));
    for (Complex z : {Complex(1.0), Complex(-0.5, 1.2), Complex(1.5, -2.0)}) {
        EXPECT_NEAR(f(z).val, closed(z).val, 1e-10);
        EXPECT_NEAR(f(z).laplacian(), closed(z).laplacian(), 1e-10);
    }
}

TEST(H1Field, MatchesClosedFormQuadratic)
{
    const Field f = build_h1_field(parse_expr("z^2"), parse_expr("z"), 0.0);
    const Field closed = build_h2_field(parse_expr("z^2"), parse_expr("z"), parse_expr("-z^3/3"));
    for (Complex z : points(10, 6)) EXPECT_NEAR(f(z).val, closed(z).val, 1e-10);
}

TEST(H1Field, MatchesClosedFormReciprocalAwayFromPole)
{
    AntiderivativeBase base;
    base.z0 = Complex(1.0);
    base.B0 = Complex(3.0);  // B = 3z
    const Field f = build_h1_field(parse_expr("z^-1"), parse_expr("z^2"), 0.0, base);
    const Field closed = build_h2_field(parse_expr("z^-1"), parse_expr("z^2"), parse_expr("3*z"));
    for (Complex z : {Complex(2.0), Complex(1.0, 1.0), Complex(0.5, -0.5)}) EXPECT_NEAR(f(z).val, closed(z).val, 1e-10);
    // the negative real axis is reached through the upper half plane
    base.via = {Complex(0.0, 1.0)};
    const Field routed = build_h1_field(parse_expr("z^-1"), parse_expr("z^2"), 0.0, base);
    EXPECT_NEAR(routed(Complex(-1.0, 0.1)).val, closed(Complex(-1.0, 0.1)).val, 1e-10);
}

TEST(H1Field, SatisfiesHelmholtz)
{
    const Field f = build_h1_field(parse_expr("z"), parse_expr("sin z"), 0.5);
    const auto r = helmholtz_residual(f, points(50, 7));
    EXPECT_TRUE(r.pass) << r.max_abs;
}

TEST(H1Field, JetMatchesFiniteDifferences)
{
    const Field f = build_h1_field(parse_expr("z^2"), parse_expr("z"), 0.0);
    for (Complex z : points(10, 8)) {
        const RealJet2 a = f(z), b = fd_jet(f, z, 1e-4);
        EXPECT_NEAR(a.g1, b.g1, 1e-6);
        EXPECT_NEAR(a.h12, b.h12, 1e-5);
        EXPECT_NEAR(a.h22, b.h22, 1e-5);
    }
}

TEST(PropfField, FractionalPowerOnRealAxis)
{
    const double a = 1.5;
    const Field f = build_propf_field(parse_expr("z^1.5"), parse_expr("e^z"));
    for (double u : {-1.0, -0.3, 0.0, 0.4, 1.1}) {
        const double e2 = std::exp(2 * u);
        const double expected = std::exp(u * (a - 1)) * (a - 2 * e2 + a * e2) / (1 + e2);
        EXPECT_NEAR(f(Complex(u, 0.0)).val, expected, 1e-12);
    }
}

TEST(PropfField, PolynomialDirectSubstitution)
{
    const Field f = build_propf_field(parse_expr("z^2/2"), parse_expr("z"));
    for (Complex z : points(10, 9)) {
        const double expected = z.real() - 2.0 * dotc(z, 0.5 * z * z) / (1.0 + std::norm(z));
        EXPECT_NEAR(f(z).val, expected, 1e-12);
    }
}

TEST(PropfField, SatisfiesHelmholtz)
{
    const Field f = build_propf_field(parse_expr("z^1.5"), parse_expr("e^z"));
    const auto pts = sample_points(SampleDomain::rectangle(-1.5, 1.5, -2.0, 2.0), 100, 10);
    const auto r = helmholtz_residual(f, pts);
    EXPECT_LE(r.max_abs, 1e-8);
}

TEST(PropfField, EquivalentToH1FieldWithMatchingBase)
{
    // A = f'(g); B(z0) chosen so that both constructions use the same antiderivative
    const HoloExpr fexpr = parse_expr("sin z"), g = parse_expr("z^2+1");
    const HoloExpr A = parse_expr("cos(z^2+1)");
    AntiderivativeBase base;
    base.z0 = Complex(0.3, 0.2);
    const Complex g0 = eval(g, base.z0);
    base.B0 = eval(A, base.z0) * g0 - 2.0 * std::sin(g0);
    const Field a = build_propf_field(fexpr, g);
    const Field b = build_h1_field(g, A, 0.0, base);
    for (Complex z : points(20, 11, 0.0, 1.2)) {
        const RealJet2 x = a(z), y = b(z);
        EXPECT_NEAR(x.val, y.val, 1e-9);
        EXPECT_NEAR(x.g1, y.g1, 1e-9);
        EXPECT_NEAR(x.h22, y.h22, 1e-9);
    }
}

TEST(MakeField, RejectsMissingB)
{
    HoloData d;
    d.cls = SurfaceClass::H2;
    EXPECT_THROW(make_field(d), std::invalid_argument);
    d.B = parse_expr("z");
    d.c = 0.0;
    EXPECT_THROW(make_field(d), std::invalid_argument);
}

TEST(H1Field, IsAlsoGeneralizedHelmholtz)
{
    const Field f = build_h1_field(parse_expr("z"), parse_expr("e^z"), 0.0);
    const auto r = generalized_helmholtz_residual(f, points(10, 12, 0.3, 1.5), 1e-2);
    EXPECT_LE(r.max_abs, 1e-8);
}
