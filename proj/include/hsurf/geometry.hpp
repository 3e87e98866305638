#pragma once

/**
 * @file geometry.hpp
 * @brief Per-point geometry of a surface built from (g, h, c).
 *
 * With Y the inverse stereographic image of g, the sphere metric in the
 * (u, v) coordinates is L * identity, L = 4|g'|^2 / (1 + |g|^2)^2. From the
 * field h the construction yields
 *
 *   eta = grad_L h + h Y,   S = <eta, eta>,
 *   N   = Y - (2h / S) eta,
 *   X   = Y - (2(h + c) / S) eta,
 *
 * the matrix V of covariant second derivatives of h (plus h times the
 * identity) and the Weingarten matrix W = [S - 2hV][S - 2(h+c)V]^-1.
 * Principal curvatures are the negated eigenvalues of W.
 */

#include "field.hpp"

#include <array>
#include <cmath>

namespace hsurf {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3 &a) { return {s * a.x, s * a.y, s * a.z}; }
    friend Vec3 operator*(const Vec3 &a, double s) { return s * a; }
    friend Vec3 operator/(const Vec3 &a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    double operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
};

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double max_abs(const Vec3 &a) { return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)}); }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity(double s = 1.0) { return {s, 0.0, 0.0, s}; }
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }

    friend Mat2 operator+(const Mat2 &x, const Mat2 &y) { return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22}; }
    friend Mat2 operator-(const Mat2 &x, const Mat2 &y) { return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22}; }
    friend Mat2 operator*(double s, const Mat2 &x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }
    friend Mat2 operator*(const Mat2 &x, const Mat2 &y)
    {
        return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22, x.a21 * y.a11 + x.a22 * y.a21,
                x.a21 * y.a12 + x.a22 * y.a22};
    }
    Mat2 inverse() const
    {
        const double d = det();
        if (d == 0.0) throw domain_error("singular 2x2 matrix");
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

/// Eigenvalues (ascending) of a symmetric 2x2 matrix, closed form.
inline std::array<double, 2> symmetric_eigenvalues(double a11, double a12, double a22)
{
    const double mean = 0.5 * (a11 + a22);
    const double r = std::hypot(0.5 * (a11 - a22), a12);
    return {mean - r, mean + r};
}

class singular_point : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeometryOptions {
    double eps_S = 1e-14;          ///< S at or below this is a degenerate point of eta
    double p_relative = 1e-10;     ///< |P| < p_relative * S^2 is a singular point of X
    double psi_gap = 1e-12;        ///< |Psi - 1| below this violates the congruence condition
    double spherical_pole = 1e-12; ///< |1 - k_i R| below this is a pole of s_i
    double w_asymmetry = 1e-9;     ///< relative asymmetry of W tolerated before erroring
};

/// All geometry at one parameter point z.
struct SurfaceFrame {
    Complex z{};
    Jet2 g{};
    RealJet2 h{};
    double c = 1.0;
    double T = 1.0;
    double L = 0.0;
    Vec3 Y{}, Y_u{}, Y_v{};
    Complex w{}; ///< g''/g' - (2/T) g' conj(g), the Christoffel combination
    Vec3 eta{};
    double S = 0.0;
    Mat2 V{};
    double P = 0.0;
    Vec3 X{}, N{};       ///< zero vectors when degenerate()
    bool degenerate_eta = false;

    bool degenerate() const noexcept { return degenerate_eta; }
};

/// Unit-sphere point and its coordinate derivatives from the jet of g.
inline void sphere_point(const Jet2 &g, Vec3 &Y, Vec3 &Y_u, Vec3 &Y_v)
{
    const double abs2 = std::norm(g.f);
    const double T = 1.0 + abs2;
    Y = {2.0 * g.f.real() / T, 2.0 * g.f.imag() / T, (1.0 - abs2) / T};
    // d/du g = g', d/dv g = i g'; d|g|^2 = 2 Re(conj(g) dg).
    auto derivative = [&](Complex dg) {
        const double dT = 2.0 * (std::conj(g.f) * dg).real();
        const Complex planar = 2.0 * dg / T - 2.0 * g.f * dT / (T * T);
        return Vec3{planar.real(), planar.imag(), -2.0 * dT / (T * T)};
    };
    Y_u = derivative(g.df);
    Y_v = derivative(Complex(0.0, 1.0) * g.df);
}

/// <a, b> for complex numbers viewed as vectors in R^2.
inline double cdot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline SurfaceFrame frame_at(Complex z, const Field &field, double c, const GeometryOptions &opt = {})
{
    if (c == 0.0) throw std::invalid_argument("the constant c must be nonzero");
    SurfaceFrame fr;
    fr.z = z;
    fr.c = c;
    fr.g = field.g_jet(z);
    if (fr.g.df == Complex(0.0)) throw domain_error("g' vanishes");
    fr.T = 1.0 + std::norm(fr.g.f);
    const double gp2 = std::norm(fr.g.df);
    fr.L = 4.0 * gp2 / (fr.T * fr.T);
    fr.h = field(z);
    sphere_point(fr.g, fr.Y, fr.Y_u, fr.Y_v);

    const RealJet2 &h = fr.h;
    fr.w = fr.g.d2f / fr.g.df - (2.0 / fr.T) * fr.g.df * std::conj(fr.g.f);
    const Complex grad = h.gradient();
    const double wg = cdot(fr.w, grad);
    const double iwg = cdot(Complex(0.0, 1.0) * fr.w, grad);
    fr.V.a11 = (h.h11 - wg + h.val * fr.L) / fr.L;
    fr.V.a12 = (h.h12 - iwg) / fr.L;
    fr.V.a21 = fr.V.a12;
    fr.V.a22 = (h.h22 + wg + h.val * fr.L) / fr.L;

    fr.eta = (h.g1 * fr.Y_u + h.g2 * fr.Y_v) / fr.L + h.val * fr.Y;
    fr.S = dot(fr.eta, fr.eta);
    const double hc = h.val + c;
    fr.P = fr.S * fr.S - 2.0 * hc * fr.S * fr.V.trace() + 4.0 * hc * hc * fr.V.det();
    if (!(fr.S > opt.eps_S)) {
        fr.degenerate_eta = true;
        return fr;
    }
    fr.N = fr.Y - (2.0 * h.val / fr.S) * fr.eta;
    fr.X = fr.Y - (2.0 * hc / fr.S) * fr.eta;
    return fr;
}

/**
 * eta from its closed Weierstrass-type form, with grad h read as the complex
 * number h_u + i h_v:
 *   planar part  (T/2) (grad h) g' / |g'|^2 - g <grad h, g/g'> + (2h/T) g
 *   height       ((2 - T)/T) h - <grad h, g/g'>
 * Used to cross-check frame_at.
 */
inline Vec3 eta_closed_form(Complex z, const Field &field)
{
    const Jet2 g = field.g_jet(z);
    if (g.df == Complex(0.0)) throw domain_error("g' vanishes");
    const RealJet2 h = field(z);
    const double T = 1.0 + std::norm(g.f);
    const Complex grad = h.gradient();
    const double proj = cdot(grad, g.f / g.df);
    const Complex planar = (T / 2.0) * grad * g.df / std::norm(g.df) - g.f * proj + (2.0 * h.val / T) * g.f;
    return {planar.real(), planar.imag(), (2.0 - T) / T * h.val - proj};
}

struct CurvatureReport {
    Mat2 W{};
    double k1 = 0.0, k2 = 0.0;
    double H = 0.0, K = 0.0;
    double Psi = 0.0, Lambda = 0.0, R = 0.0;
    double s1 = 0.0, s2 = 0.0, H_S = 0.0;
    double trV = 0.0, detV = 0.0;
};

inline CurvatureReport curvature_report(const SurfaceFrame &fr, const GeometryOptions &opt = {})
{
    if (fr.degenerate()) throw singular_point("degenerate point: S below threshold");
    if (std::abs(fr.P) < opt.p_relative * fr.S * fr.S) throw singular_point("singular point of X: P vanishes");
    const double h = fr.h.val, c = fr.c;
    const Mat2 num = Mat2::identity(fr.S) - (2.0 * h) * fr.V;
    const Mat2 den = Mat2::identity(fr.S) - (2.0 * (h + c)) * fr.V;
    CurvatureReport r;
    r.W = num * den.inverse();
    const double scale = std::max({1.0, std::abs(r.W.a11), std::abs(r.W.a12), std::abs(r.W.a21), std::abs(r.W.a22)});
    if (std::abs(r.W.a12 - r.W.a21) > opt.w_asymmetry * scale) throw domain_error("Weingarten matrix is not symmetric");
    const double off = 0.5 * (r.W.a12 + r.W.a21);
    const auto eig = symmetric_eigenvalues(r.W.a11, off, r.W.a22);
    r.k1 = -eig[0];
    r.k2 = -eig[1];
    r.H = 0.5 * (r.k1 + r.k2);
    r.K = r.k1 * r.k2;
    r.Psi = dot(fr.X, fr.N);
    r.Lambda = dot(fr.X, fr.X);
    if (std::abs(r.Psi - 1.0) < opt.psi_gap) throw singular_point("congruence condition violated: <X, N> = 1");
    r.R = (1.0 - r.Lambda) / (2.0 * (r.Psi - 1.0));
    const double d1 = 1.0 - r.k1 * r.R, d2 = 1.0 - r.k2 * r.R;
    if (std::abs(d1) < opt.spherical_pole || std::abs(d2) < opt.spherical_pole)
        throw singular_point("spherical radial curvature pole: 1 - k R = 0");
    r.s1 = (1.0 + r.k1) / d1;
    r.s2 = (1.0 + r.k2) / d2;
    r.H_S = 0.5 * (r.s1 + r.s2);
    r.trV = fr.V.trace();
    r.detV = fr.V.det();
    return r;
}

} // namespace hsurf
