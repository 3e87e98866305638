#pragma once

/**
 * @file rotational.hpp
 * @brief Rotational H1 / H2 families: g = e^z with a radial field h(u).
 *
 * Two routes are provided for the profile curves: the closed forms
 * (rot_h1_profile / rot_h2_profile) and the generic pipeline of
 * geometry.hpp evaluated at v = 0 (generic_profile). The generic pipeline is
 * the reference; the closed forms are regression-checked against it.
 */

#include "geometry.hpp"

#include <algorithm>
#include <random>
#include <variant>

namespace hsurf {

/// h = a1 - (a2 + a1 (u - 1)) tanh u
struct RotH1Params {
    double a1 = 1.0, a2 = 1.0, c = 1.0;
};

/// h = (a2 + c1 u + e^{2u} (a3 + c2 u)) / (1 + e^{2u})
struct RotH2Params {
    double a2 = 1.0, a3 = 1.0, c1 = 0.0, c2 = 0.0, c = 1.0;
};

using RotParams = std::variant<RotH1Params, RotH2Params>;

inline double rot_c(const RotParams &p)
{
    return std::visit([](const auto &q) { return q.c; }, p);
}

inline void validate(const RotH1Params &p)
{
    if (p.c == 0.0) throw std::invalid_argument("the constant c must be nonzero");
    if (p.a1 == 0.0 && p.a2 == 0.0) throw std::invalid_argument("a1 and a2 cannot both vanish");
}

inline void validate(const RotH2Params &p)
{
    if (p.c == 0.0) throw std::invalid_argument("the constant c must be nonzero");
}

using RealTaylor2 = TaylorJet<double, 2>;

inline RealTaylor2 rot_h_taylor(const RotH1Params &p, double u)
{
    const auto x = RealTaylor2::variable(u);
    return RealTaylor2(p.a1) - (RealTaylor2(p.a2) + p.a1 * (x - RealTaylor2(1.0))) * hsurf::tanh(x);
}

inline RealTaylor2 rot_h_taylor(const RotH2Params &p, double u)
{
    const auto x = RealTaylor2::variable(u);
    const auto e2 = hsurf::exp(2.0 * x);
    return (RealTaylor2(p.a2) + p.c1 * x + e2 * (RealTaylor2(p.a3) + p.c2 * x)) / (RealTaylor2(1.0) + e2);
}

/// Radial h as a field jet: v-derivatives vanish identically.
inline RealJet2 rot_h_value(const RotParams &params, double u)
{
    const RealTaylor2 t = std::visit([u](const auto &p) { return rot_h_taylor(p, u); }, params);
    RealJet2 j;
    j.val = t.derivative(0);
    j.g1 = t.derivative(1);
    j.h11 = t.derivative(2);
    return j;
}

inline Field rotational_field(const RotParams &params)
{
    std::visit([](const auto &p) { validate(p); }, params);
    const auto cls = std::holds_alternative<RotH1Params>(params) ? SurfaceClass::H1 : SurfaceClass::H2;
    std::string desc;
    if (const auto *p = std::get_if<RotH1Params>(&params))
        desc = "rot-h1 a1=" + detail::format_real(p->a1) + " a2=" + detail::format_real(p->a2);
    else {
        const auto &q = std::get<RotH2Params>(params);
        desc = "rot-h2 a2=" + detail::format_real(q.a2) + " a3=" + detail::format_real(q.a3)
               + " c1=" + detail::format_real(q.c1) + " c2=" + detail::format_real(q.c2);
    }
    return Field(parse_expr("e^z"), [params](Complex z) { return rot_h_value(params, z.real()); }, cls, desc);
}

struct ProfileSample {
    double u = 0.0;
    double M = 0.0, N = 0.0;   ///< profile of X
    double M1 = 0.0, N1 = 0.0; ///< profile of eta
    double P = 0.0;
    double detV = 0.0;
    bool singular_X = false;
    bool singular_eta = false;
};

struct ProfileOptions {
    GeometryOptions geometry{};
    double det_v_tol = 1e-10;        ///< |det V| at or below this marks eta singular
    double denominator_tol = 1e-300; ///< closed-form denominators below this are poles
};

namespace detail {

inline void fill_regularity(const RotParams &params, double u, ProfileSample &s, const ProfileOptions &opt)
{
    const SurfaceFrame fr = frame_at(Complex(u, 0.0), rotational_field(params), rot_c(params), opt.geometry);
    s.P = fr.P;
    s.detV = fr.V.det();
    s.singular_X = fr.degenerate() || std::abs(fr.P) < opt.geometry.p_relative * fr.S * fr.S;
    s.singular_eta = std::abs(s.detV) <= opt.det_v_tol;
}

} // namespace detail

/// Profile from the generic construction: X(u, 0) = (M, 0, N), eta(u, 0) = (M1, 0, N1).
inline ProfileSample generic_profile(const RotParams &params, double u, const ProfileOptions &opt = {})
{
    const SurfaceFrame fr = frame_at(Complex(u, 0.0), rotational_field(params), rot_c(params), opt.geometry);
    ProfileSample s;
    s.u = u;
    s.M = fr.X.x;
    s.N = fr.X.z;
    s.M1 = fr.eta.x;
    s.N1 = fr.eta.z;
    s.P = fr.P;
    s.detV = fr.V.det();
    s.singular_X = fr.degenerate() || std::abs(fr.P) < opt.geometry.p_relative * fr.S * fr.S;
    s.singular_eta = std::abs(s.detV) <= opt.det_v_tol;
    return s;
}

/// Closed-form profile of the rotational H1 surface and its minimal companion.
inline ProfileSample rot_h1_profile(const RotH1Params &p, double u, const ProfileOptions &opt = {})
{
    validate(p);
    const double a1 = p.a1, a2 = p.a2, c = p.c;
    const double e1 = std::exp(u), e2 = std::exp(2.0 * u), e4 = std::exp(4.0 * u), e6 = std::exp(6.0 * u);
    const double l1 = e4 + 4.0 * e2 * (u - 1.0) - 1.0;
    const double l2 = 1.0 - 2.0 * u + e4 * (2.0 * u - 3.0) + e2 * (2.0 - 8.0 * u + 4.0 * u * u);
    const double p1 = a2 * (e2 - 1.0) - 2.0 * c * (1.0 + e2);
    const double p2 = c * (1.0 + e2) * (u - 1.0) + a2 * (u - e2 * (u - 2.0));
    const double p3 = 1.0 - e6 + e2 * (5.0 - 4.0 * u * u) + e4 * (11.0 - 16.0 * u + 4.0 * u * u);
    const double den = (1.0 + e2)
                       * (4.0 * a2 * a2 * e2 + 8.0 * a1 * a2 * e2 * (u - 1.0)
                          + a1 * a1 * (1.0 + e4 + e2 * (6.0 - 8.0 * u + 4.0 * u * u)));

    ProfileSample s;
    s.u = u;
    s.M = 2.0 * e1 * (4.0 * a2 * a2 * e2 + 2.0 * a2 * a1 * l1 + a1 * (-2.0 * c * (1.0 + e2) * (1.0 + e2) + a1 * l2)) / den;
    s.N = (4.0 * a2 * e2 * p1 - 8.0 * a1 * e2 * p2 + a1 * a1 * p3) / den;
    s.M1 = a1 * (1.0 + e2) / (2.0 * e1);
    s.N1 = a2 + a1 * (u - 1.0);
    detail::fill_regularity(p, u, s, opt);
    if (std::abs(den) <= opt.denominator_tol) s.singular_X = true;
    return s;
}

/// Closed-form profile of the rotational H2 surface and its Laguerre minimal companion.
inline ProfileSample rot_h2_profile(const RotH2Params &p, double u, const ProfileOptions &opt = {})
{
    validate(p);
    const double a2 = p.a2, a3 = p.a3, c1 = p.c1, c2 = p.c2, c = p.c;
    const double e1 = std::exp(u), e2 = std::exp(2.0 * u), e4 = std::exp(4.0 * u);
    const double q1 = c1 * (1.0 - 2.0 * u) + c2 * e2;
    const double q2 = c1 + e2 * (2.0 * a3 + c2 + 2.0 * c2 * u);
    const double q3 = c1 + e2 * (2.0 * a3 + 2.0 * c + c2 + 2.0 * c2 * u);
    const double q4 = e2 * (2.0 * a3 + c2 - c2 * e2 + 2.0 * c2 * u);
    const double q5 = c1 * (1.0 + e2 * (2.0 * u - 1.0));
    const double q6 = 4.0 * a2 * a2 * e2 - 4.0 * a2 * c2 * e4 + c1 * c1 * (1.0 + e2 * (1.0 - 2.0 * u) * (1.0 - 2.0 * u));
    const double q7 = -2.0 * a3 + a2 * (2.0 - 4.0 * u) + c2 * (-1.0 - 2.0 * u + e2 * (2.0 * u - 1.0));
    const double q8 = 4.0 * a3 * a3 + 4.0 * a3 * (c2 + 2.0 * c2 * u) + c2 * c2 * (e2 + (1.0 + 2.0 * u) * (1.0 + 2.0 * u));
    const double r1 = 2.0 * a3 + 4.0 * c + c2 - c2 * e2 + a2 * (2.0 - 4.0 * u) - 4.0 * c * u + 2.0 * c2 * u + 2.0 * c2 * e2 * u;
    const double r2 = -4.0 * a2 * a2 + a2 * (4.0 * c2 * e2 - 8.0 * c) + e2 * (4.0 * a3 * a3 + 4.0 * a3 * (2.0 * c + c2 + 2.0 * c2 * u))
                      + c2 * (8.0 * c * (u + 1.0) + c2 * ((1.0 + 2.0 * u) * (1.0 + 2.0 * u) - e2));
    const double r3 = q6, r4 = q7, r5 = q8;
    const double den_m = q6 - 2.0 * c1 * e2 * q7 + e4 * q8;
    const double den_n = r3 - 2.0 * c1 * e2 * r4 + e4 * r5;

    ProfileSample s;
    s.u = u;
    s.M = 2.0 * e1 * (q1 * q2 - 2.0 * a2 * q3 - 2.0 * c * (q4 + q5)) / den_m;
    s.N = (c1 * c1 * (1.0 - e2 * (1.0 - 2.0 * u) * (1.0 - 2.0 * u)) + 2.0 * c1 * e2 * r1 + e2 * r2) / den_n;
    s.M1 = (e2 * (2.0 * a2 + 2.0 * a3 + c2 - c2 * e2 + 2.0 * c2 * u) + c1 * (1.0 + e2 * (2.0 * u - 1.0))) / (2.0 * e1 * (1.0 + e2));
    s.N1 = (a2 + c1 * (u - 1.0) - e2 * (a3 + c2 + c2 * u)) / (1.0 + e2);
    detail::fill_regularity(p, u, s, opt);
    if (std::abs(den_m) <= opt.denominator_tol || std::abs(den_n) <= opt.denominator_tol) s.singular_X = true;
    return s;
}

inline ProfileSample closed_form_profile(const RotParams &params, double u, const ProfileOptions &opt = {})
{
    if (const auto *p = std::get_if<RotH1Params>(&params)) return rot_h1_profile(*p, u, opt);
    return rot_h2_profile(std::get<RotH2Params>(params), u, opt);
}

/// Uniform samples u_0 = lo, ..., u_{n-1} = hi.
inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n < 2) throw std::invalid_argument("need at least two samples");
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

// ---------------------------------------------------------------------------
// Singularities
// ---------------------------------------------------------------------------

enum class ProfileTarget { X, Eta };
enum class SingularityKind { Isolated, Circle };

inline std::string to_string(ProfileTarget t) { return t == ProfileTarget::X ? "X" : "eta"; }
inline std::string to_string(SingularityKind k) { return k == SingularityKind::Isolated ? "isolated" : "circle"; }

struct Singularity {
    ProfileTarget target;
    double u;
    SingularityKind kind;
    double radius; ///< |M| (or |M1|) at the root: distance of the singular circle from the axis
};

struct ScanOptions {
    double root_tol = 1e-10;   ///< bisection stops when the bracket is this narrow
    double axis_tol = 1e-8;    ///< |M| at the root below this means the profile meets the axis
    double near_zero = 1e-10;  ///< tangential zeros: local minima of |f| below this count as roots
    ProfileOptions profile{};
};

namespace detail {

template <typename F>
double bisect(const F &f, double lo, double hi, double tol)
{
    double flo = f(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        }
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

template <typename F>
double golden_min_abs(const F &f, double lo, double hi, double tol)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    while (b - a > tol) {
        const double x1 = b - r * (b - a), x2 = a + r * (b - a);
        if (std::abs(f(x1)) < std::abs(f(x2)))
            b = x2;
        else
            a = x1;
    }
    return 0.5 * (a + b);
}

template <typename F>
std::vector<double> locate_roots(const F &f, const std::vector<double> &grid, const ScanOptions &opt)
{
    std::vector<double> vals(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) vals[k] = f(grid[k]);
    std::vector<double> roots;
    auto push = [&](double r) {
        if (roots.empty() || std::abs(roots.back() - r) > 10.0 * opt.root_tol) roots.push_back(r);
    };
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        if (vals[k] == 0.0) {
            push(grid[k]);
            continue;
        }
        if (vals[k + 1] != 0.0 && std::signbit(vals[k]) != std::signbit(vals[k + 1])) {
            push(bisect(f, grid[k], grid[k + 1], opt.root_tol));
            continue;
        }
        if (k > 0 && std::abs(vals[k]) < std::abs(vals[k - 1]) && std::abs(vals[k]) < std::abs(vals[k + 1])
            && std::signbit(vals[k - 1]) == std::signbit(vals[k]) && std::signbit(vals[k]) == std::signbit(vals[k + 1])) {
            const double m = golden_min_abs(f, grid[k - 1], grid[k + 1], opt.root_tol);
            if (std::abs(f(m)) <= opt.near_zero) push(m);
        }
    }
    if (!grid.empty() && vals.back() == 0.0) push(grid.back());
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace detail

/**
 * Zeros of P (singularities of X) and of det V (singularities of eta) on
 * [u_lo, u_hi]. Each zero is refined to opt.root_tol and classified as
 * isolated when the profile touches the rotation axis there.
 */
inline std::vector<Singularity> singularity_scan(const RotParams &params, double u_lo, double u_hi, std::size_t resolution,
                                                 ProfileTarget target, const ScanOptions &opt = {})
{
    if (resolution < 2) throw std::invalid_argument("scan resolution must be at least 2");
    if (!(u_lo < u_hi)) throw std::invalid_argument("scan range must satisfy u_lo < u_hi");
    const Field field = rotational_field(params);
    const double c = rot_c(params);
    auto frame = [&](double u) { return frame_at(Complex(u, 0.0), field, c, opt.profile.geometry); };
    auto value = [&](double u) {
        const SurfaceFrame fr = frame(u);
        return target == ProfileTarget::X ? fr.P : fr.V.det();
    };
    const auto grid = linspace(u_lo, u_hi, resolution);
    std::vector<Singularity> out;
    for (double r : detail::locate_roots(value, grid, opt)) {
        const SurfaceFrame fr = frame(r);
        const double radius = std::abs(target == ProfileTarget::X ? fr.X.x : fr.eta.x);
        out.push_back({target, r, radius <= opt.axis_tol ? SingularityKind::Isolated : SingularityKind::Circle, radius});
    }
    return out;
}

struct SingularityCount {
    std::size_t isolated = 0, circles = 0;
    std::size_t total() const { return isolated + circles; }
};

inline SingularityCount count(const std::vector<Singularity> &s)
{
    SingularityCount c;
    for (const auto &x : s) (x.kind == SingularityKind::Isolated ? c.isolated : c.circles)++;
    return c;
}

// ---------------------------------------------------------------------------
// Sign-class sweep of the Laguerre minimal companions
// ---------------------------------------------------------------------------

enum class SignClass { Positive, Negative, C1Zero, C2Zero, BothZero };

inline std::string to_string(SignClass s)
{
    switch (s) {
    case SignClass::Positive: return "c1*c2>0";
    case SignClass::Negative: return "c1*c2<0";
    case SignClass::C1Zero: return "c1=0,c2!=0";
    case SignClass::C2Zero: return "c1!=0,c2=0";
    case SignClass::BothZero: return "c1=c2=0";
    }
    return "";
}

struct SweepSummary {
    SignClass sign_class;
    std::size_t samples = 0;
    std::size_t complete = 0;          ///< no singularity of det V in range
    std::size_t with_isolated = 0;
    std::size_t with_circle = 0;
    std::size_t with_isolated_and_circle = 0;
};

/**
 * Draws `samples` parameter sets (a2, a3 uniform in [-3, 3], |c1|, |c2| in
 * [0.25, 3] with signs fixed by the class) and records which singularity kinds
 * of eta occur on [u_lo, u_hi].
 */
inline SweepSummary sweep_h2_eta(SignClass cls, std::size_t samples, std::uint64_t seed, double u_lo = -6.0,
                                 double u_hi = 6.0, std::size_t resolution = 1201)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> a(-3.0, 3.0), mag(0.25, 3.0);
    std::bernoulli_distribution coin(0.5);
    SweepSummary sum{cls};
    for (std::size_t k = 0; k < samples; ++k) {
        RotH2Params p;
        p.a2 = a(rng);
        p.a3 = a(rng);
        const double m1 = mag(rng), m2 = mag(rng);
        const bool neg = coin(rng);
        switch (cls) {
        case SignClass::Positive: p.c1 = neg ? -m1 : m1, p.c2 = neg ? -m2 : m2; break;
        case SignClass::Negative: p.c1 = neg ? -m1 : m1, p.c2 = neg ? m2 : -m2; break;
        case SignClass::C1Zero: p.c1 = 0.0, p.c2 = neg ? -m2 : m2; break;
        case SignClass::C2Zero: p.c1 = neg ? -m1 : m1, p.c2 = 0.0; break;
        case SignClass::BothZero: p.c1 = 0.0, p.c2 = 0.0; break;
        }
        const auto found = count(singularity_scan(p, u_lo, u_hi, resolution, ProfileTarget::Eta));
        ++sum.samples;
        if (found.total() == 0) ++sum.complete;
        if (found.isolated > 0) ++sum.with_isolated;
        if (found.circles > 0) ++sum.with_circle;
        if (found.isolated > 0 && found.circles > 0) ++sum.with_isolated_and_circle;
    }
    return sum;
}

} // namespace hsurf
