#pragma once

/**
 * @file verify.hpp
 * @brief Residual evaluators for the identities satisfied by the construction.
 *
 * Each evaluator reduces a per-point residual to a ResidualReport. Points are
 * processed in the order given and the reduction is sequential, so a report
 * is a pure function of its inputs.
 */

#include "geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hsurf {

struct ResidualReport {
    std::string name;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    std::size_t points_checked = 0;
    std::size_t points_skipped_singular = 0;
    double tolerance = 0.0;
    bool pass = false;
    bool domain_misconfigured = false; ///< more than 5% of the samples were skipped; reported, does not change pass
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, double>> metrics; ///< extra numbers (step ratios, fitted factors)

    double metric(const std::string &key) const
    {
        for (const auto &[k, v] : metrics)
            if (k == key) return v;
        throw std::out_of_range("no metric " + key);
    }
};

/// Running max/mean accumulator; `finish` applies the pass rule.
class ResidualAccumulator {
public:
    explicit ResidualAccumulator(std::string name, double tolerance) : name_(std::move(name)), tol_(tolerance) {}

    void add(double residual)
    {
        const double a = std::abs(residual);
        if (!std::isfinite(a)) {
            non_finite_ = true;
        }
        else {
            max_ = std::max(max_, a);
            sum_ += a;
        }
        ++checked_;
    }
    void skip() { ++skipped_; }

    ResidualReport finish(std::optional<std::uint64_t> seed = std::nullopt) const
    {
        ResidualReport r;
        r.name = name_;
        r.max_abs = non_finite_ ? std::numeric_limits<double>::infinity() : max_;
        r.mean_abs = checked_ ? sum_ / static_cast<double>(checked_) : 0.0;
        if (r.mean_abs > r.max_abs) r.mean_abs = r.max_abs;
        r.points_checked = checked_;
        r.points_skipped_singular = skipped_;
        r.tolerance = tol_;
        r.seed = seed;
        const std::size_t total = checked_ + skipped_;
        r.domain_misconfigured = total > 0 && 20 * skipped_ > total;
        r.pass = checked_ > 0 && r.max_abs <= tol_;
        return r;
    }

private:
    std::string name_;
    double tol_;
    double max_ = 0.0, sum_ = 0.0;
    std::size_t checked_ = 0, skipped_ = 0;
    bool non_finite_ = false;
};

// ---------------------------------------------------------------------------
// Sample points
// ---------------------------------------------------------------------------

/// Rectangle or annulus sector in the z-plane from which points are drawn.
struct SampleDomain {
    enum class Shape { Rectangle, Disk } shape = Shape::Disk;
    Complex center{0.0, 0.0};
    double r_min = 0.0, r_max = 1.0; ///< Disk: radii of the annulus (r_min = 0 is a full disk)
    double u_min = -1.0, u_max = 1.0, v_min = -1.0, v_max = 1.0; ///< Rectangle

    static SampleDomain disk(double radius, Complex center = {}) { return {Shape::Disk, center, 0.0, radius}; }
    static SampleDomain annulus(double r_in, double r_out, Complex center = {}) { return {Shape::Disk, center, r_in, r_out}; }
    static SampleDomain rectangle(double u0, double u1, double v0, double v1)
    {
        SampleDomain d;
        d.shape = Shape::Rectangle;
        d.u_min = u0, d.u_max = u1, d.v_min = v0, d.v_max = v1;
        return d;
    }
};

/// `count` points drawn from `domain` with a seeded 64-bit Mersenne twister.
inline std::vector<Complex> sample_points(const SampleDomain &domain, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Complex> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (domain.shape == SampleDomain::Shape::Rectangle) {
            const double u = domain.u_min + (domain.u_max - domain.u_min) * unit(rng);
            const double v = domain.v_min + (domain.v_max - domain.v_min) * unit(rng);
            pts.emplace_back(u, v);
        }
        else {
            const double a2 = domain.r_min * domain.r_min, b2 = domain.r_max * domain.r_max;
            const double r = std::sqrt(a2 + (b2 - a2) * unit(rng));
            const double t = 2.0 * M_PI * unit(rng);
            pts.push_back(domain.center + std::polar(r, t));
        }
    }
    return pts;
}

/// Uniform grid of nu x nv points over a rectangle, u varying slowest.
inline std::vector<Complex> grid_points(double u0, double u1, double v0, double v1, std::size_t nu, std::size_t nv)
{
    if (nu < 2 || nv < 2) throw std::invalid_argument("grid too small");
    std::vector<Complex> pts;
    pts.reserve(nu * nv);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j)
            pts.emplace_back(u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(nu - 1),
                             v0 + (v1 - v0) * static_cast<double>(j) / static_cast<double>(nv - 1));
    return pts;
}

/// Thresholds that keep sample points away from branch points of g and from singular points of X and eta.
struct RegularityOptions {
    double min_abs_dg = 0.05;     ///< |g'| at or above this
    double min_abs_det_v = 1e-3;  ///< det V bounded away from zero ...
    double max_abs_det_v = 1e3;   ///< ... and from infinity
    double min_relative_p = 1e-2; ///< |P| >= min_relative_p * S^2 keeps principal curvatures of X moderate
    GeometryOptions geometry{};
};

/// True when frame_at and curvature_report both succeed at z within the thresholds.
inline bool is_regular_point(const Field &field, double c, Complex z, const RegularityOptions &opt = {})
{
    try {
        if (std::abs(field.g_jet(z).df) < opt.min_abs_dg) return false;
        const SurfaceFrame fr = frame_at(z, field, c, opt.geometry);
        const double d = std::abs(fr.V.det());
        if (d < opt.min_abs_det_v || d > opt.max_abs_det_v) return false;
        if (std::abs(fr.P) < opt.min_relative_p * fr.S * fr.S) return false;
        curvature_report(fr, opt.geometry);
        return true;
    }
    catch (const std::runtime_error &) {
        return false;
    }
}

/**
 * Draws from `domain` with the given seed until `count` regular points are
 * found. Throws when fewer than count turn up in 50 * count draws.
 */
inline std::vector<Complex> regular_points(const Field &field, double c, const SampleDomain &domain, std::size_t count,
                                           std::uint64_t seed, const RegularityOptions &opt = {},
                                           std::size_t *drawn = nullptr)
{
    const std::size_t budget = 50 * count;
    const std::vector<Complex> candidates = sample_points(domain, budget, seed);
    std::vector<Complex> out;
    out.reserve(count);
    std::size_t used = 0;
    for (const Complex &z : candidates) {
        if (out.size() == count) break;
        ++used;
        if (is_regular_point(field, c, z, opt)) out.push_back(z);
    }
    if (drawn) *drawn = used;
    if (out.size() < count) throw singular_point("too few regular points in the sample domain");
    return out;
}

// ---------------------------------------------------------------------------
// Helmholtz equations
// ---------------------------------------------------------------------------

/// Delta h + (8 |g'|^2 / T^2) h with the jet-exact Laplacian.
inline double helmholtz_operator(const Field &field, Complex z)
{
    const Jet2 g = field.g_jet(z);
    const RealJet2 h = field(z);
    const double T = 1.0 + std::norm(g.f);
    return h.laplacian() + 8.0 * std::norm(g.df) / (T * T) * h.val;
}

/// q = (T^2 / (4|g'|^2)) (Delta h + (8|g'|^2/T^2) h), which equals Delta h / L + 2h = tr V.
inline double generalized_helmholtz_inner(const Field &field, Complex z)
{
    const Jet2 g = field.g_jet(z);
    if (g.df == Complex(0.0)) throw domain_error("g' vanishes");
    const double T = 1.0 + std::norm(g.f);
    return T * T / (4.0 * std::norm(g.df)) * helmholtz_operator(field, z);
}

inline ResidualReport helmholtz_residual(const Field &field, const std::vector<Complex> &points, double tolerance = 1e-8,
                                         std::optional<std::uint64_t> seed = std::nullopt)
{
    if (points.empty()) throw std::invalid_argument("empty sample set");
    ResidualAccumulator acc("helmholtz", tolerance);
    for (const Complex &z : points) {
        try {
            if (field.g_jet(z).df == Complex(0.0)) {
                acc.skip();
                continue;
            }
            acc.add(helmholtz_operator(field, z));
        }
        catch (const domain_error &) {
            acc.skip();
        }
    }
    return acc.finish(seed);
}

struct StencilOptions {
    double tolerance = 1e-8;    ///< residual at or below this passes regardless of the ratio
    double ratio_min = 3.5;     ///< second-order band for residual(step) / residual(step/2)
    double ratio_max = 4.5;
};

namespace detail {

template <typename F>
double five_point_laplacian(const F &q, Complex z, double step)
{
    const Complex du(step, 0.0), dv(0.0, step);
    return (q(z + du) + q(z - du) + q(z + dv) + q(z - dv) - 4.0 * q(z)) / (step * step);
}

/// Flat Laplacian of q at each center with step and step/2; pass on small residual or second-order ratio.
template <typename F>
ResidualReport stencil_report(const std::string &name, const F &q, const std::vector<Complex> &centers, double step,
                              const StencilOptions &opt)
{
    if (centers.empty()) throw std::invalid_argument("grid too small");
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    ResidualAccumulator full(name, opt.tolerance), half(name, opt.tolerance);
    for (const Complex &z : centers) {
        try {
            const double a = five_point_laplacian(q, z, step);
            const double b = five_point_laplacian(q, z, 0.5 * step);
            full.add(a);
            half.add(b);
        }
        catch (const domain_error &) {
            full.skip();
            half.skip();
        }
    }
    ResidualReport r = full.finish();
    const ResidualReport rh = half.finish();
    const double ratio = rh.max_abs > 0.0 ? r.max_abs / rh.max_abs : std::numeric_limits<double>::infinity();
    r.metrics = {{"step", step}, {"residual_step", r.max_abs}, {"residual_half_step", rh.max_abs}, {"ratio", ratio}};
    const bool small = r.max_abs <= opt.tolerance && rh.max_abs <= opt.tolerance;
    const bool second_order = ratio >= opt.ratio_min && ratio <= opt.ratio_max;
    r.pass = r.points_checked > 0 && (small || second_order);
    return r;
}

} // namespace detail

/**
 * 5-point flat Laplacian of the generalized Helmholtz inner expression q at
 * each center, at `step` and `step/2`. Passes when the residual is already at
 * tolerance or when it decays at second order (ratio in [3.5, 4.5]).
 */
inline ResidualReport generalized_helmholtz_residual(const Field &field, const std::vector<Complex> &centers, double step,
                                                     const StencilOptions &opt = {})
{
    auto q = [&](Complex z) { return generalized_helmholtz_inner(field, z); };
    return detail::stencil_report("generalized_helmholtz", q, centers, step, opt);
}

// ---------------------------------------------------------------------------
// Pointwise identities
// ---------------------------------------------------------------------------

struct IdentityTolerances {
    double radius = 1e-9;
    double gap = 1e-9;
    double congruence = 1e-9;
    double support = 1e-10;
    double trv_laplacian = 1e-10;
    double trv_spherical = 1e-9;
    double unit_normal = 1e-10;
};

/**
 * One report per identity:
 *   radius       h + c/(R+1) = 0
 *   gap          |X - N|^2 = 4c^2/S
 *   congruence   X + R N = (1+R) Y
 *   support      <eta, Y> = h
 *   trV_laplace  tr V = Delta h / L + 2h
 *   trV_spherical tr V = (2c/(Psi-1)) H_S
 *   unit_normal  |N| = 1
 *   psi_ne_1     Psi != 1 (residual 1 on violation)
 * Degenerate or singular frames are counted as skipped.
 */
inline std::vector<ResidualReport> identity_suite(const std::vector<SurfaceFrame> &frames, const IdentityTolerances &tol = {},
                                                  const GeometryOptions &gopt = {})
{
    ResidualAccumulator radius("radius", tol.radius), gap("gap", tol.gap), congruence("congruence", tol.congruence),
        support("support", tol.support), trv_lap("trV_laplace", tol.trv_laplacian),
        trv_sph("trV_spherical", tol.trv_spherical), unit("unit_normal", tol.unit_normal), psi("psi_ne_1", 0.0);
    std::vector<ResidualAccumulator *> all = {&radius, &gap, &congruence, &support, &trv_lap, &trv_sph, &unit, &psi};
    for (const SurfaceFrame &fr : frames) {
        std::optional<CurvatureReport> cr;
        try {
            cr = curvature_report(fr, gopt);
        }
        catch (const std::runtime_error &) {
        }
        if (!cr) {
            for (auto *a : all) a->skip();
            continue;
        }
        const double h = fr.h.val, c = fr.c;
        radius.add(h + c / (cr->R + 1.0));
        const Vec3 d = fr.X - fr.N;
        gap.add(dot(d, d) - 4.0 * c * c / fr.S);
        congruence.add(max_abs(fr.X + cr->R * fr.N - (1.0 + cr->R) * fr.Y));
        support.add(dot(fr.eta, fr.Y) - h);
        trv_lap.add(cr->trV - (fr.h.laplacian() / fr.L + 2.0 * h));
        trv_sph.add(cr->trV - 2.0 * c / (cr->Psi - 1.0) * cr->H_S);
        unit.add(norm(fr.N) - 1.0);
        psi.add(std::abs(cr->Psi - 1.0) < gopt.psi_gap ? 1.0 : 0.0);
    }
    std::vector<ResidualReport> out;
    for (auto *a : all) out.push_back(a->finish());
    return out;
}

inline std::vector<SurfaceFrame> frames_at(const Field &field, double c, const std::vector<Complex> &points,
                                           const GeometryOptions &opt = {})
{
    std::vector<SurfaceFrame> frames;
    frames.reserve(points.size());
    for (const Complex &z : points) {
        try {
            frames.push_back(frame_at(z, field, c, opt));
        }
        catch (const domain_error &) {
        }
    }
    return frames;
}

// ---------------------------------------------------------------------------
// Finite-difference checks on the immersions
// ---------------------------------------------------------------------------

struct FiniteDifferenceOptions {
    double step = 1e-4;         ///< first-derivative step
    double second_step = 1e-3;  ///< step for second derivatives of eta
    double tolerance = 1e-5;
};

namespace detail {

/// Fourth-order central difference (five-point stencil) along dir.
template <typename F>
Vec3 central(const F &f, Complex z, Complex dir, double step)
{
    const Vec3 d1 = f(z + step * dir) - f(z - step * dir);
    const Vec3 d2 = f(z + 2.0 * step * dir) - f(z - 2.0 * step * dir);
    return (8.0 * d1 - d2) / (12.0 * step);
}

template <typename F>
Vec3 second_central(const F &f, Complex z, Complex d1, Complex d2, double step)
{
    if (d1 == d2) return (f(z + step * d1) - 2.0 * f(z) + f(z - step * d1)) / (step * step);
    return (f(z + step * (d1 + d2)) - f(z + step * (d1 - d2)) - f(z - step * (d1 - d2)) + f(z - step * (d1 + d2)))
           / (4.0 * step * step);
}

struct FundamentalForms {
    Mat2 first, second;
};

/// First and second fundamental forms of eta with respect to the unit normal Y, by central differences.
inline FundamentalForms eta_forms(const Field &field, double c, Complex z, double step)
{
    auto eta = [&](Complex w) { return frame_at(w, field, c).eta; };
    const Complex eu(1.0, 0.0), ev(0.0, 1.0);
    const Vec3 e_u = central(eta, z, eu, step), e_v = central(eta, z, ev, step);
    const Vec3 e_uu = second_central(eta, z, eu, eu, step), e_uv = second_central(eta, z, eu, ev, step),
               e_vv = second_central(eta, z, ev, ev, step);
    const Vec3 Y = frame_at(z, field, c).Y;
    FundamentalForms f;
    f.first = {dot(e_u, e_u), dot(e_u, e_v), dot(e_u, e_v), dot(e_v, e_v)};
    f.second = {dot(e_uu, Y), dot(e_uv, Y), dot(e_uv, Y), dot(e_vv, Y)};
    return f;
}

} // namespace detail

/**
 * N_{,i} = sum_j W_ij X_{,j} with both sides from central differences of N and
 * X. Residual is |lhs - rhs| / max(|lhs|, |rhs|, 1e-300) per direction.
 */
inline ResidualReport weingarten_fd_check(const Field &field, double c, const std::vector<Complex> &points,
                                          const FiniteDifferenceOptions &opt = {}, const GeometryOptions &gopt = {})
{
    ResidualAccumulator acc("weingarten_fd", opt.tolerance);
    for (const Complex &z : points) {
        try {
            const SurfaceFrame fr = frame_at(z, field, c, gopt);
            const CurvatureReport cr = curvature_report(fr, gopt);
            auto X = [&](Complex w) { return frame_at(w, field, c, gopt).X; };
            auto N = [&](Complex w) { return frame_at(w, field, c, gopt).N; };
            const Vec3 Xu = detail::central(X, z, 1.0, opt.step), Xv = detail::central(X, z, Complex(0, 1), opt.step);
            const Vec3 Nu = detail::central(N, z, 1.0, opt.step), Nv = detail::central(N, z, Complex(0, 1), opt.step);
            const Vec3 rhs_u = cr.W.a11 * Xu + cr.W.a12 * Xv, rhs_v = cr.W.a21 * Xu + cr.W.a22 * Xv;
            const double ru = norm(Nu - rhs_u) / std::max({norm(Nu), norm(rhs_u), 1e-300});
            const double rv = norm(Nv - rhs_v) / std::max({norm(Nv), norm(rhs_v), 1e-300});
            acc.add(std::max(ru, rv));
        }
        catch (const std::runtime_error &) {
            acc.skip();
        }
    }
    return acc.finish();
}

/// eta_{,j} = sum_k V_jk Y_{,k}, eta differentiated by central differences; error relative to max(1, |eta_{,j}|).
inline ResidualReport eta_derivative_check(const Field &field, double c, const std::vector<Complex> &points,
                                           const FiniteDifferenceOptions &opt = {})
{
    ResidualAccumulator acc("eta_derivative", 1e-6);
    for (const Complex &z : points) {
        try {
            const SurfaceFrame fr = frame_at(z, field, c);
            auto eta = [&](Complex w) { return frame_at(w, field, c).eta; };
            const Vec3 eu = detail::central(eta, z, 1.0, opt.step), ev = detail::central(eta, z, Complex(0, 1), opt.step);
            const Vec3 ru = eu - (fr.V.a11 * fr.Y_u + fr.V.a12 * fr.Y_v);
            const Vec3 rv = ev - (fr.V.a21 * fr.Y_u + fr.V.a22 * fr.Y_v);
            acc.add(std::max(norm(ru) / std::max(1.0, norm(eu)), norm(rv) / std::max(1.0, norm(ev))));
        }
        catch (const domain_error &) {
            acc.skip();
        }
    }
    return acc.finish();
}

/// <eta_u, Y> and <eta_v, Y> by central differences, relative to max(1, |eta_{,j}|): Y is normal to eta.
inline ResidualReport eta_tangency_check(const Field &field, double c, const std::vector<Complex> &points,
                                         const FiniteDifferenceOptions &opt = {})
{
    ResidualAccumulator acc("eta_tangency", 1e-6);
    for (const Complex &z : points) {
        try {
            const SurfaceFrame fr = frame_at(z, field, c);
            auto eta = [&](Complex w) { return frame_at(w, field, c).eta; };
            const Vec3 eu = detail::central(eta, z, 1.0, opt.step), ev = detail::central(eta, z, Complex(0, 1), opt.step);
            acc.add(std::max(std::abs(dot(eu, fr.Y)) / std::max(1.0, norm(eu)), std::abs(dot(ev, fr.Y)) / std::max(1.0, norm(ev))));
        }
        catch (const domain_error &) {
            acc.skip();
        }
    }
    return acc.finish();
}

/**
 * sigma = |dX + R dN|^2, the quadratic form I + 2R II + R^2 III with II taken
 * as <dX, dN>, from central differences of X and N. The residual is the
 * departure from proportionality to the sphere metric L * identity,
 * (|sigma12| + |sigma11 - sigma22|) / (sigma11 + sigma22). Metrics record the
 * fitted factor lambda = (sigma11 + sigma22)/(2L) as its mean relative
 * distance to (1+R)^2 and to 1+R^2.
 */
inline ResidualReport conformal_form_check(const Field &field, double c, const std::vector<Complex> &points,
                                           const FiniteDifferenceOptions &opt = {})
{
    ResidualAccumulator acc("conformal_form", opt.tolerance);
    double dist_sq = 0.0, dist_plus = 0.0;
    std::size_t n = 0;
    for (const Complex &z : points) {
        try {
            const SurfaceFrame fr = frame_at(z, field, c);
            const CurvatureReport cr = curvature_report(fr);
            auto X = [&](Complex w) { return frame_at(w, field, c).X; };
            auto N = [&](Complex w) { return frame_at(w, field, c).N; };
            const Vec3 Xu = detail::central(X, z, 1.0, opt.step), Xv = detail::central(X, z, Complex(0, 1), opt.step);
            const Vec3 Nu = detail::central(N, z, 1.0, opt.step), Nv = detail::central(N, z, Complex(0, 1), opt.step);
            const double R = cr.R;
            const Vec3 Du = Xu + R * Nu, Dv = Xv + R * Nv;
            const double s11 = dot(Du, Du), s12 = dot(Du, Dv), s22 = dot(Dv, Dv);
            const double tr = s11 + s22;
            acc.add((std::abs(s12) + std::abs(s11 - s22)) / tr);
            const double lambda = tr / (2.0 * fr.L);
            dist_sq += std::abs(lambda - (1.0 + R) * (1.0 + R)) / std::abs(lambda);
            dist_plus += std::abs(lambda - (1.0 + R * R)) / std::abs(lambda);
            ++n;
        }
        catch (const std::runtime_error &) {
            acc.skip();
        }
    }
    ResidualReport r = acc.finish();
    if (n > 0)
        r.metrics = {{"lambda_vs_one_plus_R_squared", dist_sq / static_cast<double>(n)},
                     {"lambda_vs_one_plus_R2", dist_plus / static_cast<double>(n)}};
    return r;
}

// ---------------------------------------------------------------------------
// Minimal and Laguerre minimal companions
// ---------------------------------------------------------------------------

struct CompanionOptions {
    double trv_tolerance = 1e-8;
    double det_v_min = 1e-8;      ///< points with |det V| below this are not regular points of eta
    FiniteDifferenceOptions fd{1e-4, 1e-3, 1e-5};
    StencilOptions stencil{};
};

namespace detail {

/// Richardson combination of a second-order estimate at step and step/2.
template <typename F>
double richardson(const F &estimate, double step)
{
    return (4.0 * estimate(0.5 * step) - estimate(step)) / 3.0;
}

} // namespace detail

/// Mean curvature of eta from finite-difference fundamental forms (Richardson-extrapolated in the step).
inline double eta_fd_mean_curvature(const Field &field, double c, Complex z, double step)
{
    return detail::richardson(
        [&](double s) {
            const auto f = detail::eta_forms(field, c, z, s);
            return 0.5 * (f.first.inverse() * f.second).trace();
        },
        step);
}

/// -2 H/K of eta from finite-difference fundamental forms; equals tr V.
inline double eta_fd_h_over_k(const Field &field, double c, Complex z, double step)
{
    return detail::richardson(
        [&](double s) {
            const auto f = detail::eta_forms(field, c, z, s);
            // -2H/K = -tr(I^-1 II) / det(I^-1 II)
            const Mat2 A = f.first.inverse() * f.second;
            return -A.trace() / A.det();
        },
        step);
}

/// max |tr V| and, independently, max |H| of eta from finite differences.
inline std::vector<ResidualReport> minimality_residual(const Field &field, double c, const std::vector<Complex> &points,
                                                       const CompanionOptions &opt = {})
{
    ResidualAccumulator trv("minimal_trV", opt.trv_tolerance), fd("minimal_fd_mean_curvature", opt.fd.tolerance);
    for (const Complex &z : points) {
        try {
            const SurfaceFrame fr = frame_at(z, field, c);
            if (std::abs(fr.V.det()) < opt.det_v_min) {
                trv.skip();
                fd.skip();
                continue;
            }
            trv.add(fr.V.trace());
            fd.add(eta_fd_mean_curvature(field, c, z, opt.fd.second_step));
        }
        catch (const std::runtime_error &) {
            trv.skip();
            fd.skip();
        }
    }
    if (trv.finish().points_checked == 0) throw singular_point("det V vanishes at every sample point");
    return {trv.finish(), fd.finish()};
}

/**
 * Flat Laplacian of tr V at step and step/2 (second-order convergence or
 * residual at tolerance), plus the pointwise finite-difference check
 * -2 H/K of eta = tr V, relative to max(1, |tr V|).
 */
inline std::vector<ResidualReport> laguerre_residual(const Field &field, double c, const std::vector<Complex> &centers,
                                                     double step, const CompanionOptions &opt = {})
{
    std::vector<Complex> regular;
    for (const Complex &z : centers) {
        try {
            if (std::abs(frame_at(z, field, c).V.det()) >= opt.det_v_min) regular.push_back(z);
        }
        catch (const domain_error &) {
        }
    }
    if (regular.empty()) throw singular_point("det V vanishes at every sample point");
    auto trv = [&](Complex z) { return frame_at(z, field, c).V.trace(); };
    ResidualReport lap = detail::stencil_report("laguerre_trV", trv, regular, step, opt.stencil);
    lap.points_skipped_singular += centers.size() - regular.size();

    ResidualAccumulator fd("laguerre_fd_h_over_k", opt.fd.tolerance);
    for (const Complex &z : regular) {
        try {
            const double t = trv(z);
            fd.add((eta_fd_h_over_k(field, c, z, opt.fd.second_step) - t) / std::max(1.0, std::abs(t)));
        }
        catch (const std::runtime_error &) {
            fd.skip();
        }
    }
    return {lap, fd.finish()};
}

// ---------------------------------------------------------------------------
// Full suite
// ---------------------------------------------------------------------------

struct SuiteOptions {
    SampleDomain domain = SampleDomain::rectangle(-2.0, 2.0, -M_PI, M_PI);
    std::size_t samples = 200;
    std::size_t stencil_centers = 20;
    double step = 1e-2;
    std::uint64_t seed = 42;
    RegularityOptions regularity{};
    IdentityTolerances identities{};
    CompanionOptions companion{};
};

struct SuiteResult {
    std::vector<ResidualReport> reports;
    std::size_t candidates_drawn = 0;  ///< random points drawn to obtain `samples` regular ones
    std::size_t samples = 0;

    bool pass() const
    {
        return std::all_of(reports.begin(), reports.end(), [](const ResidualReport &r) { return r.pass; });
    }
};

/**
 * Every check that applies to the surface class of `field`. Points are the
 * first `samples` regular points drawn with `seed`; stencil centers use seed + 1.
 * H1 fields get the Helmholtz and minimality checks, H2 fields the Laguerre ones.
 */
inline SuiteResult verify_suite(const Field &field, double c, const SuiteOptions &opt = {})
{
    SuiteResult out;
    out.samples = opt.samples;
    const auto pts = regular_points(field, c, opt.domain, opt.samples, opt.seed, opt.regularity, &out.candidates_drawn);
    const auto centers = regular_points(field, c, opt.domain, opt.stencil_centers, opt.seed + 1, opt.regularity);
    auto &r = out.reports;
    const bool h1 = field.surface_class() == SurfaceClass::H1;
    if (h1) r.push_back(helmholtz_residual(field, pts));
    r.push_back(generalized_helmholtz_residual(field, centers, opt.step, opt.companion.stencil));
    for (auto &x : identity_suite(frames_at(field, c, pts, opt.regularity.geometry), opt.identities, opt.regularity.geometry))
        r.push_back(std::move(x));
    r.push_back(weingarten_fd_check(field, c, pts, opt.companion.fd, opt.regularity.geometry));
    r.push_back(eta_derivative_check(field, c, pts, opt.companion.fd));
    r.push_back(eta_tangency_check(field, c, pts, opt.companion.fd));
    r.push_back(conformal_form_check(field, c, pts, opt.companion.fd));
    const auto companion = h1 ? minimality_residual(field, c, pts, opt.companion)
                              : laguerre_residual(field, c, centers, opt.step, opt.companion);
    for (const auto &x : companion) r.push_back(x);
    for (auto &x : r) x.seed = opt.seed;
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

} // namespace detail

/// Aligned plain-text table, one row per report.
inline std::string format_table(const std::vector<ResidualReport> &reports)
{
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %14s %14s %14s %8s %8s  %s\n", "check", "max_abs", "mean_abs", "tolerance",
                  "checked", "skipped", "result");
    os << line;
    for (const auto &r : reports) {
        std::snprintf(line, sizeof line, "%-28s %14s %14s %14s %8zu %8zu  %s\n", r.name.c_str(), detail::sci(r.max_abs).c_str(),
                      detail::sci(r.mean_abs).c_str(), detail::sci(r.tolerance).c_str(), r.points_checked,
                      r.points_skipped_singular, r.pass ? "PASS" : (r.domain_misconfigured ? "FAIL (domain)" : "FAIL"));
        os << line;
    }
    return os.str();
}

/// Machine-readable block: one `name.metric=value` line per metric.
inline std::string format_key_values(const std::vector<ResidualReport> &reports)
{
    std::ostringstream os;
    for (const auto &r : reports) {
        os << r.name << ".max_abs=" << detail::sci(r.max_abs) << '\n';
        os << r.name << ".mean_abs=" << detail::sci(r.mean_abs) << '\n';
        os << r.name << ".tolerance=" << detail::sci(r.tolerance) << '\n';
        os << r.name << ".points_checked=" << r.points_checked << '\n';
        os << r.name << ".points_skipped_singular=" << r.points_skipped_singular << '\n';
        if (r.seed) os << r.name << ".seed=" << *r.seed << '\n';
        for (const auto &[k, v] : r.metrics) os << r.name << '.' << k << '=' << detail::sci(v) << '\n';
        os << r.name << ".pass=" << (r.pass ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace hsurf
