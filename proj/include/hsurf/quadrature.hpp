#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature of holomorphic integrands along
// straight segments and polylines in the complex plane.

#include "expr.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <queue>
#include <span>
#include <vector>

namespace hsurf {

class integration_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-14;
    int max_subdivisions = 2000;
};

namespace detail {

// Nodes/weights on [-1, 1]; xgk[1,3,5] are the Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;   // parameter interval on [0,1]
    Complex value;
    double error;
    friend bool operator<(const Panel &x, const Panel &y) { return x.error < y.error; }
};

template <typename F>
Panel gk15(const F &f, Complex from, Complex to, double a, double b)
{
    const Complex dir = to - from;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    auto at = [&](double t) { return f(from + dir * t); };
    const Complex fc = at(mid);
    Complex kron = fc * kWgk[7];
    Complex gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const Complex s = at(mid - dx) + at(mid + dx);
        kron += s * kWgk[j];
        if (j % 2 == 1) gauss += s * kWg[j / 2];
    }
    const Complex scale = dir * half;
    return {a, b, kron * scale, std::abs((kron - gauss) * scale)};
}

} // namespace detail

/**
 * Integral of f along the straight segment [from, to].
 *
 * Bisects the panel with the largest error estimate until the total estimate
 * meets max(abs_tol, rel_tol * |I|). Panels are summed in parameter order so
 * the result does not depend on heap internals.
 */
template <typename F>
Complex integrate_segment(const F &f, Complex from, Complex to, const QuadratureOptions &opt = {})
{
    if (from == to) return Complex(0.0);
    std::priority_queue<detail::Panel> heap;
    heap.push(detail::gk15(f, from, to, 0.0, 1.0));
    Complex total = heap.top().value;
    double err = heap.top().error;
    int splits = 0;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (splits++ >= opt.max_subdivisions) throw integration_error("quadrature did not converge within subdivision budget");
        detail::Panel worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        detail::Panel l = detail::gk15(f, from, to, worst.a, m);
        detail::Panel r = detail::gk15(f, from, to, m, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto &x, const auto &y) { return x.a < y.a; });
    Complex sum{};
    for (const auto &p : panels) sum += p.value;
    return sum;
}

/// Integral along the polyline through `vertices` (at least two points).
template <typename F>
Complex integrate_polyline(const F &f, std::span<const Complex> vertices, const QuadratureOptions &opt = {})
{
    if (vertices.size() < 2) throw integration_error("polyline needs at least two vertices");
    Complex sum{};
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) sum += integrate_segment(f, vertices[k], vertices[k + 1], opt);
    return sum;
}

/**
 * F(z) - F(z0) for an antiderivative F of expr, integrated along [z0, z].
 * A pole or branch point on the path surfaces as domain_error (the integrand
 * is non-finite there) or as integration_error (no convergence).
 */
inline Complex antiderivative(const HoloExpr &expr, Complex z0, Complex z, const QuadratureOptions &opt = {})
{
    return integrate_segment([&](Complex w) { return eval(expr, w); }, z0, z, opt);
}

/// Same, routed along a polyline from path.front() to path.back().
inline Complex antiderivative(const HoloExpr &expr, std::span<const Complex> path, const QuadratureOptions &opt = {})
{
    return integrate_polyline([&](Complex w) { return eval(expr, w); }, path, opt);
}

} // namespace hsurf
