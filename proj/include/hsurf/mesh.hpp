#pragma once

/**
 * @file mesh.hpp
 * @brief Grid sampling of surfaces and text export (OBJ meshes, CSV profiles).
 */

#include "rotational.hpp"

#include <array>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace hsurf {

enum class MeshTarget { X, Eta, N, Sphere };

inline std::string to_string(MeshTarget t)
{
    switch (t) {
    case MeshTarget::X: return "X";
    case MeshTarget::Eta: return "eta";
    case MeshTarget::N: return "N";
    case MeshTarget::Sphere: return "sphere";
    }
    return "";
}

inline MeshTarget parse_mesh_target(const std::string &s)
{
    if (s == "X" || s == "x") return MeshTarget::X;
    if (s == "eta") return MeshTarget::Eta;
    if (s == "N" || s == "n") return MeshTarget::N;
    if (s == "sphere") return MeshTarget::Sphere;
    throw std::invalid_argument("unknown target '" + s + "' (expected x, eta, N or sphere)");
}

struct GridSpec {
    double u_min = -2.0, u_max = 2.0;
    double v_min = -M_PI, v_max = M_PI;
    std::size_t nu = 129, nv = 129;
    MeshTarget target = MeshTarget::X;

    void validate() const
    {
        if (nu < 2 || nv < 2) throw std::invalid_argument("grid too small");
        if (!(u_min < u_max) || !(v_min < v_max)) throw std::invalid_argument("grid bounds must satisfy min < max");
    }
    double u(std::size_t i) const { return u_min + (u_max - u_min) * static_cast<double>(i) / static_cast<double>(nu - 1); }
    double v(std::size_t j) const { return v_min + (v_max - v_min) * static_cast<double>(j) / static_cast<double>(nv - 1); }
};

/// Vertex i * nv + j sits at (u_i, v_j).
struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals; ///< empty, or one per vertex
    std::vector<std::array<std::size_t, 4>> quads;
    std::vector<bool> singular_mask;

    std::size_t masked_count() const { return static_cast<std::size_t>(std::count(singular_mask.begin(), singular_mask.end(), true)); }
};

struct MeshOptions {
    GeometryOptions geometry{};
    double det_v_tol = 1e-10; ///< |det V| at or below this masks an eta vertex
};

namespace detail {

struct MeshVertex {
    Vec3 position{}, normal{};
    bool singular = true;
};

inline MeshVertex mesh_vertex(const Field &field, double c, Complex z, MeshTarget target, const MeshOptions &opt)
{
    MeshVertex out;
    SurfaceFrame fr;
    try {
        fr = frame_at(z, field, c, opt.geometry);
    }
    catch (const std::runtime_error &) {
        return out;
    }
    switch (target) {
    case MeshTarget::Sphere:
        out.position = fr.Y;
        out.normal = fr.Y;
        out.singular = false;
        break;
    case MeshTarget::Eta:
        out.position = fr.eta;
        out.normal = fr.Y;
        out.singular = !(std::abs(fr.V.det()) > opt.det_v_tol);
        break;
    case MeshTarget::N:
        out.position = fr.N;
        out.singular = fr.degenerate();
        break;
    case MeshTarget::X:
        out.position = fr.X;
        out.normal = fr.N;
        out.singular = fr.degenerate() || !(std::abs(fr.P) >= opt.geometry.p_relative * fr.S * fr.S);
        break;
    }
    const bool finite = std::isfinite(out.position.x) && std::isfinite(out.position.y) && std::isfinite(out.position.z);
    if (!finite) {
        out.position = {};
        out.singular = true;
    }
    return out;
}

} // namespace detail

/**
 * Samples the target surface on the grid. Singular vertices (S <= eps_S,
 * small |P| for X, small |det V| for eta, or a failed evaluation) are masked.
 * Normals are N for X and Y for eta and the sphere; the N target has none.
 */
inline SurfaceMesh sample_surface(const Field &field, double c, const GridSpec &grid, const MeshOptions &opt = {})
{
    grid.validate();
    if (c == 0.0) throw std::invalid_argument("the constant c must be nonzero");
    SurfaceMesh mesh;
    const std::size_t n = grid.nu * grid.nv;
    mesh.vertices.resize(n);
    mesh.singular_mask.resize(n);
    const bool with_normals = grid.target != MeshTarget::N;
    if (with_normals) mesh.normals.resize(n);
    for (std::size_t i = 0; i < grid.nu; ++i) {
        for (std::size_t j = 0; j < grid.nv; ++j) {
            const std::size_t k = i * grid.nv + j;
            const auto vx = detail::mesh_vertex(field, c, Complex(grid.u(i), grid.v(j)), grid.target, opt);
            mesh.vertices[k] = vx.position;
            mesh.singular_mask[k] = vx.singular;
            if (with_normals) mesh.normals[k] = vx.normal;
        }
    }
    if (mesh.masked_count() == n) throw singular_point("all vertices singular");
    mesh.quads.reserve((grid.nu - 1) * (grid.nv - 1));
    for (std::size_t i = 0; i + 1 < grid.nu; ++i)
        for (std::size_t j = 0; j + 1 < grid.nv; ++j)
            mesh.quads.push_back({i * grid.nv + j, (i + 1) * grid.nv + j, (i + 1) * grid.nv + j + 1, i * grid.nv + j + 1});
    return mesh;
}

inline SurfaceMesh sample_surface(const RotParams &params, const GridSpec &grid, const MeshOptions &opt = {})
{
    return sample_surface(rotational_field(params), rot_c(params), grid, opt);
}

namespace detail {

inline void append_g9(std::string &out, double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    out += buf;
}

inline std::size_t write_all(std::ostream &sink, const std::string &text)
{
    sink.write(text.data(), static_cast<std::streamsize>(text.size()));
    sink.flush();
    if (!sink) throw std::runtime_error("write failure");
    return text.size();
}

} // namespace detail

/**
 * Writes unmasked vertices (`v`, plus `vn` when the mesh has normals) and the
 * quads whose four corners are all unmasked (`f a//a b//b c//c d//d`, 1-based,
 * indices renumbered over the written vertices). Returns the byte count.
 */
inline std::size_t export_obj(const SurfaceMesh &mesh, std::ostream &sink)
{
    const std::size_t n = mesh.vertices.size();
    if (mesh.singular_mask.size() != n) throw std::invalid_argument("mask size does not match vertex count");
    if (!mesh.normals.empty() && mesh.normals.size() != n) throw std::invalid_argument("normal count does not match vertex count");
    std::vector<std::size_t> index(n, 0);
    std::size_t next = 1;
    for (std::size_t k = 0; k < n; ++k)
        if (!mesh.singular_mask[k]) index[k] = next++;
    if (next == 1) throw std::invalid_argument("empty after masking");

    std::string out;
    auto triple = [&](const char *tag, const Vec3 &p) {
        out += tag;
        for (double x : {p.x, p.y, p.z}) {
            out += ' ';
            detail::append_g9(out, x);
        }
        out += '\n';
    };
    for (std::size_t k = 0; k < n; ++k)
        if (!mesh.singular_mask[k]) triple("v", mesh.vertices[k]);
    if (!mesh.normals.empty())
        for (std::size_t k = 0; k < n; ++k)
            if (!mesh.singular_mask[k]) triple("vn", mesh.normals[k]);
    const bool with_normals = !mesh.normals.empty();
    for (const auto &q : mesh.quads) {
        for (std::size_t k : q)
            if (k >= n) throw std::out_of_range("quad index out of range");
        if (mesh.singular_mask[q[0]] || mesh.singular_mask[q[1]] || mesh.singular_mask[q[2]] || mesh.singular_mask[q[3]])
            continue;
        out += 'f';
        for (std::size_t k : q) {
            const std::string id = std::to_string(index[k]);
            out += ' ';
            out += id;
            out += with_normals ? "//" + id : std::string();
        }
        out += '\n';
    }
    return detail::write_all(sink, out);
}

/// CSV with header u,M,N,M1,N1,P,detV,singular_X,singular_eta. Returns the byte count.
inline std::size_t export_profile_csv(const std::vector<ProfileSample> &samples, std::ostream &sink)
{
    if (samples.empty()) throw std::invalid_argument("no profile samples");
    std::string out = "u,M,N,M1,N1,P,detV,singular_X,singular_eta\n";
    for (const auto &s : samples) {
        for (double x : {s.u, s.M, s.N, s.M1, s.N1, s.P, s.detV}) {
            detail::append_g9(out, x);
            out += ',';
        }
        out += s.singular_X ? '1' : '0';
        out += ',';
        out += s.singular_eta ? '1' : '0';
        out += '\n';
    }
    return detail::write_all(sink, out);
}

} // namespace hsurf
