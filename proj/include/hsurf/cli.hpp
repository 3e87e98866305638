#pragma once

/**
 * @file cli.hpp
 * @brief The hsurf command line: surface, rotational, verify and scan.
 *
 * Exit codes: 0 success, 1 usage or runtime error, 2 a verification failed.
 */

#include "mesh.hpp"
#include "verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace hsurf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerifyFailed = 2;

struct RunConfig {
    std::string command;
    std::string cls = "h1";
    std::string g, A, B, f;
    double c = 1.0, c1 = 0.0;
    double a1 = 1.0, a2 = 1.0, a3 = 1.0, c2 = 0.0;
    std::string z0 = "0", b0 = "0";
    std::vector<double> grid{-2.0, 2.0, -M_PI, M_PI, 129.0, 129.0};
    std::string target = "x";
    std::string out, mesh, report, config;
    std::uint64_t seed = 42;
    std::size_t samples = 200;
    double step = 1e-2;
    std::vector<double> u_range{-4.0, 4.0};
    std::size_t resolution = 2001;
    std::size_t profile_samples = 401;
    std::string profile = "generic";
    bool rotational = false;
};

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline HoloExpr parse_flag(const std::string &text, const std::string &flag)
{
    try {
        return parse_expr(text);
    }
    catch (const parse_error &e) {
        throw usage_error("cannot parse " + flag + ": " + e.what());
    }
}

inline Complex parse_constant(const std::string &text, const std::string &flag)
{
    const HoloExpr e = parse_flag(text, flag);
    if (!e.is_const()) throw usage_error(flag + " must be a constant expression");
    return e.value();
}

inline GridSpec grid_from(const RunConfig &cfg)
{
    GridSpec g;
    g.u_min = cfg.grid[0], g.u_max = cfg.grid[1], g.v_min = cfg.grid[2], g.v_max = cfg.grid[3];
    auto count = [](double x) {
        if (!(x >= 0.0) || x != std::floor(x)) throw usage_error("grid counts must be non-negative integers");
        return static_cast<std::size_t>(x);
    };
    g.nu = count(cfg.grid[4]);
    g.nv = count(cfg.grid[5]);
    g.target = parse_mesh_target(cfg.target);
    g.validate();
    return g;
}

inline SurfaceClass class_from(const std::string &s)
{
    if (s == "h1") return SurfaceClass::H1;
    if (s == "h2") return SurfaceClass::H2;
    throw usage_error("--class must be h1 or h2");
}

inline RotParams rot_params_from(const RunConfig &cfg)
{
    if (class_from(cfg.cls) == SurfaceClass::H1) return RotH1Params{cfg.a1, cfg.a2, cfg.c};
    return RotH2Params{cfg.a2, cfg.a3, cfg.c1, cfg.c2, cfg.c};
}

/// Field for the surface / verify commands: --f selects the propf form, --rotational the rotational families.
inline Field field_from(const RunConfig &cfg)
{
    if (cfg.rotational) return rotational_field(rot_params_from(cfg));
    const SurfaceClass cls = class_from(cfg.cls);
    if (!cfg.f.empty()) {
        if (cls != SurfaceClass::H1) throw usage_error("--f builds an h1 field");
        if (cfg.g.empty()) throw usage_error("--g is required");
        return build_propf_field(parse_flag(cfg.f, "--f"), parse_flag(cfg.g, "--g"));
    }
    if (cfg.g.empty()) throw usage_error("--g is required");
    if (cfg.A.empty()) throw usage_error("--A is required");
    HoloData d;
    d.cls = cls;
    d.g = parse_flag(cfg.g, "--g");
    d.A = parse_flag(cfg.A, "--A");
    d.c = cfg.c;
    d.c1 = cfg.c1;
    if (cls == SurfaceClass::H2) {
        if (cfg.B.empty()) throw usage_error("--B is required for --class h2");
        d.B = parse_flag(cfg.B, "--B");
    }
    d.base.z0 = parse_constant(cfg.z0, "--z0");
    d.base.B0 = parse_constant(cfg.b0, "--b0");
    return make_field(d);
}

inline std::string real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Writes text to `path`, or to `out` when path is "-".
inline void emit(const std::string &path, const std::string &text, std::ostream &out)
{
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    ::hsurf::detail::write_all(file, text);
}

/// Applies `key = value` lines to options not given on the command line.
inline void apply_config(CLI::App &sub, const std::string &path)
{
    std::ifstream in(path);
    if (!in) throw usage_error("cannot read config file " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = CLI::detail::trim_copy(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw usage_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = CLI::detail::trim_copy(text.substr(0, eq));
        const std::string value = CLI::detail::trim_copy(text.substr(eq + 1));
        CLI::Option *opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config")
            throw usage_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        std::vector<std::string> values;
        if (opt->get_type_size_max() == 0) {
            // flag
            values.push_back(value);
        }
        else if (opt->get_expected_max() > 1) {
            std::istringstream ss(value);
            for (std::string tok; ss >> tok;) values.push_back(tok);
        }
        else {
            values.push_back(value);
        }
        try {
            opt->add_result(values);
            opt->run_callback();
        }
        catch (const CLI::Error &e) {
            throw usage_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

} // namespace detail

inline std::string report_header(const RunConfig &cfg, const std::string &subject, const SuiteOptions &opt)
{
    std::ostringstream os;
    os << "# hsurf verify\n";
    os << "# subject: " << subject << '\n';
    os << "# c: " << detail::real(cfg.c) << '\n';
    os << "# seed: " << opt.seed << '\n';
    os << "# samples: " << opt.samples << '\n';
    os << "# stencil_centers: " << opt.stencil_centers << '\n';
    os << "# step: " << detail::real(opt.step) << '\n';
    os << "# domain: [" << detail::real(opt.domain.u_min) << ", " << detail::real(opt.domain.u_max) << "] x ["
       << detail::real(opt.domain.v_min) << ", " << detail::real(opt.domain.v_max) << "]\n";
    os << "# grid: " << cfg.grid[4] << " x " << cfg.grid[5] << '\n';
    return os.str();
}

inline int run_surface(const RunConfig &cfg, std::ostream &out)
{
    if (cfg.out.empty()) throw usage_error("--out is required");
    const Field field = detail::field_from(cfg);
    const GridSpec grid = detail::grid_from(cfg);
    const SurfaceMesh mesh = sample_surface(field, cfg.rotational ? rot_c(detail::rot_params_from(cfg)) : cfg.c, grid);
    std::ostringstream text;
    export_obj(mesh, text);
    detail::emit(cfg.out, text.str(), out);
    return kExitOk;
}

inline int run_rotational(const RunConfig &cfg, std::ostream &out)
{
    if (cfg.out.empty()) throw usage_error("--out is required");
    if (cfg.u_range.size() != 2 || !(cfg.u_range[0] < cfg.u_range[1])) throw usage_error("--u-range needs a < b");
    if (cfg.profile != "generic" && cfg.profile != "closed") throw usage_error("--profile must be generic or closed");
    const RotParams params = detail::rot_params_from(cfg);
    std::visit([](const auto &p) { validate(p); }, params);
    std::vector<ProfileSample> samples;
    for (double u : linspace(cfg.u_range[0], cfg.u_range[1], cfg.profile_samples))
        samples.push_back(cfg.profile == "closed" ? closed_form_profile(params, u) : generic_profile(params, u));
    std::ostringstream csv;
    export_profile_csv(samples, csv);
    detail::emit(cfg.out, csv.str(), out);
    if (!cfg.mesh.empty()) {
        GridSpec grid = detail::grid_from(cfg);
        std::ostringstream obj;
        export_obj(sample_surface(params, grid), obj);
        detail::emit(cfg.mesh, obj.str(), out);
    }
    return kExitOk;
}

inline int run_verify(const RunConfig &cfg, std::ostream &out)
{
    const Field field = detail::field_from(cfg);
    const double c = cfg.rotational ? rot_c(detail::rot_params_from(cfg)) : cfg.c;
    if (c == 0.0) throw usage_error("--c must be nonzero");
    SuiteOptions opt;
    const GridSpec grid = detail::grid_from(cfg);
    opt.domain = SampleDomain::rectangle(grid.u_min, grid.u_max, grid.v_min, grid.v_max);
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.step = cfg.step;
    const SuiteResult result = verify_suite(field, c, opt);
    std::string text = report_header(cfg, field.description(), opt);
    text += "# candidates_drawn: " + std::to_string(result.candidates_drawn) + '\n';
    text += format_table(result.reports);
    text += "\n[key=value]\n";
    text += format_key_values(result.reports);
    text += std::string("result=") + (result.pass() ? "PASS" : "FAIL") + '\n';
    detail::emit(cfg.report.empty() ? "-" : cfg.report, text, out);
    return result.pass() ? kExitOk : kExitVerifyFailed;
}

inline int run_scan(const RunConfig &cfg, std::ostream &out)
{
    if (cfg.u_range.size() != 2 || !(cfg.u_range[0] < cfg.u_range[1])) throw usage_error("--u-range needs a < b");
    const RotParams params = detail::rot_params_from(cfg);
    ProfileTarget target;
    if (cfg.target == "x" || cfg.target == "X")
        target = ProfileTarget::X;
    else if (cfg.target == "eta")
        target = ProfileTarget::Eta;
    else
        throw usage_error("scan --target must be x or eta");
    const auto found = singularity_scan(params, cfg.u_range[0], cfg.u_range[1], cfg.resolution, target);
    std::ostringstream os;
    os << "# target " << to_string(target) << " on [" << detail::real(cfg.u_range[0]) << ", " << detail::real(cfg.u_range[1])
       << "], resolution " << cfg.resolution << '\n';
    for (const auto &s : found) {
        char line[128];
        std::snprintf(line, sizeof line, "u=%.12f kind=%s radius=%.6e\n", s.u, to_string(s.kind).c_str(), s.radius);
        os << line;
    }
    const auto n = count(found);
    os << "isolated=" << n.isolated << " circles=" << n.circles << '\n';
    detail::emit(cfg.out.empty() ? "-" : cfg.out, os.str(), out);
    return kExitOk;
}

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    RunConfig cfg;
    CLI::App app{"Surfaces from holomorphic data: synthesis, verification and rotational profiles", "hsurf"};
    app.require_subcommand(1, 1);

    auto *surface = app.add_subcommand("surface", "sample X, eta, N or the sphere on a grid and write an OBJ mesh");
    auto *rotational = app.add_subcommand("rotational", "write the profile curves of a rotational family as CSV");
    auto *verify = app.add_subcommand("verify", "run the residual checks and write a report");
    auto *scan = app.add_subcommand("scan", "locate singularities of a rotational family along u");

    auto holo = [&](CLI::App *s) {
        s->add_option("--g", cfg.g, "g(z), the Gauss-map parameter");
        s->add_option("--A", cfg.A, "A(z)");
        s->add_option("--B", cfg.B, "B(z), h2 only");
        s->add_option("--f", cfg.f, "f(w): h1 field built from f composed with g");
        s->add_option("--c1", cfg.c1, "real constant of the h1 antiderivative");
        s->add_option("--z0", cfg.z0, "base point of the h1 antiderivative");
        s->add_option("--b0", cfg.b0, "value of B at the base point");
    };
    auto rot = [&](CLI::App *s) {
        s->add_option("--a1", cfg.a1);
        s->add_option("--a2", cfg.a2);
        s->add_option("--a3", cfg.a3);
        s->add_option("--c1", cfg.c1);
        s->add_option("--c2", cfg.c2);
    };
    auto common = [&](CLI::App *s) {
        s->add_option("--class", cfg.cls, "h1 or h2")->check(CLI::IsMember({"h1", "h2"}));
        s->add_option("--c", cfg.c, "nonzero real constant");
        s->add_option("--config", cfg.config, "file of key = value lines; command-line flags take precedence");
    };
    auto grid = [&](CLI::App *s) {
        s->add_option("--grid", cfg.grid, "u_min u_max v_min v_max nu nv")->expected(6);
        s->add_option("--target", cfg.target, "x, eta, N or sphere");
    };

    common(surface);
    holo(surface);
    grid(surface);
    surface->add_option("--out", cfg.out, "OBJ output path, - for stdout");
    surface->add_flag("--rotational", cfg.rotational, "use the rotational family given by --a1 .. --c2");
    surface->add_option("--a1", cfg.a1);
    surface->add_option("--a2", cfg.a2);
    surface->add_option("--a3", cfg.a3);
    surface->add_option("--c2", cfg.c2);

    common(rotational);
    rot(rotational);
    grid(rotational);
    rotational->add_option("--out", cfg.out, "CSV output path, - for stdout");
    rotational->add_option("--mesh", cfg.mesh, "also write an OBJ mesh of --target");
    rotational->add_option("--u-range", cfg.u_range, "profile range a b")->expected(2);
    rotational->add_option("--samples", cfg.profile_samples, "profile samples")->check(CLI::Range(2, 10000000));
    rotational->add_option("--profile", cfg.profile, "generic (construction at v = 0) or closed (closed-form profile)");

    common(verify);
    holo(verify);
    grid(verify);
    verify->add_flag("--rotational", cfg.rotational, "verify the rotational family given by --a1 .. --c2");
    verify->add_option("--a1", cfg.a1);
    verify->add_option("--a2", cfg.a2);
    verify->add_option("--a3", cfg.a3);
    verify->add_option("--c2", cfg.c2);
    verify->add_option("--report", cfg.report, "report path (default stdout)");
    verify->add_option("--seed", cfg.seed, "sampling seed");
    verify->add_option("--samples", cfg.samples, "regular sample points")->check(CLI::Range(1, 100000000));
    verify->add_option("--step", cfg.step, "finite-difference Laplacian step")->check(CLI::PositiveNumber);

    common(scan);
    rot(scan);
    scan->add_option("--u-range", cfg.u_range, "scan range a b")->expected(2);
    scan->add_option("--resolution", cfg.resolution, "grid points before bisection")->check(CLI::Range(2, 100000000));
    scan->add_option("--target", cfg.target, "x or eta");
    scan->add_option("--out", cfg.out, "output path (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        CLI::App *sub = app.get_subcommands().front();
        if (!cfg.config.empty()) detail::apply_config(*sub, cfg.config);
        cfg.command = sub->get_name();
        if (cfg.command == "surface") return run_surface(cfg, out);
        if (cfg.command == "rotational") return run_rotational(cfg, out);
        if (cfg.command == "verify") return run_verify(cfg, out);
        return run_scan(cfg, out);
    }
    catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitError;
    }
    catch (const usage_error &e) {
        err << "error: " << e.what() << '\n';
        for (auto *s : app.get_subcommands()) err << s->help();
        return kExitError;
    }
    catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

} // namespace hsurf::cli
