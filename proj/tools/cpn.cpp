// command-line front end: ladder, verify, geometry, surface
//
// exit status: 0 all checks pass, 1 a check failed, 2 bad configuration or unreadable seed

#include <cpn/cpn.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <string>

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

struct Options
{
    std::string seed;
    std::string out = "-";
    std::string format = "json";
    std::string rungs = "all";
    std::string point = "0.5+0.25i";
    std::string lambdas = "2,0.5i,-3+1i,0.1";
    std::string points;
    std::string project = "0,1,2";
    double tol = 1e-8;
    double quad_tol = 1e-8;
    int grid = 0;
    bool no_integrals = false;
};

void emit(std::string const& path, std::function<void(std::ostream&)> const& write)
{
    if (path.empty() || path == "-")
    {
        write(std::cout);
        return;
    }
    auto out = std::ofstream{path};
    if (!out) throw cpn::ConfigError{"cannot write '" + path + "'"};
    write(out);
}

void check_format(Options const& o)
{
    if (o.format != "json" && o.format != "csv") throw cpn::ConfigError{"--format must be json or csv"};
}

auto run_ladder(Options const& o) -> int
{
    check_format(o);
    auto const seed = cpn::load_seed(o.seed);
    auto const point = cpn::parse_complex(o.point);
    auto const rungs = cpn::parse_rungs(o.rungs, seed.dim);
    emit(o.out, [&](std::ostream& out) {
        if (o.format == "csv")
            cpn::write_ladder_csv(seed, point, rungs, out);
        else
            out << cpn::ladder_json(seed, point, rungs).dump(2) << '\n';
    });
    return exit_pass;
}

auto run_verify(Options const& o) -> int
{
    check_format(o);
    auto config = cpn::VerifyConfig{};
    config.tol = o.tol;
    config.lambdas = cpn::parse_complex_list(o.lambdas);
    if (!o.points.empty()) config.points = cpn::parse_complex_list(o.points);
    config.integrals = !o.no_integrals;
    config.quad_tol = o.quad_tol;
    auto const report = cpn::run_verify(o.seed, config);
    emit(o.out, [&](std::ostream& out) {
        if (o.format == "csv")
            cpn::write_csv(report, out);
        else
            out << cpn::to_json(report).dump(2) << '\n';
    });
    std::cerr << report.checks.size() - static_cast<std::size_t>(report.failures()) << '/' << report.checks.size()
              << " checks passed\n";
    if (report.seed_error()) return exit_config;
    return report.passed() ? exit_pass : exit_fail;
}

auto run_geometry(Options const& o) -> int
{
    check_format(o);
    auto config = cpn::GeometryConfig{};
    config.integrals = !o.no_integrals;
    config.quad_tol = o.quad_tol;
    config.grid = o.grid > 0 ? o.grid : 8;
    // rungs need N, so the seed is read here as well
    auto seed = cpn::SeedVector{};
    try
    {
        seed = cpn::load_seed(o.seed);
    }
    catch (cpn::Error const& e)
    {
        std::cerr << e.what() << '\n';
        return exit_config;
    }
    config.rungs = cpn::parse_rungs(o.rungs, seed.dim);
    auto const report = cpn::geometry_seed(seed, config);
    emit(o.out, [&](std::ostream& out) {
        if (o.format == "csv")
            cpn::write_csv(report, out);
        else
            out << cpn::to_json(report).dump(2) << '\n';
    });
    return report.ok() ? exit_pass : exit_fail;
}

auto run_surface(Options const& o) -> int
{
    auto const seed = cpn::load_seed(o.seed);
    auto const rungs = cpn::parse_rungs(o.rungs == "all" ? "0" : o.rungs, seed.dim);
    if (rungs.size() != 1) throw cpn::ConfigError{"surface export takes a single rung"};
    auto const parts = cpn::detail::split(o.project, ',');
    if (parts.size() != 3) throw cpn::ConfigError{"--project needs three indices i,j,k"};
    auto projection = std::array<int, 3>{};
    for (std::size_t i = 0; i < 3; ++i)
    {
        auto const v = cpn::detail::to_double(parts[i], o.project);
        if (v != static_cast<int>(v)) throw cpn::ConfigError{"--project indices must be integers"};
        projection[i] = static_cast<int>(v);
    }
    auto const mesh = cpn::build_mesh(seed, rungs.front(), projection, o.grid > 0 ? o.grid : 32);
    emit(o.out, [&](std::ostream& out) { cpn::write_mesh(mesh, out); });
    return exit_pass;
}

} // namespace

int main(int argc, char** argv)
{
    auto app = CLI::App{"CP^{N-1} ladder, soliton surfaces and their invariants"};
    app.require_subcommand(1);
    auto o = Options{};

    auto const common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "seed JSON file")->required();
        cmd->add_option("--out", o.out, "output file, - for stdout");
    };

    auto* ladder = app.add_subcommand("ladder", "projectors and surfaces at one point");
    common(ladder);
    ladder->add_option("--point", o.point, "base point, e.g. 0.5+0.25i");
    ladder->add_option("--rungs", o.rungs, "comma list of rungs or all");
    ladder->add_option("--format", o.format, "json or csv");

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    common(verify);
    verify->add_option("--tol", o.tol, "tolerance for the identity residuals");
    verify->add_option("--lambda", o.lambdas, "spectral parameters, comma list of complex numbers");
    verify->add_option("--points", o.points, "base points, comma list of complex numbers");
    verify->add_option("--quad-tol", o.quad_tol, "quadrature tolerance for the global checks");
    verify->add_flag("--no-integrals", o.no_integrals, "skip the sphere integrals");
    verify->add_option("--format", o.format, "json or csv");

    auto* geometry = app.add_subcommand("geometry", "curvature ranges and global invariants per rung");
    common(geometry);
    geometry->add_option("--rungs", o.rungs, "comma list of rungs or all");
    geometry->add_option("--quad-tol", o.quad_tol, "quadrature tolerance");
    geometry->add_option("--grid", o.grid, "sample grid per side (default 8)");
    geometry->add_flag("--no-integrals", o.no_integrals, "skip the sphere integrals");
    geometry->add_option("--format", o.format, "json or csv");

    auto* surface = app.add_subcommand("surface", "export X_k as an ASCII PLY mesh");
    common(surface);
    surface->add_option("--rungs", o.rungs, "the rung to export (default 0)");
    surface->add_option("--project", o.project, "three embedding coordinates, e.g. 0,1,2");
    surface->add_option("--grid", o.grid, "vertices per side (default 32, at least 8)");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        auto const code = app.exit(e);
        return code == 0 ? exit_pass : exit_config;
    }

    try
    {
        if (*ladder) return run_ladder(o);
        if (*verify) return run_verify(o);
        if (*geometry) return run_geometry(o);
        return run_surface(o);
    }
    catch (cpn::ConfigError const& e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    }
    catch (cpn::ParseError const& e)
    {
        std::cerr << e.what() << '\n';
        return exit_config;
    }
    catch (cpn::Error const& e)
    {
        std::cerr << cpn::error_kind(e) << ": " << e.what() << '\n';
        return exit_fail;
    }
}
