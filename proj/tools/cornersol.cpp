// Command-line front end: construct corner-singular Laplace/Stokes fields,
// locate Stokes exponents, manufacture cut-off right-hand sides, evaluate
// very-weak pairings, and run the L-shape finite element studies.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cornersol/cornersol.hpp"

namespace fs = std::filesystem;
using namespace cornersol;

namespace {

BcKind bc_from_string(const std::string& bc) {
    if (bc == "dd") return BcKind::DirichletDirichlet;
    if (bc == "nn") return BcKind::NeumannNeumann;
    if (bc == "dn") return BcKind::DirichletNeumann;
    throw ValidationError("bc must be one of dd, nn, dn");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<Vec2> read_points(const std::string& path) {
    const Table t = parse_table(path);
    if (t.columns.size() < 2 || t.columns[0] != "x" || t.columns[1] != "y")
        throw ValidationError("points file '" + path + "' must have header x,y");
    std::vector<Vec2> points;
    points.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        Vec2 p;
        if (row.size() < 2 || !io_detail::parse_plain_double(row[0], p.x) ||
            !io_detail::parse_plain_double(row[1], p.y))
            throw ValidationError("bad point on data row " + std::to_string(i + 1) + " of '" +
                                  path + "'");
        points.push_back(p);
    }
    return points;
}

fs::path output_path(const RunConfig& cfg, const char* name) {
    const fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir / name;
}

void report_written(const fs::path& path, std::size_t rows) {
    std::printf("wrote %s (%zu rows)\n", path.string().c_str(), rows);
}

// the canonical angular normalization used by the pairing experiments:
// sin(|lambda| theta) for lambda != 0, the affine branch theta at lambda = 0
LaplaceField pairing_field(double lambda) {
    if (lambda == 0.0) return LaplaceField(0.0, 0.0, 1.0);
    return LaplaceField(lambda, 0.0, lambda < 0.0 ? -1.0 : 1.0);
}

// resolve the branch label of a real determinant root for reporting
Branch branch_of(double lambda, double omega) {
    const double gm = std::abs(stokes_branch_factor(Branch::Minus, Complex(lambda, 0.0), omega));
    const double gp = std::abs(stokes_branch_factor(Branch::Plus, Complex(lambda, 0.0), omega));
    return gm <= gp ? Branch::Minus : Branch::Plus;
}

StokesField stokes_field_from_flags(const RunConfig& cfg, bool dirichlet,
                                    const std::vector<double>& coeffs) {
    if (!cfg.lambda) throw ValidationError("a Stokes field needs --lambda");
    const double omega = cfg.omega.value();
    if (dirichlet) {
        const ExponentRoot root{Complex(*cfg.lambda, 0.0), omega, branch_of(*cfg.lambda, omega),
                                std::abs(stokes_determinant(Complex(*cfg.lambda, 0.0), omega))};
        return dirichlet_field(omega, root);
    }
    std::array<double, 4> c{1.0, 0.0, 0.0, 0.0};
    if (!coeffs.empty()) {
        for (std::size_t i = 0; i < 4; ++i) c[i] = coeffs[i];
    }
    return StokesField(*cfg.lambda, c);
}

// ---------------------------------------------------------------------------

int run_exponents(const RunConfig& cfg, const SearchRegion& region) {
    std::vector<std::vector<std::string>> rows;
    if (cfg.problem == "laplace") {
        const BcKind bc = bc_from_string(cfg.bc.value_or("dd"));
        const std::int64_t k0 = (bc == BcKind::NeumannNeumann) ? 0 : 1;
        for (std::int64_t k = k0;; ++k) {
            const double lambda = laplace_exponent(cfg.omega, bc, k).value();
            if (lambda > region.re_max + 1e-12) break;
            if (lambda < region.re_min - 1e-12) continue;
            rows.push_back({format_double(lambda), format_double(0.0), cfg.bc.value_or("dd"),
                            format_double(0.0)});
        }
    } else {
        const auto roots = find_stokes_exponents(cfg.omega.value(), region);
        for (const auto& r : roots) {
            rows.push_back({format_double(r.lambda.real()), format_double(r.lambda.imag()),
                            branch_name(r.branch), format_double(r.residual)});
        }
        if (!roots.empty()) {
            try {
                std::printf("smallest positive exponent: %s\n",
                            format_double(smallest_positive_exponent(roots)).c_str());
            } catch (const NoPositiveRoot&) {
                std::printf("no root with positive real part in the window\n");
            }
        }
    }
    const fs::path path = output_path(cfg, "exponents.csv");
    emit_table(path.string(), {"re(lambda)", "im(lambda)", "branch", "residual"}, rows);
    report_written(path, rows.size());
    return 0;
}

int run_eval_laplace(const RunConfig& cfg, const std::string& points_path) {
    const LaplaceField u =
        preset(cfg.omega, bc_from_string(cfg.bc.value_or("dd")), cfg.k.value_or(1), 1.0);
    std::vector<std::vector<std::string>> rows;
    for (const Vec2& p : read_points(points_path)) {
        const double value = u.eval(p);
        const Vec2 grad = u.gradient(p);
        rows.push_back({format_double(p.x), format_double(p.y), format_double(value),
                        format_double(grad.x), format_double(grad.y)});
    }
    const fs::path path = output_path(cfg, "eval_laplace.csv");
    emit_table(path.string(), {"x", "y", "u", "ux", "uy"}, rows);
    report_written(path, rows.size());
    return 0;
}

int run_eval_stokes(const RunConfig& cfg, bool dirichlet, const std::vector<double>& coeffs,
                    const std::string& points_path) {
    const StokesField u = stokes_field_from_flags(cfg, dirichlet, coeffs);
    std::vector<std::vector<std::string>> rows;
    for (const Vec2& p : read_points(points_path)) {
        const Vec2 vel = u.velocity_cartesian(p);
        const double pr = u.pressure(p);
        rows.push_back({format_double(p.x), format_double(p.y), format_double(vel.x),
                        format_double(vel.y), format_double(pr)});
    }
    const fs::path path = output_path(cfg, "eval_stokes.csv");
    emit_table(path.string(), {"x", "y", "u1", "u2", "p"}, rows);
    report_written(path, rows.size());
    return 0;
}

int run_rhs(const RunConfig& cfg, bool dirichlet, const std::vector<double>& coeffs,
            const std::string& points_path) {
    const CutoffProfile profile(cfg.r0, cfg.r1,
                                cfg.profile == "exp" ? CutoffSmoothness::CInfExp
                                                     : CutoffSmoothness::C2Quintic);
    std::vector<std::vector<std::string>> rows;
    fs::path path;
    if (cfg.problem == "laplace") {
        const LaplaceField u =
            cfg.lambda ? pairing_field(*cfg.lambda)
                       : preset(cfg.omega, bc_from_string(cfg.bc.value_or("dd")),
                                cfg.k.value_or(1), 1.0);
        for (const Vec2& p : read_points(points_path)) {
            rows.push_back({format_double(p.x), format_double(p.y),
                            format_double(laplace_rhs(u, profile, p))});
        }
        path = output_path(cfg, "rhs.csv");
        emit_table(path.string(), {"x", "y", "f"}, rows);
    } else {
        const StokesField u = stokes_field_from_flags(cfg, dirichlet, coeffs);
        for (const Vec2& p : read_points(points_path)) {
            const StokesRhs r = stokes_rhs(u, profile, p);
            rows.push_back({format_double(p.x), format_double(p.y), format_double(r.f.x),
                            format_double(r.f.y), format_double(r.g)});
        }
        path = output_path(cfg, "rhs.csv");
        emit_table(path.string(), {"x", "y", "f1", "f2", "g"}, rows);
    }
    report_written(path, rows.size());
    return 0;
}

int run_pairing(const RunConfig& cfg) {
    if (!cfg.lambda) throw ValidationError("pairing needs --lambda");
    const double omega = cfg.omega.value();
    const double xi = cfg.xi.value_or(std::numbers::pi / omega);
    const LaplaceField u = pairing_field(*cfg.lambda);
    const TestFunctionV v(xi, CutoffProfile(cfg.r0, cfg.r1,
                                            cfg.profile == "exp" ? CutoffSmoothness::CInfExp
                                                                 : CutoffSmoothness::C2Quintic));

    const std::vector<double> eps{0.8 * cfg.r0, 0.4 * cfg.r0, 0.2 * cfg.r0, 0.1 * cfg.r0};
    std::vector<std::vector<std::string>> rows;
    for (double e : eps) {
        rows.push_back({format_double(e), format_double(arc_integral(u, v, omega, e))});
    }
    const fs::path path = output_path(cfg, "pairing.csv");
    emit_table(path.string(), {"eps", "arc_value"}, rows);

    const double arc = arc_limit_defect(u, v, omega, eps);
    const double area = area_pairing(u, v, omega);
    const SolutionClass cls = classify(*cfg.lambda, xi);
    std::printf("class = %s\n", solution_class_name(cls));
    std::printf("arc_defect = %s\n", format_double(arc).c_str());
    std::printf("area_defect = %s\n", format_double(area).c_str());
    std::printf("zero_within_tol = %s\n", std::abs(arc) <= cfg.tol ? "yes" : "no");
    report_written(path, rows.size());
    return 0;
}

void write_nodal_solution(const RunConfig& cfg, const DiscreteField& field) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(field.mesh.nodes.size());
    for (std::size_t i = 0; i < field.mesh.nodes.size(); ++i) {
        rows.push_back({format_double(field.mesh.nodes[i].x),
                        format_double(field.mesh.nodes[i].y), format_double(field.values[i])});
    }
    const fs::path path = output_path(cfg, "fem_solution.csv");
    emit_table(path.string(), {"x", "y", "uh"}, rows);
    report_written(path, rows.size());
}

int run_fem(const RunConfig& cfg, const std::string& kase, int levels, int n0) {
    if (std::abs(cfg.omega.value() - 1.5 * std::numbers::pi) > 1e-12)
        throw ValidationError("the L-shape geometry fixes omega = 3pi/2");
    if (levels < 1) throw ValidationError("--levels must be at least 1");

    if (kase == "limit") {
        const LaplaceField dual(-2.0 / 3.0, 0.0, -1.0);
        const auto g = [&](Vec2 p) { return norm(p) == 0.0 ? 0.0 : dual.eval(p); };
        std::vector<std::vector<std::string>> rows;
        DiscreteField last{TriMesh{}, {}};
        int n = n0;
        for (int level = 0; level < levels; ++level, n *= 2) {
            const TriMesh mesh = build_lshape_mesh(n);
            last = solve_dirichlet(mesh, [](Vec2) { return 0.0; }, g);
            rows.push_back({std::to_string(level),
                            format_double(corner_pole_indicator(last, 0.1))});
        }
        const fs::path path = output_path(cfg, "fem_limit.csv");
        emit_table(path.string(), {"level", "corner_max"}, rows);
        report_written(path, rows.size());
        write_nodal_solution(cfg, last);
        return 0;
    }
    if (kase == "convergence") {
        if (levels < 3) throw ValidationError("a convergence study needs at least 3 levels");
        const LaplaceField u =
            preset(cfg.omega, bc_from_string(cfg.bc.value_or("dd")), cfg.k.value_or(1), 1.0);
        const auto g = [&](Vec2 p) { return norm(p) == 0.0 ? 0.0 : u.eval(p); };
        const auto grad = [&](Vec2 p) { return u.gradient(p); };

        std::vector<std::vector<std::string>> rows;
        TriMesh mesh = build_lshape_mesh(n0);
        DiscreteField last{TriMesh{}, {}};
        double prev_l2 = 0.0, prev_h1 = 0.0;
        for (int level = 0; level < levels; ++level) {
            last = solve_dirichlet(mesh, [](Vec2) { return 0.0; }, g);
            const ErrorNorms err = h1_error(last, g, grad);
            const double rate_l2 = level ? std::log2(prev_l2 / err.l2) : std::nan("");
            const double rate_h1 = level ? std::log2(prev_h1 / err.h1_semi) : std::nan("");
            rows.push_back({std::to_string(level), format_double(mesh.h()),
                            format_double(err.l2), format_double(err.h1_semi),
                            format_double(rate_l2), format_double(rate_h1)});
            prev_l2 = err.l2;
            prev_h1 = err.h1_semi;
            if (level + 1 < levels) mesh = refine_uniform(mesh);
        }
        const fs::path path = output_path(cfg, "fem_convergence.csv");
        emit_table(path.string(), {"level", "h", "l2", "h1", "rate_l2", "rate_h1"}, rows);
        report_written(path, rows.size());
        write_nodal_solution(cfg, last);
        return 0;
    }
    throw ValidationError("--case must be 'limit' or 'convergence'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corner-singular solution toolkit for Laplace and Stokes problems"};
    app.require_subcommand(1);

    std::string config_path, out_dir, omega_text, bc_text, points_path, fem_case = "limit";
    double lambda = 0.0, xi = 0.0, tol = 0.0, r0 = 0.0, r1 = 0.0;
    std::int64_t k = 0;
    int levels = 4, n0 = 8;
    bool dirichlet = false;
    std::vector<double> coeffs;
    std::string problem, profile;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory (default .)");
    app.add_option("--tol", tol, "tolerance for reporting (default 1e-10)");

    const auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();  // let the global --config/--out/--tol follow the subcommand
        sub->add_option("--omega", omega_text, "corner opening angle, e.g. 3pi/2 or 4.7123");
        return sub;
    };

    CLI::App* c_exp = add_common(app.add_subcommand(
        "exponents", "corner exponents of the Laplace or Stokes operator"));
    c_exp->add_option("--problem", problem, "laplace | stokes");
    c_exp->add_option("--bc", bc_text, "laplace boundary conditions: dd | nn | dn");
    double re_min = 0.05, re_max = 1.15, im_min = -0.35, im_max = 0.35;
    c_exp->add_option("--re-min", re_min, "search window, real part lower bound");
    c_exp->add_option("--re-max", re_max, "search window, real part upper bound");
    c_exp->add_option("--im-min", im_min, "search window, imaginary part lower bound");
    c_exp->add_option("--im-max", im_max, "search window, imaginary part upper bound");

    CLI::App* c_lap = add_common(
        app.add_subcommand("eval-laplace", "evaluate a Laplace corner preset on points"));
    c_lap->add_option("--bc", bc_text, "boundary conditions: dd | nn | dn");
    c_lap->add_option("--k", k, "mode number of the preset");
    c_lap->add_option("--points", points_path, "CSV of x,y points")->required();

    CLI::App* c_stk = add_common(
        app.add_subcommand("eval-stokes", "evaluate a Stokes corner field on points"));
    c_stk->add_option("--lambda", lambda, "corner exponent")->required();
    c_stk->add_flag("--dirichlet", dirichlet,
                    "use the edge-vanishing coefficient vector of this root");
    c_stk->add_option("--coeffs", coeffs, "four basis weights c1 c2 c3 c4")->expected(4);
    c_stk->add_option("--points", points_path, "CSV of x,y points")->required();

    CLI::App* c_rhs = add_common(app.add_subcommand(
        "rhs", "manufactured right-hand side of a cut-off corner solution"));
    c_rhs->add_option("--problem", problem, "laplace | stokes");
    c_rhs->add_option("--bc", bc_text, "laplace preset boundary conditions");
    c_rhs->add_option("--k", k, "laplace preset mode number");
    c_rhs->add_option("--lambda", lambda, "corner exponent");
    c_rhs->add_flag("--dirichlet", dirichlet, "stokes: edge-vanishing coefficients");
    c_rhs->add_option("--coeffs", coeffs, "stokes: four basis weights")->expected(4);
    c_rhs->add_option("--r0", r0, "cut-off plateau radius");
    c_rhs->add_option("--r1", r1, "cut-off support radius");
    c_rhs->add_option("--profile", profile, "cut-off smoothness: quintic | exp");
    c_rhs->add_option("--points", points_path, "CSV of x,y points")->required();

    CLI::App* c_pair = add_common(app.add_subcommand(
        "pairing", "very-weak pairing defect of r^lambda sin(|lambda| theta)"));
    c_pair->add_option("--lambda", lambda, "corner exponent")->required();
    c_pair->add_option("--xi", xi, "test-function exponent (default pi/omega)");
    c_pair->add_option("--r0", r0, "cut-off plateau radius");
    c_pair->add_option("--r1", r1, "cut-off support radius");
    c_pair->add_option("--profile", profile, "cut-off smoothness: quintic | exp");

    CLI::App* c_fem = add_common(app.add_subcommand(
        "fem", "L-shape finite element studies at the reentrant corner"));
    c_fem->add_option("--case", fem_case, "limit | convergence")->required();
    c_fem->add_option("--levels", levels, "number of refinement levels");
    c_fem->add_option("--n0", n0, "coarsest divisions per unit length (default 8)");
    c_fem->add_option("--bc", bc_text, "convergence case: preset boundary conditions");
    c_fem->add_option("--k", k, "convergence case: preset mode number");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = parse_config(read_file(config_path));
        if (app.count("--out")) cfg.out = out_dir;
        if (app.count("--tol")) cfg.tol = tol;
        const auto sub = app.get_subcommands().front();
        if (sub->count("--omega")) cfg.omega = parse_angle(omega_text);
        if (sub->get_option_no_throw("--problem") && sub->count("--problem"))
            cfg.problem = problem;
        if (sub->get_option_no_throw("--bc") && sub->count("--bc")) cfg.bc = bc_text;
        if (sub->get_option_no_throw("--k") && sub->count("--k")) cfg.k = k;
        if (sub->get_option_no_throw("--lambda") && sub->count("--lambda")) cfg.lambda = lambda;
        if (sub->get_option_no_throw("--xi") && sub->count("--xi")) cfg.xi = xi;
        if (sub->get_option_no_throw("--r0") && sub->count("--r0")) cfg.r0 = r0;
        if (sub->get_option_no_throw("--r1") && sub->count("--r1")) cfg.r1 = r1;
        if (sub->get_option_no_throw("--profile") && sub->count("--profile"))
            cfg.profile = profile;
        if (sub->get_name() == "eval-stokes" || sub->get_name() == "rhs") {
            if (sub->count("--dirichlet") && !coeffs.empty())
                throw ValidationError("--dirichlet and --coeffs are mutually exclusive");
        }
        validate_config(cfg);

        if (sub->get_name() == "exponents")
            return run_exponents(cfg, SearchRegion{re_min, re_max, im_min, im_max});
        if (sub->get_name() == "eval-laplace") return run_eval_laplace(cfg, points_path);
        if (sub->get_name() == "eval-stokes")
            return run_eval_stokes(cfg, dirichlet, coeffs, points_path);
        if (sub->get_name() == "rhs") return run_rhs(cfg, dirichlet, coeffs, points_path);
        if (sub->get_name() == "pairing") return run_pairing(cfg);
        if (sub->get_name() == "fem") return run_fem(cfg, fem_case, levels, n0);
        throw ValidationError("unknown subcommand");
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
