#include "faberfield/conformal.hpp"
#include "faberfield/errors.hpp"
#include "faberfield/eshelby.hpp"
#include "faberfield/faber.hpp"
#include "faberfield/io.hpp"
#include "faberfield/oracle.hpp"
#include "faberfield/potential.hpp"
#include "faberfield/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef FABERFIELD_FIXTURE_DIR
#define FABERFIELD_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace faberfield;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ParseError(std::string(flag) + ": cannot parse '" + item + "'");
        }
    }
    if (out.size() != expected) {
        throw ParseError(std::string(flag) + ": expected " + std::to_string(expected) + " comma-separated values");
    }
    return out;
}

Vec2 parse_vec2(const std::string& text, const char* flag) {
    const auto v = parse_list(text, 2, flag);
    return {v[0], v[1]};
}

void emit(const json& j) { std::cout << dump_json(j) << '\n'; }

json vec_json(Vec2 v) { return json::array({v[0], v[1]}); }

/// Flags shared by every command that builds a transmission problem.
struct ProblemFlags {
    std::string file;
    std::string sigma;
    std::string sigma_matrix;
    std::string e;
    std::string c;
    std::string fc_sum;
    std::string h_linear;
    int truncation = 0;

    void attach(CLI::App* app) {
        app->add_option("domain", file, "Domain or fixture JSON file")->required();
        app->add_option("--sigma", sigma, "Isotropic contrast sigma");
        app->add_option("--sigma-matrix", sigma_matrix, "Anisotropic contrast a,b,b,d");
        app->add_option("--e", e, "Target interior gradient e1,e2");
        app->add_option("--c", c, "Loading coefficients c1,c2");
        app->add_option("--fc-sum", fc_sum, "Anisotropic loading with f + c = s1,s2");
        app->add_option("--h-linear", h_linear, "Uniform loading H = e1 x1 + e2 x2 instead of a synthesised one");
        app->add_option("--truncation", truncation, "Density truncation M (0 = default)");
    }
};

struct Problem {
    Fixture fixture;
    Contrast contrast;
    std::optional<Synthesis> synthesis;
    HarmonicPolynomial loading;
};

Problem resolve_problem(const ProblemFlags& flags, bool need_loading = true) {
    Fixture fx = load_fixture(flags.file);
    std::optional<Contrast> contrast = fx.contrast;
    if (!flags.sigma.empty()) {
        contrast = IsotropicContrast(parse_list(flags.sigma, 1, "--sigma")[0]);
    } else if (!flags.sigma_matrix.empty()) {
        const auto v = parse_list(flags.sigma_matrix, 4, "--sigma-matrix");
        Eigen::Matrix2d s;
        s << v[0], v[1], v[2], v[3];
        contrast = AnisotropicContrast(s);
    }
    if (!contrast) {
        throw ParseError("no contrast given (use --sigma or --sigma-matrix, or a fixture with \"contrast\")");
    }

    std::optional<LoadingRequest> request = fx.loading;
    if (!flags.e.empty()) {
        request = LoadingRequest{LoadingKind::TargetGradient, parse_vec2(flags.e, "--e")};
    } else if (!flags.c.empty()) {
        request = LoadingRequest{LoadingKind::LoadingCoefficients, parse_vec2(flags.c, "--c")};
    } else if (!flags.fc_sum.empty()) {
        request = LoadingRequest{LoadingKind::FluxSum, parse_vec2(flags.fc_sum, "--fc-sum")};
    }

    Problem p{std::move(fx), *contrast, std::nullopt, {}};
    if (!flags.h_linear.empty()) {
        const Vec2 e = parse_vec2(flags.h_linear, "--h-linear");
        p.loading = HarmonicPolynomial::linear(p.fixture.domain, e[0], e[1]);
    } else if (request) {
        p.synthesis = synthesize(p.fixture.domain, p.contrast, *request);
        p.loading = p.synthesis->loading;
    } else if (need_loading) {
        throw ParseError("no loading given (use --e, --c, --fc-sum or --h-linear)");
    }
    return p;
}

TransmissionSolution build_solution(const Problem& p, int truncation) {
    const Domain& domain = p.fixture.domain;
    std::optional<TransmissionSolution> sol;
    if (const auto* iso = std::get_if<IsotropicContrast>(&p.contrast)) {
        SolveOptions options;
        options.truncation = truncation;
        sol.emplace(solve_isotropic(domain, *iso, p.loading, options));
    } else {
        if (!p.synthesis) {
            throw DomainError("anisotropic problems are only solvable for synthesised uniformity loadings");
        }
        sol.emplace(make_anisotropic_solution(domain, std::get<AnisotropicContrast>(p.contrast), *p.synthesis));
    }
    if (p.fixture.fault) {
        return perturb_density(*sol, p.fixture.fault->mode, p.fixture.fault->delta);
    }
    return *sol;
}

json polynomial_json(const Domain& domain, const HarmonicPolynomial& h) {
    const int deg = std::max(static_cast<int>(h.alpha.size()) - 1, 0);
    const FaberBasis basis(domain, deg);
    return {{"degree", h.degree()},
            {"faber", complex_list(h.alpha)},
            {"monomial", complex_list(faber_to_monomial(basis.table(), h.alpha))}};
}

int worker_count() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("FABERFIELD_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) {
                n = std::min(n, cap);
            }
        } catch (const std::exception&) {
            throw ParseError("FABERFIELD_THREADS must be a positive integer");
        }
    }
    return n;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file, const std::string& boundary_out) {
    const Fixture fx = load_fixture(file);
    const ValidationReport report = validate(fx.domain);
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"evaluated", c.evaluated},
                          {"margin", c.margin},
                          {"detail", c.detail}});
    }
    json failures = json::array();
    for (const auto& c : report.checks) {
        if (c.evaluated && !c.passed) {
            failures.push_back(c.name);
        }
    }
    emit({{"file", fs::path(file).filename().string()},
          {"passed", report.passed},
          {"order", fx.domain.order()},
          {"gamma", fx.domain.gamma()},
          {"area_sum", report.area_sum},
          {"failures", failures},
          {"checks", checks}});
    if (!boundary_out.empty()) {
        std::ofstream out(boundary_out);
        if (!out) {
            throw ParseError("cannot write " + boundary_out);
        }
        out << "x,y\n";
        for (const cplx& z : fx.domain.polyline()) {
            out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        }
    }
    return report.passed ? kExitOk : kExitFailure;
}

int cmd_faber(const std::string& file, int degree) {
    const Fixture fx = load_fixture(file);
    const int m = degree > 0 ? degree : default_faber_degree(fx.domain);
    const FaberTable table = compute_faber(fx.domain, m);
    json rows = json::array();
    for (const auto& row : table.coeffs) {
        rows.push_back(complex_list(row));
    }
    emit({{"domain_hash", std::to_string(table.domain_hash)}, {"max_degree", table.max_degree}, {"coeffs", rows}});
    return kExitOk;
}

int cmd_grunsky(const std::string& file, int degree) {
    const Fixture fx = load_fixture(file);
    const int m = degree > 0 ? degree : default_faber_degree(fx.domain);
    const GrunskyTable g = compute_grunsky(fx.domain, m);
    json rows = json::array();
    for (int i = 1; i <= g.max_m(); ++i) {
        std::vector<cplx> row;
        for (int k = 1; k <= g.max_k(); ++k) {
            row.push_back(g(i, k));
        }
        rows.push_back(complex_list(row));
    }
    emit({{"max_m", g.max_m()}, {"max_k", g.max_k()}, {"c", rows}});
    return kExitOk;
}

int cmd_np(const std::string& file, int half_width, bool with_oracle, int nodes) {
    const Fixture fx = load_fixture(file);
    const NpMatrix np = np_matrix(fx.domain, half_width);
    json rows = json::array();
    for (int r = 0; r < np.entries.rows(); ++r) {
        std::vector<cplx> row(np.entries.cols());
        for (int c = 0; c < np.entries.cols(); ++c) {
            row[c] = np.entries(r, c);
        }
        rows.push_back(complex_list(row));
    }
    json out = {{"half_width", half_width}, {"entries", rows}};
    if (with_oracle) {
        const Eigen::MatrixXcd ny = oracle::np_matrix_nystrom(fx.domain, half_width, nodes);
        out["nystrom_nodes"] = nodes;
        out["nystrom_max_error"] = (np.entries - ny).cwiseAbs().maxCoeff();
    }
    emit(out);
    return kExitOk;
}

int cmd_synth(const ProblemFlags& flags) {
    if (!flags.h_linear.empty()) {
        throw ParseError("synth takes --e, --c or --fc-sum, not --h-linear");
    }
    const Problem p = resolve_problem(flags);
    const Synthesis& s = *p.synthesis;
    json out = {{"contrast", contrast_to_json(p.contrast)},
                {"e", vec_json(s.spec.e)},
                {"c", vec_json(s.spec.c)},
                {"predicted_gradient", vec_json(s.predicted_gradient)},
                {"tau",
                 {{"tau1", complex_to_json(s.tau.tau1)},
                  {"tau2", complex_to_json(s.tau.tau2)},
                  {"matrix",
                   json::array({json::array({s.tau.matrix(0, 0), s.tau.matrix(0, 1)}),
                                json::array({s.tau.matrix(1, 0), s.tau.matrix(1, 1)})})}}},
                {"H", polynomial_json(p.fixture.domain, s.loading)}};
    if (std::holds_alternative<AnisotropicContrast>(p.contrast)) {
        out["f"] = vec_json(s.spec.f);
    }
    emit(out);
    return kExitOk;
}

int cmd_solve(const ProblemFlags& flags, int coeffs) {
    const Problem p = resolve_problem(flags);
    const TransmissionSolution sol = build_solution(p, flags.truncation);
    const auto points = interior_sample_points(p.fixture.domain);
    const GradientSummary grad = interior_gradient(sol, points);
    const BoundaryResidualReport br = verify_transmission(sol, 64);
    const auto& rep = sol.report();

    std::vector<cplx> phi;
    for (int m = -sol.truncation(); m <= sol.truncation(); ++m) {
        phi.push_back(sol.phi()[m]);
    }
    std::vector<cplx> interior(sol.interior().alpha.begin(),
                               sol.interior().alpha.begin() +
                                   std::min<std::ptrdiff_t>(coeffs + 1, sol.interior().alpha.size()));
    json out = {{"contrast", contrast_to_json(p.contrast)},
                {"H", polynomial_json(p.fixture.domain, p.loading)},
                {"truncation", sol.truncation()},
                {"report",
                 {{"check_truncation", rep.check_truncation},
                  {"tail_change", rep.tail_change},
                  {"converged", rep.converged},
                  {"system_residual", rep.system_residual},
                  {"full_residual", rep.full_residual}}},
                {"phi", complex_list(phi)},
                {"interior_faber", complex_list(interior)},
                {"gradient",
                 {{"mean", vec_json(grad.mean)},
                  {"max_deviation", grad.max_deviation},
                  {"samples", static_cast<int>(points.size())}}},
                {"boundary",
                 {{"n_theta", br.n_theta},
                  {"offset", br.offset},
                  {"continuity", br.continuity},
                  {"flux_jump", br.flux_jump},
                  {"flux_fd", br.flux_fd}}}};
    if (p.synthesis) {
        out["predicted_gradient"] = vec_json(p.synthesis->predicted_gradient);
    }
    emit(out);
    return kExitOk;
}

int cmd_field_grid(const ProblemFlags& flags, const std::string& bbox_text, int nx, int ny,
                   const std::string& format, const std::string& out_path) {
    if (format != "csv" && format != "json") {
        throw ParseError("--format must be csv or json");
    }
    if (nx < 2 || ny < 2) {
        throw ParseError("--nx and --ny must be at least 2");
    }
    const auto bb = parse_list(bbox_text, 4, "--bbox");
    const Problem p = resolve_problem(flags);
    const Domain& domain = p.fixture.domain;
    for (const cplx& z : domain.polyline()) {
        if (!(z.real() > bb[0] && z.real() < bb[2] && z.imag() > bb[1] && z.imag() < bb[3])) {
            throw DomainError("--bbox does not enclose the inclusion");
        }
    }
    const TransmissionSolution sol = build_solution(p, flags.truncation);

    const std::size_t total = static_cast<std::size_t>(nx) * ny;
    std::vector<double> xs(total), ys(total), us(total);
    std::vector<Region> regions(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t idx = next++; idx < total && !failed; idx = next++) {
            const int i = static_cast<int>(idx % nx);
            const int j = static_cast<int>(idx / nx);
            const cplx z(bb[0] + (bb[2] - bb[0]) * i / (nx - 1), bb[1] + (bb[3] - bb[1]) * j / (ny - 1));
            xs[idx] = z.real();
            ys[idx] = z.imag();
            try {
                Region r = classify(domain, z);
                double u = 0.0;
                if (r == Region::Exterior) {
                    try {
                        u = sol.u_exterior(z);
                    } catch (const BoundaryProximity&) {
                        r = Region::Boundary;
                    }
                }
                if (r != Region::Exterior) {
                    u = sol.u_interior(z);
                }
                regions[idx] = r;
                us[idx] = u;
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                failed = true;
                failure = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int workers = worker_count();
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back(work);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failed) {
        throw NoConvergence("field-grid: " + failure);
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            throw ParseError("cannot write " + out_path);
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;
    if (format == "csv") {
        out << "x,y,u,region\n";
        for (std::size_t k = 0; k < total; ++k) {
            out << format_double(xs[k]) << ',' << format_double(ys[k]) << ',' << format_double(us[k]) << ','
                << to_string(regions[k]) << '\n';
        }
    } else {
        json values = json::array();
        json region_names = json::array();
        for (std::size_t k = 0; k < total; ++k) {
            values.push_back(us[k]);
            region_names.push_back(to_string(regions[k]));
        }
        out << dump_json({{"bbox", json::array({bb[0], bb[1], bb[2], bb[3]})},
                          {"nx", nx},
                          {"ny", ny},
                          {"values", values},
                          {"regions", region_names}},
                         0)
            << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct CheckTable {
    int failures = 0;

    void row(const std::string& suite, const std::string& fixture, const std::string& check, double value,
             double tol, bool pass) {
        std::cout << (pass ? "PASS" : "FAIL") << "  " << suite << "  " << fixture << "  " << check << "  "
                  << format_double(value) << "  tol " << format_double(tol) << '\n';
        failures += pass ? 0 : 1;
    }
    void bound(const std::string& suite, const std::string& fixture, const std::string& check, double value,
               double tol) {
        row(suite, fixture, check, value, tol, value <= tol);
    }
};

void verify_grunsky(CheckTable& t, const Fixture& fx) {
    const int M = 24;
    const Domain& d = fx.domain;
    const FaberBasis basis(d, M);
    const GrunskyTable& g = basis.grunsky();
    const int n = d.order();
    double identity = 0.0, first_row = 0.0, band = 0.0, edge = 0.0;
    for (int m = 1; m <= M; ++m) {
        for (int k = 1; k <= M; ++k) {
            identity = std::max(identity, std::abs(static_cast<double>(k) * g(m, k) - static_cast<double>(m) * g(k, m)) / (1.0 + std::abs(g(m, k))));
        }
        for (int k = n * m + 1; k <= g.max_k(); ++k) {
            band = std::max(band, std::abs(g(m, k)));
        }
        for (int k = n * m + 1; k <= n * m + 2 * n + 2; ++k) {
            band = std::max(band, std::abs(basis.composed(m)[-k]));
        }
        const cplx top = std::pow(d.a(n), m);
        edge = std::max(edge, std::abs(g(m, n * m) - top) / std::max(1.0, std::abs(top)));
    }
    for (int k = 1; k <= g.max_k(); ++k) {
        first_row = std::max(first_row, std::abs(g(1, k) - d.a(k)));
    }
    t.bound("grunsky", fx.name, "identity", identity, 1e-12);
    t.bound("grunsky", fx.name, "first_row_exact", first_row, 0.0);
    t.bound("grunsky", fx.name, "band_vanishing_exact", band, 0.0);
    t.bound("grunsky", fx.name, "band_edge", edge, 1e-12);
}

void verify_np(CheckTable& t, const Fixture& fx, bool with_oracle) {
    const Domain& d = fx.domain;
    t.bound("np", fx.name, "nu_complex", nu_complex_identity_check(d, 16), 1e-10);
    const NpMatrix np = np_matrix(d, 16);
    double zero_block = 0.0;
    for (int m = 1; m <= 16; ++m) {
        for (int k = 1; k <= 16; ++k) {
            zero_block = std::max({zero_block, std::abs(np(k, m)), std::abs(np(-k, -m))});
        }
    }
    t.bound("np", fx.name, "positive_block_zero", zero_block, 0.0);
    if (with_oracle) {
        double err[3];
        const int nodes[3] = {512, 1024, 2048};
        for (int i = 0; i < 3; ++i) {
            err[i] = (np.entries - oracle::np_matrix_nystrom(d, 16, nodes[i])).cwiseAbs().maxCoeff();
        }
        t.bound("np", fx.name, "nystrom_2048", err[2], 1e-6);
        std::cout << "INFO  np  " << fx.name << "  nystrom_512  " << format_double(err[0]) << "  nystrom_1024  "
                  << format_double(err[1]) << '\n';
    }
}

void verify_transmission_suite(CheckTable& t, const Fixture& fx, const std::string& suite) {
    if (!fx.contrast || !fx.loading) {
        return;
    }
    const Problem p{fx, *fx.contrast, synthesize(fx.domain, *fx.contrast, *fx.loading), {}};
    Problem q = p;
    q.loading = p.synthesis->loading;
    const TransmissionSolution sol = build_solution(q, 0);
    const auto points = interior_sample_points(fx.domain);
    const GradientSummary g = interior_gradient(sol, points);
    const Vec2 e = p.synthesis->predicted_gradient;
    t.bound(suite, fx.name, "gradient_vs_prediction", std::hypot(g.mean[0] - e[0], g.mean[1] - e[1]), 1e-6);
    t.bound(suite, fx.name, "gradient_deviation", g.max_deviation, 1e-8);
    const BoundaryResidualReport br = verify_transmission(sol, 128);
    t.bound(suite, fx.name, "continuity", br.continuity, 1e-6);
    t.bound(suite, fx.name, "flux_jump", br.flux_jump, 1e-6);
    t.bound(suite, fx.name, "flux_fd", br.flux_fd, 1e-3);
    const DensityRelationReport dr = density_relation_check(fx.domain, *fx.contrast, q.loading, sol.interior());
    t.bound(suite, fx.name, "density_relation", dr.residual, 1e-10);
}

void verify_figures(CheckTable& t, const std::vector<Fixture>& fixtures) {
    std::vector<std::pair<std::string, Vec2>> fig1;
    for (const auto& fx : fixtures) {
        if (fx.name.rfind("fig1_", 0) != 0 || !fx.contrast || !fx.loading) {
            continue;
        }
        const Synthesis s = synthesize(fx.domain, *fx.contrast, *fx.loading);
        const TransmissionSolution sol = solve_isotropic(fx.domain, std::get<IsotropicContrast>(*fx.contrast),
                                                         s.loading);
        const Vec2 g = interior_gradient(sol, interior_sample_points(fx.domain)).mean;
        t.bound("figures", fx.name, "caption_gradient", std::hypot(g[0] - 1.5695, g[1] + 0.1121), 1e-3);
        fig1.emplace_back(fx.name, g);
    }
    double spread = 0.0;
    for (const auto& a : fig1) {
        for (const auto& b : fig1) {
            spread = std::max(spread, std::hypot(a.second[0] - b.second[0], a.second[1] - b.second[1]));
        }
    }
    if (fig1.size() > 1) {
        t.bound("figures", "fig1_*", "pairwise_agreement", spread, 1e-10);
    }
    for (const auto& fx : fixtures) {
        if (fx.name.rfind("fig2_", 0) == 0 || fx.name.rfind("fig3_", 0) == 0) {
            verify_transmission_suite(t, fx, "figures");
        }
    }
}

std::vector<Fixture> collect_fixtures(const std::vector<std::string>& files, const std::string& dir) {
    std::vector<Fixture> out;
    if (!files.empty()) {
        for (const auto& f : files) {
            out.push_back(load_fixture(f));
        }
        return out;
    }
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        out.push_back(load_fixture(path));
    }
    return out;
}

int cmd_verify(const std::string& suite, bool with_oracle, const std::vector<std::string>& files,
               const std::string& dir) {
    static const std::vector<std::string> suites = {"all", "grunsky", "np", "transmission", "figures"};
    if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
        throw ParseError("--suite must be one of all|grunsky|np|transmission|figures");
    }
    const std::vector<Fixture> fixtures = collect_fixtures(files, dir);
    CheckTable t;
    const bool all = suite == "all";
    for (const auto& fx : fixtures) {
        if (all || suite == "grunsky") {
            verify_grunsky(t, fx);
        }
        if (all || suite == "np") {
            verify_np(t, fx, with_oracle);
        }
        if (all || suite == "transmission") {
            verify_transmission_suite(t, fx, "transmission");
        }
    }
    if (all || suite == "figures") {
        verify_figures(t, fixtures);
    }
    std::cout << (t.failures == 0 ? "verify: all checks passed" : "verify: " + std::to_string(t.failures) +
                                                                       " check(s) failed")
              << '\n';
    return t.failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Faber-series transmission solver for inclusions of finite negative order"};
    app.require_subcommand(1);

    std::string file;
    std::string boundary_out;
    auto* validate_cmd = app.add_subcommand("validate", "Check the invariants of a domain");
    validate_cmd->add_option("domain", file, "Domain JSON file")->required();
    validate_cmd->add_option("--emit-boundary", boundary_out, "Write the boundary polyline as x,y CSV");

    int degree = 0;
    auto* faber_cmd = app.add_subcommand("faber", "Dump Faber polynomial coefficients");
    faber_cmd->add_option("domain", file, "Domain JSON file")->required();
    faber_cmd->add_option("--degree", degree, "Highest degree (default max(2N, 16))");

    auto* grunsky_cmd = app.add_subcommand("grunsky", "Dump Grunsky coefficients");
    grunsky_cmd->add_option("domain", file, "Domain JSON file")->required();
    grunsky_cmd->add_option("--degree", degree, "Highest m (default max(2N, 16))");

    int half_width = 16;
    int nodes = 2048;
    bool with_oracle = false;
    auto* np_cmd = app.add_subcommand("np", "Dump the Neumann-Poincare matrix in the psi basis");
    np_cmd->add_option("domain", file, "Domain JSON file")->required();
    np_cmd->add_option("--half-width", half_width, "Basis half-width M");
    np_cmd->add_flag("--oracle", with_oracle, "Compare against the Nystrom matrix");
    np_cmd->add_option("--nodes", nodes, "Nystrom nodes");

    ProblemFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesise the uniformity loading H");
    synth_flags.attach(synth_cmd);

    ProblemFlags solve_flags;
    int coeffs = 16;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the transmission problem");
    solve_flags.attach(solve_cmd);
    solve_cmd->add_option("--coeffs", coeffs, "Interior Faber coefficients to print");

    ProblemFlags grid_flags;
    std::string bbox;
    int nx = 101;
    int ny = 101;
    std::string format = "csv";
    std::string out_path;
    auto* grid_cmd = app.add_subcommand("field-grid", "Sample u on a rectangular grid");
    grid_flags.attach(grid_cmd);
    grid_cmd->add_option("--bbox", bbox, "xmin,ymin,xmax,ymax")->required();
    grid_cmd->add_option("--nx", nx, "Grid columns");
    grid_cmd->add_option("--ny", ny, "Grid rows");
    grid_cmd->add_option("--format", format, "csv or json");
    grid_cmd->add_option("--out", out_path, "Output file (default stdout)");

    std::string suite = "all";
    std::string fixture_dir = FABERFIELD_FIXTURE_DIR;
    std::vector<std::string> verify_files;
    bool verify_oracle = false;
    auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
    verify_cmd->add_option("--suite", suite, "all|grunsky|np|transmission|figures");
    verify_cmd->add_flag("--oracle", verify_oracle, "Include Nystrom oracle comparisons");
    verify_cmd->add_option("--fixtures", fixture_dir, "Fixture directory");
    verify_cmd->add_option("files", verify_files, "Fixture files (default: every file in the fixture directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(file, boundary_out);
        if (*faber_cmd) return cmd_faber(file, degree);
        if (*grunsky_cmd) return cmd_grunsky(file, degree);
        if (*np_cmd) return cmd_np(file, half_width, with_oracle, nodes);
        if (*synth_cmd) return cmd_synth(synth_flags);
        if (*solve_cmd) return cmd_solve(solve_flags, coeffs);
        if (*grid_cmd) return cmd_field_grid(grid_flags, bbox, nx, ny, format, out_path);
        if (*verify_cmd) return cmd_verify(suite, verify_oracle, verify_files, fixture_dir);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
