// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "faberfield/io.hpp"
#include "faberfield/oracle.hpp"
#include "faberfield/solver.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

using namespace faberfield;

namespace {

constexpr double kFigureTol = 1e-3;
constexpr double kAgreeTol = 1e-10;
constexpr double kRuntimeSeconds = 1.0;
constexpr double kDiskTol = 1e-10;
constexpr double kGrunskyTol = 1e-12;
constexpr double kNystromTol = 1e-6;
constexpr double kNystromDrop = 10.0;
constexpr double kClosureMeanTol = 1e-6;
constexpr double kClosureDevTol = 1e-8;
constexpr double kClosureBoundaryTol = 1e-6;
constexpr double kNonzero = 1e-14;
constexpr double kEllipseControl = 1e-12;
constexpr double kUniformTol = 1e-8;
constexpr double kPositiveSpread = 1e-10;
constexpr double kNuComplexTol = 1e-10;
constexpr std::uint64_t kSeed = 20240611;

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<Fixture> shipped() {
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(FABERFIELD_FIXTURE_DIR)) {
        if (e.is_regular_file() && e.path().extension() == ".json") {
            paths.push_back(e.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    std::vector<Fixture> out;
    for (const auto& p : paths) {
        out.push_back(load_fixture(p));
    }
    return out;
}

Fixture named(const std::string& name) {
    return load_fixture(std::filesystem::path(FABERFIELD_FIXTURE_DIR) / (name + ".json"));
}

Eigen::Matrix2d random_tensor(std::mt19937_64& rng, bool below_identity) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lo = below_identity ? 0.05 : 1.1;
    const double hi = below_identity ? 0.95 : 5.0;
    const double a = lo + (hi - lo) * u(rng);
    const double b = lo + (hi - lo) * u(rng);
    const double t = std::numbers::pi * u(rng);
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    Eigen::Matrix2d s = r * Eigen::Vector2d(a, b).asDiagonal() * r.transpose();
    s(0, 1) = s(1, 0);
    return s;
}

void figure1_gradient() {
    bool ok = true;
    double worst = 0.0;
    double spread = 0.0;
    double slowest = 0.0;
    std::vector<Vec2> grads;
    for (int n = 1; n <= 4; ++n) {
        const Fixture f = named("fig1_N" + std::to_string(n));
        const auto start = std::chrono::steady_clock::now();
        const auto& iso = std::get<IsotropicContrast>(*f.contrast);
        const Synthesis syn = synth_isotropic_from_c(f.domain, iso, {1.0, 0.0});
        const auto sol = solve_isotropic(f.domain, iso, syn.loading);
        const GradientSummary g = interior_gradient(sol, interior_sample_points(f.domain));
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        worst = std::max({worst, std::abs(g.mean[0] - 1.5695), std::abs(g.mean[1] + 0.1121)});
        for (const Vec2& p : grads) {
            spread = std::max({spread, std::abs(p[0] - g.mean[0]), std::abs(p[1] - g.mean[1])});
        }
        grads.push_back(g.mean);
    }
    ok = worst <= kFigureTol && spread <= kAgreeTol && slowest < kRuntimeSeconds;
    char buf[256];
    std::snprintf(buf, sizeof buf, "grad=(%.10f, %.10f) err=%.2e tol=%.0e pairwise=%.2e tol=%.0e max_time=%.3fs",
                  grads[0][0], grads[0][1], worst, kFigureTol, spread, kAgreeTol, slowest);
    report(ok, "fig1-gradient", buf);
}

void disk_closed_form() {
    double worst = 0.0;
    const Domain d = testing::disk();
    for (double sigma : {0.1, 0.5, 2.0, 10.0}) {
        const auto sol = solve_isotropic(d, IsotropicContrast(sigma), HarmonicPolynomial::linear(d, 1.0, 0.0));
        const GradientSummary g = interior_gradient(sol, interior_sample_points(d));
        worst = std::max({worst, std::abs(g.mean[0] - 2.0 / (1.0 + sigma)), std::abs(g.mean[1]), g.max_deviation});
    }
    report(worst <= kDiskTol, "disk-closed-form", fmt("max_err=%.2e", worst) + fmt(" tol=%.0e", kDiskTol));
}

void grunsky_exactness() {
    std::mt19937_64 rng(kSeed);
    double identity = 0.0;
    double raw_identity = 0.0;
    double leading = 0.0;
    bool first_row = true;
    bool band = true;
    const int M = 24;
    for (int trial = 0; trial < 50; ++trial) {
        const Domain d = testing::random_domain(rng, 6);
        const int n = d.order();
        const GrunskyTable c = compute_grunsky(d, M);
        for (int m = 1; m <= M; ++m) {
            for (int k = 1; k <= M; ++k) {
                const double unit = std::pow(d.gamma(), m + k);
                const cplx cmk = c(m, k) / unit;
                const cplx ckm = c(k, m) / unit;
                identity = std::max(identity, std::abs(static_cast<double>(k) * cmk - static_cast<double>(m) * ckm) /
                                                  (1.0 + std::abs(cmk)));
                raw_identity = std::max(raw_identity, std::abs(static_cast<double>(k) * c(m, k) -
                                                               static_cast<double>(m) * c(k, m)) /
                                                          (1.0 + std::abs(c(m, k))));
            }
            for (int k = n * m + 1; k <= c.max_k(); ++k) {
                band = band && c(m, k) == cplx(0.0);
            }
            const cplx expect = std::pow(d.a(n), m);
            leading = std::max(leading, std::abs(c(m, n * m) - expect) / std::max(1.0, std::abs(expect)));
        }
        for (int k = 1; k <= n; ++k) {
            first_row = first_row && c(1, k) == d.a(k);
        }
    }
    const bool ok = identity <= kGrunskyTol && leading <= kGrunskyTol && first_row && band;
    report(ok, "grunsky-faber-exactness",
           fmt("identity=%.2e", identity) + fmt(" leading=%.2e", leading) + fmt(" tol=%.0e", kGrunskyTol) +
               fmt(" (unscaled %.1e)", raw_identity) + " c1k=a_k:" + (first_row ? "exact" : "inexact") + " band:" + (band ? "exact" : "inexact"));
}

void np_oracle() {
    double worst2048 = 0.0;
    double worst_drop = 1e300;
    std::string weakest;
    double e512_at = 0.0;
    double e1024_at = 0.0;
    for (const Fixture& f : shipped()) {
        const Eigen::MatrixXcd exact = np_matrix(f.domain, 16).entries;
        const auto err = [&](int nodes) {
            return (oracle::np_matrix_nystrom(f.domain, 16, nodes) - exact).cwiseAbs().maxCoeff();
        };
        const double e512 = err(512);
        const double e1024 = err(1024);
        worst2048 = std::max(worst2048, err(2048));
        const double drop = e1024 > 0.0 ? e512 / e1024 : 1e300;
        if (drop < worst_drop) {
            worst_drop = drop;
            weakest = f.name;
            e512_at = e512;
            e1024_at = e1024;
        }
    }
    const bool ok = worst2048 <= kNystromTol && worst_drop >= kNystromDrop;
    char buf[256];
    std::snprintf(buf, sizeof buf, "err2048=%.2e tol=%.0e min_drop512->1024=%.2f (%s: %.2e -> %.2e) need>=%.0f",
                  worst2048, kNystromTol, worst_drop, weakest.c_str(), e512_at, e1024_at, kNystromDrop);
    report(ok, "np-oracle-equivalence", buf);
}

void theorem11_closure() {
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double sigmas[] = {0.1, 0.5, 2.0, 10.0};
    double mean_err = 0.0;
    double dev = 0.0;
    double boundary = 0.0;
    const auto record = [&](const TransmissionSolution& sol, Vec2 e) {
        const GradientSummary g = interior_gradient(sol, interior_sample_points(sol.domain()));
        mean_err = std::max({mean_err, std::abs(g.mean[0] - e[0]), std::abs(g.mean[1] - e[1])});
        dev = std::max(dev, g.max_deviation);
        const auto rep = verify_transmission(sol);
        boundary = std::max({boundary, rep.continuity, rep.flux_jump});
    };
    for (int trial = 0; trial < 20; ++trial) {
        const Domain d = testing::random_domain(rng, 5);
        const IsotropicContrast c(sigmas[trial % 4]);
        Vec2 e{u(rng), u(rng)};
        const Synthesis syn = synth_isotropic(d, c, e);
        record(solve_isotropic(d, c, syn.loading), e);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const Domain d = testing::random_domain(rng, 5);
        const AnisotropicContrast c(random_tensor(rng, trial % 2 == 0));
        Vec2 e{u(rng), u(rng)};
        const Synthesis syn = synth_anisotropic(d, c, e);
        record(make_anisotropic_solution(d, c, syn), e);
    }
    const bool ok = mean_err <= kClosureMeanTol && dev <= kClosureDevTol && boundary <= kClosureBoundaryTol;
    report(ok, "uniformity-closure",
           fmt("mean_err=%.2e", mean_err) + fmt(" tol=%.0e", kClosureMeanTol) + fmt(" deviation=%.2e", dev) +
               fmt(" tol=%.0e", kClosureDevTol) + fmt(" boundary=%.2e", boundary) + fmt(" tol=%.0e", kClosureBoundaryTol));
}

void theorem12a_degree() {
    std::mt19937_64 rng(kSeed + 2);
    const IsotropicContrast c(0.2);
    int matched = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Domain d = testing::random_domain(rng, 6);
        matched += theorem12_functional(d, c, HarmonicPolynomial::linear(d, 1.0, 0.0)).degree == d.order() ? 1 : 0;
    }
    const Domain fig = named("fig1_N4").domain;
    const int fig_degree = theorem12_functional(fig, c, HarmonicPolynomial::linear(fig, 1.0, 0.0)).degree;
    report(matched == 50 && fig_degree == 4, "linear-functional-degree",
           "random=" + std::to_string(matched) + "/50 figure1_degree=" + std::to_string(fig_degree));
}

void theorem12b_evidence() {
    const Domain d = testing::order2(0.1);
    const IsotropicContrast c(0.2);
    const DecayReport rep = theorem12b_nonpolynomial_evidence(d, c, HarmonicPolynomial::linear(d, 1.0, 0.0));
    const auto& a = rep.magnitudes;
    const bool nonzero = a.size() > 8 && a[2] > kNonzero && a[4] > kNonzero && a[8] > kNonzero;
    const bool decreasing = nonzero && a[2] > a[4] && a[4] > a[8] && rep.evidence && rep.decay_ratio < 1.0;

    const Domain ell = named("ellipse").domain;
    const auto sol = solve_isotropic(ell, c, HarmonicPolynomial::linear(ell, 1.0, 0.0));
    double control = 0.0;
    for (std::size_t m = 2; m < sol.interior().alpha.size(); ++m) {
        control = std::max(control, std::abs(sol.interior().alpha[m]));
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "|a2|=%.2e |a4|=%.2e |a8|=%.2e ratio=%.3f ellipse_max=%.2e tol=%.0e",
                  a.size() > 2 ? a[2] : 0.0, a.size() > 4 ? a[4] : 0.0, a.size() > 8 ? a[8] : 0.0, rep.decay_ratio,
                  control, kEllipseControl);
    report(nonzero && decreasing && control <= kEllipseControl, "nonpolynomial-interior", buf);
}

void corollary() {
    std::vector<Contrast> contrasts{IsotropicContrast(0.2), *named("fig3_a").contrast, *named("fig3_b").contrast};
    bool ok = true;
    double worst_uniform = 0.0;
    double least_spread = 1e300;
    int ellipses = 0;
    int others = 0;
    for (const Fixture& f : shipped()) {
        const bool ellipse = f.domain.order() == 1;
        for (const Contrast& c : contrasts) {
            const CorollaryResult r = eshelby_corollary_check(f.domain, c);
            if (ellipse) {
                ok = ok && r.ellipse_uniform;
                worst_uniform = std::max({worst_uniform, r.spread_x1, r.spread_x2});
            } else {
                ok = ok && !r.ellipse_uniform;
                least_spread = std::min({least_spread, r.spread_x1, r.spread_x2});
            }
        }
        ++(ellipse ? ellipses : others);
    }
    ok = ok && worst_uniform <= kUniformTol && least_spread > kPositiveSpread;
    report(ok, "ellipse-only-uniformity",
           "ellipse_fixtures=" + std::to_string(ellipses) + fmt(" max_dev=%.2e", worst_uniform) +
               fmt(" tol=%.0e", kUniformTol) + " other_fixtures=" + std::to_string(others) +
               fmt(" min_spread=%.2e", least_spread) + fmt(" need>%.0e", kPositiveSpread));
}

void nu_complex() {
    double worst = 0.0;
    for (const Fixture& f : shipped()) {
        worst = std::max(worst, nu_complex_identity_check(f.domain, 16));
    }
    report(worst <= kNuComplexTol, "nu-complex-identity", fmt("max_residual=%.2e", worst) + fmt(" tol=%.0e", kNuComplexTol));
}

template <class F>
void guarded(const char* name, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        report(false, name, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    guarded("fig1-gradient", figure1_gradient);
    guarded("disk-closed-form", disk_closed_form);
    guarded("grunsky-faber-exactness", grunsky_exactness);
    guarded("np-oracle-equivalence", np_oracle);
    guarded("uniformity-closure", theorem11_closure);
    guarded("linear-functional-degree", theorem12a_degree);
    guarded("nonpolynomial-interior", theorem12b_evidence);
    guarded("ellipse-only-uniformity", corollary);
    guarded("nu-complex-identity", nu_complex);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
