#include "faberfield/errors.hpp"
#include "faberfield/oracle.hpp"
#include "faberfield/solver.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace faberfield;
using testing::figure1;

namespace {

constexpr double pi = std::numbers::pi;

// Separable solution for a disk of radius g centred at the origin under H = x1.
double disk_u(double sigma, double g, cplx z) {
    const double r2 = std::norm(z);
    if (r2 < g * g) {
        return 2.0 / (1.0 + sigma) * z.real();
    }
    return z.real() + (1.0 - sigma) / (1.0 + sigma) * g * g * z.real() / r2;
}

Eigen::Matrix2d diag(double a, double b) {
    Eigen::Matrix2d m;
    m << a, 0.0, 0.0, b;
    return m;
}

Domain fig2(double s) { return Domain(1.0, {0.0, cplx(0, 0.1 * s), cplx(0, -0.05 * s), 0.0, 0.15 * s}); }

}  // namespace

TEST_CASE("disk closed form") {
    for (double sigma : {0.1, 0.5, 2.0, 10.0}) {
        for (double g : {1.0, 0.6}) {
            const Domain d = testing::disk(g);
            const auto sol = solve_isotropic(d, IsotropicContrast(sigma), HarmonicPolynomial::linear(d, 1.0, 0.0));
            CHECK(std::abs(sol.phi()[1] - g * (sigma - 1.0) / (sigma + 1.0)) < 1e-14);
            CHECK(std::abs(sol.phi()[-1] - g * (sigma - 1.0) / (sigma + 1.0)) < 1e-14);
            CHECK(sol.phi()[0] == cplx(0.0));
            const auto pts = interior_sample_points(d);
            const GradientSummary gs = interior_gradient(sol, pts);
            CHECK(std::abs(gs.mean[0] - 2.0 / (1.0 + sigma)) < 1e-10);
            CHECK(std::abs(gs.mean[1]) < 1e-10);
            CHECK(gs.max_deviation < 1e-12);
            for (cplx z : {cplx(0.2, 0.1) * g, cplx(-0.5, 0.3) * g, cplx(1.5, 0.4) * g, cplx(-3.0, 2.0) * g}) {
                CHECK(std::abs(sol.u(z) - disk_u(sigma, g, z)) < 1e-12);
            }
            const auto rep = verify_transmission(sol);
            CHECK(rep.flux_jump < 1e-13);
            CHECK(rep.continuity < 1e-10);
        }
    }
}

TEST_CASE("fig1 gradient for every truncation") {
    Vec2 first{};
    for (int n = 1; n <= 4; ++n) {
        const Domain d = figure1(n);
        const Synthesis syn = synth_isotropic_from_c(d, IsotropicContrast(0.2), {1.0, 0.0});
        const auto sol = solve_isotropic(d, IsotropicContrast(0.2), syn.loading);
        const GradientSummary g = interior_gradient(sol, interior_sample_points(d));
        CHECK(std::abs(g.mean[0] - 1.5695) < 1e-3);
        CHECK(std::abs(g.mean[1] + 0.1121) < 1e-3);
        CHECK(g.max_deviation < 1e-8);
        if (n == 1) {
            first = g.mean;
        } else {
            CHECK(std::abs(g.mean[0] - first[0]) < 1e-10);
            CHECK(std::abs(g.mean[1] - first[1]) < 1e-10);
        }
        CHECK(sol.report().converged);
        CHECK(sol.report().tail_change <= 1e-8);
    }
}

TEST_CASE("finite-difference gradients of the fig1 field") {
    const Domain d = figure1();
    const Synthesis syn = synth_isotropic_from_c(d, IsotropicContrast(0.2), {1.0, 0.0});
    const auto sol = solve_isotropic(d, IsotropicContrast(0.2), syn.loading);
    const auto pts = interior_sample_points(d, 10, 0.05);
    REQUIRE(pts.size() >= 50);
    for (std::size_t i = 0; i < 50; ++i) {
        const Vec2 g = oracle::fd_gradient([&](cplx z) { return sol.u(z); }, pts[i], 1e-3, &d);
        CHECK(std::abs(g[0] - 1.5695) < 1e-3);
        CHECK(std::abs(g[1] + 0.1121) < 1e-3);
        CHECK(std::abs(g[0] - syn.predicted_gradient[0]) < 1e-4);
        CHECK(std::abs(g[1] - syn.predicted_gradient[1]) < 1e-4);
    }
}

TEST_CASE("far field decays like 1/|z|") {
    const Domain d = figure1();
    const auto sol = solve_isotropic(d, IsotropicContrast(0.2), HarmonicPolynomial::linear(d, 1.0, 0.0));
    std::vector<double> logs;
    for (double r : {1e2, 1e3, 1e4}) {
        double worst = 0.0;
        for (int j = 0; j < 8; ++j) {
            const cplx z = std::polar(r, 2.0 * pi * (j + 0.3) / 8);
            worst = std::max(worst, std::abs(sol.u(z) - sol.loading().eval(sol.basis(), z)));
        }
        logs.push_back(std::log10(worst));
    }
    CHECK(logs[1] - logs[0] == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(logs[2] - logs[1] == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("solve preconditions") {
    const Domain d = figure1();
    SolveOptions o;
    o.truncation = 3;
    CHECK_THROWS_AS(solve_isotropic(d, IsotropicContrast(0.2), HarmonicPolynomial::linear(d, 1.0, 0.0), o),
                    std::invalid_argument);
    HarmonicPolynomial h3;
    h3.alpha = {0.0, 1.0, 0.0, 0.5};
    CHECK(default_truncation(d, h3) == 96);
    CHECK(default_truncation(testing::disk(), h3) == 32);
}

TEST_CASE("closure of isotropic synthesis on random domains") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double sigmas[] = {0.1, 0.5, 2.0, 10.0};
    for (int trial = 0; trial < 8; ++trial) {
        const Domain d = testing::random_domain(rng, 5);
        const IsotropicContrast c(sigmas[trial % 4]);
        const Vec2 e{u(rng), u(rng)};
        const Synthesis syn = synth_isotropic(d, c, e);
        const auto sol = solve_isotropic(d, c, syn.loading);
        const GradientSummary g = interior_gradient(sol, interior_sample_points(d));
        CHECK(std::abs(g.mean[0] - e[0]) < 1e-6);
        CHECK(std::abs(g.mean[1] - e[1]) < 1e-6);
        CHECK(g.max_deviation < 1e-8);
        CHECK(verify_transmission(sol).flux_jump < 1e-6);
        CHECK(density_relation_check(d, c, syn.loading, sol.interior()).residual < 1e-10);
    }
}

TEST_CASE("anisotropic constructions satisfy the transmission conditions") {
    const Domain d = figure1();
    for (const Eigen::Matrix2d& s : {diag(0.99, 0.2), diag(2.0, 3.0)}) {
        const AnisotropicContrast a(s);
        const Synthesis syn = synth_anisotropic(d, a, {0.0, 1.0});
        const auto sol = make_anisotropic_solution(d, a, syn);
        const GradientSummary g = interior_gradient(sol, interior_sample_points(d));
        CHECK(std::abs(g.mean[0]) < 1e-12);
        CHECK(std::abs(g.mean[1] - 1.0) < 1e-12);
        const auto rep = verify_transmission(sol);
        CHECK(rep.flux_jump < 1e-6);
        CHECK(rep.continuity < 1e-6);
        CHECK(rep.flux_fd < 1e-3);
        CHECK(density_relation_check(d, a, syn.loading, sol.interior()).residual < 1e-10);
    }
}

TEST_CASE("finite-difference flux on the sharpest shipped boundary") {
    const Domain d = fig2(1.0);
    const Synthesis syn = synth_isotropic_from_c(d, IsotropicContrast(0.2), {0.0, 1.0});
    const auto rep = verify_transmission(solve_isotropic(d, IsotropicContrast(0.2), syn.loading));
    CHECK(rep.flux_jump < 1e-6);
    CHECK(rep.continuity < 1e-6);
    CHECK(rep.flux_fd < 1e-3);
}

TEST_CASE("injected fault is detected") {
    const Domain d = figure1();
    const Synthesis syn = synth_isotropic_from_c(d, IsotropicContrast(0.2), {1.0, 0.0});
    const auto sol = solve_isotropic(d, IsotropicContrast(0.2), syn.loading);
    const auto bad = perturb_density(sol, 1, 1e-3);
    CHECK(verify_transmission(sol).flux_jump < 1e-6);
    CHECK(verify_transmission(bad).flux_jump >= 1e-4);
    CHECK(verify_transmission(bad).flux_fd >= 1e-4);
}

TEST_CASE("density relation without contrast") {
    const Domain d = figure1();
    HarmonicPolynomial h;
    h.alpha = {0.0, cplx(1.0, 0.2), cplx(0.1, 0.0), 0.0, cplx(0.0, 0.05)};
    const auto rep = density_relation_check(d, IsotropicContrast(0.5), h, h);
    CHECK(rep.phi.max_abs() == 0.0);
    CHECK(rep.residual > 1e-3);
}

TEST_CASE("linear loading functional has the domain order as degree") {
    const IsotropicContrast c(0.2);
    CHECK(theorem12_functional(testing::disk(), c, HarmonicPolynomial::linear(testing::disk(), 1.0, 0.0)).degree <= 1);
    const auto fig = theorem12_functional(figure1(), c, HarmonicPolynomial::linear(figure1(), 1.0, 0.0));
    CHECK(fig.degree == 4);
    CHECK(fig.route_residual < 1e-10);
    CHECK(theorem12_functional(testing::order2(), c, HarmonicPolynomial::linear(testing::order2(), 1.0, 0.0)).degree ==
          2);

    // Only K* psi_{-1} reaches psi_N, with weight (N/2) conj(a_N) / gamma^{N+1}, so the
    // leading coefficient is conj(mu_N) / (2 gamma^N).
    CHECK(std::abs(fig.polynomial.alpha[4] - std::conj(figure1().mu(4)) / 2.0) < 1e-14);
    const Domain wide(1.5, {0.0, 0.2, 0.0, cplx(0.05, 0.1)});
    const auto w = theorem12_functional(wide, c, HarmonicPolynomial::linear(wide, 1.0, 0.0));
    CHECK(std::abs(w.polynomial.alpha[3] - std::conj(wide.mu(3)) / (2.0 * std::pow(1.5, 3))) < 1e-14);

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const Domain d = testing::random_domain(rng, 6);
        CHECK(theorem12_functional(d, c, HarmonicPolynomial::linear(d, 0.3, 1.0)).degree == d.order());
    }
}

TEST_CASE("interior field of an order-2 domain under uniform loading is not a polynomial") {
    const Domain d = testing::order2();
    const auto rep = theorem12b_nonpolynomial_evidence(d, IsotropicContrast(0.2), HarmonicPolynomial::linear(d, 1.0, 0.0));
    REQUIRE(rep.magnitudes.size() > 8);
    CHECK(rep.magnitudes[2] > 1e-14);
    CHECK(rep.magnitudes[4] > 1e-14);
    CHECK(rep.magnitudes[8] > 1e-14);
    CHECK(rep.magnitudes[2] > rep.magnitudes[4]);
    CHECK(rep.magnitudes[4] > rep.magnitudes[8]);
    CHECK(rep.evidence);
    CHECK(rep.decay_ratio < 1.0);

    const auto sol = solve_isotropic(d, IsotropicContrast(0.2), HarmonicPolynomial::linear(d, 1.0, 0.0));
    const GradientSummary g = interior_gradient(sol, interior_sample_points(d));
    CHECK(g.max_deviation > 1e-3 * std::hypot(g.mean[0], g.mean[1]));

    // No contrast, no perturbation.
    for (double s : {1.0 - 1e-6, 1.0 + 1e-6}) {
        const auto near = theorem12b_nonpolynomial_evidence(d, IsotropicContrast(s), HarmonicPolynomial::linear(d, 1.0, 0.0));
        double worst = 0.0;
        for (double p : near.perturbation) {
            worst = std::max(worst, p);
        }
        CHECK(worst < 1e-5);
    }
    CHECK_THROWS_AS(theorem12b_nonpolynomial_evidence(testing::ellipse(), IsotropicContrast(0.2),
                                                     HarmonicPolynomial::linear(testing::ellipse(), 1.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("ellipse interior field stays linear") {
    const Domain d = testing::ellipse(0.5);
    const auto sol = solve_isotropic(d, IsotropicContrast(0.2), HarmonicPolynomial::linear(d, 1.0, 0.0));
    for (std::size_t m = 2; m < sol.interior().alpha.size(); ++m) {
        CHECK(std::abs(sol.interior().alpha[m]) <= 1e-12);
    }
}

TEST_CASE("uniformity only for ellipses") {
    const auto ell = eshelby_corollary_check(testing::ellipse(0.5), IsotropicContrast(0.2));
    CHECK(ell.ellipse_uniform);
    CHECK(eshelby_corollary_check(testing::ellipse(0.5), AnisotropicContrast(diag(0.99, 0.2))).ellipse_uniform);

    const auto fig = eshelby_corollary_check(figure1(), IsotropicContrast(0.2));
    CHECK_FALSE(fig.ellipse_uniform);
    CHECK(fig.spread_x1 > 1e-3);
    CHECK(fig.spread_x2 > 1e-3);
    const auto an = eshelby_corollary_check(figure1(), AnisotropicContrast(diag(0.99, 0.2)));
    CHECK_FALSE(an.ellipse_uniform);
    CHECK(an.spread_x1 > 1e-6);
    CHECK(an.spread_x2 > 1e-6);
}
