#include "faberfield/faber.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace faberfield;
using testing::figure1;

namespace {

constexpr double pi = std::numbers::pi;

// w^{-k} coefficient of F_m(Psi(w)) by trapezoid quadrature on |w| = r,
// using only monomial evaluation of F_m and the map.
cplx grunsky_by_quadrature(const FaberTable& t, const Domain& d, int m, int k, double r, int n = 512) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx w = std::polar(r, 2.0 * pi * j / n);
        acc += t.eval(m, d.psi(w)) * std::pow(w, k);
    }
    return acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("first Faber polynomials") {
    const Domain d(1.3, {cplx(0.2, -0.1), cplx(0.3, 0.1), 0.05});
    const FaberTable t = compute_faber(d, 4);
    const cplx a0 = d.a(0);
    const cplx a1 = d.a(1);
    CHECK(t.coeff(0, 0) == cplx(1.0));
    CHECK(std::abs(t.coeff(1, 0) + a0) < 1e-15);
    CHECK(std::abs(t.coeff(2, 1) + 2.0 * a0) < 1e-15);
    CHECK(std::abs(t.coeff(2, 0) - (a0 * a0 - 2.0 * a1)) < 1e-15);
    for (int m = 0; m <= 4; ++m) {
        CHECK(t.coeff(m, m) == cplx(1.0));
        CHECK(t.coeff(m, m + 1) == cplx(0.0));
    }
}

TEST_CASE("disk Faber polynomials are monomials") {
    const FaberTable t = compute_faber(testing::disk(), 10);
    for (int m = 0; m <= 10; ++m) {
        for (int j = 0; j <= m; ++j) {
            CHECK(t.coeff(m, j) == cplx(j == m ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("Grunsky examples") {
    const GrunskyTable e = compute_grunsky(testing::ellipse(0.5), 4);
    CHECK(std::abs(e(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(e(2, 2) - 0.25) < 1e-15);
    CHECK(e(2, 3) == cplx(0.0));

    const GrunskyTable g = compute_grunsky(figure1(), 4);
    CHECK(g(3, 13) == cplx(0.0));
    CHECK(std::abs(g(3, 12) - 0.05 * 0.05 * 0.05) < 1e-15);
}

TEST_CASE("Grunsky coefficients match the generating-function quadrature") {
    const Domain d = figure1();
    const FaberBasis basis(d, 6);
    for (int m = 1; m <= 6; ++m) {
        for (int k = 1; k <= 4 * m + 2; ++k) {
            const cplx q = grunsky_by_quadrature(basis.table(), d, m, k, 2.0);
            CHECK(std::abs(q * std::pow(2.0, -2 * k) - basis.grunsky()(m, k) * std::pow(2.0, -2 * k)) < 1e-10);
        }
    }
}

TEST_CASE("Grunsky structure on random domains") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const Domain d = testing::random_domain(rng, 6);
        const int n = d.order();
        const int M = 24;
        const GrunskyTable c = compute_grunsky(d, M);
        for (int m = 1; m <= M; ++m) {
            for (int k = 1; k <= M; ++k) {
                // Compared in units of gamma^{m+k}; raw entries reach gamma^48.
                const double unit = std::pow(d.gamma(), m + k);
                const cplx cmk = c(m, k) / unit;
                CHECK(std::abs(static_cast<double>(k) * cmk - static_cast<double>(m) * c(k, m) / unit) <=
                      1e-12 * (1.0 + std::abs(cmk)));
            }
            for (int k = n * m + 1; k <= c.max_k(); ++k) {
                CHECK(c(m, k) == cplx(0.0));
            }
            CHECK(std::abs(c(m, n * m) - std::pow(d.a(n), m)) <= 1e-12 * (1.0 + std::abs(c(m, n * m))));
        }
        for (int k = 1; k <= n; ++k) {
            CHECK(c(1, k) == d.a(k));
            CHECK(std::abs(c(k, 1) - static_cast<double>(k) * d.a(k)) <= 1e-12 * (1.0 + std::abs(c(k, 1))));
        }
    }
}

TEST_CASE("composed Faber series has no tail") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    const Domain d = testing::random_domain(rng, 5);
    const FaberBasis basis(d, 12);
    for (int i = 0; i < 20; ++i) {
        const cplx w = std::polar(2.0 * d.gamma(), u(rng));
        for (int m = 1; m <= 12; ++m) {
            cplx series = std::pow(w, m);
            for (int k = 1; k <= d.order() * m; ++k) {
                series += basis.grunsky()(m, k) * std::pow(w, -k);
            }
            const cplx direct = basis.table().eval(m, d.psi(w));
            CHECK(std::abs(direct - series) <= 1e-10 * std::abs(std::pow(w, m)));
        }
    }
}

TEST_CASE("monomials reconstruct from the Faber basis") {
    const Domain d = figure1();
    const FaberTable t = compute_faber(d, 16);
    for (int j = 0; j <= 16; ++j) {
        std::vector<cplx> mono(static_cast<std::size_t>(j) + 1, 0.0);
        mono[j] = 1.0;
        const auto alpha = monomial_to_faber(t, mono);
        const auto back = faber_to_monomial(t, alpha);
        CHECK(testing::max_abs_diff(back, mono) <= 1e-10);
    }
}

TEST_CASE("recurrence evaluation agrees with the monomial table") {
    const Domain d = figure1();
    const FaberBasis basis(d, 20);
    std::vector<cplx> v(21);
    std::vector<cplx> dv(21);
    const cplx z(0.3, -0.4);
    basis.eval_with_derivative(z, v, dv);
    const double step = 1e-6;
    for (int m = 0; m <= 20; ++m) {
        CHECK(std::abs(v[m] - basis.table().eval(m, z)) <= 1e-12 * (1.0 + std::abs(v[m])));
        const cplx fd = (basis.table().eval(m, z + step) - basis.table().eval(m, z - step)) / (2.0 * step);
        CHECK(std::abs(dv[m] - fd) <= 1e-6 * (1.0 + std::abs(dv[m])));
    }
}

TEST_CASE("signature polynomial") {
    CHECK(frak_F(testing::ellipse(), cplx(0.3, 0.2)) == cplx(0.0));
    const cplx z(0.4, -0.7);
    CHECK(std::abs(frak_F(testing::order2(), z) - 0.1 * z * z) < 1e-15);

    // F_k(0) from the generating function w Psi'(w) / Psi(w) = sum_m F_m(0) w^{-m}.
    const Domain d = figure1();
    cplx expect = 0.0;
    const int n = 512;
    for (int k = 2; k <= 4; ++k) {
        cplx fk = 0.0;
        for (int j = 0; j < n; ++j) {
            const cplx w = std::polar(2.0, 2.0 * pi * j / n);
            fk += w * d.dpsi(w) / d.psi(w) * std::pow(w, k);
        }
        expect += std::conj(d.mu(k)) * fk / static_cast<double>(n);
    }
    CHECK(std::abs(frak_F(d, 0.0) - expect) < 1e-12);
    CHECK(default_faber_degree(d) == 16);
    CHECK(default_faber_degree(Domain(1.0, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.01})) == 18);
}

TEST_CASE("Laurent evaluation stays finite far from the origin") {
    const LaurentPoly p(-130, std::vector<cplx>(135, cplx(1.0, 0.5)));
    const cplx w(1e3, 2e2);
    cplx expect = 0.0;
    for (int k = -130; k <= 4; ++k) {
        expect += cplx(1.0, 0.5) * std::pow(w, k);
    }
    CHECK(std::abs(p.eval(w) - expect) <= 1e-14 * std::abs(expect));
    const LaurentPoly q(-5, {2.0, 0.0, 1.0});
    CHECK(std::abs(q.eval(cplx(0.5, 0.5)) - (2.0 * std::pow(cplx(0.5, 0.5), -5) + std::pow(cplx(0.5, 0.5), -3))) < 1e-12);
    const LaurentPoly r(2, {1.0, 3.0});
    CHECK(std::abs(r.eval(2.0) - 28.0) < 1e-14);
}
