#pragma once

#include "faberfield/conformal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

using faberfield::cplx;
using faberfield::Domain;

inline Domain disk(double gamma = 1.0) { return Domain(gamma, {0.0, 0.0}); }

inline Domain ellipse(double m = 0.5) { return Domain(1.0, {0.0, m}); }

inline Domain figure1(int order = 4) {
    std::vector<cplx> mu{0.0, {0.1, 0.1}, {0.1, 0.1}, {0.0, -0.1}, 0.05};
    mu.resize(static_cast<std::size_t>(order) + 1);
    return Domain(1.0, mu);
}

inline Domain order2(double mu2 = 0.1) { return Domain(1.0, {0.0, 0.0, mu2}); }

// Draws coefficients with area sum at most `fill` gamma^2 and keeps the first
// domain that passes every invariant.
inline Domain random_domain(std::mt19937_64& rng, int max_order, double fill = 0.5) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_order(1, max_order);
    for (;;) {
        const double gamma = 0.5 + 1.5 * unit(rng);
        const int n = pick_order(rng);
        std::vector<cplx> mu(static_cast<std::size_t>(n) + 1);
        mu[0] = cplx(unit(rng) - 0.5, unit(rng) - 0.5);
        std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
        double total = 0.0;
        for (int k = 1; k <= n; ++k) {
            w[k] = unit(rng) + (k == n ? 0.2 : 0.0);
            total += w[k];
        }
        const double budget = fill * unit(rng) * gamma * gamma;
        for (int k = 1; k <= n; ++k) {
            const double mag = std::sqrt(budget * w[k] / total / k);
            mu[k] = std::polar(mag, 2.0 * std::numbers::pi * unit(rng));
        }
        Domain d(gamma, mu);
        if (d.order() == n && faberfield::validate(d).passed) {
            return d;
        }
    }
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const cplx x = i < a.size() ? a[i] : cplx{};
        const cplx y = i < b.size() ? b[i] : cplx{};
        m = std::max(m, std::abs(x - y));
    }
    return m;
}

}  // namespace testing
