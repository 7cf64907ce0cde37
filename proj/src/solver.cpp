#include "faberfield/solver.hpp"

#include "faberfield/errors.hpp"
#include "faberfield/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace faberfield {

namespace {

constexpr double kExclusionZone = 1e-6;
constexpr int kMaxDefaultTruncation = 512;

double max_coeff(const DensityVector& d) { return d.max_abs(); }

// Real-valued density with b_1 = conj(v) gamma and b_{-1} = v gamma (density of Re{conj(v) z}).
DensityVector linear_density(const Domain& domain, cplx v) {
    DensityVector d(1);
    d.at(1) = std::conj(v) * domain.gamma();
    d.at(-1) = v * domain.gamma();
    return d;
}

cplx as_complex(Vec2 v) { return {v[0], v[1]}; }

Vec2 analytic_gradient(cplx derivative) { return {derivative.real(), -derivative.imag()}; }

struct TruncatedSolve {
    DensityVector phi;
    double system_residual = 0.0;
};

TruncatedSolve solve_truncated(const FaberBasis& basis, double lambda, const DensityVector& g, int M) {
    const double gamma = basis.domain().gamma();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * M, 2 * M);
    Eigen::VectorXd rhs(2 * M);
    for (int k = 1; k <= M; ++k) {
        const int r = k - 1;
        a(r, r) += lambda;
        a(M + r, M + r) -= lambda;
        for (int m = 1; m <= M; ++m) {
            const cplx K = static_cast<double>(k) / (2.0 * m) * basis.grunsky()(m, k) / std::pow(gamma, m + k);
            if (K == cplx{}) {
                continue;
            }
            const int c = m - 1;
            a(r, c) -= K.real();
            a(r, M + c) += K.imag();
            a(M + r, c) -= K.imag();
            a(M + r, M + c) -= K.real();
        }
        rhs(r) = g[-k].real();
        rhs(M + r) = g[-k].imag();
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(lu.rcond() > 1e-14)) {
        throw SingularSystem("solve_isotropic: singular truncated system");
    }
    const Eigen::VectorXd x = lu.solve(rhs);
    TruncatedSolve out;
    out.system_residual = (a * x - rhs).cwiseAbs().maxCoeff();
    out.phi = DensityVector(M);
    for (int m = 1; m <= M; ++m) {
        out.phi.at(m) = {x(m - 1), x(M + m - 1)};
        out.phi.at(-m) = std::conj(out.phi[m]);
    }
    return out;
}

int solution_degree(const HarmonicPolynomial& h, const DensityVector& phi) {
    return std::max({static_cast<int>(h.alpha.size()) - 1, phi.half_width(), 1});
}

}  // namespace

// ---------------------------------------------------------------------------
// TransmissionSolution

TransmissionSolution::TransmissionSolution(const Domain& domain, Contrast contrast, HarmonicPolynomial loading,
                                           DensityVector phi, TruncationReport report)
    : basis_(std::make_shared<const FaberBasis>(domain, solution_degree(loading, phi))),
      contrast_(std::move(contrast)),
      loading_(std::move(loading)),
      phi_(std::move(phi)),
      report_(report) {
    const int deg = solution_degree(loading_, phi_);
    interior_.alpha.assign(deg + 1, cplx{});
    for (int m = 0; m <= deg; ++m) {
        interior_.alpha[m] = loading_.coeff(m);
    }
    const HarmonicPolynomial s = interior_single_layer(domain, phi_);
    for (int m = 0; m < static_cast<int>(s.alpha.size()); ++m) {
        interior_.alpha[m] += s.alpha[m];
    }
    exterior_ = exterior_single_layer(*basis_, phi_);
    report_.truncation = phi_.half_width();
}

double TransmissionSolution::u_interior(cplx z) const { return interior_.eval(*basis_, z); }

Vec2 TransmissionSolution::grad_interior(cplx z) const { return interior_.gradient(*basis_, z); }

double TransmissionSolution::u_exterior(cplx z) const {
    const cplx w = invert_psi(domain(), z);
    if (std::log(std::abs(w)) - domain().rho0() < kExclusionZone) {
        throw BoundaryProximity("u: exterior point inside the boundary exclusion zone");
    }
    return loading_.eval(*basis_, z) + exterior_.value(w);
}

Vec2 TransmissionSolution::grad_exterior(cplx z) const {
    const cplx w = invert_psi(domain(), z);
    if (std::log(std::abs(w)) - domain().rho0() < kExclusionZone) {
        throw BoundaryProximity("grad u: exterior point inside the boundary exclusion zone");
    }
    const Vec2 gh = loading_.gradient(*basis_, z);
    const Vec2 gs = analytic_gradient(exterior_.derivative(w) / domain().dpsi(w));
    return {gh[0] + gs[0], gh[1] + gs[1]};
}

double TransmissionSolution::u(cplx z) const {
    return classify(domain(), z) == Region::Exterior ? u_exterior(z) : u_interior(z);
}

Vec2 TransmissionSolution::grad_u(cplx z) const {
    return classify(domain(), z) == Region::Exterior ? grad_exterior(z) : grad_interior(z);
}

// ---------------------------------------------------------------------------
// Solves

int default_truncation(const Domain& domain, const HarmonicPolynomial& h) {
    return std::max(8 * domain.order() * std::max(h.degree(), 1), 32);
}

TransmissionSolution solve_isotropic(const Domain& domain, const IsotropicContrast& contrast,
                                     const HarmonicPolynomial& h, const SolveOptions& options) {
    const int deg = std::max(h.degree(), 1);
    int M = options.truncation > 0 ? options.truncation : default_truncation(domain, h);
    if (M < domain.order() * deg) {
        throw std::invalid_argument("solve_isotropic: truncation below N deg(H)");
    }
    // With the default truncation, keep doubling until the certificate holds.
    const int ceiling = options.truncation > 0 ? M : std::max(M, kMaxDefaultTruncation);
    const double lambda = contrast.lambda();
    for (;;) {
        const int top = options.certify ? 2 * M : M;
        const FaberBasis basis(domain, top);
        const DensityVector g = normal_derivative_density(basis, h);

        TruncatedSolve solved = solve_truncated(basis, lambda, g, M);
        TruncationReport report;
        report.truncation = M;
        report.system_residual = solved.system_residual;
        DensityVector full = lambda * solved.phi;
        full -= apply_np(basis, solved.phi);
        full -= g;
        report.full_residual = max_coeff(full);

        if (options.certify) {
            const TruncatedSolve check = solve_truncated(basis, lambda, g, 2 * M);
            report.check_truncation = 2 * M;
            for (int m = 1; m <= M; ++m) {
                report.tail_change = std::max(report.tail_change, std::abs(check.phi[m] - solved.phi[m]));
            }
            report.converged = report.tail_change <= options.tolerance * std::max(1.0, solved.phi.max_abs());
            if (!report.converged) {
                if (2 * M <= ceiling) {
                    M *= 2;
                    continue;
                }
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "solve_isotropic: low modes moved by %.3e when the truncation doubled from %d",
                              report.tail_change, M);
                throw TruncationNotConverged(buf);
            }
        }
        return TransmissionSolution(domain, contrast, h, std::move(solved.phi), report);
    }
}

TransmissionSolution make_anisotropic_solution(const Domain& domain, const AnisotropicContrast& contrast,
                                               const Synthesis& synthesis) {
    DensityVector phi = poly_to_density(domain, synthesis.loading);
    phi -= linear_density(domain, as_complex(synthesis.spec.e));
    return TransmissionSolution(domain, contrast, synthesis.loading, std::move(phi));
}

TransmissionSolution perturb_density(const TransmissionSolution& solution, int m, cplx delta) {
    DensityVector phi = solution.phi();
    if (std::abs(m) > phi.half_width()) {
        phi = phi.resized(std::abs(m));
    }
    phi.at(m) += delta;
    phi.at(-m) += std::conj(delta);
    return TransmissionSolution(solution.domain(), solution.contrast(), solution.loading(), std::move(phi),
                                solution.report());
}

// ---------------------------------------------------------------------------
// Gradients and boundary checks

GradientSummary interior_gradient(const TransmissionSolution& solution, std::span<const cplx> points) {
    GradientSummary out;
    if (points.empty()) {
        return out;
    }
    std::vector<Vec2> grads;
    grads.reserve(points.size());
    for (const cplx& z : points) {
        grads.push_back(solution.grad_interior(z));
        out.mean[0] += grads.back()[0];
        out.mean[1] += grads.back()[1];
    }
    out.mean[0] /= static_cast<double>(points.size());
    out.mean[1] /= static_cast<double>(points.size());
    for (const Vec2& g : grads) {
        out.max_deviation = std::max(out.max_deviation, std::hypot(g[0] - out.mean[0], g[1] - out.mean[1]));
    }
    return out;
}

std::vector<cplx> interior_sample_points(const Domain& domain, int grid, double margin) {
    const auto poly = domain.polyline();
    double x0 = poly[0].real(), x1 = x0, y0 = poly[0].imag(), y1 = y0;
    for (const cplx& z : poly) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    std::vector<cplx> out;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const cplx z(x0 + (x1 - x0) * (i + 0.5) / grid, y0 + (y1 - y0) * (j + 0.5) / grid);
            if (winding_number(domain, z) == 1 && boundary_distance(domain, z) > margin * domain.gamma()) {
                out.push_back(z);
            }
        }
    }
    return out;
}

BoundaryResidualReport verify_transmission(const TransmissionSolution& solution, int n_theta, double offset) {
    const Domain& domain = solution.domain();
    const FaberBasis& basis = solution.basis();
    const double eps = offset * domain.gamma();

    // Flux densities in the psi basis.
    const DensityVector g = normal_derivative_density(basis, solution.loading());
    DensityVector outer = g + 0.5 * solution.phi();
    outer += apply_np(basis, solution.phi());
    DensityVector inner;
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
    if (const auto* iso = std::get_if<IsotropicContrast>(&solution.contrast())) {
        inner = iso->sigma() * normal_derivative_density(basis, solution.interior());
        sigma *= iso->sigma();
    } else {
        const auto& aniso = std::get<AnisotropicContrast>(solution.contrast());
        sigma = aniso.sigma();
        const Vec2 e = solution.interior().gradient(basis, domain.a(0));
        const Eigen::Vector2d f = sigma * Eigen::Vector2d(e[0], e[1]);
        inner = normal_derivative_density(basis, HarmonicPolynomial::linear(domain, f(0), f(1)));
    }
    const DensityVector jump = outer - inner;

    BoundaryResidualReport report;
    report.n_theta = n_theta;
    report.offset = eps;
    for (int j = 0; j < n_theta; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / n_theta;
        const BoundaryPoint bp = boundary_geometry(domain, theta);
        const cplx nu = bp.normal;

        report.flux_jump = std::max(report.flux_jump, std::abs(jump.eval(domain, theta)));

        // Quadratic extrapolation to the curve from offsets eps, 2 eps, 3 eps.
        auto extrapolate = [](const auto& f, double step) { return 3.0 * f(step) - 3.0 * f(2.0 * step) + f(3.0 * step); };
        const double up = extrapolate([&](double d) { return solution.u_exterior(bp.z + d * nu); }, eps);
        const double um = extrapolate([&](double d) { return solution.u_interior(bp.z - d * nu); }, eps);
        report.continuity = std::max(report.continuity, std::abs(up - um));

        auto normal_flux = [&](const std::function<double(cplx)>& f, double side, const Eigen::Matrix2d& s) {
            auto at = [&](double d) {
                const Vec2 gr = oracle::fd_gradient(f, bp.z + side * d * nu, 0.5 * eps);
                const Eigen::Vector2d sg = s * Eigen::Vector2d(gr[0], gr[1]);
                return sg(0) * nu.real() + sg(1) * nu.imag();
            };
            return extrapolate(at, 2.0 * eps);
        };
        const double fp = normal_flux([&](cplx z) { return solution.u_exterior(z); }, 1.0,
                                      Eigen::Matrix2d::Identity());
        const double fm = normal_flux([&](cplx z) { return solution.u_interior(z); }, -1.0, sigma);
        report.flux_fd = std::max(report.flux_fd, std::abs(fp - fm));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Density relations and structural checks

DensityRelationReport density_relation_check(const Domain& domain, const Contrast& contrast,
                                             const HarmonicPolynomial& h, const HarmonicPolynomial& u_interior) {
    DensityRelationReport out;
    out.psi = poly_to_density(domain, h);
    out.psi_tilde = poly_to_density(domain, u_interior);
    out.phi = out.psi - out.psi_tilde;
    const int width = std::max(out.psi.half_width(), out.psi_tilde.half_width());
    const FaberBasis basis(domain, width);

    DensityVector r;
    if (const auto* iso = std::get_if<IsotropicContrast>(&contrast)) {
        const double lambda = iso->lambda();
        r = apply_np(basis, out.psi_tilde);
        r -= lambda * out.psi_tilde;
        r += (lambda - 0.5) * out.psi;
    } else {
        if (u_interior.degree(1e-14) > 1) {
            throw std::invalid_argument("density_relation_check: anisotropic branch needs a linear interior field");
        }
        const auto& sigma = std::get<AnisotropicContrast>(contrast).sigma();
        const cplx e = std::conj(u_interior.coeff(1));
        const Eigen::Vector2d fv = sigma * Eigen::Vector2d(e.real(), e.imag());
        const cplx f(fv(0), fv(1));
        // K*[psi~ - psi_f] = psi - (psi~ + psi_f) / 2
        r = apply_np(basis, linear_density(domain, e - f));
        r += 0.5 * linear_density(domain, e + f);
        r -= out.psi;
    }
    out.residual = max_coeff(r);
    return out;
}

FunctionalResult theorem12_functional(const Domain& domain, const IsotropicContrast& contrast,
                                      const HarmonicPolynomial& h_linear) {
    if (h_linear.degree(0.0) != 1) {
        throw std::invalid_argument("theorem12_functional: loading must have degree 1");
    }
    const int n = domain.order();
    const FaberBasis basis(domain, std::max(n, 1));
    const DensityVector flux = normal_derivative_density(basis, h_linear);

    FunctionalResult out;
    out.polynomial = interior_single_layer(domain, flux);
    double scale = 0.0;
    for (const cplx& a : out.polynomial.alpha) {
        scale = std::max(scale, std::abs(a));
    }
    out.degree = out.polynomial.degree(1e-12 * scale);

    // Second route: nu . grad H = (lambda I - K*) phi with phi from the transmission solve.
    const TransmissionSolution sol = solve_isotropic(domain, contrast, h_linear);
    const FaberBasis wide(domain, sol.truncation());
    DensityVector rebuilt = contrast.lambda() * sol.phi();
    rebuilt -= apply_np(wide, sol.phi());
    const HarmonicPolynomial other = interior_single_layer(domain, rebuilt.resized(flux.half_width()));
    for (int m = 0; m <= flux.half_width(); ++m) {
        out.route_residual = std::max(out.route_residual, std::abs(other.coeff(m) - out.polynomial.coeff(m)));
    }
    return out;
}

DecayReport theorem12b_nonpolynomial_evidence(const Domain& domain, const IsotropicContrast& contrast,
                                              const HarmonicPolynomial& h, int truncation) {
    const int deg = std::max(h.degree(), 1);
    if (domain.order() < 2 || deg >= domain.order()) {
        throw std::invalid_argument("theorem12b_nonpolynomial_evidence: needs N >= 2 and deg H < N");
    }
    SolveOptions options;
    options.truncation = truncation;
    const TransmissionSolution sol = solve_isotropic(domain, contrast, h, options);
    const HarmonicPolynomial& u = sol.interior();

    DecayReport out;
    const int top = static_cast<int>(u.alpha.size()) - 1;
    out.magnitudes.resize(top + 1);
    out.perturbation.resize(top + 1);
    for (int m = 0; m <= top; ++m) {
        out.magnitudes[m] = std::abs(u.alpha[m]);
        out.perturbation[m] = std::abs(u.alpha[m] - h.coeff(m));
        if (m > deg && out.magnitudes[m] > 1e-14) {
            out.nonzero_orders.push_back(m);
        }
    }
    // Least-squares slope of log|alpha~_m| against m.
    if (out.nonzero_orders.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(out.nonzero_orders.size());
        for (int m : out.nonzero_orders) {
            const double y = std::log(out.magnitudes[m]);
            sx += m;
            sy += y;
            sxx += static_cast<double>(m) * m;
            sxy += m * y;
        }
        out.decay_ratio = std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
    out.evidence = out.nonzero_orders.size() >= 3 && out.decay_ratio > 0.0 && out.decay_ratio < 1.0;
    return out;
}

CorollaryResult eshelby_corollary_check(const Domain& domain, const Contrast& contrast) {
    CorollaryResult out;
    const HarmonicPolynomial loads[2] = {HarmonicPolynomial::linear(domain, 1.0, 0.0),
                                         HarmonicPolynomial::linear(domain, 0.0, 1.0)};
    double spreads[2] = {0.0, 0.0};

    if (const auto* iso = std::get_if<IsotropicContrast>(&contrast)) {
        const std::vector<cplx> points = interior_sample_points(domain);
        for (int i = 0; i < 2; ++i) {
            const TransmissionSolution sol = solve_isotropic(domain, *iso, loads[i]);
            spreads[i] = interior_gradient(sol, points).max_deviation;
        }
    } else {
        const Eigen::Matrix2d& sigma = std::get<AnisotropicContrast>(contrast).sigma();
        const FaberBasis basis(domain, 1);
        // Residual of the uniform-field relation is affine in e: A e - psi.
        DensityVector columns[2];
        for (int j = 0; j < 2; ++j) {
            const cplx e = j == 0 ? cplx(1, 0) : cplx(0, 1);
            const Eigen::Vector2d fv = sigma * Eigen::Vector2d(e.real(), e.imag());
            const cplx f(fv(0), fv(1));
            columns[j] = apply_np(basis, linear_density(domain, e - f));
            columns[j] += 0.5 * linear_density(domain, e + f);
        }
        const int width = std::max(columns[0].half_width(), domain.order());
        for (int i = 0; i < 2; ++i) {
            const DensityVector psi = poly_to_density(domain, loads[i]);
            Eigen::MatrixXd a(2 * (2 * width + 1), 2);
            Eigen::VectorXd b(2 * (2 * width + 1));
            for (int k = -width; k <= width; ++k) {
                const int r = 2 * (k + width);
                for (int j = 0; j < 2; ++j) {
                    a(r, j) = columns[j][k].real();
                    a(r + 1, j) = columns[j][k].imag();
                }
                b(r) = psi[k].real();
                b(r + 1) = psi[k].imag();
            }
            const Eigen::Vector2d e = a.colPivHouseholderQr().solve(b);
            spreads[i] = (a * e - b).cwiseAbs().maxCoeff();
        }
    }
    out.spread_x1 = spreads[0];
    out.spread_x2 = spreads[1];
    out.ellipse_uniform = domain.order() == 1 && spreads[0] <= 1e-8 && spreads[1] <= 1e-8;
    return out;
}

}  // namespace faberfield
