#pragma once

#include "faberfield/conformal.hpp"
#include "faberfield/eshelby.hpp"
#include "faberfield/faber.hpp"
#include "faberfield/potential.hpp"

#include <memory>
#include <span>
#include <vector>

namespace faberfield {

struct TruncationReport {
    int truncation = 0;
    /// Truncation of the certifying re-solve (0 when not run).
    int check_truncation = 0;
    /// max_m |b_m(M) - b_m(2M)| over m <= M.
    double tail_change = 0.0;
    bool converged = true;
    /// max coefficient of (lambda - K*) phi - nu.grad H inside the truncated span.
    double system_residual = 0.0;
    /// Same residual with K* applied untruncated (includes the modes above M).
    double full_residual = 0.0;
};

/// u = H + S[phi] outside the inclusion and the polynomial
/// Re{ sum alpha~_m F_m } inside, with alpha~_m = alpha_m - b_m / (m gamma^m).
class TransmissionSolution {
public:
    TransmissionSolution(const Domain& domain, Contrast contrast, HarmonicPolynomial loading, DensityVector phi,
                         TruncationReport report = {});

    const Domain& domain() const { return basis_->domain(); }
    const FaberBasis& basis() const { return *basis_; }
    const Contrast& contrast() const { return contrast_; }
    const HarmonicPolynomial& loading() const { return loading_; }
    const DensityVector& phi() const { return phi_; }
    const HarmonicPolynomial& interior() const { return interior_; }
    const ExteriorExpansion& exterior() const { return exterior_; }
    int truncation() const { return phi_.half_width(); }
    const TruncationReport& report() const { return report_; }

    /// u at any point; boundary points use the interior closed form.
    double u(cplx z) const;
    Vec2 grad_u(cplx z) const;

    double u_interior(cplx z) const;
    Vec2 grad_interior(cplx z) const;
    /// Exterior evaluation through invert_psi; throws inside or near the curve.
    double u_exterior(cplx z) const;
    Vec2 grad_exterior(cplx z) const;

private:
    std::shared_ptr<const FaberBasis> basis_;
    Contrast contrast_;
    HarmonicPolynomial loading_;
    DensityVector phi_;
    HarmonicPolynomial interior_;
    ExteriorExpansion exterior_;
    TruncationReport report_;
};

struct SolveOptions {
    /// 0 starts at max(8 N deg H, 32) and doubles (up to 512) until certified.
    int truncation = 0;
    /// Re-solve at twice the truncation and compare low modes.
    bool certify = true;
    double tolerance = 1e-8;
};

int default_truncation(const Domain& domain, const HarmonicPolynomial& h);

/// Solves (lambda I - K*) phi = nu . grad H on psi_{-M..M}.
/// Throws SingularSystem or TruncationNotConverged.
TransmissionSolution solve_isotropic(const Domain& domain, const IsotropicContrast& contrast,
                                     const HarmonicPolynomial& h, const SolveOptions& options = {});

/// Explicit anisotropic solution for a uniformity loading: phi = psi - psi~,
/// psi~ = conj(e) gamma psi_1 + e gamma psi_{-1}, interior u = e . x.
TransmissionSolution make_anisotropic_solution(const Domain& domain, const AnisotropicContrast& contrast,
                                               const Synthesis& synthesis);

/// Copy of a solution with b_m += delta and b_{-m} += conj(delta).
TransmissionSolution perturb_density(const TransmissionSolution& solution, int m, cplx delta);

struct GradientSummary {
    Vec2 mean{};
    /// max over samples of |grad u - mean|.
    double max_deviation = 0.0;
};

/// Closed-form gradients of the interior polynomial at interior sample points.
GradientSummary interior_gradient(const TransmissionSolution& solution, std::span<const cplx> points);

/// Interior grid points at least margin * gamma away from the boundary.
std::vector<cplx> interior_sample_points(const Domain& domain, int grid = 12, double margin = 0.02);

struct BoundaryResidualReport {
    int n_theta = 0;
    double offset = 0.0;
    /// |u+ - u-| from extrapolated near-boundary evaluations.
    double continuity = 0.0;
    /// |nu.grad u+ - nu.sigma grad u-| from the psi-basis jump formulas.
    double flux_jump = 0.0;
    /// Same residual from finite-difference gradients at offset points.
    double flux_fd = 0.0;
};

BoundaryResidualReport verify_transmission(const TransmissionSolution& solution, int n_theta = 256,
                                           double offset = 1e-4);

struct DensityRelationReport {
    double residual = 0.0;
    DensityVector psi;
    DensityVector psi_tilde;
    DensityVector phi;
};

/// Checks the density relation linking the loading H and the interior polynomial u
/// (isotropic: K* psi~ = lambda psi~ - (lambda - 1/2) psi; anisotropic: u linear).
DensityRelationReport density_relation_check(const Domain& domain, const Contrast& contrast,
                                             const HarmonicPolynomial& h, const HarmonicPolynomial& u_interior);

struct FunctionalResult {
    /// S[nu . grad H] inside the inclusion, in the Faber basis.
    HarmonicPolynomial polynomial;
    int degree = 0;
    /// Max coefficient difference against S[(lambda I - K*) phi] from a solve.
    double route_residual = 0.0;
};

/// For linear H, S[nu . grad H] restricted to the inclusion is a harmonic
/// polynomial whose degree equals the domain order.
FunctionalResult theorem12_functional(const Domain& domain, const IsotropicContrast& contrast,
                                      const HarmonicPolynomial& h_linear);

struct DecayReport {
    /// |alpha~_m| of the interior polynomial, m = 0..M.
    std::vector<double> magnitudes;
    /// |alpha~_m - alpha_m|: contribution of the single layer.
    std::vector<double> perturbation;
    /// Orders above deg H with |alpha~_m| > 1e-14.
    std::vector<int> nonzero_orders;
    /// Least-squares ratio |alpha~_{m+1}| / |alpha~_m| over the nonzero orders.
    double decay_ratio = 0.0;
    bool evidence = false;
};

DecayReport theorem12b_nonpolynomial_evidence(const Domain& domain, const IsotropicContrast& contrast,
                                              const HarmonicPolynomial& h, int truncation = 0);

struct CorollaryResult {
    bool ellipse_uniform = false;
    /// Non-uniformity under H = x1 and H = x2 (see eshelby_corollary_check).
    double spread_x1 = 0.0;
    double spread_x2 = 0.0;
};

/// Isotropic: solves with H = x1, x2 and measures the interior gradient spread.
/// Anisotropic: spread is the least-squares residual, over all e in R^2, of the
/// density relation a uniform interior field with loading H would have to satisfy.
CorollaryResult eshelby_corollary_check(const Domain& domain, const Contrast& contrast);

}  // namespace faberfield
