#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace faberfield {

using cplx = std::complex<double>;

/// Exterior conformal map data of a domain of finite negative order.
///
/// The map from {|v| > 1} onto the exterior of the inclusion is
///   Phi(v) = gamma v + mu_0 + mu_1 / v + ... + mu_N / v^N,
/// and all computations use the normalized map Psi(w) = Phi(w / gamma),
///   Psi(w) = w + a_0 + a_1 / w + ... + a_N / w^N,   a_k = mu_k gamma^k,
/// defined on |w| >= gamma.  Trailing zero coefficients are trimmed; disks and
/// ellipses report order 1.
///
/// Instances are immutable and cheap to copy (the sampled boundary polyline is
/// shared between copies).
class Domain {
public:
    /// Number of boundary samples used for polyline tests.
    static constexpr int kPolylineSamples = 4096;

    Domain(double gamma, std::vector<cplx> mu);

    double gamma() const { return gamma_; }
    double rho0() const;
    /// mu_0..mu_N after trimming (always at least mu_0, mu_1).
    std::span<const cplx> mu() const { return mu_; }
    cplx mu(int k) const;
    /// a_k = mu_k gamma^k; zero beyond the order.
    cplx a(int k) const;
    std::span<const cplx> laurent() const { return a_; }
    int order() const { return order_; }
    /// Domain keeping only mu_0..mu_n (used for truncation studies).
    Domain truncated(int n) const;
    std::size_t hash() const { return hash_; }

    /// Psi and its first two derivatives; no range check.
    cplx psi(cplx w) const;
    cplx dpsi(cplx w) const;
    cplx d2psi(cplx w) const;

    /// Boundary polyline z_j = Psi(gamma e^{i 2 pi j / n}), n = kPolylineSamples.
    std::span<const cplx> polyline() const { return *polyline_; }
    /// Minimum of |Psi'| over the sampled boundary.
    double min_boundary_derivative() const { return min_dpsi_; }

private:
    double gamma_;
    std::vector<cplx> mu_;
    std::vector<cplx> a_;
    int order_;
    std::size_t hash_;
    std::shared_ptr<const std::vector<cplx>> polyline_;
    double min_dpsi_;
};

/// Psi(w) for |w| >= gamma (boundary allowed); DomainError inside the disk.
cplx eval_psi(const Domain& domain, cplx w);

struct InversionOptions {
    double tol_newton = 1e-12;
    int max_iter = 64;
};

/// Solves Psi(w) = z for an exterior point z, returning |w| > gamma.
/// Throws NoConvergence or BoundaryProximity (|w| - gamma < 1e-9 gamma).
cplx invert_psi(const Domain& domain, cplx z, const InversionOptions& options = {});

enum class Region { Interior, Exterior, Boundary };

const char* to_string(Region region);

/// Relative boundary tolerance used by classify.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Total point classification; Boundary when within kBoundaryTolerance * gamma
/// of the curve.
Region classify(const Domain& domain, cplx z);

/// Distance from z to the boundary curve (polyline search refined by Newton in theta).
double boundary_distance(const Domain& domain, cplx z);

/// Winding number of the sampled boundary polyline around z.
int winding_number(const Domain& domain, cplx z);

struct BoundaryPoint {
    cplx z;
    /// Outward unit normal nu_1 + i nu_2.
    cplx normal;
    /// Scale factor h = gamma |Psi'(gamma e^{i theta})|, so that d sigma = h d theta.
    double h;
};

BoundaryPoint boundary_geometry(const Domain& domain, double theta);

/// Signed curvature of the boundary (positive where convex).
double boundary_curvature(const Domain& domain, double theta);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    bool evaluated = false;
    double margin = 0.0;
    std::string detail;
};

struct ValidationReport {
    bool passed = false;
    double area_sum = 0.0;
    std::vector<ValidationCheck> checks;

    const ValidationCheck* find(const std::string& name) const;
};

/// Checks every invariant of a domain: gamma > 0, area theorem, Bieberbach
/// inequality, non-degenerate boundary derivative, polyline simplicity and
/// orientation.  Stops after an area-theorem failure.
ValidationReport validate(const Domain& domain);

}  // namespace faberfield
