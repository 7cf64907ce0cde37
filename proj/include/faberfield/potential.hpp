#pragma once

#include "faberfield/conformal.hpp"
#include "faberfield/faber.hpp"
#include "faberfield/laurent.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace faberfield {

using Vec2 = std::array<double, 2>;

/// Boundary density sum_{|m| <= M} b_m psi_m with psi_m(theta) = e^{i m theta} / h(theta).
///
/// The psi_m are orthonormal in the h-weighted inner product
///   <p, q> = (1 / 2 pi) int p conj(q) h^2 d theta.
class DensityVector {
public:
    DensityVector() = default;
    explicit DensityVector(int half_width);

    int half_width() const { return half_width_; }
    /// b_m; zero for |m| > M.
    cplx operator[](int m) const;
    cplx& at(int m);

    /// Same coefficients in a basis of a different half-width (truncating or zero-padding).
    DensityVector resized(int half_width) const;

    /// True when b_{-m} = conj(b_m) to within tol (the density is real-valued).
    bool is_real(double tol = 1e-12) const;
    double max_abs() const;

    /// Pointwise value phi(theta).
    cplx eval(const Domain& domain, double theta) const;

    DensityVector& operator+=(const DensityVector& other);
    DensityVector& operator-=(const DensityVector& other);
    DensityVector& operator*=(cplx scale);
    friend DensityVector operator+(DensityVector lhs, const DensityVector& rhs) { return lhs += rhs; }
    friend DensityVector operator-(DensityVector lhs, const DensityVector& rhs) { return lhs -= rhs; }
    friend DensityVector operator*(cplx s, DensityVector rhs) { return rhs *= s; }

    std::span<const cplx> coefficients() const { return b_; }

private:
    int half_width_ = 0;
    std::vector<cplx> b_;
};

/// Real harmonic polynomial H = Re{ sum_m alpha_m F_m(z) } in the Faber basis.
struct HarmonicPolynomial {
    std::vector<cplx> alpha;

    /// Largest m with alpha_m != 0 (0 for constants).
    int degree(double tol = 0.0) const;
    cplx coeff(int m) const;

    double eval(const FaberBasis& basis, cplx z) const;
    Vec2 gradient(const FaberBasis& basis, cplx z) const;

    /// H(x) = e1 x1 + e2 x2.
    static HarmonicPolynomial linear(const Domain& domain, double e1, double e2);
};

/// S[phi](z) for a general (complex) density; closed form inside, exterior
/// series through invert_psi outside.  Throws BoundaryProximity near the curve.
cplx single_layer_complex(const FaberBasis& basis, const DensityVector& density, cplx z);
double single_layer(const FaberBasis& basis, const DensityVector& density, cplx z);

/// Inside the inclusion S[phi] of a real density is the harmonic polynomial
/// b_0 ln(gamma) + Re{ sum_m -b_m F_m / (m gamma^m) }.
HarmonicPolynomial interior_single_layer(const Domain& domain, const DensityVector& density);

/// Exterior single layer of a real density written as Re{ E(w) + b_0 log w }.
struct ExteriorExpansion {
    LaurentPoly series;
    double log_coeff = 0.0;

    double value(cplx w) const;
    /// dE/dw (including the logarithm).
    cplx derivative(cplx w) const;
};

ExteriorExpansion exterior_single_layer(const FaberBasis& basis, const DensityVector& density);

/// Matrix of <K* psi_m, psi_k> for |m|, |k| <= M; row k + M, column m + M.
struct NpMatrix {
    int half_width = 0;
    Eigen::MatrixXcd entries;
    /// Set when the requested band exceeded the supplied Faber basis.
    bool table_extended = false;

    cplx operator()(int k, int m) const { return entries(k + half_width, m + half_width); }
    DensityVector apply(const DensityVector& density) const;
};

NpMatrix np_matrix(const FaberBasis& basis, int half_width);
NpMatrix np_matrix(const Domain& domain, int half_width);

/// K* applied to a finite density without truncation (output half-width N M).
DensityVector apply_np(const FaberBasis& basis, const DensityVector& density);

/// psi with b_m = alpha_m m gamma^m, b_{-m} = conj(b_m): H = S[-psi] + Re alpha_0 on the closure.
DensityVector poly_to_density(const Domain& domain, const HarmonicPolynomial& h);

/// Neumann data nu . grad H = (1/2 I - K*) psi as a density.
DensityVector normal_derivative_density(const FaberBasis& basis, const HarmonicPolynomial& h);
DensityVector normal_derivative_density(const Domain& domain, const HarmonicPolynomial& h);

/// max over theta samples of |1/2 (nu_1 + i nu_2) - (1/2 I - K*)[gamma psi_1]|.
double nu_complex_identity_check(const Domain& domain, int half_width, int samples = 512);

}  // namespace faberfield
