#pragma once

#include "faberfield/conformal.hpp"
#include "faberfield/laurent.hpp"

#include <span>
#include <utility>
#include <vector>

namespace faberfield {

/// Monomial coefficients of the Faber polynomials F_0..F_M.
struct FaberTable {
    std::size_t domain_hash = 0;
    int max_degree = 0;
    /// coeffs[m][j] is the coefficient of z^j in F_m (ascending powers, monic).
    std::vector<std::vector<cplx>> coeffs;

    cplx coeff(int m, int j) const;
    /// Horner evaluation of F_m in the monomial basis.
    cplx eval(int m, cplx z) const;
};

/// Grunsky coefficients c_{m,k}, 1 <= m <= M, 1 <= k <= N M.
class GrunskyTable {
public:
    GrunskyTable() = default;
    GrunskyTable(int max_m, int order);

    int max_m() const { return max_m_; }
    int max_k() const { return max_m_ * order_; }
    int order() const { return order_; }

    /// c_{m,k}; zero outside the stored band (exactly zero for k > N m).
    cplx operator()(int m, int k) const;
    cplx& at(int m, int k);

private:
    int max_m_ = 0;
    int order_ = 1;
    std::vector<cplx> data_;
};

/// Faber polynomials of a domain together with their compositions F_m(Psi(w))
/// and the Grunsky coefficients, computed up to a fixed degree.
///
/// F_{m+1} is obtained by multiplying F_m(Psi(w)) by Psi(w) and cancelling the
/// non-negative powers w^0..w^m against lower rows:
///   F_{m+1}(z) = z F_m(z) - sum_j t_{m,j} F_j(z).
/// Every product has finite support, so the Grunsky band is exact.
class FaberBasis {
public:
    FaberBasis(const Domain& domain, int max_degree);

    const Domain& domain() const { return domain_; }
    int max_degree() const { return max_degree_; }
    const FaberTable& table() const { return table_; }
    const GrunskyTable& grunsky() const { return grunsky_; }
    /// F_m(Psi(w)) as a finite Laurent polynomial in w.
    const LaurentPoly& composed(int m) const { return composed_[m]; }

    /// Values F_0(z)..F_M(z) via the three-term style recurrence.
    void eval(cplx z, std::span<cplx> values) const;
    /// Values and derivatives F_m(z), F_m'(z), m = 0..M.
    void eval_with_derivative(cplx z, std::span<cplx> values, std::span<cplx> derivs) const;

private:
    Domain domain_;
    int max_degree_;
    FaberTable table_;
    GrunskyTable grunsky_;
    std::vector<LaurentPoly> composed_;
    /// Nonzero (j, t_{m,j}) pairs of F_{m+1} = z F_m - sum_j t_{m,j} F_j.
    std::vector<std::vector<std::pair<int, cplx>>> recurrence_;
};

/// Default Faber degree max(2N, 16).
int default_faber_degree(const Domain& domain);

FaberTable compute_faber(const Domain& domain, int max_degree);
GrunskyTable compute_grunsky(const Domain& domain, int max_m);

/// Coefficients over the Faber basis of the signature polynomial
/// sum_{k=2}^{N} conj(mu_k) / gamma^k F_k (entries 0 and 1 are zero).
std::vector<cplx> frak_F_coefficients(const Domain& domain);
cplx frak_F(const Domain& domain, cplx z);

/// sum_m alpha_m F_m as monomial coefficients (ascending).
std::vector<cplx> faber_to_monomial(const FaberTable& table, std::span<const cplx> alpha);
/// Inverse triangular change of basis.
std::vector<cplx> monomial_to_faber(const FaberTable& table, std::span<const cplx> monomial);

}  // namespace faberfield
