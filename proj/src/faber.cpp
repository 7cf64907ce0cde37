#include "faberfield/faber.hpp"

#include "faberfield/errors.hpp"

#include <algorithm>
#include <cmath>

namespace faberfield {

cplx FaberTable::coeff(int m, int j) const {
    if (m < 0 || m > max_degree || j < 0 || j > m) {
        return {};
    }
    return coeffs[m][j];
}

cplx FaberTable::eval(int m, cplx z) const {
    cplx acc{};
    for (int j = m; j >= 0; --j) {
        acc = acc * z + coeffs[m][j];
    }
    return acc;
}

GrunskyTable::GrunskyTable(int max_m, int order)
    : max_m_(max_m), order_(order), data_(static_cast<std::size_t>(max_m) * max_m * order) {}

cplx GrunskyTable::operator()(int m, int k) const {
    if (m < 1 || m > max_m_ || k < 1 || k > max_k()) {
        return {};
    }
    return data_[static_cast<std::size_t>(m - 1) * max_k() + (k - 1)];
}

cplx& GrunskyTable::at(int m, int k) {
    if (m < 1 || m > max_m_ || k < 1 || k > max_k()) {
        throw std::out_of_range("GrunskyTable::at");
    }
    return data_[static_cast<std::size_t>(m - 1) * max_k() + (k - 1)];
}

FaberBasis::FaberBasis(const Domain& domain, int max_degree)
    : domain_(domain), max_degree_(max_degree), grunsky_(max_degree, domain.order()) {
    if (max_degree < 0) {
        throw std::invalid_argument("FaberBasis: negative degree");
    }
    const int n = domain.order();

    // Psi(w) = w + a_0 + a_1 w^{-1} + ... + a_N w^{-N}
    std::vector<cplx> psi_coeffs(n + 2);
    for (int k = 0; k <= n; ++k) {
        psi_coeffs[n - k] = domain.a(k);
    }
    psi_coeffs[n + 1] = 1.0;
    const LaurentPoly psi(-n, std::move(psi_coeffs));

    table_.domain_hash = domain.hash();
    table_.max_degree = max_degree;
    table_.coeffs.resize(max_degree + 1);
    table_.coeffs[0] = {1.0};
    composed_.reserve(max_degree + 1);
    composed_.push_back(LaurentPoly::monomial(0));
    recurrence_.resize(max_degree);

    for (int m = 0; m < max_degree; ++m) {
        const LaurentPoly product = psi * composed_[m];
        LaurentPoly next = product;
        std::vector<cplx> t(m + 1);
        std::vector<cplx> poly(m + 2);
        for (int j = 0; j <= m + 1; ++j) {
            poly[j] = j >= 1 ? table_.coeffs[m][j - 1] : cplx{};
        }
        for (int j = 0; j <= m; ++j) {
            t[j] = product[j];
            if (t[j] == cplx{}) {
                continue;
            }
            recurrence_[m].emplace_back(j, t[j]);
            next.axpy(-t[j], composed_[j]);
            for (int i = 0; i <= j; ++i) {
                poly[i] -= t[j] * table_.coeffs[j][i];
            }
        }
        for (int j = 0; j <= m; ++j) {
            next.add(j, -next[j]);  // cancelled exactly; clear any signed zero residue
        }
        composed_.push_back(std::move(next));
        table_.coeffs[m + 1] = std::move(poly);
    }

    for (int m = 1; m <= max_degree; ++m) {
        for (int k = 1; k <= grunsky_.max_k(); ++k) {
            grunsky_.at(m, k) = composed_[m][-k];
        }
    }
}

void FaberBasis::eval(cplx z, std::span<cplx> values) const {
    const int top = std::min<int>(max_degree_, static_cast<int>(values.size()) - 1);
    if (top < 0) {
        return;
    }
    values[0] = 1.0;
    for (int m = 0; m < top; ++m) {
        cplx v = z * values[m];
        for (const auto& [j, t] : recurrence_[m]) {
            v -= t * values[j];
        }
        values[m + 1] = v;
    }
}

void FaberBasis::eval_with_derivative(cplx z, std::span<cplx> values, std::span<cplx> derivs) const {
    const int top = std::min<int>(max_degree_, static_cast<int>(std::min(values.size(), derivs.size())) - 1);
    if (top < 0) {
        return;
    }
    values[0] = 1.0;
    derivs[0] = 0.0;
    for (int m = 0; m < top; ++m) {
        cplx v = z * values[m];
        cplx d = values[m] + z * derivs[m];
        for (const auto& [j, t] : recurrence_[m]) {
            v -= t * values[j];
            d -= t * derivs[j];
        }
        values[m + 1] = v;
        derivs[m + 1] = d;
    }
}

int default_faber_degree(const Domain& domain) { return std::max(2 * domain.order(), 16); }

FaberTable compute_faber(const Domain& domain, int max_degree) {
    return FaberBasis(domain, max_degree).table();
}

GrunskyTable compute_grunsky(const Domain& domain, int max_m) {
    return FaberBasis(domain, max_m).grunsky();
}

std::vector<cplx> frak_F_coefficients(const Domain& domain) {
    const int n = domain.order();
    std::vector<cplx> alpha(n + 1);
    for (int k = 2; k <= n; ++k) {
        alpha[k] = std::conj(domain.mu(k)) / std::pow(domain.gamma(), k);
    }
    return alpha;
}

cplx frak_F(const Domain& domain, cplx z) {
    const int n = domain.order();
    if (n <= 1) {
        return {};
    }
    const FaberBasis basis(domain, n);
    std::vector<cplx> values(n + 1);
    basis.eval(z, values);
    const auto alpha = frak_F_coefficients(domain);
    cplx sum{};
    for (int k = 2; k <= n; ++k) {
        sum += alpha[k] * values[k];
    }
    return sum;
}

std::vector<cplx> faber_to_monomial(const FaberTable& table, std::span<const cplx> alpha) {
    if (static_cast<int>(alpha.size()) - 1 > table.max_degree) {
        throw std::invalid_argument("faber_to_monomial: Faber table too small");
    }
    std::vector<cplx> out(alpha.size());
    for (std::size_t m = 0; m < alpha.size(); ++m) {
        for (std::size_t j = 0; j <= m; ++j) {
            out[j] += alpha[m] * table.coeffs[m][j];
        }
    }
    return out;
}

std::vector<cplx> monomial_to_faber(const FaberTable& table, std::span<const cplx> monomial) {
    if (static_cast<int>(monomial.size()) - 1 > table.max_degree) {
        throw std::invalid_argument("monomial_to_faber: Faber table too small");
    }
    std::vector<cplx> rest(monomial.begin(), monomial.end());
    std::vector<cplx> alpha(monomial.size());
    for (int d = static_cast<int>(monomial.size()) - 1; d >= 0; --d) {
        alpha[d] = rest[d];
        for (int j = 0; j <= d; ++j) {
            rest[j] -= alpha[d] * table.coeffs[d][j];
        }
    }
    return alpha;
}

}  // namespace faberfield
