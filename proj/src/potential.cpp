#include "faberfield/potential.hpp"

#include "faberfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace faberfield {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Exterior evaluations with |rho - rho_0| below this are refused.
constexpr double kExclusionZone = 1e-6;

const FaberBasis& basis_for(const FaberBasis& basis, int degree, std::optional<FaberBasis>& storage) {
    if (basis.max_degree() >= degree) {
        return basis;
    }
    storage.emplace(basis.domain(), degree);
    return *storage;
}

// Grunsky coefficient scaled by gamma^{m+k}.
cplx scaled_grunsky(const FaberBasis& basis, int m, int k) {
    return basis.grunsky()(m, k) / std::pow(basis.domain().gamma(), m + k);
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityVector

DensityVector::DensityVector(int half_width)
    : half_width_(half_width), b_(static_cast<std::size_t>(2 * half_width + 1)) {
    if (half_width < 0) {
        throw std::invalid_argument("DensityVector: negative half-width");
    }
}

cplx DensityVector::operator[](int m) const {
    return std::abs(m) <= half_width_ ? b_[m + half_width_] : cplx{};
}

cplx& DensityVector::at(int m) {
    if (std::abs(m) > half_width_) {
        throw std::out_of_range("DensityVector::at");
    }
    return b_[m + half_width_];
}

DensityVector DensityVector::resized(int half_width) const {
    DensityVector out(half_width);
    const int top = std::min(half_width, half_width_);
    for (int m = -top; m <= top; ++m) {
        out.at(m) = (*this)[m];
    }
    return out;
}

bool DensityVector::is_real(double tol) const {
    for (int m = 0; m <= half_width_; ++m) {
        if (std::abs((*this)[-m] - std::conj((*this)[m])) > tol) {
            return false;
        }
    }
    return true;
}

double DensityVector::max_abs() const {
    double out = 0.0;
    for (const cplx& v : b_) {
        out = std::max(out, std::abs(v));
    }
    return out;
}

cplx DensityVector::eval(const Domain& domain, double theta) const {
    const double h = domain.gamma() * std::abs(domain.dpsi(std::polar(domain.gamma(), theta)));
    cplx sum{};
    for (int m = -half_width_; m <= half_width_; ++m) {
        sum += b_[m + half_width_] * std::polar(1.0, m * theta);
    }
    return sum / h;
}

DensityVector& DensityVector::operator+=(const DensityVector& other) {
    if (other.half_width_ > half_width_) {
        *this = resized(other.half_width_);
    }
    for (int m = -other.half_width_; m <= other.half_width_; ++m) {
        b_[m + half_width_] += other[m];
    }
    return *this;
}

DensityVector& DensityVector::operator-=(const DensityVector& other) {
    if (other.half_width_ > half_width_) {
        *this = resized(other.half_width_);
    }
    for (int m = -other.half_width_; m <= other.half_width_; ++m) {
        b_[m + half_width_] -= other[m];
    }
    return *this;
}

DensityVector& DensityVector::operator*=(cplx scale) {
    for (cplx& v : b_) {
        v *= scale;
    }
    return *this;
}

// ---------------------------------------------------------------------------
// HarmonicPolynomial

int HarmonicPolynomial::degree(double tol) const {
    for (int m = static_cast<int>(alpha.size()) - 1; m >= 1; --m) {
        if (std::abs(alpha[m]) > tol) {
            return m;
        }
    }
    return 0;
}

cplx HarmonicPolynomial::coeff(int m) const {
    return (m >= 0 && m < static_cast<int>(alpha.size())) ? alpha[m] : cplx{};
}

double HarmonicPolynomial::eval(const FaberBasis& basis, cplx z) const {
    const int deg = static_cast<int>(alpha.size()) - 1;
    if (deg < 0) {
        return 0.0;
    }
    std::optional<FaberBasis> storage;
    const FaberBasis& b = basis_for(basis, deg, storage);
    std::vector<cplx> values(deg + 1);
    b.eval(z, values);
    cplx sum{};
    for (int m = 0; m <= deg; ++m) {
        sum += alpha[m] * values[m];
    }
    return sum.real();
}

Vec2 HarmonicPolynomial::gradient(const FaberBasis& basis, cplx z) const {
    const int deg = static_cast<int>(alpha.size()) - 1;
    if (deg < 1) {
        return {0.0, 0.0};
    }
    std::optional<FaberBasis> storage;
    const FaberBasis& b = basis_for(basis, deg, storage);
    std::vector<cplx> values(deg + 1);
    std::vector<cplx> derivs(deg + 1);
    b.eval_with_derivative(z, values, derivs);
    cplx d{};
    for (int m = 1; m <= deg; ++m) {
        d += alpha[m] * derivs[m];
    }
    // grad Re f = (Re f', -Im f') for analytic f.
    return {d.real(), -d.imag()};
}

HarmonicPolynomial HarmonicPolynomial::linear(const Domain& domain, double e1, double e2) {
    // e1 x1 + e2 x2 = Re{conj(e) z} = Re{conj(e) (F_1 + a_0)}
    const cplx ce(e1, -e2);
    return HarmonicPolynomial{{ce * domain.a(0), ce}};
}

// ---------------------------------------------------------------------------
// Single layer potential

cplx single_layer_complex(const FaberBasis& basis, const DensityVector& density, cplx z) {
    const Domain& domain = basis.domain();
    const int M = density.half_width();
    std::optional<FaberBasis> storage;
    const FaberBasis& fb = basis_for(basis, M, storage);
    const double g = domain.gamma();

    switch (classify(domain, z)) {
        case Region::Boundary:
            throw BoundaryProximity("single_layer: point on the inclusion boundary");
        case Region::Interior: {
            std::vector<cplx> values(M + 1);
            fb.eval(z, values);
            cplx sum = density[0] * std::log(g);
            double gm = 1.0;
            for (int m = 1; m <= M; ++m) {
                gm *= g;
                sum -= (density[m] * values[m] + density[-m] * std::conj(values[m])) / (2.0 * m * gm);
            }
            return sum;
        }
        case Region::Exterior: {
            const cplx w = invert_psi(domain, z);
            if (std::log(std::abs(w)) - domain.rho0() < kExclusionZone) {
                throw BoundaryProximity("single_layer: exterior point inside the boundary exclusion zone");
            }
            const cplx q = g / w;  // |q| < 1
            cplx sum = density[0] * std::log(std::abs(w));
            cplx qm = 1.0;
            for (int m = 1; m <= M; ++m) {
                qm *= q;
                cplx series{};
                cplx qk = 1.0;
                for (int k = 1; k <= fb.grunsky().max_k() && k <= domain.order() * m; ++k) {
                    qk *= q;
                    series += scaled_grunsky(fb, m, k) * qk;
                }
                // gamma^{2m} conj(w)^{-m} / gamma^m = conj(q^m)
                const cplx reflect = std::conj(qm);
                sum -= (density[m] * (series + reflect) + density[-m] * (std::conj(series) + qm)) / (2.0 * m);
            }
            return sum;
        }
    }
    return {};
}

double single_layer(const FaberBasis& basis, const DensityVector& density, cplx z) {
    return single_layer_complex(basis, density, z).real();
}

HarmonicPolynomial interior_single_layer(const Domain& domain, const DensityVector& density) {
    const int M = density.half_width();
    HarmonicPolynomial out;
    out.alpha.assign(M + 1, cplx{});
    out.alpha[0] = density[0].real() * std::log(domain.gamma());
    double gm = 1.0;
    for (int m = 1; m <= M; ++m) {
        gm *= domain.gamma();
        out.alpha[m] = -density[m] / (m * gm);
    }
    return out;
}

double ExteriorExpansion::value(cplx w) const { return series.eval(w).real() + log_coeff * std::log(std::abs(w)); }

cplx ExteriorExpansion::derivative(cplx w) const {
    cplx d{};
    for (int p = series.low(); p <= series.high(); ++p) {
        if (p != 0) {
            d += static_cast<double>(p) * series[p] * std::pow(w, p - 1);
        }
    }
    return d + log_coeff / w;
}

ExteriorExpansion exterior_single_layer(const FaberBasis& basis, const DensityVector& density) {
    const Domain& domain = basis.domain();
    const int M = density.half_width();
    std::optional<FaberBasis> storage;
    const FaberBasis& fb = basis_for(basis, M, storage);
    const double g = domain.gamma();
    ExteriorExpansion out;
    out.log_coeff = density[0].real();
    double gm = 1.0;
    for (int m = 1; m <= M; ++m) {
        gm *= g;
        const cplx bm = density[m];
        if (bm == cplx{}) {
            continue;
        }
        for (int k = 1; k <= domain.order() * m; ++k) {
            out.series.add(-k, -bm * fb.grunsky()(m, k) / (m * gm));
        }
        out.series.add(-m, -std::conj(bm) * gm / static_cast<double>(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Neumann-Poincare operator

NpMatrix np_matrix(const FaberBasis& basis, int half_width) {
    std::optional<FaberBasis> storage;
    const FaberBasis& fb = basis_for(basis, half_width, storage);
    NpMatrix out;
    out.half_width = half_width;
    out.table_extended = storage.has_value();
    const int M = half_width;
    out.entries = Eigen::MatrixXcd::Zero(2 * M + 1, 2 * M + 1);
    out.entries(M, M) = 0.5;
    for (int m = 1; m <= M; ++m) {
        for (int k = 1; k <= M; ++k) {
            const cplx c = static_cast<double>(k) / (2.0 * m) * scaled_grunsky(fb, m, k);
            out.entries(-k + M, m + M) = c;
            out.entries(k + M, -m + M) = std::conj(c);
        }
    }
    return out;
}

NpMatrix np_matrix(const Domain& domain, int half_width) {
    return np_matrix(FaberBasis(domain, half_width), half_width);
}

DensityVector NpMatrix::apply(const DensityVector& density) const {
    const int M = half_width;
    Eigen::VectorXcd x(2 * M + 1);
    for (int m = -M; m <= M; ++m) {
        x(m + M) = density[m];
    }
    const Eigen::VectorXcd y = entries * x;
    DensityVector out(M);
    for (int k = -M; k <= M; ++k) {
        out.at(k) = y(k + M);
    }
    return out;
}

DensityVector apply_np(const FaberBasis& basis, const DensityVector& density) {
    const int M = density.half_width();
    std::optional<FaberBasis> storage;
    const FaberBasis& fb = basis_for(basis, M, storage);
    const int n = fb.domain().order();
    DensityVector out(std::max(n * M, M));
    out.at(0) = 0.5 * density[0];
    for (int m = 1; m <= M; ++m) {
        const cplx bp = density[m];
        const cplx bn = density[-m];
        if (bp == cplx{} && bn == cplx{}) {
            continue;
        }
        for (int k = 1; k <= n * m; ++k) {
            const cplx c = static_cast<double>(k) / (2.0 * m) * scaled_grunsky(fb, m, k);
            out.at(-k) += c * bp;
            out.at(k) += std::conj(c) * bn;
        }
    }
    return out;
}

DensityVector poly_to_density(const Domain& domain, const HarmonicPolynomial& h) {
    const int deg = std::max(h.degree(), 1);
    DensityVector psi(deg);
    double gm = 1.0;
    for (int m = 1; m <= deg; ++m) {
        gm *= domain.gamma();
        psi.at(m) = h.coeff(m) * (m * gm);
        psi.at(-m) = std::conj(psi[m]);
    }
    return psi;
}

DensityVector normal_derivative_density(const FaberBasis& basis, const HarmonicPolynomial& h) {
    const DensityVector psi = poly_to_density(basis.domain(), h);
    DensityVector out = 0.5 * psi;
    out -= apply_np(basis, psi);
    return out;
}

DensityVector normal_derivative_density(const Domain& domain, const HarmonicPolynomial& h) {
    return normal_derivative_density(FaberBasis(domain, std::max(h.degree(), 1)), h);
}

double nu_complex_identity_check(const Domain& domain, int half_width, int samples) {
    const int M = std::max(half_width, 1);
    const NpMatrix np = np_matrix(domain, M);
    DensityVector gpsi1(M);
    gpsi1.at(1) = domain.gamma();
    DensityVector rhs = 0.5 * gpsi1;
    rhs -= np.apply(gpsi1);
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double theta = kTwoPi * j / samples;
        const BoundaryPoint bp = boundary_geometry(domain, theta);
        worst = std::max(worst, std::abs(0.5 * bp.normal - rhs.eval(domain, theta)));
    }
    return worst;
}

}  // namespace faberfield
