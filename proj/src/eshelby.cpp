#include "faberfield/eshelby.hpp"

#include "faberfield/errors.hpp"

#include <cmath>

namespace faberfield {

namespace {

Eigen::Vector2d to_eigen(Vec2 v) { return {v[0], v[1]}; }
Vec2 from_eigen(const Eigen::Vector2d& v) { return {v(0), v(1)}; }

Eigen::Matrix2d inverse_2x2(const Eigen::Matrix2d& m, const char* what) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double scale = m.cwiseAbs().maxCoeff();
    if (std::abs(det) <= 1e-14 * scale * scale || scale == 0.0) {
        throw SingularTau(std::string(what) + ": singular 2x2 system");
    }
    Eigen::Matrix2d inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
}

void require_nonzero(Vec2 v, const char* what) {
    if (v[0] == 0.0 && v[1] == 0.0) {
        throw ZeroTarget(std::string(what) + ": target vector is zero");
    }
}

// alpha_0 = 0, alpha_1 = given, alpha_m = [tau1 c1 + i tau2 c2] conj(mu_m) / gamma^m.
HarmonicPolynomial uniformity_loading(const Domain& domain, const TauValues& tv, cplx alpha1, Vec2 c) {
    const int n = domain.order();
    HarmonicPolynomial h;
    h.alpha.assign(n + 1, cplx{});
    h.alpha[1] = alpha1;
    const cplx bracket = tv.tau1 * c[0] + cplx(0, 1) * tv.tau2 * c[1];
    for (int m = 2; m <= n; ++m) {
        h.alpha[m] = bracket * std::conj(domain.mu(m)) / std::pow(domain.gamma(), m);
    }
    return h;
}

Synthesis isotropic_from(const Domain& domain, const TauValues& tv, Vec2 c, Vec2 e) {
    Synthesis out;
    out.tau = tv;
    out.spec = {e, {0.0, 0.0}, c};
    out.predicted_gradient = e;
    out.loading = uniformity_loading(domain, tv, cplx(c[0], -c[1]), c);
    return out;
}

Synthesis anisotropic_from(const Domain& domain, const AnisotropicContrast& contrast, const TauValues& tv, Vec2 c,
                           Vec2 e) {
    const Vec2 f = from_eigen(contrast.sigma() * to_eigen(e));
    Synthesis out;
    out.tau = tv;
    out.spec = {e, f, c};
    out.predicted_gradient = e;
    out.loading = uniformity_loading(domain, tv, cplx(f[0] + c[0], -(f[1] + c[1])), c);
    return out;
}

}  // namespace

IsotropicContrast::IsotropicContrast(double sigma) : sigma_(sigma) {
    if (!std::isfinite(sigma) || sigma <= 0.0 || sigma == 1.0) {
        throw InvalidContrast("isotropic contrast requires 0 < sigma != 1");
    }
}

double IsotropicContrast::lambda() const { return (sigma_ + 1.0) / (2.0 * (sigma_ - 1.0)); }

AnisotropicContrast::AnisotropicContrast(const Eigen::Matrix2d& sigma) : sigma_(sigma) {
    if (!sigma.allFinite() || std::abs(sigma(0, 1) - sigma(1, 0)) > 1e-12 * sigma.cwiseAbs().maxCoeff()) {
        throw InvalidContrast("anisotropic contrast must be a finite symmetric matrix");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sigma_);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw InvalidContrast("anisotropic contrast must be positive definite");
    }
    const Eigen::Vector2d gap = (Eigen::Matrix2d::Identity() - sigma_).selfadjointView<Eigen::Lower>().eigenvalues();
    if (gap.minCoeff() > 0.0) {
        definiteness_ = 1;
    } else if (gap.maxCoeff() < 0.0) {
        definiteness_ = -1;
    } else {
        throw InvalidContrast("I - sigma must be positive or negative definite");
    }
}

TauValues tau(const Domain& domain, double t) {
    const cplx r = domain.mu(1) / domain.gamma();
    const double denom = std::norm(r) - 4.0 * t * t;
    if (std::abs(denom) <= 1e-14 * std::max(1.0, 4.0 * t * t)) {
        throw SingularTau("tau: |mu_1/gamma|^2 = 4 t^2");
    }
    TauValues out;
    out.tau1 = (r + 2.0 * t) / denom;
    out.tau2 = (-r + 2.0 * t) / denom;
    const double s = 1.0 - 2.0 * t;
    out.matrix << s * out.tau1.real(), -s * out.tau2.imag(), s * out.tau1.imag(), s * out.tau2.real();
    out.det = s * s / (4.0 * t * t - std::norm(r));
    return out;
}

Synthesis synth_isotropic(const Domain& domain, const IsotropicContrast& contrast, Vec2 e) {
    require_nonzero(e, "synth_isotropic");
    const TauValues tv = tau(domain, contrast.lambda());
    const Vec2 c = from_eigen(inverse_2x2(tv.matrix, "synth_isotropic") * to_eigen(e));
    return isotropic_from(domain, tv, c, e);
}

Synthesis synth_isotropic_from_c(const Domain& domain, const IsotropicContrast& contrast, Vec2 c) {
    require_nonzero(c, "synth_isotropic");
    const TauValues tv = tau(domain, contrast.lambda());
    return isotropic_from(domain, tv, c, from_eigen(tv.matrix * to_eigen(c)));
}

Synthesis synth_anisotropic(const Domain& domain, const AnisotropicContrast& contrast, Vec2 e) {
    require_nonzero(e, "synth_anisotropic");
    const TauValues tv = tau(domain, -0.5);
    const Eigen::Matrix2d gap = Eigen::Matrix2d::Identity() - contrast.sigma();
    const Vec2 c = from_eigen(inverse_2x2(tv.matrix, "synth_anisotropic") * (gap * to_eigen(e)));
    return anisotropic_from(domain, contrast, tv, c, e);
}

Synthesis synth_anisotropic_from_c(const Domain& domain, const AnisotropicContrast& contrast, Vec2 c) {
    require_nonzero(c, "synth_anisotropic");
    const TauValues tv = tau(domain, -0.5);
    const Eigen::Matrix2d gap = Eigen::Matrix2d::Identity() - contrast.sigma();
    const Vec2 e = from_eigen(inverse_2x2(gap, "synth_anisotropic") * (tv.matrix * to_eigen(c)));
    return anisotropic_from(domain, contrast, tv, c, e);
}

Synthesis synth_anisotropic_from_fc_sum(const Domain& domain, const AnisotropicContrast& contrast, Vec2 s) {
    require_nonzero(s, "synth_anisotropic");
    const TauValues tv = tau(domain, -0.5);
    const Eigen::Matrix2d gap = Eigen::Matrix2d::Identity() - contrast.sigma();
    // f + c = [sigma + tau(-1/2)^{-1} (I - sigma)] e
    const Eigen::Matrix2d system = contrast.sigma() + inverse_2x2(tv.matrix, "synth_anisotropic") * gap;
    const Vec2 e = from_eigen(inverse_2x2(system, "synth_anisotropic") * to_eigen(s));
    const Vec2 c = from_eigen(inverse_2x2(tv.matrix, "synth_anisotropic") * (gap * to_eigen(e)));
    return anisotropic_from(domain, contrast, tv, c, e);
}

}  // namespace faberfield
