#pragma once

#include "faberfield/conformal.hpp"
#include "faberfield/potential.hpp"

#include <Eigen/Dense>

#include <variant>

namespace faberfield {

/// Scalar inclusion conductivity sigma (0 < sigma != 1).
class IsotropicContrast {
public:
    explicit IsotropicContrast(double sigma);

    double sigma() const { return sigma_; }
    /// lambda = (sigma + 1) / (2 (sigma - 1)); |lambda| > 1/2.
    double lambda() const;

private:
    double sigma_;
};

/// Symmetric positive-definite conductivity tensor with I - sigma definite.
class AnisotropicContrast {
public:
    explicit AnisotropicContrast(const Eigen::Matrix2d& sigma);

    const Eigen::Matrix2d& sigma() const { return sigma_; }
    /// +1 when I - sigma is positive definite, -1 when negative definite.
    int definiteness() const { return definiteness_; }

private:
    Eigen::Matrix2d sigma_;
    int definiteness_;
};

using Contrast = std::variant<IsotropicContrast, AnisotropicContrast>;

struct TauValues {
    cplx tau1;
    cplx tau2;
    /// (1 - 2t) [[Re tau1, -Im tau2], [Im tau1, Re tau2]]
    Eigen::Matrix2d matrix;
    double det = 0.0;
};

/// tau_1(t), tau_2(t) and the 2x2 matrix linking (c1, c2) to the interior gradient.
/// Throws SingularTau when |mu_1 / gamma|^2 = 4 t^2.
TauValues tau(const Domain& domain, double t);

/// Target gradient e, flux vector f = sigma e (anisotropic only) and loading coefficients c.
struct LoadingSpec {
    Vec2 e{};
    Vec2 f{};
    Vec2 c{};
};

struct Synthesis {
    HarmonicPolynomial loading;
    LoadingSpec spec;
    TauValues tau;
    /// Interior gradient predicted by the closed form (equal to spec.e).
    Vec2 predicted_gradient{};
};

/// Isotropic uniformity loading for target gradient e: c = tau(lambda)^{-1} e,
/// alpha_1 = c1 - i c2, alpha_m = [tau1 Re alpha_1 - i tau2 Im alpha_1] conj(mu_m) / gamma^m.
Synthesis synth_isotropic(const Domain& domain, const IsotropicContrast& contrast, Vec2 e);
/// Same loading parametrised by (c1, c2); the gradient is e = tau(lambda) c.
Synthesis synth_isotropic_from_c(const Domain& domain, const IsotropicContrast& contrast, Vec2 c);

/// Anisotropic uniformity loading: f = sigma e, c = tau(-1/2)^{-1} (I - sigma) e.
Synthesis synth_anisotropic(const Domain& domain, const AnisotropicContrast& contrast, Vec2 e);
Synthesis synth_anisotropic_from_c(const Domain& domain, const AnisotropicContrast& contrast, Vec2 c);
/// Loading with prescribed f + c = s (alpha_1 = s1 - i s2).
Synthesis synth_anisotropic_from_fc_sum(const Domain& domain, const AnisotropicContrast& contrast, Vec2 s);

}  // namespace faberfield
