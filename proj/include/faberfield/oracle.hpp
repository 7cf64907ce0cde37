#pragma once

#include "faberfield/conformal.hpp"
#include "faberfield/potential.hpp"

#include <Eigen/Dense>

#include <functional>

namespace faberfield::oracle {

/// Nystrom discretisation of K* (trapezoid rule in theta, curvature limit on
/// the diagonal) projected onto psi_{-M..M}; row k + M, column m + M.
Eigen::MatrixXcd np_matrix_nystrom(const Domain& domain, int half_width, int n_nodes);

/// Trapezoid quadrature of (1/2pi) ln|z - y| phi(y) dsigma(y).
/// Throws TooCloseToBoundary when dist(z, curve) < 10 (2 pi gamma / n_nodes).
cplx single_layer_quadrature_complex(const Domain& domain, const DensityVector& density, cplx z, int n_nodes = 2048);
double single_layer_quadrature(const Domain& domain, const DensityVector& density, cplx z, int n_nodes = 2048);

/// Central differences at steps s and s/2 combined by Richardson extrapolation.
/// With a domain, throws StencilCrossesBoundary unless every stencil point
/// classifies like z.
Vec2 fd_gradient(const std::function<double(cplx)>& field, cplx z, double step, const Domain* domain = nullptr);

}  // namespace faberfield::oracle
