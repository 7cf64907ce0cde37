#include "faberfield/oracle.hpp"

#include "faberfield/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace faberfield::oracle {

namespace {

struct Nodes {
    std::vector<double> theta;
    std::vector<cplx> z;
    std::vector<cplx> normal;
    std::vector<double> h;
};

Nodes sample_curve(const Domain& domain, int n) {
    Nodes nodes;
    nodes.theta.resize(n);
    nodes.z.resize(n);
    nodes.normal.resize(n);
    nodes.h.resize(n);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * std::numbers::pi * j / n;
        const BoundaryPoint bp = boundary_geometry(domain, t);
        nodes.theta[j] = t;
        nodes.z[j] = bp.z;
        nodes.normal[j] = bp.normal;
        nodes.h[j] = bp.h;
    }
    return nodes;
}

// phi(theta) h(theta) = sum_m b_m e^{i m theta}
cplx weighted_density(const DensityVector& density, double theta) {
    cplx acc{};
    for (int m = -density.half_width(); m <= density.half_width(); ++m) {
        acc += density[m] * std::polar(1.0, m * theta);
    }
    return acc;
}

}  // namespace

Eigen::MatrixXcd np_matrix_nystrom(const Domain& domain, int half_width, int n_nodes) {
    if (n_nodes < 256 || (n_nodes & (n_nodes - 1)) != 0) {
        throw std::invalid_argument("np_matrix_nystrom: n_nodes must be a power of two >= 256");
    }
    const Nodes nodes = sample_curve(domain, n_nodes);
    const double dtheta = 2.0 * std::numbers::pi / n_nodes;

    Eigen::MatrixXd kernel(n_nodes, n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = 0; j < n_nodes; ++j) {
            if (i == j) {
                kernel(i, i) = boundary_curvature(domain, nodes.theta[i]) / (4.0 * std::numbers::pi);
                continue;
            }
            const cplx d = nodes.z[i] - nodes.z[j];
            const double dot = d.real() * nodes.normal[i].real() + d.imag() * nodes.normal[i].imag();
            kernel(i, j) = dot / (2.0 * std::numbers::pi * std::norm(d));
        }
    }

    const int width = 2 * half_width + 1;
    Eigen::MatrixXcd modes(n_nodes, width);
    for (int j = 0; j < n_nodes; ++j) {
        for (int m = -half_width; m <= half_width; ++m) {
            modes(j, m + half_width) = std::polar(1.0, m * nodes.theta[j]);
        }
    }
    const Eigen::MatrixXcd applied = kernel.cast<cplx>() * modes;
    Eigen::MatrixXcd weighted = modes.conjugate();
    for (int i = 0; i < n_nodes; ++i) {
        weighted.row(i) *= nodes.h[i];
    }
    return (dtheta * dtheta / (2.0 * std::numbers::pi)) * (weighted.transpose() * applied);
}

cplx single_layer_quadrature_complex(const Domain& domain, const DensityVector& density, cplx z, int n_nodes) {
    const Nodes nodes = sample_curve(domain, n_nodes);
    const double margin = 10.0 * 2.0 * std::numbers::pi * domain.gamma() / n_nodes;
    double dist = std::numeric_limits<double>::infinity();
    for (const cplx& y : nodes.z) {
        dist = std::min(dist, std::abs(z - y));
    }
    if (dist < margin) {
        throw TooCloseToBoundary("single_layer_quadrature: point within quadrature margin of the boundary");
    }
    const double dtheta = 2.0 * std::numbers::pi / n_nodes;
    cplx acc{};
    for (int j = 0; j < n_nodes; ++j) {
        acc += std::log(std::abs(z - nodes.z[j])) * weighted_density(density, nodes.theta[j]);
    }
    return acc * dtheta / (2.0 * std::numbers::pi);
}

double single_layer_quadrature(const Domain& domain, const DensityVector& density, cplx z, int n_nodes) {
    return single_layer_quadrature_complex(domain, density, z, n_nodes).real();
}

Vec2 fd_gradient(const std::function<double(cplx)>& field, cplx z, double step, const Domain* domain) {
    if (domain != nullptr) {
        const Region side = classify(*domain, z);
        const cplx offsets[] = {step, -step, cplx(0, step), cplx(0, -step)};
        for (const cplx& d : offsets) {
            if (side == Region::Boundary || classify(*domain, z + d) != side) {
                throw StencilCrossesBoundary("fd_gradient: stencil crosses the boundary");
            }
        }
    }
    auto central = [&](double s) {
        return Vec2{(field(z + s) - field(z - s)) / (2.0 * s),
                    (field(z + cplx(0, s)) - field(z - cplx(0, s))) / (2.0 * s)};
    };
    const Vec2 coarse = central(step);
    const Vec2 fine = central(step / 2.0);
    return {(4.0 * fine[0] - coarse[0]) / 3.0, (4.0 * fine[1] - coarse[1]) / 3.0};
}

}  // namespace faberfield::oracle
