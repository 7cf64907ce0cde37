#include "faberfield/conformal.hpp"
#include "faberfield/eshelby.hpp"
#include "faberfield/faber.hpp"
#include "faberfield/io.hpp"
#include "faberfield/oracle.hpp"
#include "faberfield/potential.hpp"
#include "faberfield/solver.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace faberfield;

namespace {

Contrast make_contrast(const py::object& sigma) {
    if (py::isinstance<py::float_>(sigma) || py::isinstance<py::int_>(sigma)) {
        return IsotropicContrast(sigma.cast<double>());
    }
    return AnisotropicContrast(sigma.cast<Eigen::Matrix2d>());
}

py::dict synthesis_dict(const Synthesis& s) {
    py::dict d;
    d["alpha"] = s.loading.alpha;
    d["e"] = s.spec.e;
    d["f"] = s.spec.f;
    d["c"] = s.spec.c;
    d["predicted_gradient"] = s.predicted_gradient;
    d["tau_matrix"] = Eigen::Matrix2d(s.tau.matrix);
    return d;
}

HarmonicPolynomial polynomial(std::vector<cplx> alpha) {
    HarmonicPolynomial h;
    h.alpha = std::move(alpha);
    return h;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Faber-polynomial transmission solver for finite-order inclusions";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::enum_<Region>(m, "Region")
        .value("Interior", Region::Interior)
        .value("Exterior", Region::Exterior)
        .value("Boundary", Region::Boundary);

    py::class_<Domain>(m, "Domain")
        .def(py::init<double, std::vector<cplx>>(), py::arg("gamma"), py::arg("mu"))
        .def_property_readonly("gamma", &Domain::gamma)
        .def_property_readonly("order", &Domain::order)
        .def_property_readonly("mu", [](const Domain& d) { return std::vector<cplx>(d.mu().begin(), d.mu().end()); })
        .def("psi", &Domain::psi)
        .def("truncated", &Domain::truncated)
        .def("polyline", [](const Domain& d) {
            const auto p = d.polyline();
            return py::array_t<cplx>(static_cast<py::ssize_t>(p.size()), p.data());
        })
        .def("__repr__", [](const Domain& d) {
            return "<Domain gamma=" + std::to_string(d.gamma()) + " order=" + std::to_string(d.order()) + ">";
        });

    m.def("load_fixture", [](const std::string& path) {
        const Fixture f = load_fixture(path);
        py::dict d;
        d["name"] = f.name;
        d["domain"] = f.domain;
        if (f.contrast) {
            if (const auto* iso = std::get_if<IsotropicContrast>(&*f.contrast)) {
                d["sigma"] = iso->sigma();
            } else {
                d["sigma"] = Eigen::Matrix2d(std::get<AnisotropicContrast>(*f.contrast).sigma());
            }
        }
        return d;
    });

    m.def("eval_psi", &eval_psi);
    m.def("invert_psi", [](const Domain& d, cplx z) { return invert_psi(d, z); });
    m.def("classify", &classify);
    m.def("validate", [](const Domain& d) {
        const ValidationReport r = validate(d);
        py::dict out;
        out["passed"] = r.passed;
        out["area_sum"] = r.area_sum;
        py::dict checks;
        for (const auto& c : r.checks) {
            checks[py::str(c.name)] = py::dict(py::arg("passed") = c.passed, py::arg("evaluated") = c.evaluated,
                                               py::arg("margin") = c.margin, py::arg("detail") = c.detail);
        }
        out["checks"] = checks;
        return out;
    });
    m.def("boundary_geometry", [](const Domain& d, double theta) {
        const BoundaryPoint p = boundary_geometry(d, theta);
        return py::make_tuple(p.z, p.normal, p.h);
    });

    m.def("faber_coefficients", [](const Domain& d, int degree) { return compute_faber(d, degree).coeffs; },
          "Monomial coefficients of F_0..F_degree (ascending powers)");
    m.def("grunsky", [](const Domain& d, int max_m) {
        const GrunskyTable g = compute_grunsky(d, max_m);
        py::array_t<cplx> out({max_m, g.max_k()});
        auto a = out.mutable_unchecked<2>();
        for (int i = 1; i <= max_m; ++i) {
            for (int k = 1; k <= g.max_k(); ++k) {
                a(i - 1, k - 1) = g(i, k);
            }
        }
        return out;
    }, "Array c[m-1, k-1] of Grunsky coefficients");
    m.def("np_matrix", [](const Domain& d, int half_width) { return Eigen::MatrixXcd(np_matrix(d, half_width).entries); });
    m.def("np_matrix_nystrom", &oracle::np_matrix_nystrom, py::arg("domain"), py::arg("half_width"),
          py::arg("n_nodes") = 2048);
    m.def("nu_complex_residual", &nu_complex_identity_check, py::arg("domain"), py::arg("half_width") = 16,
          py::arg("samples") = 512);

    m.def("tau", [](const Domain& d, double t) {
        const TauValues v = tau(d, t);
        return py::make_tuple(v.tau1, v.tau2, Eigen::Matrix2d(v.matrix));
    });
    m.def(
        "synth",
        [](const Domain& d, const py::object& sigma, std::optional<Vec2> e, std::optional<Vec2> c,
           std::optional<Vec2> fc_sum) {
            const Contrast contrast = make_contrast(sigma);
            const int given = (e ? 1 : 0) + (c ? 1 : 0) + (fc_sum ? 1 : 0);
            if (given != 1) {
                throw py::value_error("give exactly one of e, c, fc_sum");
            }
            const LoadingKind kind = e ? LoadingKind::TargetGradient
                                       : (c ? LoadingKind::LoadingCoefficients : LoadingKind::FluxSum);
            return synthesis_dict(synthesize(d, contrast, {kind, e ? *e : (c ? *c : *fc_sum)}));
        },
        py::arg("domain"), py::arg("sigma"), py::kw_only(), py::arg("e") = py::none(), py::arg("c") = py::none(),
        py::arg("fc_sum") = py::none());

    py::class_<TransmissionSolution>(m, "Solution")
        .def("u", &TransmissionSolution::u)
        .def("grad_u", &TransmissionSolution::grad_u)
        .def("u_grid", [](const TransmissionSolution& s, py::array_t<double> x, py::array_t<double> y) {
            auto xs = x.unchecked<1>();
            auto ys = y.unchecked<1>();
            py::array_t<double> out({ys.shape(0), xs.shape(0)});
            auto o = out.mutable_unchecked<2>();
            for (py::ssize_t j = 0; j < ys.shape(0); ++j) {
                for (py::ssize_t i = 0; i < xs.shape(0); ++i) {
                    const cplx z(xs(i), ys(j));
                    try {
                        o(j, i) = s.u(z);
                    } catch (const BoundaryProximity&) {
                        o(j, i) = s.u_interior(z);
                    }
                }
            }
            return out;
        })
        .def_property_readonly("interior_alpha", [](const TransmissionSolution& s) { return s.interior().alpha; })
        .def_property_readonly("loading_alpha", [](const TransmissionSolution& s) { return s.loading().alpha; })
        .def_property_readonly("phi", [](const TransmissionSolution& s) {
            const auto c = s.phi().coefficients();
            return std::vector<cplx>(c.begin(), c.end());
        })
        .def_property_readonly("truncation", &TransmissionSolution::truncation)
        .def_property_readonly("tail_change", [](const TransmissionSolution& s) { return s.report().tail_change; })
        .def("interior_gradient", [](const TransmissionSolution& s) {
            const GradientSummary g = interior_gradient(s, interior_sample_points(s.domain()));
            return py::make_tuple(g.mean, g.max_deviation);
        })
        .def("verify", [](const TransmissionSolution& s, int n_theta, double offset) {
            const auto r = verify_transmission(s, n_theta, offset);
            return py::dict(py::arg("continuity") = r.continuity, py::arg("flux_jump") = r.flux_jump,
                            py::arg("flux_fd") = r.flux_fd);
        }, py::arg("n_theta") = 256, py::arg("offset") = 1e-4);

    m.def(
        "solve",
        [](const Domain& d, const py::object& sigma, std::vector<cplx> alpha, int truncation) {
            const Contrast contrast = make_contrast(sigma);
            const auto* iso = std::get_if<IsotropicContrast>(&contrast);
            if (iso == nullptr) {
                throw py::value_error("general loadings need a scalar sigma; use solve_uniform for tensors");
            }
            SolveOptions o;
            o.truncation = truncation;
            return solve_isotropic(d, *iso, polynomial(std::move(alpha)), o);
        },
        py::arg("domain"), py::arg("sigma"), py::arg("alpha"), py::arg("truncation") = 0,
        "Solve with loading H = Re sum alpha_m F_m");
    m.def(
        "solve_uniform",
        [](const Domain& d, const py::object& sigma, std::optional<Vec2> e, std::optional<Vec2> c,
           std::optional<Vec2> fc_sum) {
            const Contrast contrast = make_contrast(sigma);
            const int given = (e ? 1 : 0) + (c ? 1 : 0) + (fc_sum ? 1 : 0);
            if (given != 1) {
                throw py::value_error("give exactly one of e, c, fc_sum");
            }
            const LoadingKind kind = e ? LoadingKind::TargetGradient
                                       : (c ? LoadingKind::LoadingCoefficients : LoadingKind::FluxSum);
            const Synthesis syn = synthesize(d, contrast, {kind, e ? *e : (c ? *c : *fc_sum)});
            if (const auto* iso = std::get_if<IsotropicContrast>(&contrast)) {
                return solve_isotropic(d, *iso, syn.loading);
            }
            return make_anisotropic_solution(d, std::get<AnisotropicContrast>(contrast), syn);
        },
        py::arg("domain"), py::arg("sigma"), py::kw_only(), py::arg("e") = py::none(), py::arg("c") = py::none(),
        py::arg("fc_sum") = py::none(), "Synthesise the uniformity loading and solve");

    m.def("linear_functional_degree", [](const Domain& d, double sigma) {
        return theorem12_functional(d, IsotropicContrast(sigma), HarmonicPolynomial::linear(d, 1.0, 0.0)).degree;
    });
    m.def("ellipse_check", [](const Domain& d, const py::object& sigma) {
        const CorollaryResult r = eshelby_corollary_check(d, make_contrast(sigma));
        return py::make_tuple(r.ellipse_uniform, r.spread_x1, r.spread_x2);
    });
}
