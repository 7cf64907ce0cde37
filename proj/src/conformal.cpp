#include "faberfield/conformal.hpp"

#include "faberfield/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>

namespace faberfield {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t hash_domain(double gamma, std::span<const cplx> mu) {
    std::size_t seed = std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(gamma));
    auto mix = [&seed](double v) {
        seed ^= std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(v)) + 0x9e3779b97f4a7c15ULL +
                (seed << 6) + (seed >> 2);
    };
    for (const cplx& m : mu) {
        mix(m.real());
        mix(m.imag());
    }
    return seed;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Proper or touching intersection of closed segments [p1,p2] and [q1,q2].
bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = cross(p2 - p1, q1 - p1);
    const double d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1);
    const double d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

Domain::Domain(double gamma, std::vector<cplx> mu) : gamma_(gamma), mu_(std::move(mu)) {
    if (!std::isfinite(gamma_) || gamma_ <= 0.0) {
        throw DomainError("conformal radius gamma must be positive and finite");
    }
    for (const cplx& m : mu_) {
        if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
            throw DomainError("map coefficients must be finite");
        }
    }
    while (mu_.size() > 2 && mu_.back() == cplx{}) {
        mu_.pop_back();
    }
    mu_.resize(std::max<std::size_t>(mu_.size(), 2));
    order_ = static_cast<int>(mu_.size()) - 1;

    a_.resize(mu_.size());
    double scale = 1.0;
    for (std::size_t k = 0; k < mu_.size(); ++k) {
        a_[k] = mu_[k] * scale;
        scale *= gamma_;
    }
    hash_ = hash_domain(gamma_, mu_);

    auto poly = std::make_shared<std::vector<cplx>>(kPolylineSamples);
    min_dpsi_ = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kPolylineSamples; ++j) {
        const cplx w = std::polar(gamma_, kTwoPi * j / kPolylineSamples);
        (*poly)[j] = psi(w);
        min_dpsi_ = std::min(min_dpsi_, std::abs(dpsi(w)));
    }
    polyline_ = std::move(poly);
}

double Domain::rho0() const { return std::log(gamma_); }

cplx Domain::mu(int k) const {
    return (k >= 0 && k < static_cast<int>(mu_.size())) ? mu_[k] : cplx{};
}

cplx Domain::a(int k) const {
    return (k >= 0 && k < static_cast<int>(a_.size())) ? a_[k] : cplx{};
}

Domain Domain::truncated(int n) const {
    std::vector<cplx> mu(mu_.begin(), mu_.begin() + std::min<std::ptrdiff_t>(n + 1, std::ssize(mu_)));
    return Domain(gamma_, std::move(mu));
}

cplx Domain::psi(cplx w) const {
    const cplx u = 1.0 / w;
    cplx s{};
    for (int k = order_; k >= 1; --k) {
        s = (s + a_[k]) * u;
    }
    return w + a_[0] + s;
}

cplx Domain::dpsi(cplx w) const {
    const cplx u = 1.0 / w;
    cplx s{};
    for (int k = order_; k >= 1; --k) {
        s = (s + static_cast<double>(k) * a_[k]) * u;
    }
    return 1.0 - s * u;
}

cplx Domain::d2psi(cplx w) const {
    const cplx u = 1.0 / w;
    cplx s{};
    for (int k = order_; k >= 1; --k) {
        s = (s + static_cast<double>(k) * (k + 1) * a_[k]) * u;
    }
    return s * u * u;
}

cplx eval_psi(const Domain& domain, cplx w) {
    if (std::abs(w) < domain.gamma() * (1.0 - 1e-12)) {
        throw DomainError("eval_psi: |w| < gamma");
    }
    return domain.psi(w);
}

namespace {

std::optional<cplx> newton_invert(const Domain& domain, cplx z, cplx w, const InversionOptions& opt) {
    const double floor_radius = 0.25 * domain.gamma();
    for (int it = 0; it < opt.max_iter; ++it) {
        const cplx f = domain.psi(w) - z;
        const cplx d = domain.dpsi(w);
        if (d == cplx{}) {
            return std::nullopt;
        }
        cplx step = f / d;
        if (std::abs(d) < 0.1) {
            step *= 0.5;
        }
        // Stay away from the pole of Psi at the origin.
        while (std::abs(w - step) < floor_radius && std::abs(step) > 1e-300) {
            step *= 0.5;
        }
        w -= step;
        if (std::abs(step) <= opt.tol_newton * std::max(1.0, std::abs(w))) {
            if (std::abs(domain.psi(w) - z) <= 1e3 * opt.tol_newton * std::max(1.0, std::abs(z))) {
                return w;
            }
        }
    }
    return std::nullopt;
}

int nearest_sample(const Domain& domain, cplx z) {
    const auto poly = domain.polyline();
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(poly.size()); ++j) {
        const double d = std::norm(poly[j] - z);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

// Exterior root of Psi(w) = z if one is found from any seed.
std::optional<cplx> find_exterior_root(const Domain& domain, cplx z, const InversionOptions& opt) {
    const double g = domain.gamma();
    if (auto w = newton_invert(domain, z, z - domain.a(0), opt); w && std::abs(*w) >= g * (1.0 - 1e-12)) {
        return w;
    }
    const int j = nearest_sample(domain, z);
    const double theta = kTwoPi * j / Domain::kPolylineSamples;
    for (double delta : {1e-8, 1e-6, 1e-4, 1e-2, 1e-1, 0.5, 2.0}) {
        if (auto w = newton_invert(domain, z, std::polar(g * (1.0 + delta), theta), opt);
            w && std::abs(*w) >= g * (1.0 - 1e-12)) {
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace

cplx invert_psi(const Domain& domain, cplx z, const InversionOptions& options) {
    const auto w = find_exterior_root(domain, z, options);
    if (!w) {
        if (winding_number(domain, z) != 0) {
            throw DomainError("invert_psi: point is not exterior to the inclusion");
        }
        throw NoConvergence("invert_psi: Newton iteration did not converge");
    }
    if (std::abs(*w) - domain.gamma() < kBoundaryTolerance * domain.gamma()) {
        throw BoundaryProximity("invert_psi: point lies on the inclusion boundary");
    }
    return *w;
}

const char* to_string(Region region) {
    switch (region) {
        case Region::Interior: return "in";
        case Region::Exterior: return "out";
        case Region::Boundary: return "bnd";
    }
    return "?";
}

double boundary_distance(const Domain& domain, cplx z) {
    const int n = Domain::kPolylineSamples;
    const double g = domain.gamma();
    const int j = nearest_sample(domain, z);
    double theta = kTwoPi * j / n;
    const double dtheta = kTwoPi / n;
    double best = std::abs(domain.polyline()[j] - z);
    for (int it = 0; it < 20; ++it) {
        const cplx w = std::polar(g, theta);
        const cplx zt = domain.psi(w);
        const cplx z1 = cplx(0, 1) * w * domain.dpsi(w);
        const cplx z2 = -w * domain.dpsi(w) - w * w * domain.d2psi(w);
        const cplx diff = zt - z;
        best = std::min(best, std::abs(diff));
        const double f = (std::conj(diff) * z1).real();
        const double fp = std::norm(z1) + (std::conj(diff) * z2).real();
        if (fp <= 0.0) {
            break;
        }
        const double step = std::clamp(f / fp, -2.0 * dtheta, 2.0 * dtheta);
        theta -= step;
        if (std::abs(step) < 1e-15) {
            best = std::min(best, std::abs(domain.psi(std::polar(g, theta)) - z));
            break;
        }
    }
    return best;
}

int winding_number(const Domain& domain, cplx z) {
    const auto poly = domain.polyline();
    const std::size_t n = poly.size();
    int wn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx p = poly[i];
        const cplx q = poly[(i + 1) % n];
        if (p.imag() <= z.imag()) {
            if (q.imag() > z.imag() && cross(q - p, z - p) > 0) {
                ++wn;
            }
        } else if (q.imag() <= z.imag() && cross(q - p, z - p) < 0) {
            --wn;
        }
    }
    return wn;
}

Region classify(const Domain& domain, cplx z) {
    const double g = domain.gamma();
    const double tol = kBoundaryTolerance * g;
    const InversionOptions opt;

    // Fast path: far enough outside that Newton from z - a_0 settles it.
    if (auto w = newton_invert(domain, z, z - domain.a(0), opt); w && std::abs(*w) > g) {
        if ((std::abs(*w) - g) * domain.min_boundary_derivative() > 10.0 * tol &&
            std::abs(*w) > g * (1.0 + 1e-6)) {
            return Region::Exterior;
        }
    }
    const double dist = boundary_distance(domain, z);
    if (dist <= tol) {
        return Region::Boundary;
    }
    if (auto w = find_exterior_root(domain, z, opt); w && std::abs(*w) > g * (1.0 + kBoundaryTolerance)) {
        return Region::Exterior;
    }
    return winding_number(domain, z) != 0 ? Region::Interior : Region::Exterior;
}

BoundaryPoint boundary_geometry(const Domain& domain, double theta) {
    const double g = domain.gamma();
    const cplx w = std::polar(g, theta);
    const cplx d = domain.dpsi(w);
    if (std::abs(d) < 1e-10) {
        throw DegenerateBoundary("boundary_geometry: |Psi'| vanishes on the boundary");
    }
    const cplx dz_drho = w * d;
    return {domain.psi(w), dz_drho / std::abs(dz_drho), g * std::abs(d)};
}

double boundary_curvature(const Domain& domain, double theta) {
    const cplx w = std::polar(domain.gamma(), theta);
    const cplx d1 = domain.dpsi(w);
    const cplx z1 = cplx(0, 1) * w * d1;
    const cplx z2 = -w * d1 - w * w * domain.d2psi(w);
    return (std::conj(z1) * z2).imag() / std::pow(std::abs(z1), 3);
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

ValidationReport validate(const Domain& domain) {
    ValidationReport report;
    const double g = domain.gamma();
    auto add = [&report](std::string name, bool passed, double margin, std::string detail = {}) {
        report.checks.push_back({std::move(name), passed, true, margin, std::move(detail)});
    };
    auto skip = [&report](std::string name) {
        report.checks.push_back({std::move(name), false, false, 0.0, "not evaluated"});
    };

    add("gamma", g > 0.0, g);

    double area = 0.0;
    for (int k = 1; k <= domain.order(); ++k) {
        area += k * std::norm(domain.mu(k));
    }
    report.area_sum = area;
    const bool area_ok = area < g * g;
    add("area_theorem", area_ok, g * g - area);
    add("bieberbach", std::abs(domain.mu(1)) < g, g - std::abs(domain.mu(1)));
    if (!area_ok) {
        // The geometric sweeps are meaningless for a non-univalent map.
        for (const char* name : {"boundary_derivative", "simple_curve", "orientation"}) {
            skip(name);
        }
        report.passed = false;
        return report;
    }

    const double min_d = domain.min_boundary_derivative();
    add("boundary_derivative", min_d > 1e-10, min_d);

    // Self-intersection sweep over the sampled polyline, sorted by x extent.
    const auto poly = domain.polyline();
    const int n = static_cast<int>(poly.size());
    struct Seg {
        double xmin, xmax, ymin, ymax;
        int index;
    };
    std::vector<Seg> segs(n);
    for (int i = 0; i < n; ++i) {
        const cplx p = poly[i];
        const cplx q = poly[(i + 1) % n];
        segs[i] = {std::min(p.real(), q.real()), std::max(p.real(), q.real()), std::min(p.imag(), q.imag()),
                   std::max(p.imag(), q.imag()), i};
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& l, const Seg& r) { return l.xmin < r.xmin; });
    int crossings = 0;
    for (int s = 0; s < n && crossings == 0; ++s) {
        for (int t = s + 1; t < n && segs[t].xmin <= segs[s].xmax; ++t) {
            const int i = segs[s].index;
            const int j = segs[t].index;
            const int gap = std::abs(i - j);
            if (gap <= 1 || gap == n - 1) {
                continue;
            }
            if (segs[t].ymin > segs[s].ymax || segs[t].ymax < segs[s].ymin) {
                continue;
            }
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
                ++crossings;
                break;
            }
        }
    }
    add("simple_curve", crossings == 0, static_cast<double>(crossings));

    // Orientation: tangent turning number and winding around the area centroid.
    double turning = 0.0;
    double signed_area = 0.0;
    cplx centroid{};
    for (int i = 0; i < n; ++i) {
        const cplx p = poly[i];
        const cplx q = poly[(i + 1) % n];
        const cplx r = poly[(i + 2) % n];
        turning += std::arg((r - q) / (q - p));
        const double c = cross(p, q);
        signed_area += 0.5 * c;
        centroid += (p + q) * c / 6.0;
    }
    centroid /= signed_area;
    const int turns = static_cast<int>(std::lround(turning / kTwoPi));
    const int wind = winding_number(domain, centroid);
    add("orientation", turns == 1 && signed_area > 0.0, signed_area,
        "turning=" + std::to_string(turns) + " centroid_winding=" + std::to_string(wind));

    report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const ValidationCheck& c) { return c.passed; });
    return report;
}

}  // namespace faberfield
