#include "faberfield/io.hpp"

#include "faberfield/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace faberfield {

namespace {

using nlohmann::json;

double number(const json& j, const char* what) {
    if (!j.is_number()) {
        throw ParseError(std::string("expected a number for ") + what);
    }
    return j.get<double>();
}

Vec2 pair_of(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(std::string("expected a two-element array for ") + what);
    }
    return {number(j[0], what), number(j[1], what)};
}

void write(std::string& out, const json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
    const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) {
                    out += ',';
                }
                first = false;
                out += pad;
                out += json(key).dump();
                out += sep;
                write(out, value, indent, depth + 1);
            }
            out += close;
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& v : j) {
                flat = flat && !v.is_structured();
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) {
                    out += flat ? ", " : ",";
                }
                first = false;
                if (!flat) {
                    out += pad;
                }
                write(out, v, indent, depth + 1);
            }
            if (!flat) {
                out += close;
            }
            out += ']';
            return;
        }
        case json::value_t::number_float:
            out += std::isfinite(j.get<double>()) ? format_double(j.get<double>()) : "null";
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

Domain parse_domain(const json& j) {
    if (!j.is_object() || !j.contains("gamma") || !j.contains("mu")) {
        throw ParseError("domain JSON needs \"gamma\" and \"mu\"");
    }
    const double gamma = number(j["gamma"], "gamma");
    if (!j["mu"].is_array()) {
        throw ParseError("\"mu\" must be an array of [re, im] pairs");
    }
    std::vector<cplx> mu;
    for (const auto& entry : j["mu"]) {
        const Vec2 v = pair_of(entry, "mu entry");
        mu.emplace_back(v[0], v[1]);
    }
    return Domain(gamma, std::move(mu));
}

Contrast parse_contrast(const json& j) {
    if (j.contains("sigma")) {
        return IsotropicContrast(number(j["sigma"], "sigma"));
    }
    if (j.contains("sigma_matrix")) {
        const json& m = j["sigma_matrix"];
        if (!m.is_array() || m.size() != 2) {
            throw ParseError("\"sigma_matrix\" must be [[a, b], [b, d]]");
        }
        const Vec2 r0 = pair_of(m[0], "sigma_matrix row");
        const Vec2 r1 = pair_of(m[1], "sigma_matrix row");
        Eigen::Matrix2d s;
        s << r0[0], r0[1], r1[0], r1[1];
        return AnisotropicContrast(s);
    }
    throw ParseError("contrast needs \"sigma\" or \"sigma_matrix\"");
}

json contrast_to_json(const Contrast& contrast) {
    if (const auto* iso = std::get_if<IsotropicContrast>(&contrast)) {
        return {{"sigma", iso->sigma()}, {"lambda", iso->lambda()}};
    }
    const auto& s = std::get<AnisotropicContrast>(contrast).sigma();
    return {{"sigma_matrix", json::array({json::array({s(0, 0), s(0, 1)}), json::array({s(1, 0), s(1, 1)})})}};
}

Fixture parse_fixture(const json& j, std::string name) {
    Fixture f{std::move(name), parse_domain(j), std::nullopt, std::nullopt, std::nullopt};
    if (j.contains("name") && j["name"].is_string()) {
        f.name = j["name"].get<std::string>();
    }
    if (j.contains("contrast")) {
        f.contrast = parse_contrast(j["contrast"]);
    }
    if (j.contains("loading")) {
        const json& l = j["loading"];
        if (l.contains("e")) {
            f.loading = LoadingRequest{LoadingKind::TargetGradient, pair_of(l["e"], "loading.e")};
        } else if (l.contains("c")) {
            f.loading = LoadingRequest{LoadingKind::LoadingCoefficients, pair_of(l["c"], "loading.c")};
        } else if (l.contains("fc_sum")) {
            f.loading = LoadingRequest{LoadingKind::FluxSum, pair_of(l["fc_sum"], "loading.fc_sum")};
        } else {
            throw ParseError("loading needs \"e\", \"c\" or \"fc_sum\"");
        }
    }
    if (j.contains("fault")) {
        const json& fj = j["fault"];
        if (!fj.contains("mode") || !fj["mode"].is_number_integer() || !fj.contains("delta")) {
            throw ParseError("fault needs integer \"mode\" and \"delta\"");
        }
        const Vec2 d = pair_of(fj["delta"], "fault.delta");
        f.fault = FaultInjection{fj["mode"].get<int>(), {d[0], d[1]}};
    }
    return f;
}

Fixture load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return parse_fixture(j, path.stem().string());
}

Synthesis synthesize(const Domain& domain, const Contrast& contrast, const LoadingRequest& request) {
    if (const auto* iso = std::get_if<IsotropicContrast>(&contrast)) {
        switch (request.kind) {
            case LoadingKind::TargetGradient:
                return synth_isotropic(domain, *iso, request.value);
            case LoadingKind::LoadingCoefficients:
                return synth_isotropic_from_c(domain, *iso, request.value);
            case LoadingKind::FluxSum:
                throw ParseError("fc_sum loading needs an anisotropic contrast");
        }
    }
    const auto& aniso = std::get<AnisotropicContrast>(contrast);
    switch (request.kind) {
        case LoadingKind::TargetGradient:
            return synth_anisotropic(domain, aniso, request.value);
        case LoadingKind::LoadingCoefficients:
            return synth_anisotropic_from_c(domain, aniso, request.value);
        case LoadingKind::FluxSum:
            return synth_anisotropic_from_fc_sum(domain, aniso, request.value);
    }
    throw ParseError("unknown loading kind");
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string dump_json(const json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json complex_list(std::span<const cplx> values) {
    json out = json::array();
    for (const cplx& v : values) {
        out.push_back(complex_to_json(v));
    }
    return out;
}

}  // namespace faberfield
