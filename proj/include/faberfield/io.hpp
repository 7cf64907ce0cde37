#pragma once

#include "faberfield/conformal.hpp"
#include "faberfield/errors.hpp"
#include "faberfield/eshelby.hpp"
#include "faberfield/potential.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace faberfield {

/// Malformed input file or flag value.
class ParseError : public Error {
public:
    using Error::Error;
};

enum class LoadingKind { TargetGradient, LoadingCoefficients, FluxSum };

struct LoadingRequest {
    LoadingKind kind = LoadingKind::LoadingCoefficients;
    Vec2 value{};
};

/// Optional test hook: add delta to the density coefficient b_mode after solving.
struct FaultInjection {
    int mode = 1;
    cplx delta{};
};

struct Fixture {
    std::string name;
    Domain domain;
    std::optional<Contrast> contrast;
    std::optional<LoadingRequest> loading;
    std::optional<FaultInjection> fault;
};

/// {"gamma": g, "mu": [[re, im], ...]}; trailing zero coefficients are trimmed.
Domain parse_domain(const nlohmann::json& j);
Fixture parse_fixture(const nlohmann::json& j, std::string name = {});
Fixture load_fixture(const std::filesystem::path& path);

Contrast parse_contrast(const nlohmann::json& j);
nlohmann::json contrast_to_json(const Contrast& contrast);

/// Synthesises the loading described by a request.
Synthesis synthesize(const Domain& domain, const Contrast& contrast, const LoadingRequest& request);

/// Deterministic JSON text with every floating-point number printed as %.12e.
std::string dump_json(const nlohmann::json& j, int indent = 2);
/// Printf-style %.12e.
std::string format_double(double x);

nlohmann::json complex_to_json(cplx z);
nlohmann::json complex_list(std::span<const cplx> values);

}  // namespace faberfield
