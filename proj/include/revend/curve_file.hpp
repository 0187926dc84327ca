#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "revend/expr.hpp"
#include "revend/geometry.hpp"

namespace revend {

/// Parsed contents of a curve file.
///
/// Lines are `key = value`; `#` starts a comment. Keys: name, kappa,
/// x1_expr, x3_expr, dx1_expr, dx3_expr, t0, t1, s_max, tol, builtin, and
/// param.<K> (parameters of a builtin catalog entry).
struct CurveSpecFile {
    std::string name;
    std::optional<Kappa> kappa;
    expr::NodePtr x1;
    expr::NodePtr x3;
    expr::NodePtr dx1;
    expr::NodePtr dx3;
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    double s_max = 1000.0;
    double tol = 1e-9;
    std::optional<std::string> builtin;
    ParamMap params;
};

/// Parses curve-file text. ParseError offsets count bytes from the start of the text.
CurveSpecFile parse_curve_spec(const std::string& text);

/// The profile described by the spec, with finite-difference derivatives
/// when derivative expressions are missing.
ParamCurve curve_from_spec(const CurveSpecFile& spec);

/// Reads, parses, and reparametrizes a curve file. kappa_override replaces
/// (or supplies) the file's kappa.
EndSpec load_curve(const std::filesystem::path& path, std::optional<Kappa> kappa_override = std::nullopt);

}  // namespace revend
