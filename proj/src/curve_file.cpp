#include "revend/curve_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "revend/catalog.hpp"
#include "revend/errors.hpp"

namespace revend {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view value, std::size_t offset, const std::string& key) {
    if (value == "inf" || value == "+inf") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ParseError("value of '" + key + "' is not a number", offset);
    }
    return out;
}

expr::NodePtr parse_expression(std::string_view value, std::size_t offset) {
    try {
        return expr::parse(value);
    } catch (const ParseError& e) {
        // Re-anchor the offset to the file.
        std::string what = e.what();
        const auto cut = what.rfind(" (at offset");
        if (cut != std::string::npos) what.resize(cut);
        throw ParseError(what, offset + e.offset());
    }
}

// Central difference with one Richardson step; falls back to one-sided
// differences where the expression is not finite on one side.
double derivative(const expr::NodePtr& f, double t) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    auto central = [&](double step) { return (expr::eval(f, t + step) - expr::eval(f, t - step)) / (2 * step); };
    double d = (4 * central(h / 2) - central(h)) / 3;
    if (std::isfinite(d)) return d;
    auto forward = [&](double step) {
        return (-3 * expr::eval(f, t) + 4 * expr::eval(f, t + step) - expr::eval(f, t + 2 * step)) / (2 * step);
    };
    return (4 * forward(h / 2) - forward(h)) / 3;
}

}  // namespace

CurveSpecFile parse_curve_spec(const std::string& text) {
    CurveSpecFile spec;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        auto line_end = text.find('\n', line_start);
        if (line_end == std::string::npos) line_end = text.size();
        std::string_view line(text.data() + line_start, line_end - line_start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!trim(line).empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_start);
            const std::string key(trim(line.substr(0, eq)));
            const std::string_view raw = line.substr(eq + 1);
            const std::string_view value = trim(raw);
            const auto lead = raw.find_first_not_of(" \t");
            const std::size_t value_offset = line_start + eq + 1 + (lead == std::string_view::npos ? 0 : lead);
            if (value.empty()) throw ParseError("missing value for '" + key + "'", value_offset);

            if (key == "name") {
                spec.name = value;
            } else if (key == "kappa") {
                const double k = parse_number(value, value_offset, key);
                if (k != -1.0 && k != 0.0 && k != 1.0) throw ParseError("kappa must be -1, 0 or 1", value_offset);
                spec.kappa = kappa_from_int(static_cast<int>(k));
            } else if (key == "x1_expr") {
                spec.x1 = parse_expression(value, value_offset);
            } else if (key == "x3_expr") {
                spec.x3 = parse_expression(value, value_offset);
            } else if (key == "dx1_expr") {
                spec.dx1 = parse_expression(value, value_offset);
            } else if (key == "dx3_expr") {
                spec.dx3 = parse_expression(value, value_offset);
            } else if (key == "t0") {
                spec.t0 = parse_number(value, value_offset, key);
            } else if (key == "t1") {
                spec.t1 = parse_number(value, value_offset, key);
            } else if (key == "s_max") {
                spec.s_max = parse_number(value, value_offset, key);
            } else if (key == "tol") {
                spec.tol = parse_number(value, value_offset, key);
            } else if (key == "builtin") {
                spec.builtin = std::string(value);
            } else if (key.rfind("param.", 0) == 0 && key.size() > 6) {
                spec.params[key.substr(6)] = parse_number(value, value_offset, key);
            } else {
                throw ParseError("unknown key '" + key + "'", line_start);
            }
        }
        line_start = line_end + 1;
    }

    if (spec.builtin) {
        if (spec.x1 || spec.x3) throw ParseError("builtin curves take no expressions", 0);
    } else {
        if (!spec.x1 || !spec.x3) throw ParseError("x1_expr and x3_expr are required", text.size());
        if (!spec.params.empty()) throw ParseError("param.* keys need a builtin curve", 0);
    }
    return spec;
}

ParamCurve curve_from_spec(const CurveSpecFile& spec) {
    if (!spec.x1 || !spec.x3) throw DomainError("curve spec has no expressions");
    ParamCurve c;
    const auto x1 = spec.x1;
    const auto x3 = spec.x3;
    c.eval = [x1, x3](double t) { return ProfilePoint{expr::eval(x1, t), expr::eval(x3, t)}; };
    const auto dx1 = spec.dx1;
    const auto dx3 = spec.dx3;
    c.deriv = [x1, x3, dx1, dx3](double t) {
        return Vec2{dx1 ? expr::eval(dx1, t) : derivative(x1, t), dx3 ? expr::eval(dx3, t) : derivative(x3, t)};
    };
    c.t0 = spec.t0;
    c.t1 = spec.t1;
    c.label = spec.name.empty() ? "curve" : spec.name;
    return c;
}

EndSpec load_curve(const std::filesystem::path& path, std::optional<Kappa> kappa_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open curve file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read curve file '" + path.string() + "'");

    const CurveSpecFile spec = parse_curve_spec(buf.str());
    const std::optional<Kappa> kappa = kappa_override ? kappa_override : spec.kappa;

    if (spec.builtin) {
        EndSpec end = catalog(*spec.builtin, spec.params);
        if (kappa && *kappa != end.kappa) {
            throw DomainError("builtin '" + *spec.builtin + "' lives in kappa = " + std::to_string(to_int(end.kappa)));
        }
        if (!spec.name.empty()) end.name = spec.name;
        return end;
    }
    if (!kappa) throw DomainError("curve file sets no kappa and none was given");
    if (!(spec.s_max > 0.0) || !std::isfinite(spec.s_max)) throw DomainError("s_max must be positive and finite");
    if (!(spec.tol > 0.0)) throw DomainError("tol must be positive");
    if (!(spec.t1 > spec.t0)) throw DomainError("t1 must exceed t0");

    const ParamCurve curve = curve_from_spec(spec);
    EndSpec end{arc_reparam(curve, *kappa, spec.s_max, spec.tol), *kappa, curve.label, {}, std::nullopt};
    return end;
}

}  // namespace revend
