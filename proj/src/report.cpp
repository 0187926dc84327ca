#include "revend/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "revend/errors.hpp"

namespace revend {

using nlohmann::json;

namespace {

// JSON has no infinities or NaN; those travel as strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ParseError("expected a number, found " + j.dump(), 0);
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::optional<double> get_opt_num(const json& j) {
    if (j.is_null()) return std::nullopt;
    return get_num(j);
}

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw ParseError("expected an object while reading '" + std::string(key) + "'", 0);
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError("missing field '" + std::string(key) + "'", 0);
    return *it;
}

std::string get_str(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' must be a string", 0);
    return v.get<std::string>();
}

json to_json(const TestOutcome& t) {
    return {{"id", t.id}, {"fired", t.fired}, {"value", opt_num(t.value)}, {"evidence", t.evidence}};
}

TestOutcome outcome_from_json(const json& j) {
    return {get_str(j, "id"), field(j, "fired").get<bool>(), get_opt_num(field(j, "value")), get_str(j, "evidence")};
}

json to_json(const ConsistencyCheck& c) {
    return {{"id", c.id}, {"status", std::string(to_string(c.status))}, {"detail", c.detail}};
}

ConsistencyCheck check_from_json(const json& j) {
    return {get_str(j, "id"), check_status_from_string(get_str(j, "status")), get_str(j, "detail")};
}

json to_json(const TailModel& t) {
    return {{"family", std::string(to_string(t.family))},
            {"s_lo", num(t.s_lo)},
            {"s_hi", num(t.s_hi)},
            {"fit_quality", num(t.fit_quality)},
            {"estimate", num(t.estimate)},
            {"std_error", num(t.std_error)},
            {"local_exponent", opt_num(t.local_exponent)}};
}

TailModel tail_from_json(const json& j) {
    TailModel t;
    t.family = tail_family_from_string(get_str(j, "family"));
    t.s_lo = get_num(field(j, "s_lo"));
    t.s_hi = get_num(field(j, "s_hi"));
    t.fit_quality = get_num(field(j, "fit_quality"));
    t.estimate = get_num(field(j, "estimate"));
    t.std_error = get_num(field(j, "std_error"));
    t.local_exponent = get_opt_num(field(j, "local_exponent"));
    return t;
}

}  // namespace

json to_json(const ClassifierConfig& c) {
    return {{"horizon_t0", num(c.horizon_t0)},   {"max_doublings", c.max_doublings},
            {"delta", num(c.delta)},             {"tol", num(c.tol)},
            {"fit_quality", num(c.fit_quality)}, {"log_band", num(c.log_band)},
            {"c_floor", num(c.c_floor)},         {"z_floor", num(c.z_floor)},
            {"stabilization", num(c.stabilization)}, {"fit_samples", c.fit_samples},
            {"scan_samples", c.scan_samples},    {"rho", num(c.rho)},
            {"quad_abs", num(c.quad_abs)},       {"quad_rel", num(c.quad_rel)}};
}

ClassifierConfig config_from_json(const json& j) {
    ClassifierConfig c;
    c.horizon_t0 = get_num(field(j, "horizon_t0"));
    c.max_doublings = field(j, "max_doublings").get<int>();
    c.delta = get_num(field(j, "delta"));
    c.tol = get_num(field(j, "tol"));
    c.fit_quality = get_num(field(j, "fit_quality"));
    c.log_band = get_num(field(j, "log_band"));
    c.c_floor = get_num(field(j, "c_floor"));
    c.z_floor = get_num(field(j, "z_floor"));
    c.stabilization = get_num(field(j, "stabilization"));
    c.fit_samples = field(j, "fit_samples").get<int>();
    c.scan_samples = field(j, "scan_samples").get<int>();
    c.rho = get_num(field(j, "rho"));
    c.quad_abs = get_num(field(j, "quad_abs"));
    c.quad_rel = get_num(field(j, "quad_rel"));
    return c;
}

json to_json(const DivergenceVerdict& v) {
    json partials = json::array();
    for (const auto& p : v.partials) partials.push_back({num(p.horizon), num(p.value)});
    return {{"kind", std::string(to_string(v.kind))},
            {"value", opt_num(v.value)},
            {"error", opt_num(v.error)},
            {"tail", to_json(v.tail)},
            {"horizon", num(v.horizon)},
            {"partials", partials},
            {"evidence", v.evidence}};
}

DivergenceVerdict divergence_from_json(const json& j) {
    DivergenceVerdict v;
    v.kind = divergence_kind_from_string(get_str(j, "kind"));
    v.value = get_opt_num(field(j, "value"));
    v.error = get_opt_num(field(j, "error"));
    v.tail = tail_from_json(field(j, "tail"));
    v.horizon = get_num(field(j, "horizon"));
    for (const auto& p : field(j, "partials")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("partials must be [horizon, value] pairs", 0);
        v.partials.push_back({get_num(p[0]), get_num(p[1])});
    }
    v.evidence = get_str(j, "evidence");
    return v;
}

json to_json(const ConformalReport& r) {
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = num(v);
    json fired = json::array();
    for (const auto& t : r.fired) fired.push_back(to_json(t));
    json absent = json::array();
    for (const auto& t : r.absent) absent.push_back(to_json(t));
    json checks = json::array();
    for (const auto& c : r.consistency) checks.push_back(to_json(c));
    return {{"end_name", r.end_name},
            {"kappa", to_int(r.kappa)},
            {"params", params},
            {"verdict", std::string(to_string(r.verdict))},
            {"contradiction", r.contradiction},
            {"fired", fired},
            {"absent", absent},
            {"consistency", checks},
            {"integrals",
             {{"parabolicity", to_json(r.parabolicity)},
              {"sufficient", to_json(r.sufficient)},
              {"stochastic", to_json(r.stochastic)}}}};
}

ConformalReport conformal_report_from_json(const json& j) {
    ConformalReport r;
    r.end_name = get_str(j, "end_name");
    r.kappa = kappa_from_int(field(j, "kappa").get<int>());
    for (const auto& [k, v] : field(j, "params").items()) r.params[k] = get_num(v);
    r.verdict = verdict_from_string(get_str(j, "verdict"));
    r.contradiction = field(j, "contradiction").get<bool>();
    for (const auto& t : field(j, "fired")) r.fired.push_back(outcome_from_json(t));
    for (const auto& t : field(j, "absent")) r.absent.push_back(outcome_from_json(t));
    for (const auto& c : field(j, "consistency")) r.consistency.push_back(check_from_json(c));
    const json& integrals = field(j, "integrals");
    r.parabolicity = divergence_from_json(field(integrals, "parabolicity"));
    r.sufficient = divergence_from_json(field(integrals, "sufficient"));
    r.stochastic = divergence_from_json(field(integrals, "stochastic"));
    return r;
}

json to_json(const ReportDocument& doc) {
    json reports = json::array();
    for (const auto& r : doc.reports) reports.push_back(to_json(r));
    json out = {{"schema_version", doc.schema_version},
                {"tool_version", doc.tool_version},
                {"config", to_json(doc.config)},
                {"reports", reports}};
    if (doc.timings) {
        json t = json::object();
        for (const auto& [k, v] : *doc.timings) t[k] = num(v);
        out["timings"] = t;
    }
    return out;
}

ReportDocument report_from_json(const json& j) {
    try {
        ReportDocument doc;
        doc.schema_version = field(j, "schema_version").get<int>();
        if (doc.schema_version != kSchemaVersion) {
            throw ParseError("unsupported schema_version " + std::to_string(doc.schema_version), 0);
        }
        doc.tool_version = get_str(j, "tool_version");
        doc.config = config_from_json(field(j, "config"));
        for (const auto& r : field(j, "reports")) doc.reports.push_back(conformal_report_from_json(r));
        if (const auto it = j.find("timings"); it != j.end()) {
            std::map<std::string, double> t;
            for (const auto& [k, v] : it->items()) t[k] = get_num(v);
            doc.timings = std::move(t);
        }
        return doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    } catch (const DomainError& e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    }
}

std::string serialize(const ReportDocument& doc) { return to_json(doc).dump(2) + "\n"; }

ReportDocument deserialize(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what(), e.byte);
    }
    return report_from_json(j);
}

json to_json(const HitStats& s) {
    auto est = [](const Estimate& e) { return json{{"value", num(e.value)}, {"std_error", num(e.std_error)}}; };
    return {{"n_paths", s.n_paths},
            {"n_inner", s.n_inner},
            {"n_outer", s.n_outer},
            {"n_undecided", s.n_undecided},
            {"p_hit_inner", est(s.p_hit_inner)},
            {"p_hit_outer", est(s.p_hit_outer)},
            {"mean_exit_time", est(s.mean_exit_time)}};
}

json to_json(const EscapeProbe& p) {
    json points = json::array();
    for (const auto& [r, prob] : p.points) points.push_back({num(r), num(prob)});
    return {{"points", points},
            {"trend", std::string(to_string(p.trend))},
            {"limit", num(p.limit)},
            {"parabolicity", std::string(to_string(p.parabolicity))},
            {"consistent", p.consistent}};
}

static std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<ConformalReport>& reports) {
    std::ostringstream out;
    out << "end,kappa,verdict,contradiction,parabolicity,parabolicity_value,parabolicity_error,sufficient,"
           "stochastic,fired\n";
    for (const auto& r : reports) {
        std::string fired;
        for (const auto& t : r.fired) fired += (fired.empty() ? "" : ";") + t.id;
        out << r.end_name << ',' << to_int(r.kappa) << ',' << to_string(r.verdict) << ','
            << (r.contradiction ? "true" : "false") << ',' << to_string(r.parabolicity.kind) << ',';
        if (r.parabolicity.value) out << shortest(*r.parabolicity.value);
        out << ',';
        if (r.parabolicity.error) out << shortest(*r.parabolicity.error);
        out << ',' << to_string(r.sufficient.kind) << ',' << to_string(r.stochastic.kind) << ',' << fired << '\n';
    }
    return out.str();
}

}  // namespace revend
