#include <charconv>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revend/catalog.hpp"
#include "revend/criteria.hpp"
#include "revend/curve_file.hpp"
#include "revend/errors.hpp"
#include "revend/expr.hpp"
#include "revend/mesh.hpp"
#include "revend/parallel.hpp"
#include "revend/report.hpp"
#include "revend/stochastic.hpp"
#include "revend/warp.hpp"

namespace {

using namespace revend;

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kNumeric = 3, kMismatch = 4 };

struct SourceOpts {
    std::string catalog;
    std::string curve;
    std::vector<std::string> params;
    std::optional<int> kappa;
};

struct ClassifierOpts {
    std::optional<double> horizon_t0;
    std::optional<int> max_doublings;
    std::optional<double> delta;
    std::optional<double> tol;
};

struct OutputOpts {
    std::string json;
    std::string csv;
    bool no_timings = false;
};

void add_source(CLI::App* cmd, SourceOpts& o) {
    auto* cat = cmd->add_option("--catalog", o.catalog, "Built-in end");
    auto* cur = cmd->add_option("--curve", o.curve, "Curve file");
    cat->excludes(cur);
    cmd->add_option("--param", o.params, "Catalog parameter K=V (repeatable)");
    cmd->add_option("--kappa", o.kappa, "Curvature of the ambient space form")->check(CLI::IsMember({-1, 0, 1}));
}

void add_classifier(CLI::App* cmd, ClassifierOpts& o) {
    cmd->add_option("--horizon-t0", o.horizon_t0, "First horizon length");
    cmd->add_option("--max-doublings", o.max_doublings, "Horizon doublings before giving up");
    cmd->add_option("--delta", o.delta, "Exponent margin around 1");
    cmd->add_option("--tol", o.tol, "Target error of convergent integrals");
}

void add_output(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--json", o.json, "Report document path");
    cmd->add_option("--csv", o.csv, "Summary table path");
    cmd->add_flag("--no-timings", o.no_timings, "Omit wall-clock timings");
}

ClassifierConfig make_config(const ClassifierOpts& o) {
    ClassifierConfig cfg;
    if (o.horizon_t0) cfg.horizon_t0 = *o.horizon_t0;
    if (o.max_doublings) cfg.max_doublings = *o.max_doublings;
    if (o.delta) cfg.delta = *o.delta;
    if (o.tol) cfg.tol = *o.tol;
    cfg.validate();
    return cfg;
}

ParamMap parse_params(const std::vector<std::string>& items) {
    ParamMap out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected K=V, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw CLI::ValidationError("--param", "value of '" + key + "' is not a number: '" + text + "'");
        }
        out[key] = value;
    }
    return out;
}

EndSpec load_end(const SourceOpts& o) {
    std::optional<Kappa> kappa;
    if (o.kappa) kappa = kappa_from_int(*o.kappa);
    if (!o.curve.empty()) {
        if (!o.params.empty()) throw CLI::ValidationError("--param", "only applies to --catalog");
        return load_curve(o.curve, kappa);
    }
    if (o.catalog.empty()) throw CLI::RequiredError("--catalog or --curve");
    EndSpec end = catalog(o.catalog, parse_params(o.params));
    if (kappa && *kappa != end.kappa) {
        throw DomainError("catalog end '" + o.catalog + "' lives in kappa = " + std::to_string(to_int(end.kappa)));
    }
    return end;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw IoError("cannot write '" + path + "'");
}

std::string label_of(const ConformalReport& r) {
    std::string label = r.end_name;
    if (r.params.empty()) return label;
    label += '(';
    bool first = true;
    for (const auto& [k, v] : r.params) {
        std::ostringstream s;
        s << k << '=' << v;
        label += (first ? "" : ",") + s.str();
        first = false;
    }
    return label + ')';
}

void emit(const ReportDocument& doc, const OutputOpts& out) {
    if (!out.json.empty()) {
        write_text(out.json, serialize(doc));
    }
    if (!out.csv.empty()) write_text(out.csv, to_csv(doc.reports));
}

std::string format_value(const std::optional<double>& v) {
    if (!v) return "-";
    std::ostringstream s;
    s.precision(10);
    s << *v;
    return s.str();
}

int cmd_classify(const SourceOpts& src, const ClassifierOpts& copts, const OutputOpts& out) {
    const ClassifierConfig cfg = make_config(copts);
    const EndSpec end = load_end(src);
    const auto t0 = std::chrono::steady_clock::now();
    ConformalReport report = classify_end(end, cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ReportDocument doc;
    doc.config = cfg;
    if (!out.no_timings) doc.timings = std::map<std::string, double>{{label_of(report), elapsed}};
    doc.reports.push_back(report);
    emit(doc, out);
    if (out.json.empty()) {
        std::cout << serialize(doc);
    } else {
        std::cout << report.end_name << ": " << to_string(report.verdict)
                  << ", integral " << to_string(report.parabolicity.kind) << ' '
                  << format_value(report.parabolicity.value) << '\n';
    }
    return kOk;
}

struct TableRow {
    std::string name;
    std::vector<std::size_t> jobs;
};

int cmd_table(const ClassifierOpts& copts, const OutputOpts& out) {
    const ClassifierConfig cfg = make_config(copts);

    std::vector<EndSpec> ends;
    std::vector<TableRow> rows;
    for (const auto& name : catalog_names()) {
        TableRow row{name, {}};
        if (name == "clothoid") {
            for (double side : {1.0, -1.0}) {
                row.jobs.push_back(ends.size());
                ends.push_back(catalog(name, {{"end", side}}));
            }
        } else {
            row.jobs.push_back(ends.size());
            ends.push_back(catalog(name));
        }
        rows.push_back(std::move(row));
    }

    std::vector<ConformalReport> reports(ends.size());
    std::vector<double> seconds(ends.size());
    parallel_for(ends.size(), worker_count(), [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        reports[i] = classify_end(ends[i], cfg);
        seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    int mismatches = 0;
    std::printf("%-20s %5s  %-14s %-24s %s\n", "end", "kappa", "verdict", "expected", "status");
    for (const auto& row : rows) {
        bool ok = true;
        std::string verdict;
        std::string expected;
        for (std::size_t i : row.jobs) {
            const auto& exp = ends[i].expected;
            if (exp && !exp->admits(reports[i].verdict)) ok = false;
            const std::string v(to_string(reports[i].verdict));
            if (verdict.empty()) {
                verdict = v;
            } else if (verdict != v) {
                verdict = "Inconclusive";
            }
        }
        if (const auto& exp = ends[row.jobs.front()].expected) {
            for (Verdict v : exp->accepted) expected += (expected.empty() ? "" : "|") + std::string(to_string(v));
        } else {
            expected = "-";
        }
        if (!ok) ++mismatches;
        std::printf("%-20s %5d  %-14s %-24s %s\n", row.name.c_str(), to_int(ends[row.jobs.front()].kappa),
                    verdict.c_str(), expected.c_str(), ok ? "ok" : "MISMATCH");
    }
    std::printf("%zu rows, %d mismatches\n", rows.size(), mismatches);

    ReportDocument doc;
    doc.config = cfg;
    doc.reports = reports;
    if (!out.no_timings) {
        std::map<std::string, double> timings;
        for (std::size_t i = 0; i < reports.size(); ++i) timings[label_of(reports[i])] = seconds[i];
        doc.timings = std::move(timings);
    }
    emit(doc, out);
    return mismatches == 0 ? kOk : kMismatch;
}

struct MeshOpts {
    double s_max = 10.0;
    std::size_t n_s = 101;
    std::size_t n_theta = 64;
    std::string out;
};

int cmd_mesh(const SourceOpts& src, const MeshOpts& m) {
    const EndSpec end = load_end(src);
    const WarpFn w = warp_from_curve(end.curve);
    const TriangleMesh tm = mesh(end, m.s_max, m.n_s, m.n_theta, {{"w", [&](double s) { return w.w(s); }}});
    if (m.out.empty()) {
        write_obj(std::cout, tm);
    } else {
        std::ostringstream buffer;
        write_obj(buffer, tm);
        write_text(m.out, buffer.str());
    }
    return kOk;
}

struct SimOpts {
    std::string warp;
    std::uint64_t paths = 100000;
    double step = 1e-4;
    std::uint64_t seed = 1;
    double rho = 0.0;
    double R = 2.0;
    double x0 = 1.0;
    double t_max = 100.0;
};

WarpFn warp_from_expression(const std::string& text) {
    const expr::NodePtr tree = expr::parse(text);
    auto f = [tree](double s) { return expr::eval(tree, s); };
    auto df = [f](double s) {
        const double h = 1e-5 * std::max(1.0, std::abs(s));
        const double d1 = (f(s + h) - f(s - h)) / (2 * h);
        const double d2 = (f(s + h / 2) - f(s - h / 2)) / h;
        const double d = (4 * d2 - d1) / 3;
        if (std::isfinite(d)) return d;
        return (f(s + h) - f(s)) / h;
    };
    return WarpFn::synthetic(f, df, std::numeric_limits<double>::infinity(), text);
}

int cmd_simulate(const SourceOpts& src, const SimOpts& o, const OutputOpts& out) {
    std::optional<WarpFn> w;
    if (!o.warp.empty()) {
        if (!src.catalog.empty() || !src.curve.empty()) {
            throw CLI::ValidationError("--warp", "cannot be combined with --catalog or --curve");
        }
        w = warp_from_expression(o.warp);
    } else {
        w = warp_from_curve(load_end(src).curve);
    }

    DiffusionCfg cfg;
    cfg.step = o.step;
    cfg.n_paths = o.paths;
    cfg.seed = o.seed;
    cfg.t_max = o.t_max;
    cfg.validate();

    const HitProbabilities exact = exact_hitting(*w, o.rho, o.R, o.x0);
    const auto t0 = std::chrono::steady_clock::now();
    const HitStats stats = simulate_hitting(*w, o.rho, o.R, o.x0, cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double se = stats.p_hit_inner.std_error;
    const double z = se > 0 ? (stats.p_hit_inner.value - exact.inner) / se : 0.0;
    nlohmann::json doc = {{"schema_version", kSchemaVersion},
                          {"tool_version", kToolVersion},
                          {"warp", w->label()},
                          {"rho", o.rho},
                          {"R", o.R},
                          {"x0", o.x0},
                          {"step", o.step},
                          {"seed", o.seed},
                          {"t_max", o.t_max},
                          {"stats", to_json(stats)},
                          {"exact", {{"p_hit_inner", exact.inner}, {"p_hit_outer", exact.outer}}},
                          {"z_score", z},
                          {"within_3se", std::abs(z) <= 3.0}};
    if (!out.no_timings) doc["timings"] = {{"simulate", elapsed}};

    if (!out.json.empty()) write_text(out.json, doc.dump(2) + "\n");
    std::printf("p_hit_inner %.6f +- %.6f (exact %.6f, z = %.2f)\n", stats.p_hit_inner.value, se, exact.inner, z);
    std::printf("p_hit_outer %.6f +- %.6f (exact %.6f)\n", stats.p_hit_outer.value, stats.p_hit_outer.std_error,
                exact.outer);
    std::printf("undecided %llu of %llu paths\n", static_cast<unsigned long long>(stats.n_undecided),
                static_cast<unsigned long long>(stats.n_paths));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformal type of ends of revolution in 3-dimensional space forms"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    SourceOpts src;
    ClassifierOpts copts;
    OutputOpts out;
    MeshOpts mopts;
    SimOpts sopts;

    auto* classify = app.add_subcommand("classify", "Classify one end");
    add_source(classify, src);
    add_classifier(classify, copts);
    add_output(classify, out);

    auto* table = app.add_subcommand("table", "Classify the whole catalog against its expected verdicts");
    add_classifier(table, copts);
    add_output(table, out);

    auto* mesh_cmd = app.add_subcommand("mesh", "Write a triangle mesh of an end");
    add_source(mesh_cmd, src);
    mesh_cmd->add_option("--s-max", mopts.s_max, "Arc length covered")->check(CLI::PositiveNumber);
    mesh_cmd->add_option("--ns", mopts.n_s, "Samples along the profile")->check(CLI::Range(2, 1 << 20));
    mesh_cmd->add_option("--ntheta", mopts.n_theta, "Samples around the axis")->check(CLI::Range(3, 1 << 20));
    mesh_cmd->add_option("--out", mopts.out, "Output path (stdout if omitted)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo hitting probabilities of the radial diffusion");
    add_source(simulate, src);
    simulate->add_option("--warp", sopts.warp, "Warp w(s) as an expression in t");
    simulate->add_option("--paths", sopts.paths, "Number of paths")->check(CLI::PositiveNumber);
    simulate->add_option("--step", sopts.step, "Time step")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sopts.seed, "Random seed");
    simulate->add_option("--rho", sopts.rho, "Inner barrier");
    simulate->add_option("--R", sopts.R, "Outer barrier");
    simulate->add_option("--x0", sopts.x0, "Starting radius");
    simulate->add_option("--t-max", sopts.t_max, "Time after which a path counts as undecided");
    simulate->add_option("--json", out.json, "Result document path");
    simulate->add_flag("--no-timings", out.no_timings, "Omit wall-clock timings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*classify) return cmd_classify(src, copts, out);
        if (*table) return cmd_table(copts, out);
        if (*mesh_cmd) return cmd_mesh(src, mopts);
        if (*simulate) return cmd_simulate(src, sopts, out);
    } catch (const CLI::Error& e) {
        std::cerr << "revend: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "revend: parse error: " << e.what() << '\n';
        return kInput;
    } catch (const DomainError& e) {
        std::cerr << "revend: " << e.what() << '\n';
        return kInput;
    } catch (const IoError& e) {
        std::cerr << "revend: " << e.what() << '\n';
        return kInput;
    } catch (const NumericError& e) {
        std::cerr << "revend: numerical failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "revend: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}
