#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "doctest.h"
#include "gen.hpp"
#include "revend/catalog.hpp"
#include "revend/errors.hpp"
#include "revend/report.hpp"

using namespace revend;

namespace {

DivergenceVerdict random_verdict(testing::Gen& gen) {
    const double specials[] = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                               0.0, -0.0, 5e-324, 1.7976931348623157e308};
    auto value = [&] {
        if (gen.coin(0.2)) return specials[gen.integer(0, 5)];
        return gen.uniform(-1e6, 1e6) * std::pow(10.0, gen.integer(-20, 20));
    };
    DivergenceVerdict v;
    v.kind = static_cast<DivergenceKind>(gen.integer(0, 2));
    if (gen.coin()) v.value = value();
    if (gen.coin()) v.error = value();
    v.tail.family = static_cast<TailFamily>(gen.integer(0, 3));
    v.tail.s_lo = value();
    v.tail.s_hi = value();
    v.tail.fit_quality = gen.uniform(0, 1);
    v.tail.estimate = value();
    v.tail.std_error = value();
    if (gen.coin()) v.tail.local_exponent = value();
    v.horizon = value();
    for (int i = gen.integer(0, 5); i > 0; --i) v.partials.push_back({value(), value()});
    v.evidence = gen.coin() ? "" : "evidence with \"quotes\", commas, and\nnewlines";
    return v;
}

ConformalReport random_report(testing::Gen& gen) {
    ConformalReport r;
    r.end_name = "end_" + std::to_string(gen.integer(0, 999));
    r.kappa = kappa_from_int(gen.integer(-1, 1));
    r.params = {{"a", gen.uniform(0, 3)}, {"b", gen.uniform(-3, 3)}};
    r.verdict = static_cast<Verdict>(gen.integer(0, 2));
    r.contradiction = gen.coin();
    for (int i = gen.integer(0, 3); i > 0; --i) {
        TestOutcome t{"test_" + std::to_string(i), gen.coin(), std::nullopt, "why"};
        if (gen.coin()) t.value = gen.uniform(0, 10);
        (t.fired ? r.fired : r.absent).push_back(t);
    }
    for (int i = gen.integer(0, 3); i > 0; --i) {
        r.consistency.push_back({"check_" + std::to_string(i), static_cast<CheckStatus>(gen.integer(0, 3)), "d"});
    }
    r.parabolicity = random_verdict(gen);
    r.sufficient = random_verdict(gen);
    r.stochastic = random_verdict(gen);
    return r;
}

}  // namespace

TEST_CASE("serialize then deserialize is the identity on random documents") {
    testing::Gen gen(77);
    for (int i = 0; i < 50; ++i) {
        ReportDocument doc;
        doc.config.delta = gen.uniform(0.01, 0.2);
        doc.config.max_doublings = gen.integer(3, 30);
        for (int k = gen.integer(0, 4); k > 0; --k) doc.reports.push_back(random_report(gen));
        if (gen.coin()) doc.timings = std::map<std::string, double>{{"x", gen.uniform(0, 5)}};
        const std::string text = serialize(doc);
        const ReportDocument back = deserialize(text);
        CHECK(back == doc);
        CHECK(serialize(back) == text);
    }
}

TEST_CASE("NaN survives the round trip as a string") {
    ReportDocument doc;
    ConformalReport r = random_report(*std::make_unique<testing::Gen>(1));
    r.parabolicity.value = std::numeric_limits<double>::quiet_NaN();
    doc.reports.push_back(r);
    const std::string text = serialize(doc);
    CHECK(text.find("\"nan\"") != std::string::npos);
    const ReportDocument back = deserialize(text);
    CHECK(std::isnan(*back.reports[0].parabolicity.value));
}

TEST_CASE("round trip of real classifications") {
    ReportDocument doc;
    for (const char* name : {"cylinder_lower", "horosphere", "plane_end"}) {
        doc.reports.push_back(classify_end(catalog(name), doc.config));
    }
    const ReportDocument back = deserialize(serialize(doc));
    CHECK(back == doc);
    CHECK(back.schema_version == kSchemaVersion);
    CHECK(back.tool_version == kToolVersion);
    CHECK_FALSE(back.timings.has_value());
}

TEST_CASE("malformed documents are parse errors") {
    CHECK_THROWS_AS(deserialize("{"), ParseError);
    CHECK_THROWS_AS(deserialize("[]"), ParseError);
    CHECK_THROWS_AS(deserialize("{\"schema_version\": 1}"), ParseError);

    ReportDocument doc;
    auto j = to_json(doc);
    j["schema_version"] = 2;
    CHECK_THROWS_AS(report_from_json(j), ParseError);

    j = to_json(doc);
    j["config"]["delta"] = "not a number";
    CHECK_THROWS_AS(report_from_json(j), ParseError);

    doc.reports.push_back(random_report(*std::make_unique<testing::Gen>(3)));
    j = to_json(doc);
    j["reports"][0]["verdict"] = "Probably";
    CHECK_THROWS_AS(report_from_json(j), ParseError);
    j = to_json(doc);
    j["reports"][0]["kappa"] = 7;
    CHECK_THROWS_AS(report_from_json(j), ParseError);
}

TEST_CASE("config echo") {
    ClassifierConfig cfg;
    cfg.horizon_t0 = 4;
    cfg.tol = 1e-10;
    CHECK(config_from_json(to_json(cfg)) == cfg);
    CHECK(to_json(cfg)["delta"] == 0.025);
}

TEST_CASE("CSV summary") {
    ReportDocument doc;
    doc.reports.push_back(classify_end(catalog("cylinder_lower"), doc.config));
    doc.reports.push_back(classify_end(catalog("horosphere"), doc.config));
    const std::string csv = to_csv(doc.reports);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.rfind("end,kappa,verdict", 0) == 0);
    const std::string prefix = "cylinder_lower,-1,NonParabolic,false,Convergent,";
    const auto row = csv.find(prefix);
    REQUIRE(row != std::string::npos);
    const double value = std::stod(csv.substr(row + prefix.size()));
    CHECK(value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("hit statistics and escape probes serialize") {
    HitStats s;
    s.n_paths = 10;
    s.n_inner = 3;
    s.n_outer = 7;
    s.p_hit_inner = {0.3, 0.1};
    const auto j = to_json(s);
    CHECK(j["n_inner"] == 3);
    CHECK(j["p_hit_inner"]["value"] == 0.3);

    EscapeProbe p;
    p.points = {{2.0, 0.5}, {4.0, 0.25}};
    const auto k = to_json(p);
    CHECK(k["trend"] == "undecided");
    CHECK(k["limit"] == "nan");
    CHECK(k["points"].size() == 2);
}
