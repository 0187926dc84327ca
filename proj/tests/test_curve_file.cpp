#include <cmath>
#include <string>

#include "doctest.h"
#include "revend/catalog.hpp"
#include "revend/curve_file.hpp"
#include "revend/errors.hpp"
#include "revend/warp.hpp"

using namespace revend;

namespace {

std::filesystem::path data(const std::string& name) { return std::filesystem::path(REVEND_TEST_DATA) / name; }

std::size_t spec_error_offset(const std::string& text) {
    try {
        parse_curve_spec(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    FAIL("expected a parse error");
    return 0;
}

}  // namespace

TEST_CASE("key-value format") {
    const auto spec = parse_curve_spec(
        "# comment line\n"
        "name = sample   # trailing comment\n"
        "kappa = 0\n"
        "x1_expr = 1 + t^2\n"
        "x3_expr = t\n"
        "t0 = 0.5\n"
        "t1 = 9\n"
        "s_max = 12\n"
        "tol = 1e-8\n");
    CHECK(spec.name == "sample");
    CHECK(spec.kappa == Kappa::Euclidean);
    CHECK(expr::eval(spec.x1, 2.0) == 5.0);
    CHECK(spec.t0 == 0.5);
    CHECK(spec.t1 == 9.0);
    CHECK(spec.s_max == 12.0);
    CHECK(spec.tol == 1e-8);
    CHECK_FALSE(spec.dx1);
}

TEST_CASE("curve-file parse errors point into the file") {
    const std::string text = "kappa = 0\nx1_expr = 1 + sin(\nx3_expr = t\n";
    // "sin(" ends at byte 28; the expression parser expects an operand there.
    CHECK(spec_error_offset(text) == text.find("sin(") + 4);
    CHECK(spec_error_offset("kappa = 0\nbogus = 1\n") == 10);
    CHECK(spec_error_offset("kappa = 2\nx1_expr = t\nx3_expr = t\n") == 8);
    CHECK(spec_error_offset("kappa 0\n") == 0);
    CHECK_THROWS_AS(parse_curve_spec("kappa = 0\nx1_expr = t\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_spec("kappa = -1\nt0 = abc\nx1_expr = t\nx3_expr = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_spec("builtin = horosphere\nx1_expr = t\n"), ParseError);
    CHECK_THROWS_AS(load_curve(data("bad_syntax.curve")), ParseError);
}

TEST_CASE("horosphere file matches the catalog entry") {
    const EndSpec from_file = load_curve(data("horosphere.curve"));
    const EndSpec builtin = catalog("horosphere", {{"z", 1.0}});
    CHECK(from_file.kappa == Kappa::Hyperbolic);
    CHECK(from_file.name == "horosphere_file");
    for (double s : {0.0, 0.5, 3.0, 42.0, 199.0}) {
        const ProfilePoint a = from_file.curve.point(s);
        const ProfilePoint b = builtin.curve.point(s);
        CHECK(std::abs(a.x1 - b.x1) < 1e-9);
        CHECK(std::abs(a.x3 - b.x3) < 1e-9);
    }
}

TEST_CASE("explicit derivatives and finite differences agree") {
    const EndSpec with_derivs = load_curve(data("cylinder_lower.curve"));
    auto spec = parse_curve_spec("kappa = -1\nx1_expr = 2\nx3_expr = exp(-t)\n");
    const ParamCurve fd = curve_from_spec(spec);
    for (double t : {0.0, 1.0, 5.0, 20.0}) {
        const Vec2 d = fd.deriv(t);
        CHECK(std::abs(d.d1) < 1e-12);
        CHECK(d.d3 == doctest::Approx(-std::exp(-t)).epsilon(1e-9));
    }
    const WarpFn w = warp_from_curve(with_derivs.curve);
    for (double s : {0.0, 2.0, 30.0}) CHECK(w.w(s) == doctest::Approx(2 * std::exp(s)).epsilon(1e-8));
}

TEST_CASE("degenerate curves are domain errors") {
    CHECK_THROWS_AS(load_curve(data("flat_x3.curve")), DomainError);
    CHECK_THROWS_AS(load_curve(data("no_kappa.curve")), DomainError);
    // Allowed once kappa is supplied from outside.
    const EndSpec ray = load_curve(data("no_kappa.curve"), Kappa::Euclidean);
    CHECK(ray.curve.point(2.0).x1 == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("builtin curves resolve through the catalog") {
    const EndSpec from_file = load_curve(data("clothoid.curve"));
    const EndSpec builtin = catalog("clothoid", {{"a", 1.0}, {"n", 1.0}, {"end", 1.0}});
    CHECK(from_file.name == "cornu");
    for (double s : {0.0, 1.0, 7.5, 100.0}) {
        CHECK(from_file.curve.point(s).x1 == builtin.curve.point(s).x1);
        CHECK(from_file.curve.point(s).x3 == builtin.curve.point(s).x3);
    }
    CHECK_THROWS_AS(load_curve(data("clothoid.curve"), Kappa::Euclidean), DomainError);
}

TEST_CASE("missing files are I/O errors") {
    CHECK_THROWS_AS(load_curve(data("does_not_exist.curve")), IoError);
}
