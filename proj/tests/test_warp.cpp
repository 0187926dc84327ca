#include <cmath>
#include <thread>

#include "doctest.h"
#include "gen.hpp"
#include "revend/catalog.hpp"
#include "revend/criteria.hpp"
#include "revend/errors.hpp"
#include "revend/warp.hpp"

using namespace revend;

namespace {

WarpFn linear_warp() {
    return WarpFn::synthetic([](double s) { return s + 1; }, [](double) { return 1.0; });
}

WarpFn exp_warp() {
    return WarpFn::synthetic([](double s) { return std::exp(s); }, [](double s) { return std::exp(s); });
}

WarpFn const_warp(double k) {
    return WarpFn::synthetic([k](double) { return k; }, [](double) { return 0.0; });
}

}  // namespace

TEST_CASE("warps of catalog ends in closed form") {
    for (double z : {0.5, 1.0, 2.0}) {
        const WarpFn w = warp_from_curve(catalog("horosphere", {{"z", z}}).curve);
        CHECK(w.source() == WarpSource::CurveDerived);
        for (double s : {0.0, 1.0, 10.0, 100.0}) CHECK(w.w(s) == doctest::Approx(s + 1 / z).epsilon(1e-9));
    }
    const WarpFn low = warp_from_curve(catalog("cylinder_lower", {{"b", 2.0}, {"c", 1.0}}).curve);
    for (double s : {0.0, 1.0, 20.0}) {
        CHECK(low.w(s) == doctest::Approx(2 * std::exp(s)).epsilon(1e-8));
        CHECK(low.dw(s) == doctest::Approx(2 * std::exp(s)).epsilon(1e-7));
    }
    const SphericalCatenoid cat(0.5);
    const WarpFn cw = warp_from_curve(catalog("spherical_catenoid", {{"a", 0.5}}).curve);
    for (double s : {0.0, 2.0, 15.0, 40.0}) CHECK(cw.w(s) == doctest::Approx(std::sinh(cat.y(s))).epsilon(1e-8));
    const WarpFn cone = warp_from_curve(catalog("c_cone", {{"c", 2.0}}).curve);
    for (double s : {0.0, 5.0, 80.0}) CHECK(cone.w(s) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("warp equals sqrt(eta) gamma1 on every catalog curve") {
    testing::Gen gen(21);
    for (const auto& name : catalog_names()) {
        const EndSpec end = catalog(name);
        const WarpFn w = warp_from_curve(end.curve);
        INFO(name);
        for (int i = 0; i < 40; ++i) {
            const double s = gen.uniform(0.0, std::min(end.curve.s_max(), 60.0));
            const ProfilePoint p = end.curve.point(s);
            const double expected = std::sqrt(metric_factor(end.kappa, p)) * p.x1;
            CHECK(std::abs(w.w(s) - expected) <= 1e-8 * std::max(1.0, expected));
        }
    }
}

TEST_CASE("dw agrees with a central difference of w") {
    testing::Gen gen(8);
    for (const auto& name : catalog_names()) {
        const EndSpec end = catalog(name);
        const WarpFn w = warp_from_curve(end.curve);
        INFO(name);
        for (int i = 0; i < 20; ++i) {
            const double s = gen.uniform(1.0, std::min(end.curve.s_max() - 1.0, 40.0));
            const double h = 1e-4;
            const double fd = (w.w(s + h) - w.w(s - h)) / (2 * h);
            CHECK(std::abs(w.dw(s) - fd) <= 1e-4 * std::max(std::abs(fd), w.w(s)));
        }
    }
}

TEST_CASE("warp rejects arguments outside its domain") {
    const WarpFn w = warp_from_curve(catalog("cylinder_lower").curve);
    CHECK_THROWS_AS(w.w(-1.0), DomainError);
    CHECK_THROWS_AS(w.w(w.s_max() * 2), DomainError);
}

TEST_CASE("cumulative integral") {
    CHECK(cumulative(linear_warp(), 1.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(cumulative(exp_warp(), 2.0) == doctest::Approx(std::exp(2.0) - 1).epsilon(1e-12));
    CHECK(cumulative(exp_warp(), 0.0) == 0.0);
    CHECK(cumulative(exp_warp(), 100.0) == doctest::Approx(std::expm1(100.0)).epsilon(1e-10));
    CHECK(exp_warp().cumulative(3.0).abs_error < 1e-9);
}

TEST_CASE("cumulative is additive and strictly increasing") {
    testing::Gen gen(4);
    for (const auto& name : catalog_names()) {
        const WarpFn w = warp_from_curve(catalog(name).curve);
        INFO(name);
        double prev = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double a = gen.uniform(0.0, 20.0);
            const double b = gen.uniform(0.0, 20.0);
            const double direct = cumulative(w, a + b);
            const double piece = quad::integrate([&](double s) { return w.w(s); }, a, a + b,
                                                 {1e-12, 1e-11, 4000}).value;
            CHECK(std::abs(direct - (cumulative(w, a) + piece)) <= 1e-8 * std::max(1.0, direct));
        }
        for (double t = 0.25; t < 50.0; t *= 1.5) {
            const double v = cumulative(w, t);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("cumulative is identical across concurrent readers") {
    const WarpFn w = warp_from_curve(catalog("spherical_catenoid").curve);
    const std::vector<double> ts = {0.5, 3.0, 17.0, 64.0, 90.0, 250.0};
    std::vector<std::vector<double>> results(4);
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < results.size(); ++k) {
        threads.emplace_back([&, k] {
            for (std::size_t i = 0; i < ts.size(); ++i) {
                results[k].push_back(cumulative(w, ts[(i + k) % ts.size()]));
            }
        });
    }
    for (auto& t : threads) t.join();
    for (std::size_t k = 0; k < results.size(); ++k) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            CHECK(results[k][i] == cumulative(w, ts[(i + k) % ts.size()]));
        }
    }
}

TEST_CASE("extended warp caps the end with a disc") {
    const WarpFn w = warp_from_curve(catalog("cylinder_lower", {{"b", 2.0}, {"c", 1.0}}).curve);
    for (double rho : {0.5, 1.0, 2.0}) {
        const WarpFn W = extend_warp(w, rho);
        CHECK(W.source() == WarpSource::Extended);
        CHECK(W.w(0.0) == 0.0);
        CHECK(W.dw(0.0) == doctest::Approx(1.0));
        CHECK(W.w(rho / 8) == doctest::Approx(rho / 8));
        for (double s : {0.0, 1.0, 10.0}) CHECK(W.w(rho + s) == doctest::Approx(w.w(s)).epsilon(1e-14));
        for (double x = 1e-3; x < rho; x += rho / 97) CHECK(W.w(x) > 0.0);
    }
    CHECK_THROWS_AS(extend_warp(w, 0.0), DomainError);
}

TEST_CASE("extension leaves tail verdicts unchanged") {
    ClassifierConfig cfg;
    const WarpFn w = warp_from_curve(catalog("cylinder_lower", {{"b", 2.0}, {"c", 1.0}}).curve);
    const DivergenceVerdict a = stochastic_test(w, 0.5, cfg);
    const DivergenceVerdict b = stochastic_test(w, 2.0, cfg);
    CHECK(a.kind == DivergenceKind::Divergent);
    CHECK(a.kind == b.kind);

    for (std::string name : {"horosphere", "cylinder_lower", "spherical_catenoid", "c_cone"}) {
        const WarpFn base = warp_from_curve(catalog(name).curve);
        const double rho = 1.0;
        const WarpFn W = extend_warp(base, rho);
        // The tail of W beyond rho is the tail of w; compare both integrals there.
        const DivergenceVerdict direct = classify_integral([&](double s) { return 1 / base.w(s); }, 0.0, cfg,
                                                           base.s_max());
        const DivergenceVerdict shifted = classify_integral([&](double s) { return 1 / W.w(s); }, rho, cfg,
                                                            W.s_max());
        INFO(name);
        CHECK(direct.kind == shifted.kind);
    }
}

TEST_CASE("centroid") {
    for (double z : {0.5, 1.0, 2.0}) {
        const auto xg = centroid(warp_from_curve(catalog("horosphere", {{"z", z}}).curve));
        for (double s : {1.0, 10.0, 100.0}) CHECK(std::abs(xg(s) - (s / 2 + 1 / z)) < 1e-8);
    }
    const auto flat = centroid(const_warp(3.0));
    for (double s : {0.1, 5.0, 500.0}) CHECK(flat(s) == doctest::Approx(3.0).epsilon(1e-12));
    const auto low = centroid(warp_from_curve(catalog("cylinder_lower", {{"b", 2.0}, {"c", 1.0}}).curve));
    for (double s : {0.5, 3.0, 30.0}) CHECK(low(s) == doctest::Approx(2 * std::expm1(s) / s).epsilon(1e-8));
    CHECK_THROWS_AS(flat(0.0), DomainError);
}

TEST_CASE("centroid of a nondecreasing warp is nondecreasing") {
    for (std::string name : {"horosphere", "c_cone", "cylinder_lower", "spherical_catenoid", "plane_end"}) {
        const auto xg = centroid(warp_from_curve(catalog(name).curve));
        INFO(name);
        double prev = xg(0.01);
        for (double s = 0.05; s < 200.0; s *= 1.3) {
            const double v = xg(s);
            CHECK(v >= prev * (1 - 1e-12));
            prev = v;
        }
    }
}

TEST_CASE("Gaussian curvature") {
    const WarpFn cone = warp_from_curve(catalog("c_cone", {{"c", 1.0}}).curve);
    const WarpFn horo = warp_from_curve(catalog("horosphere", {{"z", 1.0}}).curve);
    for (double s = 1.0; s <= 100.0; s += 0.5) {
        CHECK(std::abs(gauss_curvature(cone, s)) < 1e-6);
        CHECK(std::abs(gauss_curvature(horo, s)) < 1e-6);
    }
    const WarpFn hyp = WarpFn::synthetic([](double s) { return std::sinh(s); }, [](double s) { return std::cosh(s); });
    for (double s : {0.5, 1.0, 4.0, 20.0}) CHECK(gauss_curvature(hyp, s) == doctest::Approx(-1.0).epsilon(1e-6));
    const WarpFn sph = WarpFn::synthetic([](double s) { return std::sin(s); }, [](double s) { return std::cos(s); },
                                         3.0);
    CHECK(gauss_curvature(sph, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("scaled warp") {
    const WarpFn w = exp_warp().scaled(10.0);
    CHECK(w.w(1.0) == doctest::Approx(10 * std::exp(1.0)));
    CHECK(w.dw(1.0) == doctest::Approx(10 * std::exp(1.0)));
    CHECK(cumulative(w, 1.0) == doctest::Approx(10 * std::expm1(1.0)));
    CHECK_THROWS_AS(exp_warp().scaled(0.0), DomainError);
}
