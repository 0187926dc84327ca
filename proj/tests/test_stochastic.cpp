#include <cmath>
#include <set>

#include "doctest.h"
#include "revend/catalog.hpp"
#include "revend/criteria.hpp"
#include "revend/errors.hpp"
#include "revend/stochastic.hpp"

using namespace revend;

namespace {

WarpFn exp_warp() {
    return WarpFn::synthetic([](double s) { return std::exp(s); }, [](double s) { return std::exp(s); });
}

WarpFn const_warp(double k) {
    return WarpFn::synthetic([k](double) { return k; }, [](double) { return 0.0; });
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("path streams are reproducible and distinct") {
    PathStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        seen.insert(x);
        seen.insert(c.next_u64());
        seen.insert(d.next_u64());
    }
    CHECK(seen.size() == 300);
}

TEST_CASE("uniform and normal draws") {
    PathStream s(1, 0);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        CHECK_UNARY(u > 0.0 && u < 1.0);
    }
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 4 / std::sqrt(n));
    CHECK(std::abs(var - 1) < 4 * std::sqrt(2.0 / n));
}

TEST_CASE("radial drift") {
    const auto b1 = radial_drift(exp_warp());
    for (double r : {0.0, 1.0, 5.0}) CHECK(b1(r) == doctest::Approx(1.0));
    const auto b0 = radial_drift(const_warp(2.0));
    CHECK(b0(3.0) == 0.0);
    const auto bh = radial_drift(warp_from_curve(catalog("horosphere", {{"z", 1.0}}).curve));
    for (double r : {0.0, 1.0, 9.0}) CHECK(bh(r) == doctest::Approx(1 / (r + 1)).epsilon(1e-8));
}

TEST_CASE("exact hitting probabilities") {
    const double e = std::exp(1.0);
    const auto h = exact_hitting(exp_warp(), 0.0, 2.0, 1.0);
    CHECK(h.inner == doctest::Approx((1 / e - 1 / (e * e)) / (1 - 1 / (e * e))).epsilon(1e-12));
    CHECK(h.inner == doctest::Approx(0.268941).epsilon(1e-5));
    CHECK(h.inner + h.outer == doctest::Approx(1.0));
    CHECK(exact_hitting(exp_warp(), 0.5, 2.0, 0.5).inner == 1.0);
    CHECK(exact_hitting(const_warp(1.0), 0.0, 2.0, 1.0).inner == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(exact_hitting(exp_warp(), 1.0, 0.5, 0.7), DomainError);
    CHECK_THROWS_AS(exact_hitting(exp_warp(), 0.0, 2.0, 3.0), DomainError);
}

TEST_CASE("simulation agrees with the exact baseline") {
    DiffusionCfg cfg;
    cfg.n_paths = 4000;
    cfg.step = 1e-3;
    const auto stats = simulate_hitting(const_warp(1.0), 0.0, 2.0, 1.0, cfg);
    CHECK(std::abs(stats.p_hit_inner.value - 0.5) <= 3 * stats.p_hit_inner.std_error);
    CHECK(stats.n_inner + stats.n_outer + stats.n_undecided == stats.n_paths);
    CHECK(stats.p_hit_inner.value + stats.p_hit_outer.value +
              static_cast<double>(stats.n_undecided) / static_cast<double>(stats.n_paths) ==
          doctest::Approx(1.0).epsilon(1e-15));
    // Exit time of Brownian motion with generator d^2/dx^2 from the middle of [0, 2]: x(2-x)/2 = 0.5.
    CHECK(std::abs(stats.mean_exit_time.value - 0.5) <= 3 * stats.mean_exit_time.std_error + 0.01);
}

TEST_CASE("simulation results do not depend on the worker count") {
    DiffusionCfg cfg;
    cfg.n_paths = 3000;
    cfg.step = 1e-3;
    cfg.seed = 99;
    cfg.workers = 1;
    const auto one = simulate_hitting(exp_warp(), 0.0, 2.0, 1.0, cfg);
    cfg.workers = 8;
    const auto eight = simulate_hitting(exp_warp(), 0.0, 2.0, 1.0, cfg);
    CHECK(one == eight);
    cfg.seed = 100;
    CHECK_FALSE(simulate_hitting(exp_warp(), 0.0, 2.0, 1.0, cfg) == one);
}

TEST_CASE("paths that outlive t_max are counted as undecided") {
    DiffusionCfg cfg;
    cfg.n_paths = 200;
    cfg.step = 1e-3;
    cfg.t_max = 0.01;
    const auto stats = simulate_hitting(const_warp(1.0), 0.0, 20.0, 10.0, cfg);
    CHECK(stats.n_undecided == stats.n_paths);
    CHECK(stats.p_hit_inner.value == 0.0);
}

TEST_CASE("oracle agreement on catalog warps") {
    struct Triple {
        double rho, R, x0;
    };
    const std::vector<Triple> triples = {{0.0, 2.0, 1.0}, {0.5, 1.5, 0.8}, {1.0, 3.0, 2.5}};
    DiffusionCfg coarse;
    coarse.n_paths = 1500;
    coarse.step = 2e-3;
    DiffusionCfg fine = coarse;
    fine.step = 1e-3;
    for (const auto& name : catalog_names()) {
        const WarpFn w = warp_from_curve(catalog(name).curve);
        for (const auto& t : triples) {
            const double exact = exact_hitting(w, t.rho, t.R, t.x0).inner;
            const auto a = simulate_hitting(w, t.rho, t.R, t.x0, coarse);
            const auto b = simulate_hitting(w, t.rho, t.R, t.x0, fine);
            const double bias = std::abs(a.p_hit_inner.value - b.p_hit_inner.value);
            INFO(name << " rho=" << t.rho << " R=" << t.R << " x0=" << t.x0);
            CHECK(std::abs(b.p_hit_inner.value - exact) <= 3 * (b.p_hit_inner.std_error + bias));
        }
    }
}

TEST_CASE("escape probabilities follow the parabolicity verdict") {
    const auto horo = escape_probe(warp_from_curve(catalog("horosphere", {{"z", 1.0}}).curve), 0.0, 1.0);
    CHECK(horo.trend == EscapeTrend::ToZero);
    CHECK(horo.parabolicity == DivergenceKind::Divergent);
    CHECK(horo.consistent);
    // S(R) = ln(1 + R): escape probability ln 2 / ln(1 + R).
    for (const auto& [R, p] : horo.points) CHECK(p == doctest::Approx(std::log(2.0) / std::log(1 + R)).epsilon(1e-7));

    const auto low =
        escape_probe(warp_from_curve(catalog("cylinder_lower", {{"b", 2.0}, {"c", 1.0}}).curve), 0.0, 1.0);
    CHECK(low.trend == EscapeTrend::ToPositive);
    CHECK(low.parabolicity == DivergenceKind::Convergent);
    CHECK(low.consistent);
    // S(x) = (1 - e^{-x})/2, so the escape probability tends to 1 - e^{-1}.
    CHECK(low.limit == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-6));

    const auto flat = escape_probe(const_warp(1.0), 0.0, 1.0);
    CHECK(flat.trend == EscapeTrend::ToZero);
    for (const auto& [R, p] : flat.points) CHECK(p == doctest::Approx(1 / R).epsilon(1e-9));
}

TEST_CASE("escape trend agrees with the integral on every definite catalog end") {
    for (const auto& name : catalog_names()) {
        const WarpFn w = warp_from_curve(catalog(name).curve);
        const auto probe = escape_probe(w, 0.0, 1.0);
        INFO(name);
        CHECK(probe.consistent);
        if (probe.parabolicity == DivergenceKind::Divergent) CHECK(probe.trend != EscapeTrend::ToPositive);
        if (probe.parabolicity == DivergenceKind::Convergent) CHECK(probe.trend != EscapeTrend::ToZero);
    }
}

TEST_CASE("diffusion config validation") {
    DiffusionCfg cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.step = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.n_paths = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}
