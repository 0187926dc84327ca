#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "revend/catalog.hpp"
#include "revend/criteria.hpp"
#include "revend/divergence.hpp"
#include "revend/stochastic.hpp"
#include "revend/warp.hpp"

using namespace revend;

namespace {

const ClassifierConfig kCfg;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (!pass) detail << "; ";
        pass = false;
        detail << what;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<EndSpec> all_ends() {
    std::vector<EndSpec> ends;
    for (const auto& name : catalog_names()) ends.push_back(catalog(name));
    ends.push_back(catalog("clothoid", {{"end", -1.0}}));
    return ends;
}

void catalog_table(Outcome& o) {
    int rows = 0;
    for (const auto& end : all_ends()) {
        const auto rep = classify_end(end, kCfg);
        ++rows;
        o.require(end.expected->admits(rep.verdict) && !rep.contradiction,
                  end.name + " gave " + std::string(to_string(rep.verdict)));
    }
    if (o.pass) o.detail << rows << " ends, 0 mismatches";
}

void cylinder_closed_form(Outcome& o) {
    const auto v = parabolicity_test(warp_from_curve(catalog("cylinder_lower", {{"b", 2.0}, {"c", 1.0}}).curve), kCfg);
    o.require(v.kind == DivergenceKind::Convergent, "integral not convergent");
    if (v.value) {
        o.require(std::abs(*v.value - 0.5) < 1e-6, "value " + fmt(*v.value));
        if (o.pass) o.detail << "value " << fmt(*v.value);
    }
}

void horosphere_centroid(Outcome& o) {
    double worst = 0;
    for (double z : {0.5, 1.0, 2.0}) {
        const auto xg = centroid(warp_from_curve(catalog("horosphere", {{"z", z}}).curve));
        for (double s : {1.0, 10.0, 100.0}) worst = std::max(worst, std::abs(xg(s) - (s / 2 + 1 / z)));
    }
    o.require(worst < 1e-8, "max error " + fmt(worst));
    if (o.pass) o.detail << "max error " << fmt(worst);
}

void flatness(Outcome& o) {
    double worst = 0;
    for (const char* name : {"horosphere", "c_cone"}) {
        const WarpFn w = warp_from_curve(catalog(name).curve);
        for (int i = 0; i <= 490; ++i) worst = std::max(worst, std::abs(gauss_curvature(w, 1.0 + 0.1 * i)));
    }
    o.require(worst < 1e-6, "max |K| " + fmt(worst));
    if (o.pass) o.detail << "max |K| " << fmt(worst);
}

void stochastic_completeness(Outcome& o) {
    for (const auto& end : all_ends()) {
        const auto v = stochastic_test(warp_from_curve(end.curve), kCfg.rho, kCfg);
        o.require(v.kind == DivergenceKind::Divergent, end.name + " " + std::string(to_string(v.kind)));
    }
}

void necessaries(Outcome& o) {
    for (const char* name : {"cylinder_lower", "spherical_catenoid"}) {
        for (const auto& c : nonparabolic_necessaries(catalog(name).curve, kCfg)) {
            o.require(c.status == CheckStatus::Pass, std::string(name) + " " + c.id + ": " + c.detail);
        }
    }
}

void benchmark(Outcome& o) {
    for (double p : {0.5, 0.8, 0.95, 1.05, 1.2, 2.0, 3.0}) {
        const auto v = classify_integral([p](double s) { return std::pow(1 + s, -p); }, 0.0, kCfg);
        const auto want = p < 1 ? DivergenceKind::Divergent : DivergenceKind::Convergent;
        o.require(v.kind == want, "p=" + fmt(p) + " " + std::string(to_string(v.kind)));
    }
    for (double r : {0.1, -0.1}) {
        const auto v = classify_integral([r](double s) { return std::exp(r * s); }, 0.0, kCfg);
        const auto want = r > 0 ? DivergenceKind::Divergent : DivergenceKind::Convergent;
        o.require(v.kind == want, "e^(" + fmt(r) + "s) " + std::string(to_string(v.kind)));
    }
}

void monte_carlo(Outcome& o) {
    const WarpFn w = WarpFn::synthetic([](double s) { return std::exp(s); }, [](double s) { return std::exp(s); });
    const double exact = exact_hitting(w, 0.0, 2.0, 1.0).inner;
    o.require(std::abs(exact - 0.268941) < 5e-7, "exact " + fmt(exact));
    DiffusionCfg cfg;
    cfg.n_paths = 100000;
    cfg.step = 1e-4;
    cfg.workers = 1;
    const auto one = simulate_hitting(w, 0.0, 2.0, 1.0, cfg);
    cfg.workers = 8;
    const auto eight = simulate_hitting(w, 0.0, 2.0, 1.0, cfg);
    const double z = (one.p_hit_inner.value - 0.268941) / one.p_hit_inner.std_error;
    o.require(std::abs(z) <= 3, "z = " + fmt(z));
    o.require(one == eight, "results differ between 1 and 8 workers");
    if (o.pass) o.detail << "p = " << fmt(one.p_hit_inner.value) << " +- " << fmt(one.p_hit_inner.std_error);
}

void arc_length(Outcome& o) {
    double worst = 0;
    for (double c : {0.5, 1.0, 2.0}) {
        const ArcCurve arc = catalog("c_cone", {{"c", c}}).curve;
        const double k = std::sqrt(1 + c * c) / c;
        for (int i = 0; i <= 300; ++i) {
            const double t = std::exp(0.01 * i);
            worst = std::max(worst, std::abs(arc.s_of_t(t) - k * std::log(t)));
        }
    }
    o.require(worst < 1e-7, "max error " + fmt(worst));
    if (o.pass) o.detail << "max error " << fmt(worst);
}

void scale_invariance(Outcome& o) {
    for (const auto& end : all_ends()) {
        const WarpFn w = warp_from_curve(end.curve);
        const auto p = parabolicity_test(w, kCfg).kind;
        const auto s = sufficient_parabolic_test(w, kCfg).kind;
        const auto q = stochastic_test(w, kCfg.rho, kCfg).kind;
        const bool c = centroid_test(w, kCfg).fired;
        for (double k : {0.1, 10.0}) {
            const WarpFn wk = w.scaled(k);
            const std::string tag = end.name + " k=" + fmt(k);
            o.require(parabolicity_test(wk, kCfg).kind == p, tag + " parabolicity");
            o.require(sufficient_parabolic_test(wk, kCfg).kind == s, tag + " sufficient");
            o.require(stochastic_test(wk, kCfg.rho, kCfg).kind == q, tag + " stochastic");
            o.require(centroid_test(wk, kCfg).fired == c, tag + " centroid");
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"catalog verdict table", catalog_table},
        {"cylinder integral equals c/b", cylinder_closed_form},
        {"horosphere centroid closed form", horosphere_centroid},
        {"flat warps have zero curvature", flatness},
        {"every catalog end is stochastically complete", stochastic_completeness},
        {"non-parabolic necessary conditions", necessaries},
        {"divergence classifier benchmark", benchmark},
        {"Monte Carlo hitting probability and seed determinism", monte_carlo},
        {"c-cone arc length", arc_length},
        {"scale invariance of verdicts", scale_invariance},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failed;
        const std::string detail = o.detail.str();
        std::printf("%s %zu %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, detail.empty() ? "" : ": ",
                    detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
