#include "revend/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revend/errors.hpp"

namespace revend {

std::string_view to_string(CheckStatus status) noexcept {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Undecided: return "undecided";
        case CheckStatus::Skip: return "skip";
    }
    return "skip";
}

CheckStatus check_status_from_string(std::string_view name) {
    for (auto s : {CheckStatus::Pass, CheckStatus::Fail, CheckStatus::Undecided, CheckStatus::Skip}) {
        if (to_string(s) == name) return s;
    }
    throw ParseError("unknown check status '" + std::string(name) + "'", 0);
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

std::vector<double> horizons(double s_cap, const ClassifierConfig& cfg) {
    std::vector<double> out;
    for (int k = 0; k <= cfg.max_doublings; ++k) {
        const double t = cfg.horizon_t0 * std::ldexp(1.0, k);
        if (t > s_cap) break;
        out.push_back(t);
    }
    return out;
}

struct Scan {
    std::vector<double> horizon;
    std::vector<double> extreme;

    bool stabilized(double rel) const {
        const auto n = extreme.size();
        if (n < 3) return false;
        const double last = extreme[n - 1];
        const double prev = extreme[n - 2];
        return std::abs(last - prev) <= rel * std::abs(last);
    }
};

// Running minimum (or maximum) of g sampled uniformly over each doubling interval.
Scan running_extreme(const std::function<double(double)>& g, double s_cap, const ClassifierConfig& cfg, bool minimum) {
    Scan scan;
    double lo = 0.0;
    double current = minimum ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (double t : horizons(s_cap, cfg)) {
        for (int i = 0; i <= cfg.scan_samples; ++i) {
            const double v = g(lo + (t - lo) * i / cfg.scan_samples);
            current = minimum ? std::min(current, v) : std::max(current, v);
        }
        scan.horizon.push_back(t);
        scan.extreme.push_back(current);
        lo = t;
    }
    return scan;
}

DivergenceVerdict failed_verdict(const std::string& what) {
    DivergenceVerdict v;
    v.kind = DivergenceKind::Inconclusive;
    v.evidence = "evaluation failed: " + what;
    return v;
}

void require_hyperbolic(const ArcCurve& curve, const char* test) {
    if (curve.kappa() != Kappa::Hyperbolic) {
        throw DomainError(std::string(test) + " applies to ends in H^3 only");
    }
}

}  // namespace

DivergenceVerdict parabolicity_test(const WarpFn& w, const ClassifierConfig& cfg) {
    return classify_integral([&w](double s) { return 1.0 / w.w(s); }, 0.0, cfg, w.s_max());
}

DivergenceVerdict sufficient_parabolic_test(const WarpFn& w, const ClassifierConfig& cfg) {
    // s / Omega(s) tends to 1 / w(0) as s -> 0.
    const double at_zero = 1.0 / w.w(0.0);
    return classify_integral(
        [&w, at_zero](double s) { return s > 0.0 ? s / w.cumulative(s).value : at_zero; }, 0.0, cfg, w.s_max());
}

DivergenceVerdict stochastic_test(const WarpFn& w, double rho, const ClassifierConfig& cfg) {
    const WarpFn capped = extend_warp(w, rho);
    const double c0 = capped.cumulative(rho).value;
    return classify_integral([&w, c0](double s) { return (c0 + w.cumulative(s).value) / w.w(s); }, 0.0, cfg,
                             w.s_max());
}

TestOutcome cone_test(const ArcCurve& curve, const ClassifierConfig& cfg) {
    require_hyperbolic(curve, "cone_test");
    TestOutcome out{"cone", false, std::nullopt, {}};
    const Scan scan = running_extreme(
        [&curve](double s) {
            const ProfilePoint p = curve.point(s);
            return p.x3 / p.x1;
        },
        curve.s_max(), cfg, true);
    if (scan.extreme.empty()) {
        out.evidence = "sampled range shorter than the first horizon";
        return out;
    }
    const double inf = scan.extreme.back();
    if (scan.stabilized(cfg.stabilization) && inf > cfg.c_floor) {
        out.fired = true;
        out.value = inf;
        out.evidence = "inf gamma2/gamma1 = " + fmt(inf) + " stable up to s = " + fmt(scan.horizon.back());
    } else {
        out.evidence = "running inf gamma2/gamma1 = " + fmt(inf) + " at s = " + fmt(scan.horizon.back()) +
                       " has not stabilized above the floor";
    }
    return out;
}

DivergenceVerdict iplus_test(const ArcCurve& curve, double c, const ClassifierConfig& cfg) {
    require_hyperbolic(curve, "iplus_test");
    if (!(c > 0.0)) throw DomainError("iplus_test needs c > 0");
    const double threshold = c * (1.0 - 1e-12);
    ClassifierConfig local = cfg;
    // The indicator jumps; demand only what bisection around a jump can deliver.
    local.quad_abs = std::max(cfg.quad_abs, 1e-9);
    return classify_integral(
        [&curve, threshold](double s) {
            const ProfilePoint p = curve.point(s);
            return p.x3 / p.x1 >= threshold ? 1.0 : 0.0;
        },
        0.0, local, curve.s_max());
}

TestOutcome horosphere_test(const ArcCurve& curve, const ClassifierConfig& cfg) {
    require_hyperbolic(curve, "horosphere_test");
    TestOutcome out{"horosphere", false, std::nullopt, {}};
    const Scan scan = running_extreme([&curve](double s) { return curve.point(s).x3; }, curve.s_max(), cfg, true);
    if (scan.extreme.empty()) {
        out.evidence = "sampled range shorter than the first horizon";
        return out;
    }
    const double inf = scan.extreme.back();
    if (scan.stabilized(cfg.stabilization) && inf > cfg.z_floor) {
        out.fired = true;
        out.value = inf;
        out.evidence = "gamma2 >= " + fmt(inf) + " up to s = " + fmt(scan.horizon.back());
    } else {
        out.evidence = "running inf gamma2 = " + fmt(inf) + " at s = " + fmt(scan.horizon.back()) +
                       " has not stabilized above the floor";
    }
    return out;
}

TestOutcome centroid_test(const WarpFn& w, const ClassifierConfig& cfg) {
    TestOutcome out{"centroid", false, std::nullopt, {}};
    const auto xg = centroid(w);
    std::vector<double> ts = horizons(w.s_max(), cfg);
    std::vector<double> vals;
    for (double t : ts) vals.push_back(xg(t));
    const auto n = vals.size();
    if (n < 3) {
        out.evidence = "too few horizons inside the sampled range";
        return out;
    }
    const double last = vals[n - 1];
    const double prev = vals[n - 2];
    if (std::abs(last - prev) <= cfg.stabilization * std::abs(last)) {
        out.id = "centroid_confined";
        out.fired = true;
        out.value = last;
        out.evidence = "x_g settles at " + fmt(last) + " by s = " + fmt(ts.back());
        return out;
    }
    if (n >= 4) {
        const double r3 = vals[n - 3] / ts[n - 3];
        const double r2 = vals[n - 2] / ts[n - 2];
        const double r1 = vals[n - 1] / ts[n - 1];
        if (r3 >= r2 && r2 >= r1 && std::isfinite(r3)) {
            out.id = "centroid_linear";
            out.fired = true;
            out.value = r3;
            out.evidence = "x_g(s)/s non-increasing over the last three doublings; x_g <= " + fmt(r3) +
                           " s beyond s = " + fmt(ts[n - 3]);
            return out;
        }
    }
    out.evidence = "x_g(s)/s = " + fmt(last / ts.back()) + " at s = " + fmt(ts.back()) + " is still growing";
    return out;
}

std::vector<ConsistencyCheck> nonparabolic_necessaries(const ArcCurve& curve, const ClassifierConfig& cfg) {
    require_hyperbolic(curve, "nonparabolic_necessaries");
    std::vector<ConsistencyCheck> out;

    const Scan sup1 = running_extreme([&curve](double s) { return curve.point(s).x1; }, curve.s_max(), cfg, false);
    ConsistencyCheck bounded{"sup_gamma1_bounded", CheckStatus::Undecided, {}};
    if (sup1.extreme.size() >= 2) {
        const double last = sup1.extreme.back();
        const double prev = sup1.extreme[sup1.extreme.size() - 2];
        if (sup1.stabilized(cfg.stabilization)) {
            bounded.status = CheckStatus::Pass;
            bounded.detail = "sup gamma1 = " + fmt(last);
        } else if (last > 1.1 * prev) {
            bounded.status = CheckStatus::Fail;
            bounded.detail = "sup gamma1 grew from " + fmt(prev) + " to " + fmt(last) + " over the last doubling";
        } else {
            bounded.detail = "sup gamma1 = " + fmt(last) + " still moving";
        }
    } else {
        bounded.detail = "too few horizons";
    }
    out.push_back(bounded);

    const double start = curve.point(0.0).x3;
    const Scan inf2 = running_extreme([&curve](double s) { return curve.point(s).x3; }, curve.s_max(), cfg, true);
    ConsistencyCheck vanish{"inf_gamma2_zero", CheckStatus::Undecided, {}};
    if (!inf2.extreme.empty()) {
        const double last = inf2.extreme.back();
        if (last < 1e-6 * start) {
            vanish.status = CheckStatus::Pass;
            vanish.detail = "inf gamma2 / gamma2(0) = " + fmt(last / start);
        } else if (inf2.stabilized(cfg.stabilization)) {
            vanish.status = CheckStatus::Fail;
            vanish.detail = "inf gamma2 stabilized at " + fmt(last);
        } else {
            vanish.detail = "inf gamma2 = " + fmt(last) + " still decreasing";
        }
    } else {
        vanish.detail = "too few horizons";
    }
    out.push_back(vanish);
    return out;
}

namespace {

template <class F>
DivergenceVerdict guarded_integral(F&& run) {
    try {
        return run();
    } catch (const Error& e) {
        return failed_verdict(e.what());
    }
}

template <class F>
TestOutcome guarded_test(const char* id, F&& run) {
    try {
        return run();
    } catch (const Error& e) {
        return TestOutcome{id, false, std::nullopt, std::string("evaluation failed: ") + e.what()};
    }
}

std::vector<ConsistencyCheck> guarded_necessaries(const ArcCurve& curve, const ClassifierConfig& cfg) {
    try {
        return nonparabolic_necessaries(curve, cfg);
    } catch (const Error& e) {
        return {{"nonparabolic_necessaries", CheckStatus::Undecided, std::string("evaluation failed: ") + e.what()}};
    }
}

TestOutcome from_integral(const char* id, const DivergenceVerdict& v) {
    TestOutcome t{id, v.kind == DivergenceKind::Divergent, v.value, std::string(to_string(v.kind)) + ": " + v.evidence};
    return t;
}

}  // namespace

ConformalReport classify_end(const EndSpec& end, const ClassifierConfig& cfg) {
    cfg.validate();
    if (end.curve.kappa() != end.kappa) throw DomainError("end curve and end kappa disagree");

    ConformalReport rep;
    rep.end_name = end.name;
    rep.kappa = end.kappa;
    rep.params = end.params;

    const WarpFn w = warp_from_curve(end.curve);
    rep.parabolicity = guarded_integral([&] { return parabolicity_test(w, cfg); });
    rep.sufficient = guarded_integral([&] { return sufficient_parabolic_test(w, cfg); });
    rep.stochastic = guarded_integral([&] { return stochastic_test(w, cfg.rho, cfg); });

    auto record = [&rep](TestOutcome t) {
        if (t.fired) {
            rep.fired.push_back(std::move(t));
        } else {
            rep.absent.push_back(std::move(t));
        }
    };

    const auto integral_kind = rep.parabolicity.kind;

    if (end.kappa != Kappa::Hyperbolic) {
        rep.verdict = Verdict::Parabolic;
        rep.fired.push_back({"ambient_space", true, std::nullopt,
                             std::string("every end of revolution in ") + std::string(to_string(end.kappa)) +
                                 " space is parabolic"});
        ConsistencyCheck cross{"ambient_cross_check", CheckStatus::Pass,
                               "parabolicity integral " + std::string(to_string(integral_kind))};
        if (integral_kind != DivergenceKind::Divergent) cross.status = CheckStatus::Fail;
        rep.consistency.push_back(cross);
    } else {
        record(guarded_test("cone", [&] { return cone_test(end.curve, cfg); }));
        record(guarded_test("horosphere", [&] { return horosphere_test(end.curve, cfg); }));
        record(guarded_test("centroid", [&] { return centroid_test(w, cfg); }));
        record(from_integral("sufficient_integral", rep.sufficient));

        std::vector<double> probes;
        for (const auto& t : rep.fired) {
            if (t.id == "cone" && t.value) probes.push_back(*t.value / 2.0);
        }
        if (probes.empty()) probes = {1e-3, 1e-2, 1e-1};
        TestOutcome iplus{"iplus", false, std::nullopt, {}};
        for (double c : probes) {
            const auto v = guarded_integral([&] { return iplus_test(end.curve, c, cfg); });
            iplus.evidence += (iplus.evidence.empty() ? "" : "; ") + std::string("c = ") + fmt(c) + ": " +
                              std::string(to_string(v.kind));
            if (v.kind == DivergenceKind::Divergent) {
                iplus.fired = true;
                iplus.value = c;
                break;
            }
        }
        record(iplus);

        const bool geometric = !rep.fired.empty();
        if (integral_kind == DivergenceKind::Divergent) {
            rep.verdict = Verdict::Parabolic;
            rep.fired.push_back(from_integral("parabolicity_integral", rep.parabolicity));
        } else if (integral_kind == DivergenceKind::Convergent) {
            if (geometric) {
                rep.verdict = Verdict::Inconclusive;
                rep.contradiction = true;
            } else {
                rep.verdict = Verdict::NonParabolic;
                TestOutcome t = from_integral("parabolicity_integral", rep.parabolicity);
                t.fired = true;
                rep.fired.push_back(t);
                for (auto& check : guarded_necessaries(end.curve, cfg)) {
                    if (check.status == CheckStatus::Fail) {
                        rep.verdict = Verdict::Inconclusive;
                        rep.contradiction = true;
                    }
                    rep.consistency.push_back(std::move(check));
                }
            }
        } else {
            rep.verdict = geometric ? Verdict::Parabolic : Verdict::Inconclusive;
            rep.absent.push_back(from_integral("parabolicity_integral", rep.parabolicity));
        }

        ConsistencyCheck agree{"geometric_integral_agreement", CheckStatus::Skip, {}};
        if (geometric && integral_kind != DivergenceKind::Inconclusive) {
            agree.status = integral_kind == DivergenceKind::Divergent ? CheckStatus::Pass : CheckStatus::Fail;
            agree.detail = "geometric certificate with integral " + std::string(to_string(integral_kind));
        } else {
            agree.detail = geometric ? "integral test undecided" : "no geometric certificate";
        }
        rep.consistency.push_back(agree);
    }

    ConsistencyCheck stoch{"stochastic_completeness", CheckStatus::Undecided,
                           "stochastic integral " + std::string(to_string(rep.stochastic.kind))};
    if (rep.stochastic.kind == DivergenceKind::Divergent) stoch.status = CheckStatus::Pass;
    if (rep.stochastic.kind == DivergenceKind::Convergent) stoch.status = CheckStatus::Fail;
    rep.consistency.push_back(stoch);
    return rep;
}

}  // namespace revend
