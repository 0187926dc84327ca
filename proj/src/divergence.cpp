#include "revend/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revend/errors.hpp"
#include "revend/quadrature.hpp"

namespace revend {

void ClassifierConfig::validate() const {
    if (!(horizon_t0 > 0.0) || !std::isfinite(horizon_t0)) throw DomainError("horizon_t0 must be positive");
    if (max_doublings < 3 || max_doublings > 60) throw DomainError("max_doublings must lie in [3, 60]");
    if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta must lie in (0, 0.5)");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    if (!(fit_quality >= 0.0 && fit_quality <= 1.0)) throw DomainError("fit_quality must lie in [0, 1]");
    if (!(log_band >= 0.0 && log_band < delta)) throw DomainError("log_band must lie in [0, delta)");
    if (!(c_floor >= 0.0) || !(z_floor >= 0.0)) throw DomainError("floors must be nonnegative");
    if (!(stabilization > 0.0)) throw DomainError("stabilization must be positive");
    if (fit_samples < 8 || scan_samples < 8) throw DomainError("sample counts must be at least 8");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
    if (!(quad_abs > 0.0) || !(quad_rel > 0.0)) throw DomainError("quadrature tolerances must be positive");
}

std::string_view to_string(TailFamily family) noexcept {
    switch (family) {
        case TailFamily::PowerLaw: return "PowerLaw";
        case TailFamily::Exponential: return "Exponential";
        case TailFamily::BoundedBelow: return "BoundedBelow";
        case TailFamily::Unresolved: return "Unresolved";
    }
    return "Unresolved";
}

TailFamily tail_family_from_string(std::string_view name) {
    for (auto f : {TailFamily::PowerLaw, TailFamily::Exponential, TailFamily::BoundedBelow, TailFamily::Unresolved}) {
        if (to_string(f) == name) return f;
    }
    throw ParseError("unknown tail family '" + std::string(name) + "'", 0);
}

std::string_view to_string(DivergenceKind kind) noexcept {
    switch (kind) {
        case DivergenceKind::Divergent: return "Divergent";
        case DivergenceKind::Convergent: return "Convergent";
        case DivergenceKind::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

DivergenceKind divergence_kind_from_string(std::string_view name) {
    for (auto k : {DivergenceKind::Divergent, DivergenceKind::Convergent, DivergenceKind::Inconclusive}) {
        if (to_string(k) == name) return k;
    }
    throw ParseError("unknown divergence kind '" + std::string(name) + "'", 0);
}

namespace {

struct LineFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double r2 = 0.0;
    bool ok = false;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit fit;
    const auto n = static_cast<double>(x.size());
    if (x.size() < 3) return fit;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) return fit;
    fit.slope = sxy / sxx;
    const double sse = std::max(0.0, syy - fit.slope * sxy);
    // A perfectly flat response is fitted exactly.
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    fit.slope_se = std::sqrt(sse / std::max(1.0, n - 2.0) / sxx);
    fit.ok = true;
    return fit;
}

}  // namespace

TailModel fit_tail(const std::function<double(double)>& f, double s_lo, double horizon, const ClassifierConfig& cfg) {
    TailModel model;
    double lo = std::max(s_lo, horizon / 100.0);
    if (lo <= 0.0) lo = horizon / 100.0;
    model.s_lo = lo;
    model.s_hi = horizon;
    const int n = cfg.fit_samples;

    std::vector<double> px;
    std::vector<double> py;
    std::vector<double> ex;
    std::vector<double> ey;
    double smallest = std::numeric_limits<double>::infinity();
    const double ratio = std::log(horizon / lo);
    for (int i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / (n - 1);
        const double sg = lo * std::exp(ratio * frac);
        const double vg = f(sg);
        smallest = std::min(smallest, vg);
        if (vg > 0.0 && std::isfinite(vg)) {
            px.push_back(std::log(sg));
            py.push_back(std::log(vg));
        }
        const double su = lo + (horizon - lo) * frac;
        const double vu = f(su);
        smallest = std::min(smallest, vu);
        if (vu > 0.0 && std::isfinite(vu)) {
            ex.push_back(su);
            ey.push_back(std::log(vu));
        }
    }
    const LineFit power = least_squares(px, py);
    const LineFit expo = least_squares(ex, ey);
    if (power.ok && (!expo.ok || power.r2 >= expo.r2)) {
        model.family = TailFamily::PowerLaw;
        model.estimate = -power.slope;
        model.std_error = power.slope_se;
        model.fit_quality = power.r2;
    } else if (expo.ok) {
        model.family = TailFamily::Exponential;
        model.estimate = expo.slope;
        model.std_error = expo.slope_se;
        model.fit_quality = expo.r2;
    }
    if (model.fit_quality < cfg.fit_quality) model.family = TailFamily::Unresolved;
    if (smallest > 0.0 && std::isfinite(smallest) &&
        (model.family == TailFamily::Unresolved || model.estimate <= cfg.delta)) {
        if (model.family != TailFamily::Exponential || model.estimate >= -cfg.delta) {
            model.family = TailFamily::BoundedBelow;
            model.estimate = smallest;
            model.std_error = 0.0;
        }
    }
    return model;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Long panels of oscillating integrands exhaust the interval budget; those
// are split further instead of failing the whole classification.
quad::Result integrate_panel(const std::function<double(double)>& f, double a, double b,
                             const quad::Tolerance& tol, int depth = 0) {
    try {
        return quad::integrate_best_effort(f, a, b, tol);
    } catch (const QuadratureError&) {
        constexpr int kSplit = 16;
        if (depth >= 4) throw;
        quad::Result sum;
        for (int i = 0; i < kSplit; ++i) {
            const double lo = a + (b - a) * i / kSplit;
            const double hi = i + 1 == kSplit ? b : a + (b - a) * (i + 1) / kSplit;
            const auto r = integrate_panel(f, lo, hi, tol, depth + 1);
            sum.value += r.value;
            sum.abs_error += r.abs_error;
        }
        return sum;
    }
}

}  // namespace

DivergenceVerdict classify_integral(const std::function<double(double)>& f, double s_lo, const ClassifierConfig& cfg,
                                    double s_cap) {
    cfg.validate();
    if (!std::isfinite(s_lo)) throw DomainError("classify_integral needs a finite lower limit");

    DivergenceVerdict out;
    const quad::Tolerance qtol{cfg.quad_abs, cfg.quad_rel, 4000};
    const double delta = cfg.delta;

    double total = 0.0;
    double total_err = 0.0;
    double prev_t = s_lo;
    std::vector<double> averages;
    std::vector<double> exponents;

    bool decided_convergent = false;
    double prev_value = std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    double value_err = std::numeric_limits<double>::infinity();
    bool all_zero = true;

    auto finish = [&](DivergenceKind kind, std::string evidence) {
        out.kind = kind;
        out.evidence = std::move(evidence);
        out.tail = fit_tail(f, s_lo, out.horizon, cfg);
        if (!exponents.empty()) out.tail.local_exponent = exponents.back();
        if (kind == DivergenceKind::Convergent) {
            out.value = value;
            out.error = value_err;
        }
        return out;
    };

    for (int k = 0; k <= cfg.max_doublings; ++k) {
        const double t = s_lo + cfg.horizon_t0 * std::ldexp(1.0, k);
        if (t > s_cap) break;

        // Split each doubling into panels so localized features are not missed.
        constexpr int kPanels = 8;
        double inc = 0.0;
        for (int p = 0; p < kPanels; ++p) {
            const double a = prev_t + (t - prev_t) * p / kPanels;
            const double b = p + 1 == kPanels ? t : prev_t + (t - prev_t) * (p + 1) / kPanels;
            const auto r = integrate_panel(f, a, b, qtol);
            inc += r.value;
            total_err += r.abs_error;
        }
        if (inc != 0.0) all_zero = false;
        total += inc;
        averages.push_back(inc / (t - prev_t));
        out.partials.push_back({t, total});
        out.horizon = t;
        prev_t = t;

        if (!std::isfinite(total)) {
            return finish(DivergenceKind::Divergent, "partial integral overflowed at horizon " + fmt(t));
        }
        // The first panel is not a doubling of its predecessor; exponents start at k = 2.
        if (k < 2) continue;
        const double a0 = averages[averages.size() - 2];
        const double a1 = averages.back();
        double q;
        if (a1 <= 0.0) {
            q = std::numeric_limits<double>::infinity();
        } else if (a0 <= 0.0) {
            q = -std::numeric_limits<double>::infinity();
        } else {
            q = std::log2(a0 / a1);
        }
        exponents.push_back(q);
        if (k < 3) continue;

        const double qp = exponents[exponents.size() - 2];
        const double drift = (std::isfinite(q) && std::isfinite(qp)) ? std::abs(q - qp) : 0.0;
        const bool divergent = (q < 1 - delta && (q <= qp || q + 2 * drift < 1 - delta)) ||
                               (std::abs(q - 1) + 2 * drift < cfg.log_band);
        const bool convergent = q > 1 + delta && (q >= qp || q - 2 * drift > 1 + delta);

        if (all_zero) {
            value = 0.0;
            value_err = total_err;
            return finish(DivergenceKind::Convergent, "integrand vanishes on every sampled panel");
        }

        if (decided_convergent && divergent) {
            return finish(DivergenceKind::Inconclusive,
                          "local exponent fell to " + fmt(q) + " after an earlier convergent reading");
        }
        if (!decided_convergent && divergent) {
            const std::string why = std::abs(q - 1) + 2 * drift < cfg.log_band
                                        ? "local exponent " + fmt(q) + " pinned at 1 (logarithmic growth)"
                                        : "local exponent " + fmt(q) + " below 1 - delta";
            return finish(DivergenceKind::Divergent, why);
        }
        if (convergent || decided_convergent) {
            decided_convergent = true;
            double remainder = 0.0;
            if (std::isfinite(q)) {
                // Increments shrink by 2^{1-q} per doubling; sum the geometric tail.
                const double r = std::exp2(1.0 - q);
                const double last_inc = a1 * (cfg.horizon_t0 * std::ldexp(1.0, k - 1));
                remainder = r < 1.0 ? last_inc * r / (1.0 - r) : std::numeric_limits<double>::infinity();
            }
            value = total + remainder;
            value_err = (std::isfinite(prev_value) ? std::abs(value - prev_value) : std::abs(remainder)) + total_err;
            prev_value = value;
            if (value_err < cfg.tol) {
                return finish(DivergenceKind::Convergent,
                              "local exponent " + fmt(q) + " above 1 + delta; value settled");
            }
        }
    }

    if (decided_convergent) {
        return finish(DivergenceKind::Convergent,
                      "local exponent above 1 + delta; value uncertainty " + fmt(value_err) +
                          " still above tol at the last horizon");
    }
    if (out.partials.empty()) {
        out.kind = DivergenceKind::Inconclusive;
        out.evidence = "sampled range shorter than the first horizon";
        return out;
    }
    return finish(DivergenceKind::Inconclusive, "no decision before the horizon was exhausted");
}

}  // namespace revend
