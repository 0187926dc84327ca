#include "revend/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revend/errors.hpp"
#include "revend/quadrature.hpp"

namespace revend {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct Hermite {
    double x0, x1, y0, y1, m0, m1;

    double operator()(double x) const {
        const double h = x1 - x0;
        const double u = (x - x0) / h;
        const double u2 = u * u;
        const double u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * m0 + (-2 * u3 + 3 * u2) * y1 +
               (u3 - u2) * h * m1;
    }
};

// Index i of the cell [xs[i], xs[i+1]] containing x.
std::size_t locate(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0;
    auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
}

}  // namespace

Kappa kappa_from_int(int value) {
    switch (value) {
        case -1: return Kappa::Hyperbolic;
        case 0: return Kappa::Euclidean;
        case 1: return Kappa::Spherical;
        default: throw DomainError("kappa must be -1, 0 or 1, got " + std::to_string(value));
    }
}

std::string_view to_string(Kappa k) noexcept {
    switch (k) {
        case Kappa::Hyperbolic: return "hyperbolic";
        case Kappa::Euclidean: return "euclidean";
        case Kappa::Spherical: return "spherical";
    }
    return "?";
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Parabolic: return "Parabolic";
        case Verdict::NonParabolic: return "NonParabolic";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Verdict verdict_from_string(std::string_view name) {
    if (name == "Parabolic") return Verdict::Parabolic;
    if (name == "NonParabolic") return Verdict::NonParabolic;
    if (name == "Inconclusive") return Verdict::Inconclusive;
    throw DomainError("unknown verdict '" + std::string(name) + "'");
}

double metric_factor(Kappa kappa, ProfilePoint p) {
    switch (kappa) {
        case Kappa::Hyperbolic:
            if (!(p.x3 > 0.0)) {
                throw DomainError("hyperbolic model requires x3 > 0, got x3 = " + fmt_num(p.x3));
            }
            return 1.0 / (p.x3 * p.x3);
        case Kappa::Euclidean: return 1.0;
        case Kappa::Spherical: {
            const double d = 1.0 + p.x1 * p.x1 + p.x3 * p.x3;
            return 4.0 / (d * d);
        }
    }
    return 1.0;
}

double tangent_norm(Kappa kappa, ProfilePoint p, Vec2 v) {
    const double euclid = std::hypot(v.d1, v.d3);
    if (kappa == Kappa::Hyperbolic) {
        metric_factor(kappa, p);  // domain check
        return euclid / p.x3;
    }
    return std::sqrt(metric_factor(kappa, p)) * euclid;
}

bool admissible(Kappa kappa, ProfilePoint p) noexcept {
    if (!std::isfinite(p.x1) || !std::isfinite(p.x3)) return false;
    if (!(p.x1 > 0.0)) return false;
    if (kappa == Kappa::Hyperbolic && !(p.x3 > 0.0)) return false;
    return true;
}

Vec2 second_derivative(const ParamCurve& curve, double t) {
    if (curve.deriv2) return curve.deriv2(t);
    auto central = [&](double h) {
        const Vec2 a = curve.deriv(t + h);
        const Vec2 b = curve.deriv(t - h);
        return Vec2{(a.d1 - b.d1) / (2 * h), (a.d3 - b.d3) / (2 * h)};
    };
    const double h = 1e-4 * std::max(1.0, std::abs(t));
    const Vec2 coarse = central(h);
    const Vec2 fine = central(h / 2);
    return {(4 * fine.d1 - coarse.d1) / 3, (4 * fine.d3 - coarse.d3) / 3};
}

ArcCurve::ArcCurve(ParamCurve base, Kappa kappa, Samples samples, double tol)
    : base_(std::make_shared<const ParamCurve>(std::move(base))),
      kappa_(kappa),
      data_(std::make_shared<const Samples>(std::move(samples))),
      tol_(tol) {
    if (data_->t.size() < 2 || data_->t.size() != data_->s.size() ||
        data_->t.size() != data_->speed.size()) {
        throw DomainError("arc-length table needs at least two consistent samples");
    }
}

double ArcCurve::t_of_s(double s) const {
    const auto& d = *data_;
    if (!(s >= 0.0) || s > d.s.back()) {
        throw DomainError("arc length " + fmt_num(s) + " outside [0, " + fmt_num(d.s.back()) +
                          "] of '" + base_->label + "'");
    }
    const std::size_t i = locate(d.s, s);
    const Hermite h{d.s[i], d.s[i + 1], d.t[i], d.t[i + 1], 1.0 / d.speed[i], 1.0 / d.speed[i + 1]};
    return std::clamp(h(s), d.t[i], d.t[i + 1]);
}

double ArcCurve::s_of_t(double t) const {
    const auto& d = *data_;
    if (!(t >= d.t.front()) || t > d.t.back()) {
        throw DomainError("parameter " + fmt_num(t) + " outside the tabulated range of '" +
                          base_->label + "'");
    }
    const std::size_t i = locate(d.t, t);
    const Hermite h{d.t[i], d.t[i + 1], d.s[i], d.s[i + 1], d.speed[i], d.speed[i + 1]};
    return std::clamp(h(t), d.s[i], d.s[i + 1]);
}

ProfilePoint ArcCurve::point(double s) const { return base_->eval(t_of_s(s)); }

Vec2 ArcCurve::tangent(double s) const {
    const double t = t_of_s(s);
    const Vec2 d = base_->deriv(t);
    const double speed = tangent_norm(kappa_, base_->eval(t), d);
    return {d.d1 / speed, d.d3 / speed};
}

ArcCurve arc_reparam(const ParamCurve& curve, Kappa kappa, double s_max, double tol) {
    if (!(s_max > 0.0) || !(tol > 0.0)) {
        throw DomainError("arc_reparam needs s_max > 0 and tol > 0");
    }
    if (!curve.eval || !curve.deriv) {
        throw DomainError("curve '" + curve.label + "' lacks eval or deriv");
    }

    constexpr double kSpeedFloor = 1e-300;
    constexpr std::size_t kMaxSamples = 5'000'000;

    auto speed_at = [&](double t, bool& ok) {
        const ProfilePoint p = curve.eval(t);
        ok = admissible(kappa, p);
        if (!ok) return 0.0;
        const double v = tangent_norm(kappa, p, curve.deriv(t));
        if (!std::isfinite(v)) {
            ok = false;
            return 0.0;
        }
        return v;
    };

    ArcCurve::Samples out;
    double t = curve.t0;
    double s = 0.0;
    bool ok = true;
    double speed = speed_at(t, ok);
    if (!ok) {
        throw DomainError("curve '" + curve.label + "' starts outside the admissible half-plane");
    }
    if (!(speed > kSpeedFloor)) {
        throw ReparamError("curve '" + curve.label + "' has vanishing speed at t0");
    }
    out.t.push_back(t);
    out.s.push_back(s);
    out.speed.push_back(speed);

    double h = 1e-3 * std::max(1.0, std::abs(t)) / std::max(1.0, speed);
    if (std::isfinite(curve.t1)) h = std::min(h, (curve.t1 - t) / 8);

    auto sigma = [&](double x) {
        bool inner_ok = true;
        const double v = speed_at(x, inner_ok);
        if (!inner_ok) throw DomainError("curve '" + curve.label + "' leaves the model at t = " + fmt_num(x));
        return v;
    };

    while (s < s_max) {
        if (out.t.size() >= kMaxSamples) {
            throw ReparamError("arc-length grid for '" + curve.label + "' exceeds " +
                               std::to_string(kMaxSamples) + " samples");
        }
        if (std::isfinite(curve.t1)) {
            if (t >= curve.t1) {
                throw ReparamError("curve '" + curve.label + "' ends at arc length " + fmt_num(s) +
                                   " before the requested " + fmt_num(s_max));
            }
            h = std::min(h, curve.t1 - t);
        }
        const double h_min = 1e-14 * std::max(1.0, std::abs(t));
        if (h < h_min) {
            throw DomainError("curve '" + curve.label + "' leaves the admissible half-plane near t = " +
                              fmt_num(t) + " (arc length " + fmt_num(s) + ")");
        }

        const double tn = t + h;
        const double tm = t + h / 2;
        bool ok_n = true;
        bool ok_m = true;
        const double speed_n = speed_at(tn, ok_n);
        const double speed_m = ok_n ? speed_at(tm, ok_m) : 0.0;
        if (!ok_n || !ok_m) {
            h /= 2;
            continue;
        }
        if (!(speed_n > kSpeedFloor) || !(speed_m > kSpeedFloor)) {
            throw ReparamError("speed of '" + curve.label + "' underflows near t = " + fmt_num(tn));
        }

        const double bound = tol * std::max(1.0, s);
        const quad::Tolerance qt{1e-2 * bound, 1e-12, 2000};
        double ds1 = 0.0;
        double ds2 = 0.0;
        try {
            ds1 = quad::integrate(sigma, t, tm, qt).value;
            ds2 = quad::integrate(sigma, tm, tn, qt).value;
        } catch (const DomainError&) {
            h /= 2;
            continue;
        }
        const double s_mid = s + ds1;
        const double sn = s_mid + ds2;

        const Hermite fwd{t, tn, s, sn, speed, speed_n};
        const Hermite inv{s, sn, t, tn, 1.0 / speed, 1.0 / speed_n};
        const double err = std::max(std::abs(fwd(tm) - s_mid), std::abs(inv(s_mid) - tm) * speed_m);
        if (!std::isfinite(err) || err > bound) {
            h /= 2;
            continue;
        }

        out.t.push_back(tn);
        out.s.push_back(sn);
        out.speed.push_back(speed_n);
        t = tn;
        s = sn;
        speed = speed_n;
        if (err < bound / 32) h *= 1.5;
    }

    return ArcCurve(curve, kappa, std::move(out), tol);
}

bool Expectation::admits(Verdict v) const {
    return std::find(accepted.begin(), accepted.end(), v) != accepted.end();
}

std::function<double(double)> euclid_mean_curvature(const ArcCurve& curve) {
    if (curve.kappa() != Kappa::Euclidean) {
        throw DomainError("euclid_mean_curvature requires a Euclidean profile");
    }
    return [curve](double s) {
        const double t = curve.t_of_s(s);
        const ParamCurve& base = curve.base();
        const ProfilePoint p = base.eval(t);
        if (!(p.x1 > 0.0)) throw DomainError("profile meets the rotation axis");
        const Vec2 d = base.deriv(t);
        const Vec2 dd = second_derivative(base, t);
        const double v = std::hypot(d.d1, d.d3);
        const double k_profile = (d.d1 * dd.d3 - d.d3 * dd.d1) / (v * v * v);
        return 0.5 * (k_profile + (d.d3 / v) / p.x1);
    };
}

}  // namespace revend
