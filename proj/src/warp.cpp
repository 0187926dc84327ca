#include "revend/warp.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "revend/errors.hpp"

namespace revend {

namespace {

// Cumulative-table nodes: spacing 0.5 up to 64, then geometric with ratio 1 + 1/64.
constexpr std::size_t kLinearNodes = 128;
constexpr double kLinearStep = 0.5;
constexpr double kLinearEnd = 64.0;
const double kLogRatio = std::log1p(1.0 / 64.0);

double node(std::size_t i) {
    if (i <= kLinearNodes) return kLinearStep * static_cast<double>(i);
    return kLinearEnd * std::exp(kLogRatio * static_cast<double>(i - kLinearNodes));
}

std::size_t node_below(double t) {
    if (t <= kLinearEnd) return static_cast<std::size_t>(t / kLinearStep);
    auto i = kLinearNodes + static_cast<std::size_t>(std::log(t / kLinearEnd) / kLogRatio);
    while (i > kLinearNodes && node(i) > t) --i;
    while (node(i + 1) <= t) ++i;
    return i;
}

const quad::Tolerance kCumulativeTol{1e-12, 1e-11, 4000};

}  // namespace

std::string_view to_string(WarpSource source) noexcept {
    switch (source) {
        case WarpSource::CurveDerived: return "curve-derived";
        case WarpSource::Extended: return "extended";
        case WarpSource::Synthetic: return "synthetic";
    }
    return "unknown";
}

struct WarpFn::Impl {
    Fn w;
    Fn dw;
    double s_max;
    WarpSource source;
    std::string label;

    mutable std::mutex mu;
    mutable std::vector<double> values{0.0};
    mutable std::vector<double> errors{0.0};

    double checked_w(double s) const {
        if (!(s >= 0.0) || s > s_max) {
            throw DomainError("warp evaluated outside [0, s_max] at s = " + std::to_string(s));
        }
        return w(s);
    }

    quad::Result cumulative(double t) const {
        if (!(t >= 0.0) || t > s_max) {
            throw DomainError("cumulative warp requested outside [0, s_max] at t = " + std::to_string(t));
        }
        const std::size_t i = node_below(t);
        double base = 0.0;
        double base_err = 0.0;
        {
            std::lock_guard lock(mu);
            while (values.size() <= i) {
                const std::size_t j = values.size();
                const double lo = node(j - 1);
                const double hi = std::min(node(j), s_max);
                const auto r = quad::integrate_best_effort(w, lo, hi, kCumulativeTol);
                values.push_back(values.back() + r.value);
                errors.push_back(errors.back() + r.abs_error);
            }
            base = values[i];
            base_err = errors[i];
        }
        const double lo = node(i);
        if (t <= lo) return {base, base_err};
        const auto r = quad::integrate_best_effort(w, lo, t, kCumulativeTol);
        return {base + r.value, base_err + r.abs_error};
    }
};

WarpFn::WarpFn(Fn w, Fn dw, double s_max, WarpSource source, std::string label) {
    auto impl = std::make_shared<Impl>();
    impl->w = std::move(w);
    impl->dw = std::move(dw);
    impl->s_max = s_max;
    impl->source = source;
    impl->label = std::move(label);
    impl_ = std::move(impl);
}

WarpFn WarpFn::synthetic(Fn w, Fn dw, double s_max, std::string label) {
    if (!w || !dw) throw DomainError("synthetic warp needs both w and dw");
    if (!(s_max > 0.0)) throw DomainError("synthetic warp needs s_max > 0");
    return WarpFn(std::move(w), std::move(dw), s_max, WarpSource::Synthetic, std::move(label));
}

double WarpFn::w(double s) const { return impl_->checked_w(s); }

double WarpFn::dw(double s) const {
    if (!(s >= 0.0) || s > impl_->s_max) {
        throw DomainError("warp derivative evaluated outside [0, s_max] at s = " + std::to_string(s));
    }
    return impl_->dw(s);
}

double WarpFn::s_max() const noexcept { return impl_->s_max; }
WarpSource WarpFn::source() const noexcept { return impl_->source; }
const std::string& WarpFn::label() const noexcept { return impl_->label; }

quad::Result WarpFn::cumulative(double t) const { return impl_->cumulative(t); }

WarpFn WarpFn::scaled(double k) const {
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("warp scale factor must be positive");
    auto base = impl_;
    return WarpFn([base, k](double s) { return k * base->w(s); }, [base, k](double s) { return k * base->dw(s); },
                  base->s_max, base->source, base->label);
}

WarpFn warp_from_curve(const ArcCurve& curve) {
    const Kappa kappa = curve.kappa();
    auto w = [curve, kappa](double s) {
        const ProfilePoint p = curve.point(s);
        switch (kappa) {
            case Kappa::Hyperbolic:
                if (!(p.x3 > 0.0)) throw DomainError("profile reaches x3 <= 0 at s = " + std::to_string(s));
                return p.x1 / p.x3;
            case Kappa::Euclidean: return p.x1;
            case Kappa::Spherical: return 2.0 * p.x1 / (1.0 + p.x1 * p.x1 + p.x3 * p.x3);
        }
        return p.x1;
    };
    auto dw = [curve, kappa](double s) {
        const ProfilePoint p = curve.point(s);
        const Vec2 v = curve.tangent(s);
        switch (kappa) {
            case Kappa::Hyperbolic: return (v.d1 * p.x3 - p.x1 * v.d3) / (p.x3 * p.x3);
            case Kappa::Euclidean: return v.d1;
            case Kappa::Spherical: {
                const double q = 1.0 + p.x1 * p.x1 + p.x3 * p.x3;
                return 2.0 * v.d1 / q - 4.0 * p.x1 * (p.x1 * v.d1 + p.x3 * v.d3) / (q * q);
            }
        }
        return v.d1;
    };
    return WarpFn(w, dw, curve.s_max(), WarpSource::CurveDerived, curve.base().label);
}

WarpFn extend_warp(const WarpFn& w, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("extend_warp needs rho > 0");
    const double p0 = rho / 4.0;
    const double m0 = 1.0;
    const double p1 = w.w(0.0);
    const double m1 = w.dw(0.0);
    if (!(p1 > 0.0)) throw DomainError("extend_warp needs w(0) > 0");
    const double len = rho - p0;
    const double floor = 0.5 * std::min(p0, p1);

    auto bridge = [=](double x, double& value, double& slope) {
        const double u = (x - p0) / len;
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1;
        const double h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2;
        const double h11 = u3 - u2;
        value = h00 * p0 + h10 * len * m0 + h01 * p1 + h11 * len * m1;
        slope = ((6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * len * m0 + (-6 * u2 + 6 * u) * p1 +
                 (3 * u2 - 2 * u) * len * m1) /
                len;
        if (value < floor) {
            value = floor;
            slope = 0.0;
        }
    };

    auto W = [w, rho, p0, bridge](double x) {
        if (x <= p0) return x;
        if (x >= rho) return w.w(x - rho);
        double value = 0.0;
        double slope = 0.0;
        bridge(x, value, slope);
        return value;
    };
    auto dW = [w, rho, p0, bridge](double x) {
        if (x <= p0) return 1.0;
        if (x >= rho) return w.dw(x - rho);
        double value = 0.0;
        double slope = 0.0;
        bridge(x, value, slope);
        return slope;
    };
    return WarpFn(W, dW, rho + w.s_max(), WarpSource::Extended, w.label());
}

double cumulative(const WarpFn& w, double t) { return w.cumulative(t).value; }

std::function<double(double)> centroid(const WarpFn& w) {
    return [w](double s) {
        if (!(s > 0.0)) throw DomainError("centroid is defined for s > 0 only");
        return w.cumulative(s).value / s;
    };
}

double gauss_curvature(const WarpFn& w, double s) {
    const double value = w.w(s);
    if (!(std::abs(value) > 1e-300)) throw NumericError("warp too small for curvature at s = " + std::to_string(s));
    double h = std::max(1e-4, 1e-4 * s);
    const double hi = std::isfinite(w.s_max()) ? w.s_max() : s + 2 * h;
    h = std::min(h, (hi - s) / 2);

    double second = 0.0;
    if (s - h >= 0.0 && h > 0.0) {
        auto central = [&](double step) { return (w.dw(s + step) - w.dw(s - step)) / (2 * step); };
        second = (4 * central(h / 2) - central(h)) / 3;
    } else {
        // One-sided second-order formula near the start of the end.
        h = std::max(h, 1e-6);
        auto forward = [&](double step) {
            return (-3 * w.dw(s) + 4 * w.dw(s + step) - w.dw(s + 2 * step)) / (2 * step);
        };
        second = (4 * forward(h / 2) - forward(h)) / 3;
    }
    return -second / value;
}

}  // namespace revend
