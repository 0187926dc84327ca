#include "revend/catalog.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

#include "revend/errors.hpp"
#include "revend/quadrature.hpp"

namespace revend {

namespace {

constexpr double kUnboundedSMax = 1.0e7;
constexpr double kArcTol = 1e-9;

// sinh^2(a+t) + sinh^2(a-t) = cosh(2a) cosh(2t) - 1 without cancellation.
double catenoid_d(double a, double t) {
    const double p = std::sinh(a + t);
    const double m = std::sinh(a - t);
    return p * p + m * m;
}

double catenoid_dy(double a, double t) {
    const double d = catenoid_d(a, t);
    return std::cosh(2 * a) * std::sinh(2 * t) / std::sqrt(d * (d + 2));
}

double catenoid_dlambda(double a, double t) {
    const double d = catenoid_d(a, t);
    return std::numbers::sqrt2 * std::sinh(2 * a) / (std::sqrt(d) * (d + 2));
}

}  // namespace

SphericalCatenoid::SphericalCatenoid(double a) : a_(a), step_(0.05) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("spherical catenoid requires a > 0");
    }
    const auto n = static_cast<std::size_t>(std::llround(kAsymptoticStart / step_));
    y_nodes_.resize(n + 1);
    lambda_nodes_.resize(n + 1);
    y_nodes_[0] = a;
    lambda_nodes_[0] = 0.0;
    const quad::Tolerance tol{1e-15, 1e-13, 4000};
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) * step_;
        const double hi = lo + step_;
        y_nodes_[i + 1] =
            y_nodes_[i] + quad::integrate([a](double t) { return catenoid_dy(a, t); }, lo, hi, tol).value;
        lambda_nodes_[i + 1] =
            lambda_nodes_[i] +
            quad::integrate([a](double t) { return catenoid_dlambda(a, t); }, lo, hi, tol).value;
    }
}

double SphericalCatenoid::y(double s) const {
    if (!(s >= 0.0)) throw DomainError("catenoid arc length must be nonnegative");
    if (s > kAsymptoticStart) return y_nodes_.back() + (s - kAsymptoticStart);
    const auto i = std::min(static_cast<std::size_t>(s / step_), y_nodes_.size() - 2);
    const double lo = static_cast<double>(i) * step_;
    const double a = a_;
    return y_nodes_[i] +
           quad::integrate([a](double t) { return catenoid_dy(a, t); }, lo, s, {1e-15, 1e-13, 4000}).value;
}

double SphericalCatenoid::lambda(double s) const {
    if (!(s >= 0.0)) throw DomainError("catenoid arc length must be nonnegative");
    if (s > kAsymptoticStart) {
        const double tail = catenoid_dlambda(a_, kAsymptoticStart) / 3.0;
        return lambda_nodes_.back() + tail * -std::expm1(-3.0 * (s - kAsymptoticStart));
    }
    const auto i = std::min(static_cast<std::size_t>(s / step_), lambda_nodes_.size() - 2);
    const double lo = static_cast<double>(i) * step_;
    const double a = a_;
    return lambda_nodes_[i] +
           quad::integrate([a](double t) { return catenoid_dlambda(a, t); }, lo, s, {1e-15, 1e-13, 4000})
               .value;
}

double SphericalCatenoid::dy(double s) const {
    return s > kAsymptoticStart ? 1.0 : catenoid_dy(a_, s);
}

double SphericalCatenoid::dlambda(double s) const {
    if (s > kAsymptoticStart) {
        return catenoid_dlambda(a_, kAsymptoticStart) * std::exp(-3.0 * (s - kAsymptoticStart));
    }
    return catenoid_dlambda(a_, s);
}

double SphericalCatenoid::lambda_limit() const {
    return lambda_nodes_.back() + catenoid_dlambda(a_, kAsymptoticStart) / 3.0;
}

ProfilePoint SphericalCatenoid::point(double s) const {
    const double scale = std::exp(lambda(s));
    const double yv = y(s);
    return {scale * std::tanh(yv), scale / std::cosh(yv)};
}

Vec2 SphericalCatenoid::deriv(double s) const {
    const double scale = std::exp(lambda(s));
    const double yv = y(s);
    const double th = std::tanh(yv);
    const double sech = 1.0 / std::cosh(yv);
    const double ly = dlambda(s);
    const double yy = dy(s);
    return {scale * (ly * th + yy * sech * sech), scale * (ly * sech - yy * sech * th)};
}

ProfilePoint catenoid_profile(double a, double s) { return SphericalCatenoid(a).point(s); }

std::pair<double, double> fresnel_pair(double u, double m) {
    if (!(u >= 0.0) || !(m > 1.0)) throw DomainError("fresnel_pair needs u >= 0 and m > 1");
    if (u == 0.0) return {0.0, 0.0};
    const double phi = std::pow(u, m) / m;

    if (phi <= 8.0) {
        // Power series; the largest term is bounded by e^8 so cancellation is mild.
        double s_sum = 0.0;
        double c_sum = 0.0;
        double pw = 1.0;  // phi^j / j!
        for (int j = 0; j < 200; ++j) {
            const double term = u * pw / (m * j + 1.0);
            const int k = j / 2;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            if (j % 2 == 0) {
                c_sum += sign * term;
            } else {
                s_sum += sign * term;
            }
            pw *= phi / (j + 1.0);
            if (j > 2 * phi && std::abs(term) < 1e-18 * std::max(1.0, u)) break;
        }
        return {s_sum, c_sum};
    }

    if (phi <= 40.0) {
        const quad::Tolerance tol{1e-15, 1e-13, 4000};
        const double sv = quad::integrate([m](double r) { return std::sin(std::pow(r, m) / m); }, 0.0, u, tol).value;
        const double cv = quad::integrate([m](double r) { return std::cos(std::pow(r, m) / m); }, 0.0, u, tol).value;
        return {sv, cv};
    }

    // Complete integral minus the asymptotic expansion of the tail
    // int_u^inf exp(i r^m / m) dr, obtained by repeated integration by parts.
    using cplx = std::complex<double>;
    const cplx I(0.0, 1.0);
    const double complete_mag = std::pow(m, 1.0 / m - 1.0) * std::tgamma(1.0 / m);
    const cplx complete = complete_mag * std::polar(1.0, std::numbers::pi / (2.0 * m));
    const cplx phase = std::polar(1.0, phi);

    cplx coeff = 1.0;
    double beta = 0.0;
    cplx tail = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
        const double power = std::pow(u, beta - m + 1.0);
        const cplx term = coeff * I * power;
        const double mag = std::abs(term);
        if (mag > prev_mag) break;
        tail += term;
        if (mag < 1e-18) break;
        prev_mag = mag;
        coeff *= I * (beta - m + 1.0);
        beta -= m;
    }
    const cplx value = complete - phase * tail;
    return {value.imag(), value.real()};
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "plane_end",      "bounded_oscillator", "sphere_end",         "c_cone",   "horosphere",
        "cylinder_upper", "cylinder_lower",     "spherical_catenoid", "clothoid",
    };
    return names;
}

ParamMap catalog_defaults(const std::string& name) {
    if (name == "plane_end") return {{"rho", 1.0}};
    if (name == "bounded_oscillator" || name == "sphere_end") return {{"R", 1.0}, {"a", 0.1}};
    if (name == "c_cone") return {{"c", 1.0}};
    if (name == "horosphere") return {{"z", 1.0}};
    if (name == "cylinder_upper" || name == "cylinder_lower") return {{"b", 2.0}, {"c", 1.0}};
    if (name == "spherical_catenoid") return {{"a", 0.5}};
    if (name == "clothoid") return {{"a", 1.0}, {"n", 1.0}, {"end", 1.0}};
    throw DomainError("unknown catalog entry '" + name + "'");
}

namespace {

void require_positive(const ParamMap& p, const char* key) {
    const double v = p.at(key);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string("parameter ") + key + " must be positive and finite");
    }
}

// alpha_{R,a}(t) = ((R-a) t^2/(t^2+1) + a, sin((R-a) t^3/(t^2+1) + a t)), t >= 0.
ParamCurve oscillator_curve(double R, double a, std::string label) {
    const double k = R - a;
    ParamCurve c;
    c.eval = [k, a](double t) {
        const double q = t * t + 1;
        return ProfilePoint{k * t * t / q + a, std::sin(k * t * t * t / q + a * t)};
    };
    c.deriv = [k, a](double t) {
        const double q = t * t + 1;
        const double phase = k * t * t * t / q + a * t;
        const double dphase = k * (t * t * t * t + 3 * t * t) / (q * q) + a;
        return Vec2{k * 2 * t / (q * q), std::cos(phase) * dphase};
    };
    c.deriv2 = [k, a](double t) {
        const double q = t * t + 1;
        const double phase = k * t * t * t / q + a * t;
        const double dphase = k * (t * t * t * t + 3 * t * t) / (q * q) + a;
        const double ddphase = k * (-2 * t * t * t + 6 * t) / (q * q * q);
        return Vec2{k * (2 - 6 * t * t) / (q * q * q),
                    -std::sin(phase) * dphase * dphase + std::cos(phase) * ddphase};
    };
    c.t0 = 0.0;
    c.label = std::move(label);
    return c;
}

ParamCurve clothoid_curve(double a, double n, int end) {
    const double m = n + 1.0;
    const double sgn = end > 0 ? 1.0 : -1.0;
    ParamCurve c;
    c.eval = [a, m, sgn](double t) {
        const auto [fs, fc] = fresnel_pair(std::exp(sgn * t), m);
        return ProfilePoint{a * fs, a * fc};
    };
    c.deriv = [a, m, sgn](double t) {
        const double u = std::exp(sgn * t);
        const double phi = std::pow(u, m) / m;
        return Vec2{sgn * a * u * std::sin(phi), sgn * a * u * std::cos(phi)};
    };
    c.deriv2 = [a, m, sgn](double t) {
        const double u = std::exp(sgn * t);
        const double um = std::pow(u, m);
        const double phi = um / m;
        const double sp = std::sin(phi);
        const double cp = std::cos(phi);
        return Vec2{a * u * (sp + um * cp), a * u * (cp - um * sp)};
    };
    c.t0 = 0.0;
    c.label = end > 0 ? "clothoid (outer end)" : "clothoid (inner end)";
    return c;
}

}  // namespace

EndSpec catalog(const std::string& name, const ParamMap& params) {
    ParamMap p = catalog_defaults(name);
    for (const auto& [key, value] : params) {
        if (!p.contains(key)) {
            throw DomainError("catalog entry '" + name + "' has no parameter '" + key + "'");
        }
        if (!std::isfinite(value)) throw DomainError("parameter " + key + " must be finite");
        p[key] = value;
    }

    const Expectation parabolic{{Verdict::Parabolic}, false};
    const Expectation non_parabolic{{Verdict::NonParabolic}, false};

    if (name == "plane_end") {
        require_positive(p, "rho");
        const double rho = p["rho"];
        ParamCurve c;
        c.eval = [rho](double t) { return ProfilePoint{rho + t, 0.0}; };
        c.deriv = [](double) { return Vec2{1.0, 0.0}; };
        c.deriv2 = [](double) { return Vec2{0.0, 0.0}; };
        c.label = "plane_end";
        return {arc_reparam(c, Kappa::Euclidean, kUnboundedSMax, kArcTol), Kappa::Euclidean, name, p, parabolic};
    }
    if (name == "bounded_oscillator" || name == "sphere_end") {
        require_positive(p, "R");
        require_positive(p, "a");
        if (!(p["R"] > p["a"])) throw DomainError("oscillator requires R > a");
        const Kappa kappa = name == "sphere_end" ? Kappa::Spherical : Kappa::Euclidean;
        return {arc_reparam(oscillator_curve(p["R"], p["a"], name), kappa, 256.0, kArcTol), kappa, name, p,
                parabolic};
    }
    if (name == "c_cone") {
        require_positive(p, "c");
        const double c = p["c"];
        ParamCurve curve;
        curve.eval = [c](double t) { return ProfilePoint{t, c * t}; };
        curve.deriv = [c](double) { return Vec2{1.0, c}; };
        curve.deriv2 = [](double) { return Vec2{0.0, 0.0}; };
        curve.t0 = 1.0;
        curve.label = "c_cone";
        // s = (sqrt(1+c^2)/c) ln t; keep t and c t representable.
        const double log_cap = 600.0 - std::max(0.0, std::log(c));
        const double s_max = std::min(kUnboundedSMax, log_cap * std::sqrt(1 + c * c) / c);
        return {arc_reparam(curve, Kappa::Hyperbolic, s_max, kArcTol), Kappa::Hyperbolic, name, p, parabolic};
    }
    if (name == "horosphere") {
        require_positive(p, "z");
        const double z = p["z"];
        ParamCurve c;
        c.eval = [z](double t) { return ProfilePoint{z * t + 1, z}; };
        c.deriv = [z](double) { return Vec2{z, 0.0}; };
        c.deriv2 = [](double) { return Vec2{0.0, 0.0}; };
        c.label = "horosphere";
        return {arc_reparam(c, Kappa::Hyperbolic, kUnboundedSMax, kArcTol), Kappa::Hyperbolic, name, p, parabolic};
    }
    if (name == "cylinder_upper" || name == "cylinder_lower") {
        require_positive(p, "b");
        require_positive(p, "c");
        const double b = p["b"];
        const double c = p["c"];
        const double sgn = name == "cylinder_upper" ? 1.0 : -1.0;
        ParamCurve curve;
        curve.eval = [b, c, sgn](double t) { return ProfilePoint{b, c * std::exp(sgn * t)}; };
        curve.deriv = [c, sgn](double t) { return Vec2{0.0, sgn * c * std::exp(sgn * t)}; };
        curve.deriv2 = [c, sgn](double t) { return Vec2{0.0, c * std::exp(sgn * t)}; };
        curve.label = name;
        return {arc_reparam(curve, Kappa::Hyperbolic, 500.0, kArcTol), Kappa::Hyperbolic, name, p,
                sgn > 0 ? parabolic : non_parabolic};
    }
    if (name == "spherical_catenoid") {
        require_positive(p, "a");
        auto cat = std::make_shared<const SphericalCatenoid>(p["a"]);
        ParamCurve curve;
        curve.eval = [cat](double s) { return cat->point(s); };
        curve.deriv = [cat](double s) { return cat->deriv(s); };
        curve.label = "spherical_catenoid";
        return {arc_reparam(curve, Kappa::Hyperbolic, 600.0, kArcTol), Kappa::Hyperbolic, name, p, non_parabolic};
    }
    if (name == "clothoid") {
        require_positive(p, "a");
        require_positive(p, "n");
        const double end = p["end"];
        if (end != 1.0 && end != -1.0) throw DomainError("clothoid parameter end must be 1 or -1");
        const double n = p["n"];
        const int which = end > 0 ? 1 : -1;
        // The inner end approaches the origin like u^{n+2}; stop before underflow. The
        // outer end needs grid points per oscillation, so its range is kept moderate.
        const double s_max = which > 0 ? 256.0 : 600.0 / (n + 2.0);
        return {arc_reparam(clothoid_curve(p["a"], n, which), Kappa::Hyperbolic, s_max, kArcTol),
                Kappa::Hyperbolic, name, p, Expectation{{Verdict::Parabolic, Verdict::Inconclusive}, true}};
    }
    throw DomainError("unknown catalog entry '" + name + "'");
}

}  // namespace revend
