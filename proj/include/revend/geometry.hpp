#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace revend {

/// Sectional curvature of the ambient space form, normalised to -1, 0, +1.
enum class Kappa : int { Hyperbolic = -1, Euclidean = 0, Spherical = 1 };

Kappa kappa_from_int(int value);
constexpr int to_int(Kappa k) noexcept { return static_cast<int>(k); }
std::string_view to_string(Kappa k) noexcept;

/// Conformal type of an end.
enum class Verdict { Parabolic, NonParabolic, Inconclusive };

std::string_view to_string(Verdict v) noexcept;
Verdict verdict_from_string(std::string_view name);

/// A point of the (x1, x3) half-plane that is rotated about the x3 axis.
struct ProfilePoint {
    double x1 = 0.0;
    double x3 = 0.0;
};

/// A coordinate vector in the (x1, x3) half-plane.
struct Vec2 {
    double d1 = 0.0;
    double d3 = 0.0;
};

/// Conformal factor eta_kappa of the model metric g_kappa = eta_kappa * g_euclid.
double metric_factor(Kappa kappa, ProfilePoint p);

/// Length of v at p measured with g_kappa.
double tangent_norm(Kappa kappa, ProfilePoint p, Vec2 v);

/// True when p may lie on a generating curve: x1 > 0, and x3 > 0 in H^3.
bool admissible(Kappa kappa, ProfilePoint p) noexcept;

/// Regular profile curve on [t0, t1), t1 possibly infinite.
struct ParamCurve {
    std::function<ProfilePoint(double)> eval;
    std::function<Vec2(double)> deriv;
    // Optional second derivative; finite differences of deriv are used when empty.
    std::function<Vec2(double)> deriv2;
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    std::string label;
};

/// Second derivative of the curve, from deriv2 when available.
Vec2 second_derivative(const ParamCurve& curve, double t);

/// A profile curve reparametrised by g_kappa arc length over [0, s_max].
///
/// Arc length is tabulated on an adaptive t-grid; s(t) and t(s) are cubic
/// Hermite interpolants using the exact speed as slope data, so both are
/// monotone and C^1. Copies share the immutable tables.
class ArcCurve {
public:
    struct Samples {
        std::vector<double> t;
        std::vector<double> s;
        std::vector<double> speed;
    };

    ArcCurve(ParamCurve base, Kappa kappa, Samples samples, double tol);

    Kappa kappa() const noexcept { return kappa_; }
    double s_max() const noexcept { return data_->s.back(); }
    double tol() const noexcept { return tol_; }
    const ParamCurve& base() const noexcept { return *base_; }
    std::span<const double> sample_s() const noexcept { return data_->s; }
    std::span<const double> sample_t() const noexcept { return data_->t; }

    double t_of_s(double s) const;
    double s_of_t(double t) const;

    ProfilePoint point(double s) const;
    /// d gamma / ds in model coordinates; has unit g_kappa length.
    Vec2 tangent(double s) const;

private:
    std::shared_ptr<const ParamCurve> base_;
    Kappa kappa_;
    std::shared_ptr<const Samples> data_;
    double tol_;
};

/// Builds the arc-length reparametrisation of curve out to at least s_max.
/// Throws DomainError when the curve leaves the admissible half-plane and
/// ReparamError when its speed degenerates or the grid cannot resolve it.
ArcCurve arc_reparam(const ParamCurve& curve, Kappa kappa, double s_max, double tol = 1e-9);

struct Expectation {
    std::vector<Verdict> accepted;
    // Soft expectations come from observations rather than theorems.
    bool soft = false;

    bool admits(Verdict v) const;
};

using ParamMap = std::map<std::string, double>;

struct EndSpec {
    ArcCurve curve;
    Kappa kappa;
    std::string name;
    ParamMap params;
    std::optional<Expectation> expected;
};

/// Mean curvature H(s) of a surface of revolution in R^3, for a unit-speed
/// Euclidean profile: (k_profile + x3'/x1) / 2.
std::function<double(double)> euclid_mean_curvature(const ArcCurve& curve);

}  // namespace revend
