#pragma once

#include <string>
#include <utility>
#include <vector>

#include "revend/geometry.hpp"

namespace revend {

/// Spherical catenoid of H^3 in the half-space model, one end (s >= 0).
///
/// The profile is e^{L(s)} (tanh y(s), 1 / cosh y(s)) where y and L are
/// quadratures of closed-form integrands. Cumulative values are tabulated at
/// construction on [0, kAsymptoticStart]; beyond it the y integrand equals 1
/// to double precision and the L integrand is a pure e^{-3s} tail.
class SphericalCatenoid {
public:
    static constexpr double kAsymptoticStart = 30.0;

    explicit SphericalCatenoid(double a);

    double a() const noexcept { return a_; }
    double y(double s) const;
    double lambda(double s) const;
    double dy(double s) const;
    double dlambda(double s) const;

    ProfilePoint point(double s) const;
    Vec2 deriv(double s) const;

    /// L(infinity), the finite limit of lambda.
    double lambda_limit() const;

private:
    double a_;
    double step_;
    std::vector<double> y_nodes_;
    std::vector<double> lambda_nodes_;
};

/// Closed-form profile point of the spherical catenoid with neck parameter a.
ProfilePoint catenoid_profile(double a, double s);

/// (int_0^u sin(r^m / m) dr, int_0^u cos(r^m / m) dr) for m > 1 and u >= 0.
std::pair<double, double> fresnel_pair(double u, double m);

/// Names accepted by catalog(), in table order.
const std::vector<std::string>& catalog_names();

/// Builds one of the built-in ends. Unset parameters take their defaults;
/// unknown names or invalid parameters raise DomainError.
EndSpec catalog(const std::string& name, const ParamMap& params = {});

/// Default parameters of a catalog entry.
ParamMap catalog_defaults(const std::string& name);

}  // namespace revend
