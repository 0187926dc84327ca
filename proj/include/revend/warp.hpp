#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

#include "revend/geometry.hpp"
#include "revend/quadrature.hpp"

namespace revend {

enum class WarpSource { CurveDerived, Extended, Synthetic };

std::string_view to_string(WarpSource source) noexcept;

/// Warping function w of the intrinsic metric ds^2 + w(s)^2 dtheta^2.
///
/// Holds w, its derivative, and a lazily filled table of Omega(t) = int_0^t w
/// at fixed nodes. The table is guarded by a mutex and stores only converged
/// panels, so concurrent readers see identical values. Copies share state.
class WarpFn {
public:
    using Fn = std::function<double(double)>;

    static WarpFn synthetic(Fn w, Fn dw, double s_max = std::numeric_limits<double>::infinity(),
                            std::string label = "synthetic");

    double w(double s) const;
    double dw(double s) const;
    double s_max() const noexcept;
    WarpSource source() const noexcept;
    const std::string& label() const noexcept;

    /// Omega(t) with its accumulated absolute error estimate.
    quad::Result cumulative(double t) const;

    /// The warp k * w.
    WarpFn scaled(double k) const;

private:
    struct Impl;
    WarpFn(Fn w, Fn dw, double s_max, WarpSource source, std::string label);
    std::shared_ptr<const Impl> impl_;

    friend WarpFn warp_from_curve(const ArcCurve& curve);
    friend WarpFn extend_warp(const WarpFn& w, double rho);
};

/// w = gamma1/gamma2 (H^3), gamma1 (R^3), 2 gamma1/(1 + |gamma|^2) (S^3).
WarpFn warp_from_curve(const ArcCurve& curve);

/// Caps the end with a disc: W(x) = x on [0, rho/4], W(x) = w(x - rho) for
/// x >= rho, and a positive cubic bridge in between.
WarpFn extend_warp(const WarpFn& w, double rho);

/// Omega(t) = int_0^t w.
double cumulative(const WarpFn& w, double t);

/// x_g(s) = Omega(s)/s, defined for s > 0.
std::function<double(double)> centroid(const WarpFn& w);

/// K = -w''/w, with w'' from Richardson-extrapolated central differences of w'.
double gauss_curvature(const WarpFn& w, double s);

}  // namespace revend
