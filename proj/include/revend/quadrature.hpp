#pragma once

#include <functional>

namespace revend::quad {

struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-8;
    // Subinterval budget of the adaptive bisection.
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod integration of f over [a, b] (a <= b
/// or a > b, both finite). Throws QuadratureError when the error estimate
/// stays far above tolerance, and rethrows any exception raised by f.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {});

/// Like integrate, but on failure retries with the relative tolerance
/// loosened 100-fold at a time, up to max_rel. The returned error estimate
/// reflects the tolerance that was actually met.
Result integrate_best_effort(const std::function<double(double)>& f, double a, double b,
                             const Tolerance& tol = {}, double max_rel = 1e-5);

}  // namespace revend::quad
