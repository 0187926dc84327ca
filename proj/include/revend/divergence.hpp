#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace revend {

/// Tunables of the improper-integral classifier and the geometric tests.
struct ClassifierConfig {
    double horizon_t0 = 8.0;
    int max_doublings = 20;
    // Band around the critical exponent 1 inside which no power-law decision is made.
    double delta = 0.025;
    // Target accuracy of a convergent value.
    double tol = 1e-8;
    double fit_quality = 0.98;
    // Exponents within this band of 1, with negligible drift, are read as logarithmic growth.
    double log_band = 0.0025;
    double c_floor = 1e-9;
    double z_floor = 1e-9;
    // Relative change of a running extreme over one doubling that counts as stable.
    double stabilization = 1e-6;
    int fit_samples = 64;
    int scan_samples = 256;
    double rho = 1.0;
    double quad_abs = 1e-10;
    double quad_rel = 1e-8;

    void validate() const;
    bool operator==(const ClassifierConfig&) const = default;
};

enum class TailFamily { PowerLaw, Exponential, BoundedBelow, Unresolved };

std::string_view to_string(TailFamily family) noexcept;
TailFamily tail_family_from_string(std::string_view name);

/// Regression summary of the integrand on the last two decades of the horizon.
/// PowerLaw: f ~ s^{-estimate}. Exponential: f ~ e^{estimate * s}.
/// BoundedBelow: estimate is the smallest sampled value.
struct TailModel {
    TailFamily family = TailFamily::Unresolved;
    double s_lo = 0.0;
    double s_hi = 0.0;
    double fit_quality = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    // Local decay exponent from the last two doubling averages.
    std::optional<double> local_exponent;

    bool operator==(const TailModel&) const = default;
};

enum class DivergenceKind { Divergent, Convergent, Inconclusive };

std::string_view to_string(DivergenceKind kind) noexcept;
DivergenceKind divergence_kind_from_string(std::string_view name);

struct Partial {
    double horizon = 0.0;
    double value = 0.0;

    bool operator==(const Partial&) const = default;
};

struct DivergenceVerdict {
    DivergenceKind kind = DivergenceKind::Inconclusive;
    std::optional<double> value;
    std::optional<double> error;
    TailModel tail;
    double horizon = 0.0;
    std::vector<Partial> partials;
    std::string evidence;

    bool operator==(const DivergenceVerdict&) const = default;
};

/// Decides whether int_{s_lo}^inf f diverges, integrating over the horizons
/// s_lo + T0 * 2^k that do not exceed s_cap.
///
/// Each doubling contributes an average of f; the base-2 log ratio of
/// consecutive averages is a local decay exponent q. q below 1 - delta
/// (and not rising back towards 1) means divergence, q above 1 + delta (and
/// not falling towards 1) means convergence, and q pinned at 1 with no drift
/// is read as logarithmic divergence. A convergent integral keeps doubling
/// until its extrapolated value settles within cfg.tol or the horizon runs out.
DivergenceVerdict classify_integral(const std::function<double(double)>& f, double s_lo,
                                    const ClassifierConfig& cfg = {},
                                    double s_cap = std::numeric_limits<double>::infinity());

/// Least-squares tail fits on [T/100, T]; picks the better family.
TailModel fit_tail(const std::function<double(double)>& f, double s_lo, double horizon,
                   const ClassifierConfig& cfg);

}  // namespace revend
