#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revend/divergence.hpp"
#include "revend/geometry.hpp"
#include "revend/warp.hpp"

namespace revend {

/// Outcome of a one-sided geometric test; fired means it certifies parabolicity.
struct TestOutcome {
    std::string id;
    bool fired = false;
    std::optional<double> value;
    std::string evidence;

    bool operator==(const TestOutcome&) const = default;
};

enum class CheckStatus { Pass, Fail, Undecided, Skip };

std::string_view to_string(CheckStatus status) noexcept;
CheckStatus check_status_from_string(std::string_view name);

struct ConsistencyCheck {
    std::string id;
    CheckStatus status = CheckStatus::Skip;
    std::string detail;

    bool operator==(const ConsistencyCheck&) const = default;
};

/// int^inf ds / w: divergence is equivalent to parabolicity of the end.
DivergenceVerdict parabolicity_test(const WarpFn& w, const ClassifierConfig& cfg = {});

/// int^inf s / Omega(s) ds: divergence is sufficient for parabolicity.
DivergenceVerdict sufficient_parabolic_test(const WarpFn& w, const ClassifierConfig& cfg = {});

/// int^inf (C0 + Omega(s)) / w(s) ds with C0 = int_0^rho W of the capped warp.
/// Divergence means the end is stochastically complete.
DivergenceVerdict stochastic_test(const WarpFn& w, double rho, const ClassifierConfig& cfg = {});

/// Stable positive running infimum of gamma2/gamma1 (the end lies on a c-cone).
TestOutcome cone_test(const ArcCurve& curve, const ClassifierConfig& cfg = {});

/// Measure of {s : gamma2/gamma1 >= c}; divergence certifies parabolicity.
DivergenceVerdict iplus_test(const ArcCurve& curve, double c, const ClassifierConfig& cfg = {});

/// Stable positive running infimum of gamma2 (the end lies above a horosphere).
TestOutcome horosphere_test(const ArcCurve& curve, const ClassifierConfig& cfg = {});

/// Linear bound x_g(s) <= C s or a convergent centroid.
TestOutcome centroid_test(const WarpFn& w, const ClassifierConfig& cfg = {});

/// Bounded gamma1 and gamma2 tending to 0, both forced on non-parabolic ends of H^3.
std::vector<ConsistencyCheck> nonparabolic_necessaries(const ArcCurve& curve, const ClassifierConfig& cfg = {});

struct ConformalReport {
    std::string end_name;
    Kappa kappa = Kappa::Hyperbolic;
    ParamMap params;
    Verdict verdict = Verdict::Inconclusive;
    bool contradiction = false;
    // Criteria that certified a verdict, and those that ran without firing.
    std::vector<TestOutcome> fired;
    std::vector<TestOutcome> absent;
    std::vector<ConsistencyCheck> consistency;
    DivergenceVerdict parabolicity;
    DivergenceVerdict sufficient;
    DivergenceVerdict stochastic;

    bool operator==(const ConformalReport&) const = default;
};

/// Full classification of one end. Ends in R^3 and S^3 are parabolic
/// outright, with the integral test kept as a cross-check; ends in H^3 are
/// decided by the integral test, with the geometric tests as certificates.
ConformalReport classify_end(const EndSpec& end, const ClassifierConfig& cfg = {});

}  // namespace revend
