#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "revend/divergence.hpp"
#include "revend/warp.hpp"

namespace revend {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key) noexcept;
};

/// Independent random stream addressed by (seed, stream id). Draws are a
/// pure function of the address and the draw index.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal by Box-Muller.
    double normal() noexcept;

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

struct DiffusionCfg {
    double step = 1e-4;
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 1;
    double t_max = 100.0;
    // Outer radius used when the requested outer barrier is infinite.
    double r_explode = 1e6;
    // 0 means all available workers (still capped by REVEND_THREADS).
    unsigned workers = 0;
    bool bridge_correction = true;

    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;

    bool operator==(const Estimate&) const = default;
};

/// Outcome counts of a radial-diffusion experiment. Exit times follow the
/// generator Delta (diffusion coefficient sqrt 2); hitting probabilities do
/// not depend on that convention.
struct HitStats {
    std::uint64_t n_paths = 0;
    std::uint64_t n_inner = 0;
    std::uint64_t n_outer = 0;
    std::uint64_t n_undecided = 0;
    Estimate p_hit_inner;
    Estimate p_hit_outer;
    // Over paths absorbed before t_max.
    Estimate mean_exit_time;

    bool operator==(const HitStats&) const = default;
};

/// b(r) = w'(r)/w(r), the drift of the radial part of the Laplacian.
std::function<double(double)> radial_drift(const WarpFn& w);

struct HitProbabilities {
    double inner = 0.0;
    double outer = 0.0;
};

/// Scale-function hitting probabilities of {rho, R} from x0.
HitProbabilities exact_hitting(const WarpFn& w, double rho, double R, double x0);

/// Euler-Maruyama estimate of the same probabilities, with a Brownian-bridge
/// crossing test between steps. Results depend only on cfg, not on the
/// number of workers.
HitStats simulate_hitting(const WarpFn& w, double rho, double R, double x0, const DiffusionCfg& cfg);

enum class EscapeTrend { ToZero, ToPositive, Undecided };

std::string_view to_string(EscapeTrend trend) noexcept;

struct EscapeProbe {
    // (R, probability of reaching R before rho)
    std::vector<std::pair<double, double>> points;
    EscapeTrend trend = EscapeTrend::Undecided;
    double limit = std::numeric_limits<double>::quiet_NaN();
    DivergenceKind parabolicity = DivergenceKind::Inconclusive;
    // True when the trend and the integral verdict agree or either is undecided.
    bool consistent = true;
};

/// Escape probabilities for R = x0 * 2^k, their limiting trend, and the
/// parabolicity integral for comparison.
EscapeProbe escape_probe(const WarpFn& w, double rho, double x0, const ClassifierConfig& cfg = {});

}  // namespace revend
