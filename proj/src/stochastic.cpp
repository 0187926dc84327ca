#include "revend/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "revend/criteria.hpp"
#include "revend/errors.hpp"
#include "revend/parallel.hpp"
#include "revend/quadrature.hpp"

namespace revend {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::generate(Block counter, Key key) noexcept {
    std::uint32_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c0, hi0, lo0);
        mulhilo(kMul1, c2, hi1, lo1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

std::uint64_t PathStream::next_u64() noexcept {
    if (buffered_ == 0) {
        const Philox4x32::Block ctr{static_cast<std::uint32_t>(block_index_),
                                    static_cast<std::uint32_t>(block_index_ >> 32),
                                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        const auto out = Philox4x32::generate(ctr, key_);
        ++block_index_;
        buffer_[0] = static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
        buffer_[1] = static_cast<std::uint64_t>(out[2]) | (static_cast<std::uint64_t>(out[3]) << 32);
        buffered_ = 2;
    }
    return buffer_[2 - buffered_--];
}

double PathStream::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void DiffusionCfg::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("diffusion step must be positive");
    if (n_paths < 1) throw DomainError("n_paths must be at least 1");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    if (!(r_explode > 0.0) || !std::isfinite(r_explode)) throw DomainError("r_explode must be positive and finite");
}

std::function<double(double)> radial_drift(const WarpFn& w) {
    return [w](double r) { return w.dw(r) / w.w(r); };
}

namespace {

void check_triple(const WarpFn& w, double rho, double R, double x0) {
    if (!(rho >= 0.0) || !(rho < R) || !(x0 >= rho) || !(x0 <= R)) {
        throw DomainError("hitting problem needs 0 <= rho <= x0 <= R with rho < R");
    }
    if (R > w.s_max()) throw DomainError("outer radius lies beyond the warp's sampled range");
}

const quad::Tolerance kScaleTol{1e-13, 1e-12, 4000};

// exp(-40) is below the resolution of a 53-bit uniform draw.
constexpr double kNegligibleExponent = 40.0;

double scale_increment(const WarpFn& w, double a, double b) {
    return quad::integrate_best_effort([&w](double s) { return 1.0 / w.w(s); }, a, b, kScaleTol).value;
}

}  // namespace

HitProbabilities exact_hitting(const WarpFn& w, double rho, double R, double x0) {
    check_triple(w, rho, R, x0);
    if (!std::isfinite(R)) throw DomainError("exact_hitting needs a finite outer radius");
    const double below = scale_increment(w, rho, x0);
    const double above = scale_increment(w, x0, R);
    const double inner = above / (below + above);
    return {inner, 1.0 - inner};
}

HitStats simulate_hitting(const WarpFn& w, double rho, double R, double x0, const DiffusionCfg& cfg) {
    cfg.validate();
    const double outer = std::isfinite(R) ? R : cfg.r_explode;
    check_triple(w, rho, outer, x0);

    const auto n = static_cast<std::size_t>(cfg.n_paths);
    // 0 = inner, 1 = outer, 2 = undecided
    std::vector<std::uint8_t> outcome(n, 2);
    std::vector<double> exit_time(n, 0.0);

    const double dt = cfg.step;
    const double sd = std::sqrt(2.0 * dt);
    const auto max_steps = static_cast<std::uint64_t>(std::ceil(cfg.t_max / dt));

    parallel_for(n, worker_count(cfg.workers), [&](std::size_t i) {
        PathStream rng(cfg.seed, i);
        double x = x0;
        if (x <= rho) {
            outcome[i] = 0;
            return;
        }
        if (x >= outer) {
            outcome[i] = 1;
            return;
        }
        for (std::uint64_t k = 1; k <= max_steps; ++k) {
            const double b = w.dw(x) / w.w(x);
            const double xn = x + b * dt + sd * rng.normal();
            const double t = static_cast<double>(k) * dt;
            if (xn <= rho) {
                outcome[i] = 0;
                exit_time[i] = t;
                return;
            }
            if (xn >= outer) {
                outcome[i] = 1;
                exit_time[i] = t;
                return;
            }
            if (cfg.bridge_correction) {
                // Probability that the interpolating Brownian bridge touched a barrier.
                const double a_in = (x - rho) * (xn - rho) / dt;
                const double a_out = (outer - x) * (outer - xn) / dt;
                if (std::min(a_in, a_out) < kNegligibleExponent) {
                    const double p_in = std::exp(-a_in);
                    const double p_out = std::exp(-a_out);
                    const double u = rng.uniform();
                    if (u < p_in) {
                        outcome[i] = 0;
                        exit_time[i] = t;
                        return;
                    }
                    if (u < p_in + p_out) {
                        outcome[i] = 1;
                        exit_time[i] = t;
                        return;
                    }
                }
            }
            x = xn;
        }
    });

    HitStats stats;
    stats.n_paths = cfg.n_paths;
    double sum_t = 0.0;
    double sum_t2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        switch (outcome[i]) {
            case 0: ++stats.n_inner; break;
            case 1: ++stats.n_outer; break;
            default: ++stats.n_undecided; continue;
        }
        sum_t += exit_time[i];
        sum_t2 += exit_time[i] * exit_time[i];
    }
    const auto total = static_cast<double>(stats.n_paths);
    auto proportion = [total](std::uint64_t k) {
        const double p = static_cast<double>(k) / total;
        return Estimate{p, std::sqrt(p * (1.0 - p) / total)};
    };
    stats.p_hit_inner = proportion(stats.n_inner);
    stats.p_hit_outer = proportion(stats.n_outer);
    const auto decided = static_cast<double>(stats.n_inner + stats.n_outer);
    if (decided > 0) {
        const double mean = sum_t / decided;
        const double var = decided > 1 ? std::max(0.0, (sum_t2 - decided * mean * mean) / (decided - 1)) : 0.0;
        stats.mean_exit_time = {mean, std::sqrt(var / decided)};
    }
    return stats;
}

std::string_view to_string(EscapeTrend trend) noexcept {
    switch (trend) {
        case EscapeTrend::ToZero: return "to_zero";
        case EscapeTrend::ToPositive: return "to_positive";
        case EscapeTrend::Undecided: return "undecided";
    }
    return "undecided";
}

EscapeProbe escape_probe(const WarpFn& w, double rho, double x0, const ClassifierConfig& cfg) {
    cfg.validate();
    if (!(rho >= 0.0) || !(x0 > rho)) throw DomainError("escape_probe needs 0 <= rho < x0");
    if (2.0 * x0 > w.s_max()) throw DomainError("escape_probe needs room for at least one doubling of x0");

    EscapeProbe out;
    const double s0 = scale_increment(w, rho, x0);
    double total = s0;
    double prev_r = x0;
    std::vector<double> increments;
    for (int k = 1; k <= cfg.max_doublings; ++k) {
        const double r = x0 * std::ldexp(1.0, k);
        if (r > w.s_max()) break;
        const double inc = scale_increment(w, prev_r, r);
        increments.push_back(inc);
        total += inc;
        out.points.emplace_back(r, s0 / total);
        prev_r = r;
    }

    const auto n = increments.size();
    if (n >= 3) {
        auto log_ratio = [&](std::size_t i) {
            return increments[i - 1] > 0.0 ? std::log2(increments[i] / increments[i - 1])
                                           : std::numeric_limits<double>::infinity();
        };
        const double r1 = log_ratio(n - 1);
        const double r0 = log_ratio(n - 2);
        if (increments[n - 1] <= 1e-12 * total) {
            out.trend = EscapeTrend::ToPositive;
            out.limit = s0 / total;
        } else if (r1 > -cfg.delta && r0 > -cfg.delta) {
            out.trend = EscapeTrend::ToZero;
            out.limit = 0.0;
        } else if (r1 < -cfg.delta && r0 < -cfg.delta) {
            out.trend = EscapeTrend::ToPositive;
            const double ratio = std::exp2(r1);
            out.limit = s0 / (total + increments[n - 1] * ratio / (1.0 - ratio));
        }
    }

    out.parabolicity = parabolicity_test(w, cfg).kind;
    if (out.trend != EscapeTrend::Undecided && out.parabolicity != DivergenceKind::Inconclusive) {
        out.consistent = (out.trend == EscapeTrend::ToZero) == (out.parabolicity == DivergenceKind::Divergent);
    }
    return out;
}

}  // namespace revend
