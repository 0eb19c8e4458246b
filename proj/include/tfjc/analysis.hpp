// analysis.hpp: collapse/revival approximations, envelopes and revival
// period extraction from sampled P_e(t).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfjc/coherence.hpp"
#include "tfjc/errors.hpp"
#include "tfjc/model.hpp"
#include "tfjc/perturbation.hpp"

namespace tfjc {

/// Samples on the uniform grid t_i = t0 + i·dt.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double t_end() const { return values.empty() ? t0 : time(values.size() - 1); }
};

struct PeriodEstimate {
    double period = 0.0;
    double quantum = 0.0;
    std::string method = "envelope-argmax";
    double window_lo = 0.0;
    double window_hi = 0.0;
    /// |period − k·quantum| minimized over integer k.
    double quantization_residual = 0.0;
    /// Envelope maximum in the search window over the collapsed-plateau minimum.
    double contrast = 0.0;
};

inline constexpr double kRevivalContrast = 1.3;
inline constexpr double kSearchLo = 0.4;
inline constexpr double kSearchHi = 1.7;

struct CosSum {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Normalized sides of
///   Σ_m (|α|^{2m}/m!) cos(2g m^{l/2} t)
///     ≈ exp[|α|²cos(g|α|^{l−2}lt)]·cos[g|α|^l t + |α|²sin(g|α|^{l−2}lt)],
/// both multiplied by e^{−|α|²}.
inline CosSum approx_cos_sum(complex alpha, int l, double g, double t,
                             std::optional<std::size_t> n_max = std::nullopt) {
    if (std::abs(alpha) == 0.0) throw std::invalid_argument("approx_cos_sum: alpha must be nonzero");
    if (l < 1) throw std::invalid_argument("approx_cos_sum: l must be >= 1");
    const double x = std::norm(alpha);
    const double a = std::abs(alpha);
    const std::size_t nm = n_max.value_or(static_cast<std::size_t>(
        std::ceil(x + 12.0 * std::sqrt(x + 1.0) + 20.0)));
    CosSum r;
    for (std::size_t m = 0; m <= nm; ++m) {
        const double w = poisson_weight(m, alpha);
        r.lhs += w * std::cos(2.0 * g * std::pow(static_cast<double>(m), 0.5 * l) * t);
    }
    const double phi = g * std::pow(a, l - 2) * l * t;
    r.rhs = std::exp(x * (std::cos(phi) - 1.0)) * std::cos(g * std::pow(a, l) * t + x * std::sin(phi));
    return r;
}

struct ApproxPe {
    double value = 0.0;
    /// Set when Δ ≠ 0; the approximation assumes resonance.
    bool off_resonance = false;
};

/// ½ − ½·e^{−|α|²} Σ_m (|α|^{2m}/m!) cos(2g m^{l/2} t).
inline ApproxPe pe_collapse_revival_approx(double t, const ModelParams& p) {
    return {0.5 - 0.5 * approx_cos_sum(p.alpha(), p.l(), p.g(), t).lhs, p.delta() != 0.0};
}

/// Centered sliding maximum of |values − ½| over a window of the given width.
inline TimeSeries envelope(const TimeSeries& s, double window_width) {
    if (!(s.dt > 0.0)) throw std::invalid_argument("envelope: dt must be > 0");
    if (!(window_width >= 2.0 * s.dt))
        throw std::invalid_argument("envelope: window must span at least two samples");
    const auto half = static_cast<std::size_t>(std::floor(0.5 * window_width / s.dt + 1e-9));
    const std::size_t n = s.size();
    TimeSeries out{s.t0, s.dt, std::vector<double>(n)};
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(s.values[i] - 0.5);

    std::deque<std::size_t> q;  // indices with decreasing dev
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::min(n - 1, i + half);
        for (; next <= hi; ++next) {
            while (!q.empty() && dev[q.back()] <= dev[next]) q.pop_back();
            q.push_back(next);
        }
        const std::size_t lo = i >= half ? i - half : 0;
        while (q.front() < lo) q.pop_front();
        out.values[i] = dev[q.front()];
    }
    return out;
}

namespace detail {

inline std::size_t index_at_or_after(const TimeSeries& s, double t) {
    const double k = std::ceil((t - s.t0) / s.dt - 1e-9);
    return k <= 0.0 ? 0 : std::min(s.size(), static_cast<std::size_t>(k));
}

}  // namespace detail

/// First revival of a P_e-type series, searched in [0.4, 1.7]·prior.
///
/// The envelope (window = quantum) decides whether a revival exists: its
/// maximum in the search window must exceed kRevivalContrast times its
/// minimum over the collapsed plateau [quantum, 0.4·prior). The period is the
/// time of the largest excitation peak in the window, refined by a parabola
/// through the three samples around it.
inline PeriodEstimate extract_revival_period(const TimeSeries& s, double prior, double quantum) {
    if (!(prior > 0.0) || !(quantum > 0.0))
        throw std::invalid_argument("extract_revival_period: prior and quantum must be > 0");
    if (s.size() < 3) throw std::invalid_argument("extract_revival_period: series too short");
    PeriodEstimate est;
    est.quantum = quantum;
    est.window_lo = kSearchLo * prior;
    est.window_hi = kSearchHi * prior;
    if (s.t_end() < est.window_hi)
        throw std::invalid_argument("extract_revival_period: series ends before the search window");

    const auto env = envelope(s, std::max(quantum, 2.0 * s.dt));
    const std::size_t w0 = detail::index_at_or_after(s, est.window_lo);
    const std::size_t w1 = std::min(s.size() - 1, static_cast<std::size_t>(
                                                       std::floor((est.window_hi - s.t0) / s.dt + 1e-9)));

    std::size_t c0 = detail::index_at_or_after(s, quantum);
    std::size_t c1 = w0;
    if (c0 >= c1) c0 = 0;
    if (c0 >= c1) c1 = s.size();
    double emin = std::numeric_limits<double>::infinity();
    for (std::size_t i = c0; i < c1; ++i) emin = std::min(emin, env.values[i]);
    double emax = 0.0;
    for (std::size_t i = w0; i <= w1; ++i) emax = std::max(emax, env.values[i]);
    est.contrast = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    if (!(est.contrast > kRevivalContrast))
        throw NoRevivalError("no revival: envelope contrast " + std::to_string(est.contrast) +
                             " <= " + std::to_string(kRevivalContrast));

    std::size_t best = w0;
    for (std::size_t i = w0; i <= w1; ++i)
        if (s.values[i] > s.values[best]) best = i;
    double t_peak = s.time(best);
    if (best > 0 && best + 1 < s.size()) {
        const double ym = s.values[best - 1], y0 = s.values[best], yp = s.values[best + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (den < 0.0) t_peak += 0.5 * s.dt * (ym - yp) / den;
    }
    est.period = t_peak;
    est.quantization_residual = std::abs(t_peak - std::round(t_peak / quantum) * quantum);
    return est;
}

/// Prior T′₀(l) and quantum π/√D′(n̄) taken from the model.
inline PeriodEstimate extract_revival_period(const TimeSeries& s, const ModelParams& p,
                                             const ThermalParams& th) {
    const double quantum = rabi_quantum(p, th);
    if (s.dt > quantum / 20.0 * (1.0 + 1e-9))
        throw std::invalid_argument("extract_revival_period: dt must be <= quantum/20");
    return extract_revival_period(s, t0_prime_period(p, th), quantum);
}

/// Default grid spacing: a fortieth of the zero-temperature Rabi quantum.
inline double default_dt(const ModelParams& p) { return rabi_quantum(p, zero_temperature()) / 40.0; }

struct SampledPe {
    TimeSeries series;
    bool physical = true;
};

/// Perturbative P_e on [t0, t1] with spacing dt.
inline SampledPe sample_pe(const SeriesContext& ctx, const ThermalParams& th, double t0, double t1,
                           double dt) {
    if (!(dt > 0.0) || t1 < t0) throw std::invalid_argument("sample_pe: invalid grid");
    const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
    SampledPe out{{t0, dt, std::vector<double>(n)}, true};
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = pe_thermal(ctx, th, out.series.time(i));
        out.series.values[i] = r.value;
        out.physical = out.physical && r.physical;
    }
    return out;
}

/// C_rel.ent. of the projected perturbative atom state.
struct CoherenceSample {
    double coherence = 0.0;
    AtomState state;
};

inline CoherenceSample coherence_at(const SeriesContext& ctx, const ThermalParams& th, double t) {
    const auto raw = atom_state(ctx, th, t);
    const auto proj = physicality_project(raw);
    return {rel_entropy_coherence(proj), proj};
}

struct SweepRow {
    double inv_beta = 0.0;
    double theta = 0.0;
    std::optional<double> period;
    double t0_prime = 0.0;
    double quantum = 0.0;
    /// False when any sample left [−ε, 1+ε].
    bool stable = true;
    double contrast = 0.0;
    std::string error;
};

/// Extracted revival period against the prior T′₀(l) for each temperature.
inline std::vector<SweepRow> period_vs_temperature_sweep(const ModelParams& p,
                                                         const std::vector<double>& inv_beta_grid,
                                                         const TruncationPolicy& trunc,
                                                         std::optional<double> dt = std::nullopt) {
    const SeriesContext ctx(p, trunc);
    const double step = dt.value_or(default_dt(p));
    std::vector<SweepRow> rows;
    rows.reserve(inv_beta_grid.size());
    for (const double ib : inv_beta_grid) {
        const auto th = thermal_from_inv_beta(ib, p.omega(), p.omega0());
        SweepRow row;
        row.inv_beta = ib;
        row.theta = th.theta;
        row.t0_prime = t0_prime_period(p, th);
        row.quantum = rabi_quantum(p, th);
        const auto sp = sample_pe(ctx, th, 0.0, 1.8 * row.t0_prime, step);
        row.stable = sp.physical;
        try {
            const auto est = extract_revival_period(sp.series, row.t0_prime, row.quantum);
            row.period = est.period;
            row.contrast = est.contrast;
        } catch (const NoRevivalError& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace tfjc
