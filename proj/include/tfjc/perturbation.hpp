// perturbation.hpp: low-temperature (θ) expansion of the excitation
// probability and the atomic coherence through second order.
//
// Weight convention: every series in this file is summed with normalized
// Poisson weights w_n = e^{−|α|²}|α|^{2n}/n!, evaluated in the log domain.
// The values returned by series_S are therefore e^{−|α|²}·S_j(k) in the
// notation of the closed forms; tilde_S already carries its e^{−|α|²} factor
// there, so it is returned unchanged.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tfjc/coherence.hpp"
#include "tfjc/model.hpp"

namespace tfjc {

/// Series truncation. Sums run over n = 0..n_max; a warning is raised when
/// the Poisson mass beyond n_max exceeds tail_tol.
struct TruncationPolicy {
    std::size_t n_max = 250;
    double tail_tol = 1e-10;
    bool adaptive = false;

    static TruncationPolicy fixed(std::size_t n_max, double tail_tol = 1e-10) {
        if (n_max < 1) throw std::invalid_argument("TruncationPolicy: n_max must be >= 1");
        return {n_max, tail_tol, false};
    }
    static TruncationPolicy adaptive_for(const ModelParams& p, double tail_tol = 1e-10);
};

/// ⌈|α|² + 12√(|α|²+1) + l + 10⌉.
inline std::size_t adaptive_n_max(const ModelParams& p) {
    const double x = p.alpha_sq();
    return static_cast<std::size_t>(std::ceil(x + 12.0 * std::sqrt(x + 1.0) + p.l() + 10.0));
}

inline TruncationPolicy TruncationPolicy::adaptive_for(const ModelParams& p, double tail_tol) {
    return {adaptive_n_max(p), tail_tol, true};
}

/// ln(e^{−|α|²}|α|^{2n}/n!). Returns −inf where the weight is exactly zero
/// (α = 0, n > 0).
inline double poisson_log_weight(std::size_t n, complex alpha) {
    const double x = std::norm(alpha);
    if (x == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double nd = static_cast<double>(n);
    return nd * std::log(x) - std::lgamma(nd + 1.0) - x;
}

inline double poisson_weight(std::size_t n, complex alpha) {
    return std::exp(poisson_log_weight(n, alpha));
}

/// Σ_{n > n_max} e^{−|α|²}|α|^{2n}/n!.
inline double poisson_tail_mass(std::size_t n_max, complex alpha) {
    const double x = std::norm(alpha);
    if (x == 0.0) return 0.0;
    if (static_cast<double>(n_max) < x) {
        double head = 0.0;
        for (std::size_t n = 0; n <= n_max; ++n) head += poisson_weight(n, alpha);
        return std::max(0.0, 1.0 - head);
    }
    double tail = 0.0;
    for (std::size_t n = n_max + 1;; ++n) {
        const double w = poisson_weight(n, alpha);
        tail += w;
        if (w <= 1e-300 || w < 1e-18 * tail) break;
    }
    return tail;
}

/// Immutable per-(model, truncation) data: Poisson weights and eigenvalue
/// tables. Safe to share across threads once constructed.
class SeriesContext {
public:
    SeriesContext(const ModelParams& params, const TruncationPolicy& trunc)
        : params_(params),
          trunc_(trunc),
          table_(params, trunc.n_max + static_cast<std::size_t>(params.l()) + 3) {
        if (trunc.n_max < 1) throw std::invalid_argument("SeriesContext: n_max must be >= 1");
        weights_.resize(trunc.n_max + 3);
        for (std::size_t n = 0; n < weights_.size(); ++n)
            weights_[n] = poisson_weight(n, params.alpha());
        tail_mass_ = poisson_tail_mass(trunc.n_max, params.alpha());

        const complex ac = std::conj(params.alpha());
        conj_pow_[0] = 1.0;
        for (int p = 1; p < static_cast<int>(conj_pow_.size()); ++p)
            conj_pow_[p] = conj_pow_[p - 1] * ac;
    }

    const ModelParams& params() const { return params_; }
    const TruncationPolicy& truncation() const { return trunc_; }
    const EigenvalueTable& table() const { return table_; }
    std::size_t n_max() const { return trunc_.n_max; }
    /// Normalized Poisson weight w_n; zero for n < 0.
    double weight(long n) const {
        return n < 0 ? 0.0 : weights_.at(static_cast<std::size_t>(n));
    }
    /// (α*)^p for 0 ≤ p ≤ l+2.
    complex conj_alpha_pow(int p) const { return conj_pow_.at(static_cast<std::size_t>(p)); }
    double tail_mass() const { return tail_mass_; }
    bool truncation_warning() const { return tail_mass_ > trunc_.tail_tol; }

private:
    ModelParams params_;
    TruncationPolicy trunc_;
    EigenvalueTable table_;
    std::vector<double> weights_;
    std::array<complex, 16> conj_pow_{};
    double tail_mass_ = 0.0;
};

/// A(n), A′(n), B(n), B′(n) for every tabulated n at one time t.
class TimeAmplitudes {
public:
    TimeAmplitudes(const SeriesContext& ctx, double t) : t_(t) {
        const auto& tab = ctx.table();
        const std::size_t size = tab.n_max() + 1;
        amps_.reserve(size);
        for (std::size_t n = 0; n < size; ++n) amps_.push_back(block_amplitudes(tab, n, t));
    }

    double t() const { return t_; }
    const BlockAmplitudes& operator[](long n) const { return amps_.at(static_cast<std::size_t>(n)); }

private:
    double t_;
    std::vector<BlockAmplitudes> amps_;
};

/// e^{−|α|²}S₁(k) and e^{−|α|²}S₂(k) for k = 0, 1, 2.
struct SeriesSums {
    std::array<double, 3> s1{};
    std::array<double, 3> s2{};
};

inline SeriesSums series_sums(const SeriesContext& ctx, const TimeAmplitudes& amp) {
    SeriesSums out;
    const long n_max = static_cast<long>(ctx.n_max());
    for (int k = 0; k < 3; ++k) {
        double s1 = 0.0;
        double s2 = 0.0;
        for (long n = 0; n <= n_max; ++n) {
            const double w = ctx.weight(n);
            const auto& a = amp[n + k];
            // cos² + (Δ/2)² sin²/D = |A|²
            s1 += w * std::norm(a.A);
            s2 += w * a.B * a.B;
        }
        out.s1[static_cast<std::size_t>(k)] = s1;
        out.s2[static_cast<std::size_t>(k)] = s2;
    }
    return out;
}

/// e^{−|α|²}S_j(k) at time t, j ∈ {1, 2}, k ∈ {0, 1, 2}.
inline double series_S(const SeriesContext& ctx, int j, int k, double t) {
    if (j < 1 || j > 2 || k < 0 || k > 2) throw std::invalid_argument("series_S: index out of range");
    const auto sums = series_sums(ctx, TimeAmplitudes(ctx, t));
    return j == 1 ? sums.s1[static_cast<std::size_t>(k)] : sums.s2[static_cast<std::size_t>(k)];
}

/// Zero-temperature excitation probability
/// g²|α|^{2l}e^{−|α|²} Σ_m (|α|^{2m}/m!) sin²(√D_m t)/D_m. Not clamped.
inline double pe_zero_temperature(const SeriesContext& ctx, double t) {
    const auto& p = ctx.params();
    const auto& tab = ctx.table();
    double sum = 0.0;
    for (std::size_t m = 0; m <= ctx.n_max(); ++m) {
        const auto cs = detail::cos_sinc(tab.D(m), t, tab.D_is_zero(m));
        sum += ctx.weight(static_cast<long>(m)) * cs.s * cs.s;
    }
    return p.g() * p.g() * std::pow(p.alpha_sq(), p.l()) * sum;
}

/// P^{(n)}_{e,1} (atom initially excited) and P^{(n)}_{e,2} (initially in the
/// ground state) for n = 0, 1, 2.
struct PeOrders {
    std::array<double, 3> p1{};
    std::array<double, 3> p2{};
};

inline PeOrders pe_orders_from_sums(const ModelParams& p, const SeriesSums& s) {
    const double x = p.alpha_sq();
    const double l = p.l();
    const double g2 = p.g() * p.g();
    const double xl = std::pow(x, p.l());
    const double xl1 = std::pow(x, p.l() - 1);
    PeOrders o;
    o.p1[0] = s.s1[0];
    o.p2[0] = g2 * xl * s.s2[0];
    o.p1[1] = -2.0 * x * (s.s1[0] - s.s1[1]);
    o.p2[1] = 2.0 * g2 * xl * ((l - x) * s.s2[0] + x * s.s2[1]);
    o.p1[2] = 2.0 * (-(1.0 + x - 2.0 * x * x) * s.s1[0] + (1.0 - 4.0 * x * x) * s.s1[1] +
                     x * (1.0 + 2.0 * x) * s.s1[2]);
    o.p2[2] = 2.0 * g2 * (1.0 + 2.0 * x) * xl1 *
              ((l * l - (1.0 + 2.0 * l) * x + x * x) * s.s2[0] -
               x * (-1.0 - 2.0 * l + 2.0 * x) * s.s2[1] + x * x * s.s2[2]);
    return o;
}

inline PeOrders pe_order_terms(const SeriesContext& ctx, double t) {
    return pe_orders_from_sums(ctx.params(), series_sums(ctx, TimeAmplitudes(ctx, t)));
}

/// Perturbative P_e(Θ, θ; t) with its per-order contributions θⁿ/n!·P^{(n)}.
struct PeThermal {
    double value = 0.0;
    std::array<double, 3> contrib{};
    bool physical = true;
};

inline constexpr double kPhysicalityEps = 1e-6;

inline PeThermal combine_pe(const PeOrders& o, const ThermalParams& th) {
    PeThermal r;
    const double s2 = th.sin2_Theta();
    const double c2 = th.cos2_Theta();
    const double scale[3] = {1.0, th.theta, 0.5 * th.theta * th.theta};
    for (std::size_t n = 0; n < 3; ++n) {
        r.contrib[n] = scale[n] * (s2 * o.p1[n] + c2 * o.p2[n]);
    }
    r.value = r.contrib[0] + r.contrib[1] + r.contrib[2];
    r.physical = r.value >= -kPhysicalityEps && r.value <= 1.0 + kPhysicalityEps;
    return r;
}

inline PeThermal pe_thermal(const SeriesContext& ctx, const ThermalParams& th, double t) {
    return combine_pe(pe_order_terms(ctx, t), th);
}

/// The twelve S̃_{j,k}, indexed [j−1][k].
using TildeSeries = std::array<std::array<complex, 6>, 2>;

inline TildeSeries tilde_series(const SeriesContext& ctx, const TimeAmplitudes& amp) {
    const auto& p = ctx.params();
    const long l = p.l();
    const long N = static_cast<long>(ctx.n_max());
    const complex alpha = p.alpha();
    const complex mig(0.0, -p.g());  // −ig
    const complex pig(0.0, p.g());   // +ig

    auto cp = [&](long e) { return ctx.conj_alpha_pow(static_cast<int>(e)); };
    // A(m)B′(m) and B(m)A′(m)
    auto ab1 = [&](long m) { return amp[m].A * amp[m].B_prime; };
    auto ab2 = [&](long m) { return amp[m].B * amp[m].A_prime; };

    std::array<complex, 6> s1{};
    std::array<complex, 6> s2{};
    for (long n = 0; n <= N; ++n) {
        const double w = ctx.weight(n);
        const double nd = static_cast<double>(n);
        const double ld = static_cast<double>(l);

        s1[0] += w * ab1(n + l);
        s1[1] += (nd + ld) * w * ab1(n + l);
        s1[2] += w * ab1(n + l + 1);
        s2[0] += w * ab2(n);
        s2[1] += (nd + ld) * w * ab2(n);
        s2[2] += w * ab2(n + 1);
        s2[4] += w * ab2(n + 2);
        s2[5] += (nd + ld + 1.0) * w * ab2(n + 1);

        // S̃_{1,3}, S̃_{2,3}: guard u(n+2−l), weight index n+2−l, factor α*^{l−2}.
        if (l >= 2) {
            const long i = n + 2 - l;
            if (i >= 0) {
                const double c = (nd + 1.0) * (nd + 2.0) * ctx.weight(i);
                s1[3] += c * cp(l - 2) * ab1(n + 2);
                s2[3] += c * cp(l - 2) * ab2(i);
            }
        } else {
            // l = 1: (n+1)(n+2)w_{n+1}/α* = (n+2)·α·w_n.
            const complex c = (nd + 2.0) * w * alpha;
            s1[3] += c * ab1(n + 2);
            s2[3] += c * ab2(n + 1);
        }
        // S̃_{1,4}: u(n−2−l), weight index n−l−2.
        if (n - l - 2 >= 0) s1[4] += ctx.weight(n - l - 2) * ab1(n);
        // S̃_{1,5}: u(n−l), weight index n−l.
        if (n - l >= 0) s1[5] += (nd + 1.0) * ctx.weight(n - l) * ab1(n + 1);
    }

    TildeSeries out;
    out[0][0] = mig * cp(l) * s1[0];
    out[0][1] = mig * cp(l - 1) * s1[1];
    out[0][2] = mig * cp(l + 1) * s1[2];
    out[0][3] = mig * s1[3];
    out[0][4] = mig * cp(l + 2) * s1[4];
    out[0][5] = mig * cp(l) * s1[5];
    out[1][0] = pig * cp(l) * s2[0];
    out[1][1] = pig * cp(l - 1) * s2[1];
    out[1][2] = pig * cp(l + 1) * s2[2];
    out[1][3] = pig * s2[3];
    out[1][4] = pig * cp(l + 2) * s2[4];
    out[1][5] = pig * cp(l) * s2[5];
    return out;
}

/// S̃_{j,k}(t), j ∈ {1, 2}, k ∈ {0..5}.
inline complex tilde_S(const SeriesContext& ctx, int j, int k, double t) {
    if (j < 1 || j > 2 || k < 0 || k > 5) throw std::invalid_argument("tilde_S: index out of range");
    return tilde_series(ctx, TimeAmplitudes(ctx, t))[static_cast<std::size_t>(j - 1)]
                                                     [static_cast<std::size_t>(k)];
}

/// ρ^{(n)}_{01,j} for n = 0, 1, 2 and j = 1, 2.
struct Rho01Orders {
    std::array<complex, 3> r1{};
    std::array<complex, 3> r2{};
};

inline Rho01Orders rho01_orders_from_series(const ModelParams& p, const TildeSeries& s) {
    const double x = p.alpha_sq();
    const complex a = p.alpha();
    const complex ac = std::conj(a);
    auto orders = [&](const std::array<complex, 6>& S) {
        std::array<complex, 3> r;
        r[0] = S[0];
        r[1] = -2.0 * x * S[0] + ac * S[1] + a * S[2];
        r[2] = 2.0 * (-1.0 - x + 2.0 * x * x) * S[0] - (1.0 + 4.0 * x) * ac * S[1] -
               (1.0 + 4.0 * x) * a * S[2] + ac * ac * S[3] + a * a * S[4] +
               2.0 * (1.0 + x) * S[5];
        return r;
    };
    return {orders(s[0]), orders(s[1])};
}

inline Rho01Orders rho01_order_terms(const SeriesContext& ctx, double t) {
    return rho01_orders_from_series(ctx.params(), tilde_series(ctx, TimeAmplitudes(ctx, t)));
}

inline complex combine_rho01(const Rho01Orders& o, const ThermalParams& th) {
    const double s2 = th.sin2_Theta();
    const double c2 = th.cos2_Theta();
    const double scale[3] = {1.0, th.theta, 0.5 * th.theta * th.theta};
    complex sum{};
    for (std::size_t n = 0; n < 3; ++n) sum += scale[n] * (s2 * o.r1[n] + c2 * o.r2[n]);
    return sum;
}

/// Perturbative ρ₀₁(Θ, θ; t) = Σ_{n≤2} θⁿ/n!·[sin²Θ ρ^{(n)}_{01,1} + cos²Θ ρ^{(n)}_{01,2}].
inline complex rho01_thermal(const SeriesContext& ctx, const ThermalParams& th, double t) {
    return combine_rho01(rho01_order_terms(ctx, t), th);
}

/// Both perturbative series at one time point, sharing the amplitude table.
struct PerturbativeSample {
    PeThermal pe;
    complex rho01{};
};

inline PerturbativeSample perturbative_sample(const SeriesContext& ctx, const ThermalParams& th,
                                              double t) {
    const TimeAmplitudes amp(ctx, t);
    PerturbativeSample s;
    s.pe = combine_pe(pe_orders_from_sums(ctx.params(), series_sums(ctx, amp)), th);
    s.rho01 = combine_rho01(rho01_orders_from_series(ctx.params(), tilde_series(ctx, amp)), th);
    return s;
}

/// Unprojected atomic state from the perturbative series.
inline AtomState atom_state(const SeriesContext& ctx, const ThermalParams& th, double t) {
    const auto s = perturbative_sample(ctx, th, t);
    auto st = AtomState::from(s.pe.value, s.rho01);
    st.physical = st.physical && s.pe.physical;
    return st;
}

}  // namespace tfjc
