// model.hpp: physical parameters, eigenvalue tables, block amplitudes and
// closed-form period formulas of the l-photon Jaynes–Cummings model.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace tfjc {

using complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// l·ω − ω₀.
inline double derived_detuning(double omega0, double omega, int l) {
    return static_cast<double>(l) * omega - omega0;
}

/// Physical constants of the rotating-wave l-photon JCM (ħ = 1).
///
/// The detuning is never stored; it is recomputed from (ω₀, ω, l) on demand.
/// g = 0 is accepted as a degenerate (uncoupled) model.
class ModelParams {
public:
    ModelParams(int l, double g, double omega0, double omega, complex alpha)
        : l_(l), g_(g), omega0_(omega0), omega_(omega), alpha_(alpha) {
        if (l < 1) throw std::invalid_argument("ModelParams: l must be >= 1");
        if (!(g >= 0.0) || !std::isfinite(g))
            throw std::invalid_argument("ModelParams: g must be finite and >= 0");
        if (!(omega0 > 0.0) || !std::isfinite(omega0))
            throw std::invalid_argument("ModelParams: omega0 must be > 0");
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw std::invalid_argument("ModelParams: omega must be > 0");
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
            throw std::invalid_argument("ModelParams: alpha must be finite");
    }

    int l() const { return l_; }
    double g() const { return g_; }
    double omega0() const { return omega0_; }
    double omega() const { return omega_; }
    complex alpha() const { return alpha_; }
    double abs_alpha() const { return std::abs(alpha_); }
    /// |α|², the coherent-state mean photon number.
    double alpha_sq() const { return std::norm(alpha_); }
    double delta() const { return derived_detuning(omega0_, omega_, l_); }

    ModelParams with_g(double g) const { return {l_, g, omega0_, omega_, alpha_}; }
    ModelParams with_alpha(complex a) const { return {l_, g_, omega0_, omega_, a}; }

private:
    int l_;
    double g_;
    double omega0_;
    double omega_;
    complex alpha_;
};

/// Inverse temperature with the derived boson (θ) and fermion (Θ) Bogoliubov
/// angles. beta = +inf is zero temperature.
struct ThermalParams {
    double beta = kInf;
    double theta = 0.0;
    double cosh_theta = 1.0;
    double sinh_theta = 0.0;
    double cos_Theta = 1.0;
    double sin_Theta = 0.0;

    double inv_beta() const { return std::isinf(beta) ? 0.0 : 1.0 / beta; }
    bool zero_temperature() const { return std::isinf(beta); }
    double sin2_Theta() const { return sin_Theta * sin_Theta; }
    double cos2_Theta() const { return cos_Theta * cos_Theta; }
};

inline ThermalParams zero_temperature() { return {}; }

/// Bogoliubov angles for inverse temperature beta (k_B = 1):
///   cosh θ = [1 − e^{−βω}]^{−1/2},  sinh θ = [e^{βω} − 1]^{−1/2},
///   cos Θ  = [1 + e^{−βω₀}]^{−1/2}, sin Θ  = e^{−βω₀/2}[1 + e^{−βω₀}]^{−1/2}.
inline ThermalParams bogoliubov_angles(double beta, double omega, double omega0) {
    if (std::isnan(beta) || beta <= 0.0)
        throw std::invalid_argument("bogoliubov_angles: beta must be > 0 (or +inf)");
    if (!(omega > 0.0) || !(omega0 > 0.0))
        throw std::invalid_argument("bogoliubov_angles: frequencies must be > 0");
    ThermalParams th;
    th.beta = beta;
    if (std::isinf(beta)) return th;

    th.sinh_theta = 1.0 / std::sqrt(std::expm1(beta * omega));
    th.cosh_theta = 1.0 / std::sqrt(-std::expm1(-beta * omega));
    th.theta = std::asinh(th.sinh_theta);

    const double e = std::exp(-beta * omega0);
    th.cos_Theta = 1.0 / std::sqrt(1.0 + e);
    th.sin_Theta = std::exp(-0.5 * beta * omega0) / std::sqrt(1.0 + e);
    return th;
}

/// Thermal parameters from 1/β; 0 maps to zero temperature.
inline ThermalParams thermal_from_inv_beta(double inv_beta, double omega, double omega0) {
    if (inv_beta < 0.0 || std::isnan(inv_beta))
        throw std::invalid_argument("temperature 1/beta must be >= 0");
    return bogoliubov_angles(inv_beta == 0.0 ? kInf : 1.0 / inv_beta, omega, omega0);
}

/// Inverse of bogoliubov_angles in θ: the β at which the boson angle equals theta.
inline ThermalParams thermal_from_theta(double theta, double omega, double omega0) {
    if (theta < 0.0 || std::isnan(theta))
        throw std::invalid_argument("thermal_from_theta: theta must be >= 0");
    if (theta == 0.0) return zero_temperature();
    const double s = std::sinh(theta);
    const double beta = std::log1p(1.0 / (s * s)) / omega;
    return bogoliubov_angles(beta, omega, omega0);
}

namespace detail {

// Pairwise (tree) product of factors[lo, hi).
inline double pairwise_product(std::span<const double> f) {
    if (f.empty()) return 1.0;
    if (f.size() == 1) return f[0];
    const auto mid = f.size() / 2;
    return pairwise_product(f.first(mid)) * pairwise_product(f.subspan(mid));
}

// ∏_{k=1}^{l} (m + shift + k). For m ≤ 1e6 and l ≤ 8 the product stays below
// ~1e49, far from double overflow.
inline double rising_product(double m, int l, double shift) {
    double buf[16];
    std::vector<double> heap;
    double* f = buf;
    if (l > 16) {
        heap.resize(static_cast<std::size_t>(l));
        f = heap.data();
    }
    for (int k = 1; k <= l; ++k) f[k - 1] = m + shift + k;
    return pairwise_product(std::span<const double>(f, static_cast<std::size_t>(l)));
}

}  // namespace detail

/// D_m = (Δ/2)² + g²∏_{k=1}^{l}(m+k): eigenvalue of D on |m⟩.
inline double eigen_D(const ModelParams& p, std::size_t m) {
    const double h = 0.5 * p.delta();
    return h * h + p.g() * p.g() * detail::rising_product(static_cast<double>(m), p.l(), 0.0);
}

/// D′_n = (Δ/2)² + g²∏_{k=1}^{l}(n−k+1) for n ≥ l, and (Δ/2)² below.
inline double eigen_Dprime(const ModelParams& p, std::size_t n) {
    const double h = 0.5 * p.delta();
    if (n < static_cast<std::size_t>(p.l())) return h * h;
    return h * h +
           p.g() * p.g() * detail::rising_product(static_cast<double>(n), p.l(), -p.l());
}

/// Memoized D_m and D′_n for 0..n_max. Built once, read-only afterwards.
class EigenvalueTable {
public:
    EigenvalueTable(const ModelParams& params, std::size_t n_max) : params_(params) {
        d_.reserve(n_max + 1);
        dp_.reserve(n_max + 1);
        for (std::size_t i = 0; i <= n_max; ++i) {
            d_.push_back(eigen_D(params_, i));
            dp_.push_back(eigen_Dprime(params_, i));
        }
    }

    const ModelParams& params() const { return params_; }
    std::size_t n_max() const { return d_.size() - 1; }
    double D(std::size_t m) const { return d_.at(m); }
    double Dprime(std::size_t n) const { return dp_.at(n); }
    std::span<const double> D_values() const { return d_; }
    std::span<const double> Dprime_values() const { return dp_; }

    /// D′_n vanishes only when Δ = 0 and n ≤ l−1 (or in the uncoupled g = 0,
    /// Δ = 0 model); detected structurally, never by comparing to a tolerance.
    bool Dprime_is_zero(std::size_t n) const {
        return params_.delta() == 0.0 && (n < static_cast<std::size_t>(params_.l()) || params_.g() == 0.0);
    }
    bool D_is_zero(std::size_t) const { return params_.delta() == 0.0 && params_.g() == 0.0; }

private:
    ModelParams params_;
    std::vector<double> d_;
    std::vector<double> dp_;
};

/// Propagator amplitudes for one photon-number index n at time t.
///   A(n) = cos(√D_n t) − i(Δ/2) sin(√D_n t)/√D_n,  B(n) = sin(√D_n t)/√D_n,
/// primed versions use D′_n.
struct BlockAmplitudes {
    complex A;
    complex A_prime;
    double B;
    double B_prime;
};

namespace detail {

struct CosSinc {
    double c;  // cos(√D t)
    double s;  // sin(√D t)/√D
};

inline CosSinc cos_sinc(double D, double t, bool is_zero) {
    if (is_zero) return {1.0, t};
    const double w = std::sqrt(D);
    return {std::cos(w * t), std::sin(w * t) / w};
}

}  // namespace detail

inline BlockAmplitudes block_amplitudes(const EigenvalueTable& tab, std::size_t n, double t) {
    const double h = 0.5 * tab.params().delta();
    const auto u = detail::cos_sinc(tab.D(n), t, tab.D_is_zero(n));
    const auto v = detail::cos_sinc(tab.Dprime(n), t, tab.Dprime_is_zero(n));
    return {complex(u.c, -h * u.s), complex(v.c, -h * v.s), u.s, v.s};
}

inline BlockAmplitudes block_amplitudes(std::size_t n, double t, const ModelParams& params) {
    return block_amplitudes(EigenvalueTable(params, n), n, t);
}

/// Rabi period of the single-photon model, π/(g|α|).
inline double tau1(const ModelParams& p) {
    if (p.abs_alpha() == 0.0) throw std::invalid_argument("tau1: alpha must be nonzero");
    if (!(p.g() > 0.0)) throw std::invalid_argument("tau1: g must be > 0");
    return std::numbers::pi / (p.g() * p.abs_alpha());
}

/// Zero-temperature collapse/revival period 2π/(g|α|^{l−2}l).
inline double t0_period(const ModelParams& p) {
    if (!(p.g() > 0.0)) throw std::invalid_argument("t0_period: g must be > 0");
    if (p.abs_alpha() == 0.0 && p.l() != 2)
        throw std::invalid_argument("t0_period: alpha must be nonzero for l != 2");
    return 2.0 * std::numbers::pi / (p.g() * std::pow(p.abs_alpha(), p.l() - 2) * p.l());
}

/// Second-order thermal estimate of the mean photon number,
/// |α|²[1 + 2θ + 2θ²] + θ².
inline double thermal_photon_estimate(const ModelParams& p, const ThermalParams& th) {
    const double q = th.theta;
    return p.alpha_sq() * (1.0 + 2.0 * q + 2.0 * q * q) + q * q;
}

/// Thermally corrected revival period (2π/(gl))·{|α|²[1+2θ+2θ²] + θ²}^{1−l/2}.
inline double t0_prime_period(const ModelParams& p, const ThermalParams& th) {
    if (p.l() == 2) return std::numbers::pi / p.g();
    return 2.0 * std::numbers::pi / (p.g() * p.l()) *
           std::pow(thermal_photon_estimate(p, th), 1.0 - 0.5 * p.l());
}

/// Revival time from the constructive-interference condition between photon
/// numbers m and m−1: π/(g[m^{l/2} − (m−1)^{l/2}]).
inline double interference_period(const ModelParams& p, long m) {
    if (m < 1) throw std::invalid_argument("interference_period: m must be >= 1");
    if (p.l() == 2) return std::numbers::pi / p.g();
    const double hl = 0.5 * p.l();
    const double md = static_cast<double>(m);
    return std::numbers::pi / (p.g() * (std::pow(md, hl) - std::pow(md - 1.0, hl)));
}

/// Fast-oscillation period of P_e, π/√D′(n) at n = max(n̄, l), with n̄ the
/// thermal photon estimate. For l = 1, Δ = 0, |α| ≥ 1 and zero temperature
/// this is exactly tau1.
inline double rabi_quantum(const ModelParams& p, const ThermalParams& th) {
    const double nbar = std::max(thermal_photon_estimate(p, th), static_cast<double>(p.l()));
    const double h = 0.5 * p.delta();
    const double d = h * h + p.g() * p.g() * detail::rising_product(nbar, p.l(), -p.l());
    if (!(d > 0.0)) throw std::invalid_argument("rabi_quantum: vanishing Rabi frequency");
    return std::numbers::pi / std::sqrt(d);
}

}  // namespace tfjc
