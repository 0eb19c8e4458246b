// coherence.hpp: 2×2 atomic density matrix and its relative entropy of
// coherence in the energy basis {|e⟩, |g⟩}.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace tfjc {

/// Atomic state ρ = [[ρ₀₀, ρ₀₁], [ρ₀₁*, 1 − ρ₀₀]] with ρ₀₀ the excited-state
/// occupation. The raw_* fields keep the values before physicality_project.
struct AtomState {
    double rho00 = 0.0;
    std::complex<double> rho01{};
    bool physical = true;
    bool projection_applied = false;
    double raw_rho00 = 0.0;
    std::complex<double> raw_rho01{};

    static AtomState from(double rho00, std::complex<double> rho01) {
        AtomState s;
        s.rho00 = s.raw_rho00 = rho00;
        s.rho01 = s.raw_rho01 = rho01;
        s.physical = is_physical(rho00, rho01);
        return s;
    }

    static bool is_physical(double rho00, std::complex<double> rho01, double tol = 0.0) {
        return rho00 >= -tol && rho00 <= 1.0 + tol &&
               std::norm(rho01) <= rho00 * (1.0 - rho00) + tol;
    }
};

/// Clamp ρ₀₀ into [0, 1] and shrink ρ₀₁ radially onto the positivity boundary
/// |ρ₀₁|² ≤ ρ₀₀(1 − ρ₀₀). The phase of ρ₀₁ is kept.
inline AtomState physicality_project(const AtomState& in) {
    constexpr double kChangeTol = 1e-12;
    AtomState out = in;
    out.rho00 = std::clamp(in.rho00, 0.0, 1.0);
    const double bound = std::sqrt(out.rho00 * (1.0 - out.rho00));
    const double mag = std::abs(in.rho01);
    if (mag > bound) out.rho01 = (mag > 0.0) ? in.rho01 * (bound / mag) : std::complex<double>{};
    out.projection_applied = std::abs(out.rho00 - in.rho00) > kChangeTol ||
                             std::abs(out.rho01 - in.rho01) > kChangeTol;
    out.physical = true;
    return out;
}

struct QubitEigenvalues {
    double plus;
    double minus;
};

/// λ± = ½[1 ± √(1 + 4|ρ₀₁|² − 4ρ₀₀(1−ρ₀₀))].
inline QubitEigenvalues atom_eigenvalues(const AtomState& s) {
    const double disc = 1.0 + 4.0 * std::norm(s.rho01) - 4.0 * s.rho00 * (1.0 - s.rho00);
    const double r = std::sqrt(std::max(disc, 0.0));
    return {0.5 * (1.0 + r), 0.5 * (1.0 - r)};
}

namespace detail {
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}  // namespace detail

/// C = S(ρ_diag) − S(ρ), natural log, 0·ln 0 = 0. Input must be physical.
inline double rel_entropy_coherence(const AtomState& s) {
    if (!AtomState::is_physical(s.rho00, s.rho01, 1e-14))
        throw std::invalid_argument("rel_entropy_coherence: non-physical state; project first");
    const double p = std::clamp(s.rho00, 0.0, 1.0);
    const auto [lp, lm] = atom_eigenvalues(s);
    const double c = -detail::xlogx(p) - detail::xlogx(1.0 - p) + detail::xlogx(lp) +
                     detail::xlogx(lm);
    return std::clamp(c, 0.0, std::log(2.0));
}

/// Trace distance ½‖ρ − σ‖₁ between two atomic states.
inline double trace_distance(const AtomState& a, const AtomState& b) {
    const double d = a.rho00 - b.rho00;
    return std::sqrt(d * d + std::norm(a.rho01 - b.rho01));
}

}  // namespace tfjc
