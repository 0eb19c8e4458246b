// oracle.hpp: exact simulation in the doubled space atom ⊗ tilde-atom ⊗
// cavity ⊗ tilde-cavity on a truncated Fock basis.
//
// Fermion index f = 1 is the excited level |e⟩, f = 0 the ground level |g⟩.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "tfjc/coherence.hpp"
#include "tfjc/errors.hpp"
#include "tfjc/model.hpp"

namespace tfjc {

/// Single-mode cutoff: states 0..n_fock−1.
struct FockTruncation {
    std::size_t n_fock = 40;
    double leak_tol = 1e-10;

    /// At least n̄ + 8√(n̄+1) + l + 5 with n̄ = |α|²e^{2θ} + sinh²θ, grown
    /// until the displaced amplitude at the top level is below leak_tol/100
    /// and the thermal tail tanh^{2k}θ past the coherent bulk is too.
    static FockTruncation automatic(const ModelParams& p, const ThermalParams& th,
                                    double leak_tol = 1e-10) {
        const double nbar = p.alpha_sq() * std::exp(2.0 * th.theta) + th.sinh_theta * th.sinh_theta;
        auto n = static_cast<std::size_t>(std::ceil(nbar + 8.0 * std::sqrt(nbar + 1.0) + p.l() + 5.0));
        const double x = std::max(nbar, 1e-300);
        auto log_amp = [x](std::size_t k) {
            const double kd = static_cast<double>(k);
            return 0.5 * (kd * std::log(x) - std::lgamma(kd + 1.0) - x);
        };
        while (log_amp(n - 1) > std::log(0.01 * leak_tol) || log_amp(n - 1 - p.l()) > std::log(0.01 * leak_tol)) ++n;
        // geometric thermal tail, counted past the coherent bulk
        const double r2 = std::pow(std::tanh(th.theta), 2);
        if (r2 > 0.0) {
            const double bulk = std::ceil(p.alpha_sq() * std::exp(2.0 * th.theta) + 8.0 * std::sqrt(nbar + 1.0)) + p.l();
            const double need = bulk + std::log(0.01 * leak_tol) / std::log(r2);
            if (need > static_cast<double>(n)) n = static_cast<std::size_t>(std::ceil(need));
        }
        return {n, leak_tol};
    }
};

/// Amplitudes Ψ(n, ñ) of the cavity and tilde-cavity modes, row-major in n.
class BosonPairState {
public:
    explicit BosonPairState(std::size_t n_fock) : n_(n_fock), amp_(n_fock * n_fock) {}

    std::size_t n_fock() const { return n_; }
    complex& operator()(std::size_t n, std::size_t nt) { return amp_[n * n_ + nt]; }
    const complex& operator()(std::size_t n, std::size_t nt) const { return amp_[n * n_ + nt]; }
    const std::vector<complex>& data() const { return amp_; }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return s;
    }
    /// Probability carried by states with n or ñ equal to the top level.
    double edge_mass() const {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            s += std::norm((*this)(n_ - 1, k));
            if (k + 1 < n_) s += std::norm((*this)(k, n_ - 1));
        }
        return s;
    }

    Eigen::MatrixXcd as_matrix() const {
        Eigen::MatrixXcd m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }
    static BosonPairState from_matrix(const Eigen::MatrixXcd& m) {
        BosonPairState s(static_cast<std::size_t>(m.rows()));
        for (std::size_t i = 0; i < s.n_; ++i)
            for (std::size_t j = 0; j < s.n_; ++j) s(i, j) = m(i, j);
        return s;
    }

private:
    std::size_t n_;
    std::vector<complex> amp_;
};

/// ψ(f, f̃, n, ñ) stored at ((f·2 + f̃)·N + n)·N + ñ.
class DoubledFockState {
public:
    explicit DoubledFockState(FockTruncation trunc)
        : trunc_(trunc), amp_(4 * trunc.n_fock * trunc.n_fock) {}

    const FockTruncation& truncation() const { return trunc_; }
    std::size_t n_fock() const { return trunc_.n_fock; }

    complex& at(int f, int ft, std::size_t n, std::size_t nt) { return amp_[index(f, ft, n, nt)]; }
    const complex& at(int f, int ft, std::size_t n, std::size_t nt) const {
        return amp_[index(f, ft, n, nt)];
    }
    std::vector<complex>& data() { return amp_; }
    const std::vector<complex>& data() const { return amp_; }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return s;
    }

private:
    std::size_t index(int f, int ft, std::size_t n, std::size_t nt) const {
        const std::size_t N = trunc_.n_fock;
        return ((static_cast<std::size_t>(f) * 2 + static_cast<std::size_t>(ft)) * N + n) * N + nt;
    }

    FockTruncation trunc_;
    std::vector<complex> amp_;
};

/// (1/cosh θ) Σ_n tanhⁿθ |n, n⟩, renormalized after truncation.
inline BosonPairState two_mode_squeezed_vacuum(double theta, const FockTruncation& trunc) {
    if (theta < 0.0 || std::isnan(theta))
        throw std::invalid_argument("two_mode_squeezed_vacuum: theta must be >= 0");
    const std::size_t N = trunc.n_fock;
    const double r = std::tanh(theta);
    const double tail = std::pow(r, 2.0 * static_cast<double>(N));
    if (tail > trunc.leak_tol)
        throw LeakageError("two_mode_squeezed_vacuum: thermal tail " + std::to_string(tail) +
                           " exceeds leak_tol");
    BosonPairState s(N);
    double rn = 1.0 / std::cosh(theta);
    for (std::size_t n = 0; n < N; ++n) {
        s(n, n) = rn;
        rn *= r;
    }
    const double norm = std::sqrt(s.norm2());
    for (std::size_t n = 0; n < N; ++n) s(n, n) /= norm;
    return s;
}

/// Truncated annihilation operator.
inline Eigen::MatrixXcd annihilation_matrix(std::size_t n_fock) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_fock, n_fock);
    for (std::size_t n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// exp(γa† − γ*a) on the truncated basis.
inline Eigen::MatrixXcd displacement_matrix(complex gamma, const FockTruncation& trunc) {
    const std::size_t N = trunc.n_fock;
    const Eigen::MatrixXcd a = annihilation_matrix(N);
    const Eigen::MatrixXcd gen = gamma * a.adjoint() - std::conj(gamma) * a;
    Eigen::MatrixXcd d = gen.exp();
    if (std::abs(d(N - 1, 0)) > trunc.leak_tol)
        throw LeakageError("displacement_matrix: coherent amplitude at the cutoff exceeds leak_tol");
    return d;
}

/// e^{−|γ|²/2} γⁿ/√n! for n < n_fock.
inline Eigen::VectorXcd coherent_vector(complex gamma, std::size_t n_fock) {
    Eigen::VectorXcd v(n_fock);
    complex c = std::exp(-0.5 * std::norm(gamma));
    for (std::size_t n = 0; n < n_fock; ++n) {
        v(n) = c;
        c *= gamma / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

/// U_B(θ)|α⟩|α*⟩ built as D_a(αe^θ)·D_ã(α*e^θ)·|0(θ)⟩.
inline BosonPairState thermal_coherent_state(complex alpha, double theta,
                                             const FockTruncation& trunc) {
    const auto vac = two_mode_squeezed_vacuum(theta, trunc);
    const double e = std::exp(theta);
    const Eigen::MatrixXcd da = displacement_matrix(alpha * e, trunc);
    const Eigen::MatrixXcd dt = displacement_matrix(std::conj(alpha) * e, trunc);
    auto out = BosonPairState::from_matrix(da * vac.as_matrix() * dt.transpose());
    if (out.edge_mass() > trunc.leak_tol)
        throw LeakageError("thermal_coherent_state: probability at the cutoff exceeds leak_tol");
    return out;
}

/// exp[θ(a†ã† − aã)] applied to |α⟩|α*⟩ by sub-stepped Taylor series.
/// Slow; meant as a cross-check of thermal_coherent_state on small bases.
inline BosonPairState thermal_coherent_state_generator(complex alpha, double theta,
                                                       const FockTruncation& trunc) {
    const std::size_t N = trunc.n_fock;
    const Eigen::VectorXcd ca = coherent_vector(alpha, N);
    const Eigen::VectorXcd ct = coherent_vector(std::conj(alpha), N);
    Eigen::MatrixXcd psi = ca * ct.transpose();

    auto apply_k = [N](const Eigen::MatrixXcd& m) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
        for (std::size_t n = 0; n < N; ++n) {
            for (std::size_t k = 0; k < N; ++k) {
                complex v{};
                if (n > 0 && k > 0) v += std::sqrt(double(n) * double(k)) * m(n - 1, k - 1);
                if (n + 1 < N && k + 1 < N) v -= std::sqrt(double(n + 1) * double(k + 1)) * m(n + 1, k + 1);
                out(n, k) = v;
            }
        }
        return out;
    };

    const int steps = std::max(1, static_cast<int>(std::ceil(theta * static_cast<double>(N))));
    const double h = theta / steps;
    for (int s = 0; s < steps; ++s) {
        Eigen::MatrixXcd term = psi;
        Eigen::MatrixXcd sum = psi;
        for (int k = 1; k < 60; ++k) {
            term = apply_k(term) * (h / k);
            sum += term;
            if (term.norm() < 1e-18 * sum.norm()) break;
        }
        psi = sum;
    }
    return BosonPairState::from_matrix(psi);
}

/// (sinΘ|e,ẽ⟩ + cosΘ|g,g̃⟩) ⊗ U_B(θ)|α⟩|α*⟩.
inline DoubledFockState build_initial_state(const ModelParams& p, const ThermalParams& th,
                                            const FockTruncation& trunc) {
    const auto boson = thermal_coherent_state(p.alpha(), th.theta, trunc);
    DoubledFockState s(trunc);
    const std::size_t N = trunc.n_fock;
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t nt = 0; nt < N; ++nt) {
            s.at(1, 1, n, nt) = th.sin_Theta * boson(n, nt);
            s.at(0, 0, n, nt) = th.cos_Theta * boson(n, nt);
        }
    }
    return s;
}

namespace detail {

// 2×2 propagator block on {|e,m⟩, |g,m+l⟩}: [[c00, c01], [c01, c11]].
struct PropagatorBlock {
    complex c00;
    complex c01;
    complex c11;
};

inline std::vector<PropagatorBlock> propagator_blocks(const EigenvalueTable& tab, std::size_t count,
                                                      double t) {
    const auto& p = tab.params();
    const double h = 0.5 * p.delta();
    std::vector<PropagatorBlock> out(count);
    for (std::size_t m = 0; m < count; ++m) {
        const auto cs = detail::cos_sinc(tab.D(m), t, tab.D_is_zero(m));
        const double sm = std::sqrt(detail::rising_product(static_cast<double>(m), p.l(), 0.0));
        out[m] = {complex(cs.c, h * cs.s), complex(0.0, -p.g() * sm * cs.s), complex(cs.c, -h * cs.s)};
    }
    return out;
}

// Apply a single-mode block map in place to x[f][n], f ∈ {0,1}, n < N.
inline void apply_blocks(complex* ground, complex* excited, std::size_t N, int l,
                         const std::vector<PropagatorBlock>& blk, complex free_ground) {
    const std::size_t L = static_cast<std::size_t>(l);
    for (std::size_t n = 0; n < std::min(L, N); ++n) ground[n] *= free_ground;
    for (std::size_t m = 0; m < N; ++m) {
        const auto& b = blk[m];
        if (m + L < N) {
            const complex e = excited[m];
            const complex g = ground[m + L];
            excited[m] = b.c00 * e + b.c01 * g;
            ground[m + L] = b.c01 * e + b.c11 * g;
        } else {
            excited[m] *= b.c00;
        }
    }
}

}  // namespace detail

/// Û(t) = U(t) ⊗ Ũ(t) applied blockwise; Ũ(t) is U(−t) on the tilde modes.
inline DoubledFockState propagate(const DoubledFockState& in, double t, const ModelParams& p) {
    const std::size_t N = in.n_fock();
    const std::size_t L = static_cast<std::size_t>(p.l());
    double edge = 0.0;
    for (std::size_t m = (N > L ? N - L : 0); m < N; ++m) {
        for (int o = 0; o < 2; ++o) {
            for (std::size_t k = 0; k < N; ++k) {
                edge += std::norm(in.at(1, o, m, k));
                edge += std::norm(in.at(o, 1, k, m));
            }
        }
    }
    if (edge > in.truncation().leak_tol)
        throw LeakageError("propagate: excited amplitude within l levels of the cutoff exceeds leak_tol");

    const EigenvalueTable tab(p, N);
    const auto fwd = detail::propagator_blocks(tab, N, t);
    const auto bwd = detail::propagator_blocks(tab, N, -t);
    const complex ph_f = std::exp(complex(0.0, -0.5 * p.delta() * t));
    const complex ph_b = std::conj(ph_f);

    DoubledFockState out = in;
    std::vector<complex> g(N), e(N);
    for (int ft = 0; ft < 2; ++ft) {
        for (std::size_t nt = 0; nt < N; ++nt) {
            for (std::size_t n = 0; n < N; ++n) {
                g[n] = out.at(0, ft, n, nt);
                e[n] = out.at(1, ft, n, nt);
            }
            detail::apply_blocks(g.data(), e.data(), N, p.l(), fwd, ph_f);
            for (std::size_t n = 0; n < N; ++n) {
                out.at(0, ft, n, nt) = g[n];
                out.at(1, ft, n, nt) = e[n];
            }
        }
    }
    for (int f = 0; f < 2; ++f) {
        for (std::size_t n = 0; n < N; ++n) {
            detail::apply_blocks(&out.at(f, 0, n, 0), &out.at(f, 1, n, 0), N, p.l(), bwd, ph_b);
        }
    }
    return out;
}

/// exp(−iĈ₁t) with Ĉ₁ = ω[l(c†c − c̃†c̃) + (a†a − ã†ã)], diagonal in this basis.
inline DoubledFockState apply_free_phase(const DoubledFockState& in, double t, const ModelParams& p) {
    DoubledFockState out = in;
    const std::size_t N = in.n_fock();
    for (int f = 0; f < 2; ++f)
        for (int ft = 0; ft < 2; ++ft)
            for (std::size_t n = 0; n < N; ++n)
                for (std::size_t nt = 0; nt < N; ++nt) {
                    const double q = p.l() * (f - ft) + static_cast<double>(n) - static_cast<double>(nt);
                    out.at(f, ft, n, nt) *= std::exp(complex(0.0, -p.omega() * q * t));
                }
    return out;
}

/// ‖⟨e,g̃|Ψ⟩‖² + ‖⟨e,ẽ|Ψ⟩‖².
inline double observe_pe(const DoubledFockState& s) {
    const std::size_t N = s.n_fock();
    double pe = 0.0;
    for (int ft = 0; ft < 2; ++ft)
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t nt = 0; nt < N; ++nt) pe += std::norm(s.at(1, ft, n, nt));
    return pe;
}

/// Reduced atomic state. ρ₀₁ = Σ conj(ψ(e,·))·ψ(g,·), the ⟨u₀₀†u₁₀⟩ + ⟨u₀₁†u₁₁⟩
/// ordering used by the perturbative series.
inline AtomState reduce_atom(const DoubledFockState& s) {
    const std::size_t N = s.n_fock();
    double pe = 0.0;
    complex r01{};
    for (int ft = 0; ft < 2; ++ft)
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t nt = 0; nt < N; ++nt) {
                const complex e = s.at(1, ft, n, nt);
                pe += std::norm(e);
                r01 += std::conj(e) * s.at(0, ft, n, nt);
            }
    return AtomState::from(pe, r01);
}

/// Photon-number distribution of the physical cavity mode.
inline std::vector<double> reduced_boson_distribution(const BosonPairState& s) {
    const std::size_t N = s.n_fock();
    std::vector<double> p(N, 0.0);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t nt = 0; nt < N; ++nt) p[n] += std::norm(s(n, nt));
    return p;
}

inline std::vector<double> reduced_boson_distribution(const DoubledFockState& s) {
    const std::size_t N = s.n_fock();
    std::vector<double> p(N, 0.0);
    for (int f = 0; f < 2; ++f)
        for (int ft = 0; ft < 2; ++ft)
            for (std::size_t n = 0; n < N; ++n)
                for (std::size_t nt = 0; nt < N; ++nt) p[n] += std::norm(s.at(f, ft, n, nt));
    return p;
}

/// {p(g), p(e)} of the physical atom.
inline std::array<double, 2> reduced_fermion_weights(const DoubledFockState& s) {
    const double pe = observe_pe(s);
    return {s.norm2() - pe, pe};
}

inline double mean_photon_number(const std::vector<double>& dist) {
    double m = 0.0;
    for (std::size_t n = 0; n < dist.size(); ++n) m += static_cast<double>(n) * dist[n];
    return m;
}

/// Blocks u₀₀, u₀₁, u₁₀, u₁₁ of U(t) obtained from a dense exponential of the
/// truncated single-atom Hamiltonian, rows/columns in the boson Fock basis.
struct DensePropagator {
    Eigen::MatrixXcd u00, u01, u10, u11;
};

inline DensePropagator dense_propagator(const ModelParams& p, double t, std::size_t n_fock) {
    const std::size_t N = n_fock;
    const std::size_t L = static_cast<std::size_t>(p.l());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (std::size_t n = 0; n < N; ++n) {
        h(n, n) = -0.5 * p.delta();
        h(N + n, N + n) = 0.5 * p.delta();
        if (n + L < N) {
            double s = 1.0;
            for (std::size_t k = 1; k <= L; ++k) s *= static_cast<double>(n + k);
            h(n, N + n + L) = h(N + n + L, n) = p.g() * std::sqrt(s);
        }
    }
    const Eigen::MatrixXcd u = (complex(0.0, -t) * h).exp();
    const auto n = static_cast<Eigen::Index>(N);
    return {u.topLeftCorner(n, n), u.topRightCorner(n, n), u.bottomLeftCorner(n, n),
            u.bottomRightCorner(n, n)};
}

/// ⟨α|a^p X (a†)^q|α⟩ on a truncated basis.
inline complex coherent_expectation(const Eigen::MatrixXcd& x, complex alpha, int p, int q) {
    const auto N = static_cast<std::size_t>(x.rows());
    const Eigen::MatrixXcd ad = annihilation_matrix(N).adjoint();
    Eigen::VectorXcd left = coherent_vector(alpha, N);
    Eigen::VectorXcd right = left;
    for (int i = 0; i < p; ++i) left = ad * left;
    for (int i = 0; i < q; ++i) right = ad * right;
    return left.dot(x * right);
}

/// S̃_{j,k} evaluated as the operator expectations
///   k = 0..5: X, aX, Xa†, a²X, Xa†², aXa†,
/// with X = u₀₀†u₁₀ (j = 1) or u₀₁†u₁₁ (j = 2).
inline complex tilde_S_oracle(const ModelParams& p, int j, int k, double t, std::size_t n_fock) {
    if (j < 1 || j > 2 || k < 0 || k > 5) throw std::invalid_argument("tilde_S_oracle: index out of range");
    const auto u = dense_propagator(p, t, n_fock);
    const Eigen::MatrixXcd x = j == 1 ? Eigen::MatrixXcd(u.u00.adjoint() * u.u10)
                                      : Eigen::MatrixXcd(u.u01.adjoint() * u.u11);
    static constexpr int kP[6] = {0, 1, 0, 2, 0, 1};
    static constexpr int kQ[6] = {0, 0, 1, 0, 2, 1};
    return coherent_expectation(x, p.alpha(), kP[k], kQ[k]);
}

/// Exact P_e and reduced atom state at one time.
inline AtomState oracle_atom_state(const ModelParams& p, const ThermalParams& th, double t,
                                   const FockTruncation& trunc) {
    return reduce_atom(propagate(build_initial_state(p, th, trunc), t, p));
}

}  // namespace tfjc
