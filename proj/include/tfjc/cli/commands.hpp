// commands.hpp: subcommand implementations behind the tfjc executable.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tfjc/analysis.hpp"
#include "tfjc/cli/config.hpp"
#include "tfjc/cli/table.hpp"
#include "tfjc/coherence.hpp"
#include "tfjc/errors.hpp"
#include "tfjc/model.hpp"
#include "tfjc/oracle.hpp"
#include "tfjc/perturbation.hpp"

namespace tfjc::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitValidation = 3, kExitNoRevival = 4 };

struct CommandResult {
    Table table;
    std::optional<ordered_json> report;
    std::vector<std::string> warnings;
    int exit_code = kExitOk;
};

namespace detail {

inline std::vector<double> time_grid(double t0, double t1, double dt) {
    const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t0 + static_cast<double>(i) * dt;
    return t;
}

inline ThermalParams thermal(const RunConfig& c, double inv_beta) {
    return thermal_from_inv_beta(inv_beta, c.model.omega, c.model.omega0);
}

inline void require_coupling(const RunConfig& c) {
    if (!(c.model.g > 0.0)) throw ConfigError("config field 'model.g': this command needs g > 0");
}

inline void note_truncation(const SeriesContext& ctx, std::vector<std::string>& w) {
    if (ctx.truncation_warning())
        w.push_back("series truncation tail mass " + format_double(ctx.tail_mass()) + " exceeds tail_tol " +
                    format_double(ctx.truncation().tail_tol));
}

inline FockTruncation fock(const RunConfig& c, const ModelParams& p, const ThermalParams& th) {
    auto f = FockTruncation::automatic(p, th);
    if (c.truncation.n_fock > 0) f.n_fock = c.truncation.n_fock;
    return f;
}

}  // namespace detail

/// Columns t, pe_pert, pe_order0, pe_order1_contrib, pe_order2_contrib,
/// physicality_flag and, with the oracle enabled, pe_oracle.
inline CommandResult cmd_pe_series(const RunConfig& c) {
    detail::require_coupling(c);
    if (c.inv_beta.size() != 1)
        throw ConfigError("config field 'thermal.inv_beta': pe-series takes exactly one temperature");
    const auto p = c.params();
    const auto th = detail::thermal(c, c.inv_beta[0]);
    const SeriesContext ctx(p, c.truncation_policy());
    CommandResult r;
    detail::note_truncation(ctx, r.warnings);

    const double dt = c.grid.dt.value_or(default_dt(p));
    const double t1 = c.grid.t_stop.value_or(2.2 * t0_prime_period(p, th));
    const auto ts = detail::time_grid(c.grid.t_start, t1, dt);

    std::optional<DoubledFockState> init;
    if (c.oracle.enabled) {
        if (p.abs_alpha() > c.oracle.max_alpha)
            r.warnings.push_back("oracle skipped: |alpha| exceeds oracle.max_alpha");
        else
            init = build_initial_state(p, th, detail::fock(c, p, th));
    }

    r.table.columns = {"t", "pe_pert", "pe_order0", "pe_order1_contrib", "pe_order2_contrib", "physicality_flag"};
    if (init) r.table.columns.push_back("pe_oracle");
    std::size_t unphysical = 0;
    for (const double t : ts) {
        const auto pe = pe_thermal(ctx, th, t);
        if (!pe.physical) ++unphysical;
        std::vector<Cell> row = {t, pe.value, pe.contrib[0], pe.contrib[1], pe.contrib[2], pe.physical};
        if (init) row.emplace_back(observe_pe(propagate(*init, t, p)));
        r.table.add(std::move(row));
    }
    if (unphysical)
        r.warnings.push_back(std::to_string(unphysical) + " samples outside [-1e-6, 1+1e-6]");
    return r;
}

/// Columns inv_beta, extracted_period, t0_prime, tau1_quantum, stability_flag.
inline CommandResult cmd_period_sweep(const RunConfig& c) {
    detail::require_coupling(c);
    const auto p = c.params();
    CommandResult r;
    detail::note_truncation(SeriesContext(p, c.truncation_policy()), r.warnings);
    const auto rows = period_vs_temperature_sweep(p, c.inv_beta, c.truncation_policy(), c.grid.dt);
    r.table.columns = {"inv_beta", "extracted_period", "t0_prime", "tau1_quantum", "stability_flag"};
    std::size_t failed = 0;
    for (const auto& row : rows) {
        Cell period = std::string("no-revival");
        if (row.period)
            period = *row.period;
        else
            ++failed;
        r.table.add({row.inv_beta, period, row.t0_prime, row.quantum, row.stable});
    }
    if (failed == rows.size()) r.exit_code = kExitNoRevival;
    return r;
}

/// Long format: t, inv_beta, coherence, rho00, abs_rho01, projection_applied.
/// Default spacing is a twentieth of the Rabi quantum, a fortieth with full_density.
inline CommandResult cmd_coherence_map(const RunConfig& c, bool full_density = false) {
    detail::require_coupling(c);
    const auto p = c.params();
    const SeriesContext ctx(p, c.truncation_policy());
    CommandResult r;
    detail::note_truncation(ctx, r.warnings);
    const double dt = c.grid.dt.value_or(rabi_quantum(p, zero_temperature()) / (full_density ? 40.0 : 20.0));
    const double t1 = c.grid.t_stop.value_or(3.5 * t0_period(p));
    const auto ts = detail::time_grid(c.grid.t_start, t1, dt);
    r.table.columns = {"t", "inv_beta", "coherence", "rho00", "abs_rho01", "projection_applied"};
    std::size_t projected = 0;
    for (const double ib : c.inv_beta) {
        const auto th = detail::thermal(c, ib);
        for (const double t : ts) {
            const auto s = coherence_at(ctx, th, t);
            if (s.state.projection_applied) ++projected;
            r.table.add({t, ib, s.coherence, s.state.rho00, std::abs(s.state.rho01), s.state.projection_applied});
        }
    }
    if (projected) r.warnings.push_back(std::to_string(projected) + " states projected onto the physical set");
    return r;
}

/// Columns t, lhs, rhs, abs_diff, pe_approx.
inline CommandResult cmd_approx_check(const RunConfig& c) {
    detail::require_coupling(c);
    const auto p = c.params();
    CommandResult r;
    if (p.delta() != 0.0) r.warnings.push_back("approximation assumes zero detuning; delta = " + format_double(p.delta()));
    const double dt = c.grid.dt.value_or(default_dt(p));
    const double t1 = c.grid.t_stop.value_or(2.2 * t0_period(p));
    r.table.columns = {"t", "lhs", "rhs", "abs_diff", "pe_approx"};
    for (const double t : detail::time_grid(c.grid.t_start, t1, dt)) {
        const auto s = approx_cos_sum(p.alpha(), p.l(), p.g(), t);
        r.table.add({t, s.lhs, s.rhs, std::abs(s.lhs - s.rhs), 0.5 - 0.5 * s.lhs});
    }
    return r;
}

struct ValidateOptions {
    /// Test fixture: perturb the series value of S̃_{j,k}.
    std::optional<std::pair<int, int>> corrupt_tilde;
};

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Eight log-spaced values on [0.02, 0.2].
inline std::vector<double> default_theta_grid() {
    std::vector<double> v;
    for (int i = 0; i < 8; ++i) v.push_back(0.02 * std::pow(10.0, i / 7.0));
    return v;
}

/// JSON report of series-versus-oracle checks; exit code 3 on any failure.
inline CommandResult cmd_oracle_validate(const RunConfig& c, const ValidateOptions& opt = {}) {
    const auto p = c.params();
    if (p.abs_alpha() > c.oracle.max_alpha)
        throw ConfigError("config field 'model.alpha': |alpha| exceeds oracle.max_alpha");
    const SeriesContext ctx(p, c.truncation_policy());
    CommandResult r;
    detail::note_truncation(ctx, r.warnings);
    const auto thetas = c.validation.theta.empty() ? default_theta_grid() : c.validation.theta;
    ordered_json checks = ordered_json::array();
    bool all = true;
    auto add = [&](const std::string& name, bool pass, ordered_json detail) {
        ordered_json rec;
        rec["name"] = name;
        rec["pass"] = pass;
        for (auto& [k, v] : detail.items()) rec[k] = v;
        checks.push_back(std::move(rec));
        all = all && pass;
    };
    auto th_of = [&](double theta) { return thermal_from_theta(theta, p.omega(), p.omega0()); };

    std::vector<double> positive;
    for (const double q : thetas)
        if (q > 0.0) positive.push_back(q);

    for (const double t : c.validation.times) {
        const std::string tag = "_t=" + format_double(t);
        if (positive.size() >= 2) {
            std::vector<double> rp, rt;
            for (const double q : positive) {
                const auto th = th_of(q);
                const auto o = oracle_atom_state(p, th, t, detail::fock(c, p, th));
                const auto s = atom_state(ctx, th, t);
                rp.push_back(std::abs(o.rho00 - s.rho00));
                rt.push_back(trace_distance(o, s));
            }
            const bool ok_p = *std::min_element(rp.begin(), rp.end()) > 0.0;
            const bool ok_t = *std::min_element(rt.begin(), rt.end()) > 0.0;
            const double sp = ok_p ? loglog_slope(positive, rp) : std::nan("");
            const double st = ok_t ? loglog_slope(positive, rt) : std::nan("");
            add("theta_scaling_pe" + tag, ok_p && std::abs(sp - 3.0) <= 0.3,
                {{"slope", std::isfinite(sp) ? ordered_json(sp) : ordered_json(nullptr)}, {"target", 3.0}, {"tolerance", 0.3}});
            add("theta_scaling_trace_distance" + tag, ok_t && std::abs(st - 3.0) <= 0.3,
                {{"slope", std::isfinite(st) ? ordered_json(st) : ordered_json(nullptr)}, {"target", 3.0}, {"tolerance", 0.3}});
        }
        if (std::find(thetas.begin(), thetas.end(), 0.0) != thetas.end()) {
            const auto th = zero_temperature();
            const auto o = oracle_atom_state(p, th, t, detail::fock(c, p, th));
            const auto s = atom_state(ctx, th, t);
            const double res = std::max(std::abs(o.rho00 - s.rho00), std::abs(o.rho01 - s.rho01));
            add("zero_temperature" + tag, res < 1e-9, {{"residual", res}, {"tolerance", 1e-9}});
        }
        const TimeAmplitudes amp(ctx, t);
        const auto series = tilde_series(ctx, amp);
        const std::size_t nf = detail::fock(c, p, zero_temperature()).n_fock + 10;
        for (int j = 1; j <= 2; ++j) {
            for (int k = 0; k <= 5; ++k) {
                complex v = series[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k)];
                if (opt.corrupt_tilde && opt.corrupt_tilde->first == j && opt.corrupt_tilde->second == k)
                    v = v * 1.001 + 1e-3;
                const complex o = tilde_S_oracle(p, j, k, t, nf);
                const double res = std::abs(v - o) / std::max(1.0, std::abs(o));
                add("tilde_S_" + std::to_string(j) + "_" + std::to_string(k) + tag, res < 1e-8,
                    {{"residual", res}, {"tolerance", 1e-8}});
            }
        }
    }

    for (const double q : thetas) {
        const auto th = th_of(q);
        const double pe0 = pe_thermal(ctx, th, 0.0).value;
        const double r0 = std::abs(rho01_thermal(ctx, th, 0.0));
        const double res = std::max(std::abs(pe0 - th.sin2_Theta()), r0);
        add("t0_identity_theta=" + format_double(q), res < 1e-12, {{"residual", res}, {"tolerance", 1e-12}});
    }

    const double qmax = thetas.empty() ? 0.0 : *std::max_element(thetas.begin(), thetas.end());
    {
        const double q = std::max(qmax, 0.5);
        FockTruncation ft{60, 1e-10};
        const auto vac = two_mode_squeezed_vacuum(q, ft);
        const auto dist = reduced_boson_distribution(vac);
        const double r2 = std::pow(std::tanh(q), 2);
        double res = 0.0;
        for (std::size_t n = 0; n < ft.n_fock / 2; ++n)
            res = std::max(res, std::abs(dist[n] - (1.0 - r2) * std::pow(r2, static_cast<double>(n))));
        add("bose_einstein_theta=" + format_double(q), res < 1e-8, {{"residual", res}, {"tolerance", 1e-8}});
    }
    {
        const auto th = th_of(qmax);
        const auto init = build_initial_state(p, th, detail::fock(c, p, th));
        const auto w = reduced_fermion_weights(init);
        const double e = th.zero_temperature() ? 0.0 : std::exp(-th.beta * p.omega0());
        const double res = std::max(std::abs(w[0] - 1.0 / (1.0 + e)), std::abs(w[1] - e / (1.0 + e)));
        add("fermi_dirac_theta=" + format_double(qmax), res < 1e-12, {{"residual", res}, {"tolerance", 1e-12}});

        const double nbar = mean_photon_number(reduced_boson_distribution(init));
        const double expect = p.alpha_sq() * std::exp(2.0 * th.theta) + th.sinh_theta * th.sinh_theta;
        add("thermal_mean_photon_number_theta=" + format_double(qmax), std::abs(nbar - expect) < 1e-6,
            {{"residual", std::abs(nbar - expect)}, {"tolerance", 1e-6}});

        double drift = 0.0;
        for (const double t : {0.5, 5.0, 50.0})
            drift = std::max(drift, std::abs(propagate(init, t, p).norm2() - init.norm2()));
        const double tol = init.truncation().leak_tol;
        add("unitarity_drift", drift < tol, {{"residual", drift}, {"tolerance", tol}});
    }

    ordered_json rep;
    rep["model"] = to_json(c)["model"];
    rep["n_max"] = ctx.n_max();
    rep["pass"] = all;
    rep["checks"] = std::move(checks);
    r.report = std::move(rep);
    r.table.columns = {"name", "pass"};
    for (const auto& ch : (*r.report)["checks"]) r.table.add({ch["name"].get<std::string>(), ch["pass"].get<bool>()});
    if (!all) r.exit_code = kExitValidation;
    return r;
}

}  // namespace tfjc::cli
