// Acceptance checks. One line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "tfjc/analysis.hpp"
#include "tfjc/cli/commands.hpp"
#include "tfjc/coherence.hpp"
#include "tfjc/model.hpp"
#include "tfjc/oracle.hpp"
#include "tfjc/perturbation.hpp"

using namespace tfjc;

namespace {

int failures = 0;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void report(const char* id, bool pass, const std::string& what, double seconds) {
    std::printf("%s %s  %s  [%.1fs]\n", id, pass ? "PASS" : "FAIL", what.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <class F>
void criterion(const char* id, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string what;
    bool pass = false;
    try {
        pass = f(what);
    } catch (const std::exception& e) {
        what += std::string(" exception: ") + e.what();
    }
    report(id, pass, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

ModelParams make(int l, double alpha, double g = 1.0) { return {l, g, 1.0, 1.0, complex(alpha, 0.0)}; }

std::vector<double> grid(double stop, double step) {
    std::vector<double> v;
    const int n = static_cast<int>(std::lround(stop / step));
    for (int i = 0; i <= n; ++i) v.push_back(i * step);
    return v;
}

bool ac1(std::string& w) {
    const std::pair<ModelParams, double> cases[] = {
        {make(1, 6), 37.70}, {make(2, 7), 3.142}, {make(3, 7), 0.2992}, {make(4, 8), 0.02454}};
    bool ok = true;
    int l = 1;
    for (const auto& [p, ref] : cases) {
        const double t = t0_period(p);
        const double rel = std::abs(t - ref) / ref;
        ok = ok && rel < 0.005;
        w += "T0(" + std::to_string(l++) + ")=" + fmt("%.5g", t) + " rel=" + fmt("%.1e", rel) + " ";
    }
    return ok;
}

bool ac2(std::string& w) {
    const auto th = thermal_from_inv_beta(0.1, 1.0, 1.0);
    const double bound[5] = {0, 0, 8.0e-4, 5.0e-5, 5.0e-5};
    bool ok = true;
    for (int l = 2; l <= 4; ++l) {
        const SeriesContext ctx(make(l, 0.2), TruncationPolicy::fixed(80));
        const auto s = sample_pe(ctx, th, 0.0, 100.0, 0.01);
        const double mx = *std::max_element(s.series.values.begin(), s.series.values.end());
        ok = ok && mx < bound[l];
        w += "l=" + std::to_string(l) + " maxPe=" + fmt("%.3e", mx) + " ";
    }
    const auto p = make(1, 0.2);
    const SeriesContext ctx(p, TruncationPolicy::fixed(80));
    const auto s = sample_pe(ctx, th, 0.0, 100.0, 0.01);
    try {
        const auto est = extract_revival_period(s.series, p, th);
        ok = false;
        w += "l=1 revival at " + fmt("%.4g", est.period);
    } catch (const NoRevivalError&) {
        w += "l=1 no revival";
    }
    return ok;
}

bool ac3(std::string& w) {
    const auto th = thermal_from_inv_beta(0.1, 1.0, 1.0);
    const double bound[5] = {0, 0.2, 6.0e-3, 1.2e-4, 1.8e-6};
    bool ok = true;
    for (int l = 1; l <= 4; ++l) {
        const SeriesContext ctx(make(l, 0.2), TruncationPolicy::fixed(80));
        std::vector<double> c;
        for (int i = 0; i <= 10000; ++i) c.push_back(coherence_at(ctx, th, 0.01 * i).coherence);
        const double mx = *std::max_element(c.begin(), c.end());
        ok = ok && mx < bound[l];
        w += "l=" + std::to_string(l) + " maxC=" + fmt("%.3e", mx) + " ";
        if (l == 1) {
            std::vector<double> peaks;
            for (std::size_t i = 1; i + 1 < c.size(); ++i)
                if (c[i] > c[i - 1] && c[i] >= c[i + 1] && c[i] > 0.5 * mx) peaks.push_back(0.01 * i);
            const double spacing = peaks.size() > 1 ? (peaks.back() - peaks.front()) / (peaks.size() - 1) : 0.0;
            ok = ok && std::abs(spacing - std::numbers::pi) < 0.1 * std::numbers::pi;
            w += "(period " + fmt("%.4f", spacing) + ") ";
        }
    }
    return ok;
}

bool ac4(std::string& w) {
    const auto p = make(2, 12);
    const auto rows = period_vs_temperature_sweep(p, {0.0, 0.04, 0.08, 0.12, 0.16}, TruncationPolicy::fixed(250));
    const double tol = tau1(make(1, 12));
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.period && std::abs(*r.period - 3.142) <= tol;
        w += r.period ? fmt("%.6f ", *r.period) : std::string("none ");
    }
    return ok;
}

bool ac5(std::string& w) {
    bool ok = true;
    for (int l : {1, 3, 4}) {
        const auto p = make(l, 12);
        const double dt = default_dt(p);
        const auto rows = period_vs_temperature_sweep(p, grid(0.16, 0.01), TruncationPolicy::fixed(250), dt);
        const double t1 = tau1(p);
        double worst_prior = 0.0, worst_step = 0.0;
        bool all = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].period) {
                all = false;
                continue;
            }
            worst_prior = std::max(worst_prior, std::abs(*rows[i].period - rows[i].t0_prime) / rows[i].quantum);
            ok = ok && std::abs(*rows[i].period - rows[i].t0_prime) <= 2.0 * (l == 1 ? t1 : rows[i].quantum);
            if (i > 0 && rows[i - 1].period) {
                const double d = *rows[i].period - *rows[i - 1].period;
                const double q = 0.5 * (rows[i].quantum + rows[i - 1].quantum);
                worst_step = std::max(worst_step, std::abs(d - std::round(d / q) * q) / dt);
            }
        }
        ok = ok && all && worst_step <= 1.0;
        w += "l=" + std::to_string(l) + " max|P-T0'|/q=" + fmt("%.2f", worst_prior) +
             " step-off=" + fmt("%.2f", worst_step) + "dt ";
    }
    return ok;
}

bool ac6(std::string& w) {
    const auto p = make(2, 12);
    const SeriesContext ctx(p, TruncationPolicy::fixed(250));
    const double T = t0_period(p);
    const double step = rabi_quantum(p, zero_temperature()) / 40.0;
    bool ok = true;
    for (int k = 1; k <= 3; ++k) {
        double pmin = 1e300, pmax = 0.0, mmin = 1e300, mmax = 0.0;
        for (double ib : {0.0, 0.04, 0.08, 0.12, 0.16}) {
            const auto th = thermal_from_inv_beta(ib, 1.0, 1.0);
            const double point = coherence_at(ctx, th, k * T).coherence;
            double mx = 0.0;
            for (double t = (k - 0.5) * T; t <= (k + 0.5) * T; t += step)
                mx = std::max(mx, coherence_at(ctx, th, t).coherence);
            pmin = std::min(pmin, point);
            pmax = std::max(pmax, point);
            mmin = std::min(mmin, mx);
            mmax = std::max(mmax, mx);
        }
        const double var = (mmax - mmin) / mmax;
        ok = ok && var < 0.1;
        w += "k=" + std::to_string(k) + " peak C " + fmt("%.4f", mmin) + ".." + fmt("%.4f", mmax) + " (" +
             fmt("%.2f%%", 100 * var) + "; at t=kT0 " + fmt("%.1e", pmin) + ".." + fmt("%.1e", pmax) + ") ";
    }
    const auto p1 = make(1, 12);
    const SeriesContext c1(p1, TruncationPolicy::fixed(250));
    const double T1 = t0_period(p1);
    double early = 0.0;
    for (double t = 0.0; t <= 0.1 * T1; t += tau1(p1) / 40.0)
        early = std::max(early, coherence_at(c1, zero_temperature(), t).coherence);
    const double late = coherence_at(c1, zero_temperature(), 3.0 * T1).coherence;
    ok = ok && late < 0.6 * early;
    w += "l=1 C(3T0)/early max=" + fmt("%.3f", late / early);
    return ok;
}

bool ac7(std::string& w) {
    bool ok = true;
    for (int l : {1, 2}) {
        const auto p = make(l, 2);
        const SeriesContext ctx(p, TruncationPolicy::adaptive_for(p));
        for (double t : {0.5, 1.0}) {
            std::vector<double> q, rp, rt;
            for (double theta : cli::default_theta_grid()) {
                const auto th = thermal_from_theta(theta, 1.0, 1.0);
                const auto o = oracle_atom_state(p, th, t, FockTruncation::automatic(p, th));
                const auto s = atom_state(ctx, th, t);
                q.push_back(theta);
                rp.push_back(std::abs(o.rho00 - s.rho00));
                rt.push_back(trace_distance(o, s));
            }
            const double sp = cli::loglog_slope(q, rp), st = cli::loglog_slope(q, rt);
            ok = ok && std::abs(sp - 3.0) <= 0.3 && std::abs(st - 3.0) <= 0.3;
            w += "l=" + std::to_string(l) + ",t=" + fmt("%.1f", t) + ": " + fmt("%.3f", sp) + "/" + fmt("%.3f", st) + " ";
        }
    }
    return ok;
}

bool ac8(std::string& w) {
    double tele = 0.0, shift = 0.0, unit = 0.0;
    for (int l = 1; l <= 4; ++l) {
        const auto p = make(l, 3.0);
        const SeriesContext ctx(p, TruncationPolicy::fixed(120));
        for (double ib : {0.0, 0.1, 0.5}) {
            const auto th = thermal_from_inv_beta(ib, 1.0, 1.0);
            tele = std::max(tele, std::abs(pe_thermal(ctx, th, 0.0).value - th.sin2_Theta()));
            tele = std::max(tele, std::abs(rho01_thermal(ctx, th, 0.0)));
        }
        const EigenvalueTable tab(p, 120);
        for (std::size_t n = 0; n + l <= 120; ++n) shift = std::max(shift, std::abs(tab.Dprime(n + l) - tab.D(n)));
        for (double t : {0.3, 3.0}) {
            for (std::size_t n = 0; n <= 100; ++n) {
                const auto a = block_amplitudes(tab, n, t);
                const double g2s = detail::rising_product(double(n), l, 0.0);
                unit = std::max(unit, std::abs(std::norm(a.A) + g2s * a.B * a.B - 1.0));
            }
        }
    }
    const double theta = 0.5;
    const auto vac = two_mode_squeezed_vacuum(theta, FockTruncation{60, 1e-10});
    const auto dist = reduced_boson_distribution(vac);
    const double r2 = std::pow(std::tanh(theta), 2);
    double be = 0.0;
    for (std::size_t n = 0; n < 30; ++n) be = std::max(be, std::abs(dist[n] - (1 - r2) * std::pow(r2, double(n))));

    const auto p = make(2, 1.5);
    const auto th = thermal_from_inv_beta(0.5, 1.0, 1.0);
    const auto init = build_initial_state(p, th, FockTruncation::automatic(p, th));
    const auto fw = reduced_fermion_weights(init);
    const double fd = std::abs(fw[1] - 1.0 / (std::exp(2.0) + 1.0));
    const double nbar = std::abs(mean_photon_number(reduced_boson_distribution(init)) -
                                 (2.25 * std::exp(2 * th.theta) + th.sinh_theta * th.sinh_theta));
    w = "t0=" + fmt("%.1e", tele) + " shift=" + fmt("%.1e", shift) + " unitarity=" + fmt("%.1e", unit) +
        " BE=" + fmt("%.1e", be) + " FD=" + fmt("%.1e", fd) + " nbar=" + fmt("%.1e", nbar);
    return tele < 1e-12 && shift == 0.0 && unit < 1e-12 && be < 1e-8 && fd < 1e-12 && nbar < 1e-6;
}

bool ac9(std::string& w) {
    bool ok = true;
    for (double a : {4.0, 8.0, 16.0}) {
        const auto r0 = approx_cos_sum(a, 1, 1.0, 0.0);
        ok = ok && std::abs(r0.lhs - r0.rhs) < 1e-12;
    }
    double prev = 1e300;
    for (double a : {4.0, 8.0, 16.0}) {
        double mx = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const auto r = approx_cos_sum(a, 1, 1.0, i / 200.0 / (2.0 * a));
            mx = std::max(mx, std::abs(r.lhs - r.rhs));
        }
        ok = ok && mx < prev;
        prev = mx;
        w += "alpha=" + fmt("%g", a) + " maxdev=" + fmt("%.2e", mx) + " ";
    }
    return ok;
}

bool ac10(std::string& w) {
    double worst = 0.0;
    for (double c : {0.1, 10.0}) {
        for (int l : {1, 2}) {
            const ModelParams a{l, 1.0, 1.0, 1.0, complex(3.0, 0.0)};
            const ModelParams b{l, c, c, c, complex(3.0, 0.0)};
            const SeriesContext ca(a, TruncationPolicy::fixed(100)), cb(b, TruncationPolicy::fixed(100));
            const auto ta = thermal_from_inv_beta(0.1, 1.0, 1.0);
            const auto tb = thermal_from_inv_beta(0.1 * c, c, c);
            for (int i = 0; i <= 200; ++i) {
                const double t = 0.05 * i;
                worst = std::max(worst, std::abs(pe_thermal(ca, ta, t).value - pe_thermal(cb, tb, t / c).value));
            }
        }
    }
    w = "max |dPe|=" + fmt("%.1e", worst);
    return worst < 1e-12;
}

}  // namespace

int main() {
    criterion("AC1", ac1);
    criterion("AC2", ac2);
    criterion("AC3", ac3);
    criterion("AC4", ac4);
    criterion("AC5", ac5);
    criterion("AC6", ac6);
    criterion("AC7", ac7);
    criterion("AC8", ac8);
    criterion("AC9", ac9);
    criterion("AC10", ac10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures ? 1 : 0;
}
