// presets.hpp: built-in run configurations for the figure data sets.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "tfjc/cli/config.hpp"

namespace tfjc::cli {

namespace detail {

inline std::vector<double> inv_beta_range(double stop, double step) {
    std::vector<double> v;
    const int n = static_cast<int>(std::lround(stop / step));
    for (int i = 0; i <= n; ++i) v.push_back(i * step);
    return v;
}

inline RunConfig base(const std::string& command, int l, double alpha, std::size_t n_max) {
    RunConfig c;
    c.command = command;
    c.model = {l, 1.0, 1.0, 1.0, {alpha, 0.0}};
    c.truncation.n_max = n_max;
    return c;
}

inline RunConfig fig1(int l, double alpha, double t_stop) {
    auto c = base("pe-series", l, alpha, 110);
    c.inv_beta = {0.1};
    c.grid.t_stop = t_stop;
    return c;
}

inline RunConfig fig3(int l) {
    auto c = base("period-sweep", l, 12.0, 250);
    c.inv_beta = inv_beta_range(0.2, 0.01);
    return c;
}

inline RunConfig fig4(int l, double t_stop) {
    auto c = base("coherence-map", l, 12.0, 250);
    c.inv_beta = inv_beta_range(0.16, 0.02);
    c.grid.t_stop = t_stop;
    return c;
}

inline RunConfig small_alpha_coherence(int l) {
    auto c = base("coherence-map", l, 0.2, 80);
    c.inv_beta = {0.0, 0.04, 0.08, 0.12, 0.16};
    c.grid.t_stop = 100.0;
    c.grid.dt = 0.05;
    return c;
}

}  // namespace detail

/// Name → configuration. t ranges cover about 2.2·T₀(l) for P_e curves and
/// 3.5·T₀(l) for coherence maps.
inline const std::map<std::string, RunConfig>& presets() {
    using namespace detail;
    static const std::map<std::string, RunConfig> p = [] {
        std::map<std::string, RunConfig> m;
        m["fig1a"] = fig1(1, 6.0, 85.0);
        m["fig1b"] = fig1(2, 7.0, 7.0);
        m["fig1c"] = fig1(3, 7.0, 0.66);
        m["fig1d"] = fig1(4, 8.0, 0.054);
        {
            auto c = base("pe-series", 1, 0.2, 80);
            c.inv_beta = {0.1};
            c.grid.t_stop = 100.0;
            c.grid.dt = 0.01;
            m["fig2"] = c;
        }
        m["fig3a"] = fig3(1);
        m["fig3b"] = fig3(2);
        m["fig3c"] = fig3(3);
        m["fig3d"] = fig3(4);
        m["fig4a"] = fig4(1, 264.0);
        m["fig4b"] = fig4(2, 11.0);
        m["fig4c"] = fig4(3, 0.61);
        m["fig4d"] = fig4(4, 0.038);
        for (int l = 1; l <= 4; ++l) m["small-alpha-l" + std::to_string(l)] = small_alpha_coherence(l);
        {
            RunConfig c;
            c.command = "oracle-validate";
            c.model = {2, 1.0, 1.0, 1.0, {2.0, 0.0}};
            c.truncation.adaptive = true;
            m["validate-default"] = c;
        }
        {
            auto c = base("approx-check", 1, 6.0, 250);
            c.grid.t_stop = 80.0;
            c.grid.dt = 0.05;
            m["approx-default"] = c;
        }
        return m;
    }();
    return p;
}

inline RunConfig preset(const std::string& name) {
    const auto& p = presets();
    const auto it = p.find(name);
    if (it == p.end()) throw ConfigError("unknown preset '" + name + "'");
    return it->second;
}

/// Preset used when a subcommand is run without --preset or --config.
inline std::string default_preset(const std::string& command) {
    if (command == "pe-series") return "fig1b";
    if (command == "period-sweep") return "fig3b";
    if (command == "coherence-map") return "fig4b";
    if (command == "oracle-validate") return "validate-default";
    if (command == "approx-check") return "approx-default";
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace tfjc::cli
