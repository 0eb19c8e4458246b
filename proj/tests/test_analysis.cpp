#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tfjc/analysis.hpp"

using namespace tfjc;

namespace {

ModelParams make(int l, double g, double alpha) { return {l, g, 1.0, 1.0, complex(alpha, 0.0)}; }

TimeSeries synthetic(double revival, double carrier, double dt, double t_end) {
    TimeSeries s{0.0, dt, {}};
    for (double t = 0.0; t <= t_end + 1e-12; t += dt) {
        const double env = std::exp(-t * t / 2.0) + std::exp(-(t - revival) * (t - revival) / 2.0);
        s.values.push_back(0.5 + 0.5 * env * std::cos(2.0 * std::numbers::pi * t / carrier));
    }
    return s;
}

PeriodEstimate zero_temperature_period(const ModelParams& p) {
    const SeriesContext ctx(p, TruncationPolicy::adaptive_for(p));
    const auto th = zero_temperature();
    const double dt = default_dt(p);
    const auto sp = sample_pe(ctx, th, 0.0, 1.8 * t0_period(p), dt);
    return extract_revival_period(sp.series, p, th);
}

}  // namespace

TEST(Envelope, Constant) {
    const TimeSeries s{0.0, 0.1, std::vector<double>(50, 0.5)};
    for (double v : envelope(s, 1.0).values) EXPECT_EQ(v, 0.0);
}

TEST(Envelope, Sinusoid) {
    TimeSeries s{0.0, 0.01, {}};
    for (int i = 0; i < 1000; ++i) s.values.push_back(0.5 + 0.3 * std::sin(2.0 * std::numbers::pi * i * 0.01));
    const auto e = envelope(s, 1.0);
    for (std::size_t i = 100; i < 900; ++i) EXPECT_NEAR(e.values[i], 0.3, 1e-12);
}

TEST(Envelope, WindowTooNarrow) {
    const TimeSeries s{0.0, 0.1, std::vector<double>(10, 0.2)};
    EXPECT_THROW(envelope(s, 0.15), std::invalid_argument);
}

TEST(Envelope, SyntheticCollapseRevival) {
    const auto s = synthetic(10.0, 0.5, 0.01, 18.0);
    const auto e = envelope(s, 0.5);
    EXPECT_NEAR(e.values[0], 0.5, 1e-3);
    EXPECT_LT(e.values[500], 0.01);
    EXPECT_NEAR(e.values[1000], 0.5, 1e-3);
}

TEST(ExtractPeriod, Synthetic) {
    const auto s = synthetic(10.0, 0.5, 0.01, 18.0);
    const auto est = extract_revival_period(s, 10.0, 0.5);
    EXPECT_NEAR(est.period, 10.0, 0.01);
    EXPECT_GT(est.contrast, 100.0);
    EXPECT_LT(est.quantization_residual, 0.01);
}

TEST(ExtractPeriod, ShiftedPriorStillFindsRevival) {
    const auto s = synthetic(10.0, 0.5, 0.01, 22.0);
    EXPECT_NEAR(extract_revival_period(s, 12.0, 0.5).period, 10.0, 0.01);
}

TEST(ExtractPeriod, RejectsShortSeries) {
    const auto s = synthetic(10.0, 0.5, 0.01, 12.0);
    EXPECT_THROW(extract_revival_period(s, 10.0, 0.5), std::invalid_argument);
}

TEST(ExtractPeriod, FlatSignalHasNoRevival) {
    TimeSeries s{0.0, 0.01, {}};
    for (int i = 0; i < 2000; ++i) s.values.push_back(0.5 + 0.1 * std::cos(i * 0.2));
    EXPECT_THROW(extract_revival_period(s, 10.0, 0.3), NoRevivalError);
}

TEST(ExtractPeriod, SmallAmplitudeHasNoRevival) {
    const auto p = make(1, 1, 0.2);
    const SeriesContext ctx(p, TruncationPolicy::fixed(80));
    const auto th = zero_temperature();
    const double q = rabi_quantum(p, th);
    const auto sp = sample_pe(ctx, th, 0.0, 100.0, q / 40.0);
    EXPECT_THROW(extract_revival_period(sp.series, 50.0, q), NoRevivalError);
}

TEST(ExtractPeriod, RequiresFineGrid) {
    const auto p = make(1, 1, 6.0);
    const SeriesContext ctx(p, TruncationPolicy::fixed(120));
    const auto sp = sample_pe(ctx, zero_temperature(), 0.0, 70.0, tau1(p) / 10.0);
    EXPECT_THROW(extract_revival_period(sp.series, p, zero_temperature()), std::invalid_argument);
}

TEST(RevivalPeriod, SinglePhotonWithinTwoRabiQuanta) {
    const auto p = make(1, 1, 6.0);
    const auto est = zero_temperature_period(p);
    EXPECT_NEAR(est.period, t0_period(p), 2.0 * tau1(p));
}

TEST(RevivalPeriod, TwoPhotonIsPiForAnyAmplitude) {
    for (double a : {5.0, 7.0, 12.0}) {
        const auto est = zero_temperature_period(make(2, 1, a));
        EXPECT_NEAR(est.period, std::numbers::pi, 1e-3) << "alpha=" << a;
    }
}

TEST(RevivalPeriod, CouplingRescaling) {
    const auto a = zero_temperature_period(make(1, 1.0, 6.0));
    const auto b = zero_temperature_period(make(1, 2.0, 6.0));
    EXPECT_NEAR(b.period, 0.5 * a.period, 1e-3 * a.period);
}

TEST(RevivalPeriod, HigherPhotonNumbers) {
    for (auto [l, a] : {std::pair{3, 7.0}, std::pair{4, 8.0}}) {
        const auto p = make(l, 1, a);
        const auto est = zero_temperature_period(p);
        EXPECT_NEAR(est.period, t0_period(p), 2.0 * est.quantum) << "l=" << l;
    }
}

TEST(Sweep, TwoPhotonFlatInTemperature) {
    const auto p = make(2, 1, 7.0);
    const auto rows = period_vs_temperature_sweep(p, {0.0, 0.08, 0.16}, TruncationPolicy::adaptive_for(p));
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.period.has_value()) << r.error;
        EXPECT_NEAR(*r.period, std::numbers::pi, 1e-3);
        EXPECT_TRUE(r.stable);
        EXPECT_DOUBLE_EQ(r.t0_prime, std::numbers::pi);
    }
}

TEST(Sweep, NoRevivalReported) {
    const auto p = make(1, 1, 0.2);
    const auto rows = period_vs_temperature_sweep(p, {0.0}, TruncationPolicy::fixed(80));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].period.has_value());
    EXPECT_FALSE(rows[0].error.empty());
}

TEST(CosSum, TimeZero) {
    for (int l = 1; l <= 4; ++l) {
        const auto r = approx_cos_sum(3.0, l, 1.0, 0.0);
        EXPECT_NEAR(r.lhs, 1.0, 1e-12);
        EXPECT_NEAR(r.rhs, 1.0, 1e-15);
    }
    EXPECT_THROW(approx_cos_sum(0.0, 1, 1.0, 0.1), std::invalid_argument);
}

TEST(CosSum, SinglePhotonLinearizationImprovesWithAmplitude) {
    double prev = 1.0;
    for (double a : {4.0, 8.0, 16.0}) {
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double t = i / 200.0 / (2.0 * a);
            const auto r = approx_cos_sum(a, 1, 1.0, t);
            worst = std::max(worst, std::abs(r.lhs - r.rhs));
        }
        EXPECT_LT(worst, prev);
        prev = worst;
    }
}

TEST(ApproxPe, LongTimeMeanIsHalf) {
    const auto p = make(1, 1, 6.0);
    double sum = 0.0;
    int n = 0;
    for (double t = 0.0; t < 400.0; t += 0.05, ++n) sum += pe_collapse_revival_approx(t, p).value;
    const double mean = sum / n;
    EXPECT_GT(mean, 0.45);
    EXPECT_LT(mean, 0.55);
    EXPECT_FALSE(pe_collapse_revival_approx(1.0, p).off_resonance);
    EXPECT_TRUE(pe_collapse_revival_approx(1.0, ModelParams(1, 1, 2.0, 1.0, 6.0)).off_resonance);
}

TEST(ApproxPe, SinglePhotonRevivalNearPrior) {
    const auto p = make(1, 1, 6.0);
    TimeSeries s{0.0, 0.01, {}};
    for (double t = 0.0; t <= 70.0; t += 0.01) s.values.push_back(pe_collapse_revival_approx(t, p).value);
    const auto est = extract_revival_period(s, t0_period(p), tau1(p));
    EXPECT_NEAR(est.period, t0_period(p), 2.0 * tau1(p));
}

TEST(Coherence, ZeroTemperatureStartIsIncoherent) {
    const auto p = make(2, 1, 2.0);
    const SeriesContext ctx(p, TruncationPolicy::fixed(80));
    EXPECT_EQ(coherence_at(ctx, zero_temperature(), 0.0).coherence, 0.0);
    EXPECT_GT(coherence_at(ctx, zero_temperature(), 0.3).coherence, 0.0);
}

TEST(Envelope, ScalesWithDeviation) {
    const auto s = synthetic(10.0, 0.5, 0.01, 18.0);
    TimeSeries scaled = s;
    for (auto& v : scaled.values) v = 0.5 + 0.3 * (v - 0.5);
    const auto a = envelope(s, 0.5), b = envelope(scaled, 0.5);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.values[i], 0.3 * a.values[i], 1e-15);
}

TEST(Rescaling, CouplingAndTimeGrid) {
    const double c = 10.0;
    const ModelParams a{1, 1.0, 1.0, 1.0, complex(6.0, 0.0)};
    const ModelParams b{1, c, c, c, complex(6.0, 0.0)};
    const SeriesContext ca(a, TruncationPolicy::fixed(120)), cb(b, TruncationPolicy::fixed(120));
    const auto ta = thermal_from_inv_beta(0.1, 1.0, 1.0), tb = thermal_from_inv_beta(0.1 * c, c, c);
    const double dt = default_dt(a);
    const auto sa = sample_pe(ca, ta, 0.0, 70.0, dt), sb = sample_pe(cb, tb, 0.0, 70.0 / c, dt / c);
    ASSERT_EQ(sa.series.size(), sb.series.size());
    for (std::size_t i = 0; i < sa.series.size(); ++i) EXPECT_NEAR(sa.series.values[i], sb.series.values[i], 1e-12);
    const auto pa = extract_revival_period(sa.series, a, ta), pb = extract_revival_period(sb.series, b, tb);
    EXPECT_NEAR(pb.period, pa.period / c, 1e-9 * pa.period);
}
