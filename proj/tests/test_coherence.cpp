#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tfjc/coherence.hpp"

using namespace tfjc;

TEST(Projection, BoundaryStateUnchanged) {
    const auto s = physicality_project(AtomState::from(0.5, 0.5));
    EXPECT_EQ(s.rho00, 0.5);
    EXPECT_EQ(s.rho01, std::complex<double>(0.5, 0.0));
    EXPECT_FALSE(s.projection_applied);
}

TEST(Projection, RadialRescale) {
    const auto s = physicality_project(AtomState::from(0.5, 0.6));
    EXPECT_NEAR(std::abs(s.rho01), 0.5, 1e-15);
    EXPECT_TRUE(s.projection_applied);
    EXPECT_EQ(s.raw_rho01, std::complex<double>(0.6, 0.0));

    const auto z = physicality_project(AtomState::from(0.3, std::polar(0.9, 1.1)));
    EXPECT_NEAR(std::arg(z.rho01), 1.1, 1e-14);
    EXPECT_NEAR(std::norm(z.rho01), 0.3 * 0.7, 1e-14);
}

TEST(Projection, ClampOccupation) {
    const auto s = physicality_project(AtomState::from(1.0000003, 0.0));
    EXPECT_EQ(s.rho00, 1.0);
    EXPECT_EQ(s.rho01, std::complex<double>(0.0, 0.0));
    EXPECT_TRUE(s.projection_applied);
    EXPECT_EQ(s.raw_rho00, 1.0000003);
}

TEST(Coherence, DiagonalIsZero) {
    for (double p : {0.0, 0.2, 0.5, 1.0}) EXPECT_EQ(rel_entropy_coherence(AtomState::from(p, 0.0)), 0.0);
}

TEST(Coherence, MaximallyCoherent) {
    EXPECT_NEAR(rel_entropy_coherence(AtomState::from(0.5, 0.5)), std::log(2.0), 1e-15);
}

TEST(Coherence, MixedReferenceValue) {
    const auto s = AtomState::from(0.5, 0.25);
    const auto ev = atom_eigenvalues(s);
    EXPECT_NEAR(ev.plus, 0.75, 1e-15);
    EXPECT_NEAR(ev.minus, 0.25, 1e-15);
    EXPECT_NEAR(rel_entropy_coherence(s), 0.13081203594113696, 1e-14);
}

TEST(Coherence, RejectsNonPhysical) {
    EXPECT_THROW(rel_entropy_coherence(AtomState::from(0.5, 0.6)), std::invalid_argument);
    EXPECT_THROW(rel_entropy_coherence(AtomState::from(-0.1, 0.0)), std::invalid_argument);
}

TEST(Coherence, PhaseInvarianceAndBounds) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double p = u(rng);
        const double r = u(rng) * std::sqrt(p * (1 - p));
        const double c0 = rel_entropy_coherence(AtomState::from(p, r));
        const double c1 = rel_entropy_coherence(AtomState::from(p, std::polar(r, 6.283 * u(rng))));
        EXPECT_NEAR(c0, c1, 1e-13);
        EXPECT_GE(c0, 0.0);
        EXPECT_LE(c0, std::log(2.0));
        const auto ev = atom_eigenvalues(AtomState::from(p, r));
        EXPECT_NEAR(ev.plus + ev.minus, 1.0, 1e-15);
        EXPECT_GE(ev.minus, 0.0);
        EXPECT_LE(ev.plus, 1.0);
    }
}

TEST(Coherence, MonotoneInCoherenceMagnitude) {
    for (double p : {0.1, 0.5, 0.8}) {
        const double rmax = std::sqrt(p * (1 - p));
        double prev = -1.0;
        for (int i = 1; i < 50; ++i) {
            const double c = rel_entropy_coherence(AtomState::from(p, rmax * i / 50.0));
            EXPECT_GT(c, prev);
            prev = c;
        }
    }
}

TEST(TraceDistance, Basic) {
    const auto a = AtomState::from(0.5, 0.5);
    const auto b = AtomState::from(0.5, -0.5);
    EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-15);
    EXPECT_EQ(trace_distance(a, a), 0.0);
}
