#include <vfg/avoidance.hpp>
#include <vfg/engagement.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace vfg;

namespace
{
    constexpr double kPiD = std::numbers::pi;
    const AvoidanceParams kParams{11.0, 1.5, 0.4};

    // Geometry with i at the origin, j at distance d along bearing beta, from lead angles.
    PairGeometry geometryFromLeadAngles (double d, double beta, double phiI, double phiJ)
    {
        const UavState i{0, 0.0, 0.0, wrapAngle (beta - phiI), 3.0};
        const UavState j{1, d * std::cos (beta), d * std::sin (beta), wrapAngle (beta - phiJ), 3.0};
        return pairGeometry (i, j);
    }

    template <typename F> void expectError (ErrorCode code, F&& f)
    {
        try
        {
            f ();
            ADD_FAILURE () << "expected " << toString (code);
        }
        catch (const Error& e)
        {
            EXPECT_EQ (e.code (), code) << e.what ();
        }
    }
} // namespace

TEST (PairGeometry, Examples)
{
    const UavState o{0, 0.0, 0.0, 0.0, 3.0};
    auto g = pairGeometry (o, {1, 1.0, 0.0, 0.0, 3.0});
    EXPECT_EQ (g.d, 1.0);
    EXPECT_EQ (g.beta, 0.0);
    g = pairGeometry (o, {1, 0.0, 2.0, 0.0, 3.0});
    EXPECT_EQ (g.d, 2.0);
    EXPECT_NEAR (g.beta, kPiD / 2, 1e-15);
    g = pairGeometry ({0, 0.0, 0.0, kPiD / 2, 3.0}, {1, 0.0, 2.0, -kPiD / 2, 3.0});
    EXPECT_NEAR (g.phi_i, 0.0, 1e-15);
    EXPECT_NEAR (g.phi_j, kPiD, 1e-15);
}

TEST (PairGeometry, CoincidentPositionsRaise)
{
    expectError (ErrorCode::CoincidentPositions, [] { (void) pairGeometry ({0, 1.0, 1.0, 0.0, 3.0}, {1, 1.0 + 5e-10, 1.0, 0.0, 3.0}); });
    EXPECT_NO_THROW ((void) pairGeometry ({0, 1.0, 1.0, 0.0, 3.0}, {1, 1.0 + 2e-9, 1.0, 0.0, 3.0}));
}

TEST (RepulsionCommand, Examples)
{
    const UavState self{0, 0.0, 0.0, 0.0, 3.0};
    EXPECT_EQ (repulsionCommand (kParams, self, {}), 0.0);
    const std::vector<UavState> atRadius{{1, 0.0, 1.5, 0.0, 3.0}};
    EXPECT_EQ (repulsionCommand (kParams, self, atRadius), 0.0);
    const std::vector<UavState> close{{1, 0.0, 0.75, 0.0, 3.0}};
    EXPECT_NEAR (repulsionCommand (kParams, self, close), -11.0 * (1 / 0.75 - 1 / 1.5), 1e-12);
    EXPECT_NEAR (repulsionCommand (kParams, self, close), -7.333333333333333, 1e-12);
    const std::vector<UavState> far{{1, 0.0, 1.6, 0.0, 3.0}, {2, 3.0, 3.0, 0.0, 3.0}};
    EXPECT_EQ (repulsionCommand (kParams, self, far), 0.0);
}

TEST (RepulsionCommand, SumsOverActiveNeighbours)
{
    const UavState self{0, 0.0, 0.0, 0.3, 3.0};
    const std::vector<UavState> both{{1, 0.5, 0.7, 0.0, 3.0}, {2, -0.9, 0.2, 1.0, 3.0}, {3, 4.0, 0.0, 0.0, 3.0}};
    double expected = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
    {
        const double d = std::hypot (both[k].x, both[k].y);
        expected -= 11.0 * (1 / d - 1 / 1.5) * std::sin (std::atan2 (both[k].y, both[k].x) - 0.3);
    }
    EXPECT_NEAR (repulsionCommand (kParams, self, both), expected, 1e-12);
}

TEST (RepulsionCommand, VanishesContinuouslyAtActivationRadius)
{
    const UavState self{0, 0.0, 0.0, 0.4, 3.0};
    double prev = INFINITY;
    for (int k = 1; k <= 12; ++k)
    {
        const double gap = std::pow (10.0, -k);
        const std::vector<UavState> n{{1, 0.0, 1.5 - gap, 0.0, 3.0}};
        const double w = std::abs (repulsionCommand (kParams, self, n));
        EXPECT_LT (w, prev);
        EXPECT_LT (w, 11.0 * gap / (1.5 * 1.5) * 1.01);
        prev = w;
    }
}

TEST (RepulsionCommand, CoincidentNeighbourPropagates)
{
    const UavState self{0, 0.0, 0.0, 0.0, 3.0};
    const std::vector<UavState> n{{1, 0.0, 0.0, 0.0, 3.0}};
    expectError (ErrorCode::CoincidentPositions, [&] { (void) repulsionCommand (kParams, self, n); });
}

TEST (RepulsionCommand, PairTermsMirrorThroughLeadAngles)
{
    // β_ji = β_ij + π gives ω_i = −Ω sin φ_i and ω_j = +Ω sin φ_j; the pair commands are
    // exact negatives of each other only when sin φ_i = sin φ_j.
    std::mt19937_64 rng (17);
    std::uniform_real_distribution<double> ang (-kPiD, kPiD);
    std::uniform_real_distribution<double> dist (0.05, 1.5);
    for (int n = 0; n < 10000; ++n)
    {
        const double d = dist (rng);
        const double beta = ang (rng);
        const UavState i{0, 0.0, 0.0, ang (rng), 3.0};
        const UavState j{1, d * std::cos (beta), d * std::sin (beta), ang (rng), 3.0};
        const PairGeometry g = pairGeometry (i, j);
        const double omega = repulsionWeight (kParams, g.d);
        const double wi = repulsionCommand (kParams, i, std::vector<UavState>{j});
        const double wj = repulsionCommand (kParams, j, std::vector<UavState>{i});
        EXPECT_NEAR (wi, -omega * std::sin (g.phi_i), 1e-9 * (1 + omega));
        EXPECT_NEAR (wj, omega * std::sin (g.phi_j), 1e-9 * (1 + omega));
    }
    const UavState a{0, 0.0, 0.0, 0.2, 3.0};
    const UavState b{1, 0.0, 1.0, -0.2, 3.0};
    EXPECT_NEAR (repulsionCommand (kParams, a, std::vector<UavState>{b}), -repulsionCommand (kParams, b, std::vector<UavState>{a}), 1e-12);
}

TEST (TotalHeadingRate, Examples)
{
    EXPECT_EQ (totalHeadingRate (0.0, 0.0), 0.0);
    EXPECT_NEAR (totalHeadingRate (3.6, -7.3), -3.7, 1e-15);
}

TEST (RangeRate, Examples)
{
    EXPECT_NEAR (rangeRate (3.0, geometryFromLeadAngles (1.0, 0.0, 0.0, kPiD)), -6.0, 1e-12);
    EXPECT_NEAR (rangeRate (3.0, geometryFromLeadAngles (1.0, 0.7, 0.4, 0.4)), 0.0, 1e-12);
    EXPECT_NEAR (rangeRate (3.0, geometryFromLeadAngles (1.0, 0.0, kPiD / 2, 0.0)), 3.0, 1e-12);
}

TEST (RangeAccel, Examples)
{
    EXPECT_NEAR (rangeAccel (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.3, 0.0, 0.0)), 0.0, 1e-12);
    // φ_i = π/4, φ_j = 3π/4: the closing term vanishes and Ω = 11/3.
    EXPECT_NEAR (rangeAccel (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.0, kPiD / 4, 3 * kPiD / 4)), 11.0, 1e-12);
}

TEST (RangeAccel, SymmetricLeadAnglesCancelAtCriticalSeparation)
{
    for (double phi : {0.2, 0.7, 1.2, kPiD / 2})
    {
        const double dStar = criticalSeparation (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.0, phi, -phi));
        ASSERT_GT (dStar, 0.0);
        const PairGeometry g = geometryFromLeadAngles (dStar, 0.0, phi, -phi);
        const double s = std::sin (phi);
        const double closing = -(9.0 / dStar) * 4 * s * s;
        const double repel = 3.0 * 11.0 * (1 / dStar - 1 / 1.5) * 2 * s * s;
        EXPECT_NEAR (closing + repel, 0.0, 1e-9);
        EXPECT_NEAR (rangeAccel (3.0, 11.0, 1.5, g), 0.0, 1e-9);
    }
}

TEST (RangeAccel, DomainErrors)
{
    expectError (ErrorCode::DomainError, [] { (void) rangeAccel (3.0, 11.0, 1.5, geometryFromLeadAngles (1.6, 0.0, 0.3, 0.2)); });
    PairGeometry zero;
    expectError (ErrorCode::DomainError, [&] { (void) rangeAccel (3.0, 11.0, 1.5, zero); });
}

TEST (RangeAccel, FiniteDifferenceOfSimulatedRangeRateHasCentripetalSign)
{
    // Oracle: fly the pair closed loop at dt = 1e−5, compute ḋ from the simulated positions
    // and headings, and central-difference it. The simulated d̈ equals
    // +(v²/d)(sin φ_j − sin φ_i)² + vΩ(sin²φ_i + sin²φ_j); rangeAccel carries the opposite sign
    // on the first term, so the two differ by exactly 2(v²/d)(sin φ_j − sin φ_i)².
    std::mt19937_64 rng (2024);
    std::uniform_real_distribution<double> ang (-kPiD, kPiD);
    std::uniform_real_distribution<double> dist (0.3, 1.45);
    const double dt = 1e-5;
    int checked = 0;
    int formulaMatches = 0;
    while (checked < 100)
    {
        const double d = dist (rng);
        const double beta = ang (rng);
        const UavState a{0, 0.0, 0.0, ang (rng), 3.0};
        const UavState b{1, d * std::cos (beta), d * std::sin (beta), ang (rng), 3.0};
        if (std::abs (rangeAccel (3.0, 11.0, 1.5, pairGeometry (a, b))) < 1e-2)
            continue;
        const EngagementTrace tr = traceEngagement (kParams, a, b, dt, 2);
        auto rate = [&] (int n) {
            const double rx = tr.b[n].x - tr.a[n].x;
            const double ry = tr.b[n].y - tr.a[n].y;
            const double vx = 3.0 * (std::cos (tr.b[n].psi) - std::cos (tr.a[n].psi));
            const double vy = 3.0 * (std::sin (tr.b[n].psi) - std::sin (tr.a[n].psi));
            return (rx * vx + ry * vy) / std::hypot (rx, ry);
        };
        const double fd = (rate (2) - rate (0)) / (2 * dt);
        const PairGeometry mid = pairGeometry (tr.a[1], tr.b[1]);
        const double si = std::sin (mid.phi_i);
        const double sj = std::sin (mid.phi_j);
        const double centripetal = 9.0 / mid.d * (sj - si) * (sj - si);
        const double simulated = centripetal + 3.0 * repulsionWeight (kParams, mid.d) * (si * si + sj * sj);
        EXPECT_LT (std::abs (fd - simulated) / std::abs (simulated), 1e-3) << "d=" << d;
        EXPECT_NEAR (rangeAccel (3.0, 11.0, 1.5, mid), simulated - 2.0 * centripetal, 1e-9 * (1.0 + std::abs (simulated)));
        if (std::abs (fd - rangeAccel (3.0, 11.0, 1.5, mid)) <= 1e-3 * std::abs (rangeAccel (3.0, 11.0, 1.5, mid)))
            ++formulaMatches;
        ++checked;
    }
    // Only near-symmetric geometries (sin φ_i ≈ sin φ_j) agree with the closed form.
    EXPECT_LT (formulaMatches, 100);
}

TEST (RangeAccel, NonNegativeBelowCriticalSeparation)
{
    std::mt19937_64 rng (8);
    std::uniform_real_distribution<double> ang (-kPiD, kPiD);
    std::uniform_real_distribution<double> u (0.0, 1.0);
    int checked = 0;
    for (int n = 0; n < 100000; ++n)
    {
        const PairGeometry unit = geometryFromLeadAngles (1.0, ang (rng), ang (rng), ang (rng));
        const double dStar = criticalSeparation (3.0, 11.0, 1.5, unit);
        if (dStar <= 1e-6)
            continue;
        const double d = dStar * (1e-3 + 0.998 * u (rng));
        PairGeometry g = unit;
        g.d = d;
        EXPECT_GE (rangeAccel (3.0, 11.0, 1.5, g), -1e-9);
        ++checked;
    }
    EXPECT_GT (checked, 50000);
}

TEST (CriticalSeparation, Examples)
{
    EXPECT_NEAR (criticalSeparation (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.0, 0.8, 0.8)), 1.5, 1e-15);
    EXPECT_NEAR (criticalSeparation (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.0, kPiD / 2, -kPiD / 2)), 1.5 * (1 - 6.0 / 11.0), 1e-12);
    EXPECT_NEAR (criticalSeparation (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.0, kPiD / 2, -kPiD / 2)), 0.6818181818181818, 1e-12);
    expectError (ErrorCode::DegenerateGeometry, [] { (void) criticalSeparation (3.0, 11.0, 1.5, geometryFromLeadAngles (1.0, 0.0, 0.0, kPiD)); });
    EXPECT_LT (criticalSeparation (3.0, 1.0, 1.5, geometryFromLeadAngles (1.0, 0.0, kPiD / 2, -kPiD / 2)), 0.0);
}

TEST (SufficientGain, Examples)
{
    EXPECT_NEAR (sufficientGain (3.0, 1.5, 0.4), 9.0 / 1.1, 1e-12);
    EXPECT_NEAR (sufficientGain (3.0, 1.5, 0.4), 8.181818181818182, 1e-9);
    EXPECT_GT (11.0, sufficientGain (3.0, 1.5, 0.4));
    EXPECT_NEAR (sufficientGain (3.0, 1.5, 1e-12), 6.0, 1e-9);
    EXPECT_NEAR (sufficientGain (3.0, 1.5, 0.0), 6.0, 1e-15);
    EXPECT_NEAR (geometryGainBound (3.0, 1.5, 0.4, geometryFromLeadAngles (1.0, 0.0, kPiD / 2, -kPiD / 2)), sufficientGain (3.0, 1.5, 0.4), 1e-12);
    expectError (ErrorCode::InvalidParams, [] { (void) sufficientGain (3.0, 1.5, 1.5); });
    expectError (ErrorCode::InvalidParams, [] { (void) sufficientGain (3.0, 1.5, 2.0); });
}

TEST (GeometryGainBound, Examples)
{
    EXPECT_NEAR (geometryGainBound (3.0, 1.5, 0.4, geometryFromLeadAngles (1.0, 0.0, 0.6, 0.6)), 0.0, 1e-15);
    EXPECT_NEAR (geometryGainBound (3.0, 1.5, 0.4, geometryFromLeadAngles (1.0, 0.0, kPiD / 2, -kPiD / 2)), sufficientGain (3.0, 1.5, 0.4), 1e-12);
    EXPECT_NEAR (geometryGainBound (3.0, 1.5, 0.4, geometryFromLeadAngles (1.0, 0.0, kPiD / 6, kPiD / 3)), 0.54807789360911474, 1e-12);
    expectError (ErrorCode::DegenerateGeometry, [] { (void) geometryGainBound (3.0, 1.5, 0.4, geometryFromLeadAngles (1.0, 0.0, 0.0, 0.0)); });
    expectError (ErrorCode::InvalidParams, [] { (void) geometryGainBound (3.0, 0.4, 0.4, geometryFromLeadAngles (1.0, 0.0, 0.3, 0.1)); });
}

TEST (GeometryGainBound, NeverExceedsSufficientGain)
{
    std::mt19937_64 rng (99);
    std::uniform_real_distribution<double> ang (-kPiD, kPiD);
    const double bound = sufficientGain (3.0, 1.5, 0.4);
    for (int n = 0; n < 100000; ++n)
    {
        PairGeometry g;
        g.d = 1.0;
        g.phi_i = ang (rng);
        g.phi_j = ang (rng);
        EXPECT_LE (geometryGainBound (3.0, 1.5, 0.4, g), bound * (1 + 1e-15));
    }
}
