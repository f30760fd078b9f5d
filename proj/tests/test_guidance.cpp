#include <vfg/angle.hpp>
#include <vfg/guidance.hpp>
#include <vfg/scenario.hpp>
#include <vfg/sim.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vfg;

namespace
{
    constexpr double kHalfPi = std::numbers::pi / 2;
    const PathSpec kLine = PathSpec::straightLine ();
    const PathSpec kWave = PathSpec::sinusoid (5.0, 0.075);
} // namespace

TEST (WrapAngle, RangeIsHalfOpen)
{
    EXPECT_EQ (wrapAngle (std::numbers::pi), std::numbers::pi);
    EXPECT_EQ (wrapAngle (-std::numbers::pi), std::numbers::pi);
    EXPECT_NEAR (wrapAngle (3 * std::numbers::pi), std::numbers::pi, 1e-12);
    EXPECT_NEAR (wrapAngle (2 * std::numbers::pi - 0.1), -0.1, 1e-15);
    for (int i = -2000; i <= 2000; ++i)
    {
        const double a = wrapAngle (i * 0.0137 * 7.3);
        EXPECT_GT (a, -std::numbers::pi);
        EXPECT_LE (a, std::numbers::pi);
    }
}

TEST (OffsetAngle, Examples)
{
    EXPECT_EQ (offsetAngle (0.05, 0.0), 0.0);
    EXPECT_NEAR (offsetAngle (0.05, 1e6), kHalfPi, 1e-3);
    EXPECT_NEAR (offsetAngle (0.05, 10.0), 1.4033482475752073, 1e-12);
    EXPECT_NEAR (offsetAngle (0.05, 10.0), kHalfPi - std::asin (1.0 / 6.0), 1e-12);
}

TEST (OffsetAngle, EvenMonotoneAndBounded)
{
    double prev = 0.0;
    for (int i = 1; i <= 5000; ++i)
    {
        const double eps = i * 0.01;
        const double a = offsetAngle (0.05, eps);
        EXPECT_EQ (a, offsetAngle (0.05, -eps));
        EXPECT_GT (a, prev);
        EXPECT_LT (a, kHalfPi);
        EXPECT_NEAR (a, kHalfPi - std::asin (1.0 / (1.0 + 0.05 * eps * eps)), 1e-9);
        prev = a;
    }
}

TEST (DesiredHeading, Examples)
{
    EXPECT_EQ (desiredHeading (kLine, 0.05, {0.0, 3.0}), kHalfPi);
    EXPECT_NEAR (desiredHeading (kLine, 0.05, {-1e6, 0.0}), 0.0, 1e-3);
    EXPECT_NEAR (desiredHeading (kLine, 0.05, {1e6, 0.0}), std::numbers::pi, 1e-3);
    EXPECT_NEAR (desiredHeading (kWave, 0.05, {0.0, 0.0}), 1.2120256565243244, 1e-12);
}

TEST (DesiredHeading, ContinuousAcrossPath)
{
    const double h = 1e-7;
    for (double y : {-40.0, -3.1, 0.0, 2.0, 20.943951023931955, 57.0})
    {
        for (const PathSpec* path : {&kLine, &kWave})
        {
            const double x0 = path->xAt (y);
            const double jump = std::abs (desiredHeading (*path, 0.05, {x0 + h, y}) - desiredHeading (*path, 0.05, {x0 - h, y}));
            EXPECT_LT (jump, 1e-6);
        }
    }
}

TEST (DesiredHeading, StraightLineMirrorSymmetry)
{
    for (int i = 1; i <= 2000; ++i)
    {
        const double eps = i * 0.05;
        EXPECT_NEAR (desiredHeading (kLine, 0.05, {-eps, 0.0}), std::numbers::pi - desiredHeading (kLine, 0.05, {eps, 0.0}), 1e-12);
    }
}

TEST (DesiredHeading, StraightLineMonotoneSteering)
{
    double left = kHalfPi;
    double right = kHalfPi;
    for (int i = 1; i <= 4000; ++i)
    {
        const double eps = i * 0.05;
        const double l = desiredHeading (kLine, 0.05, {-eps, 0.0});
        const double r = desiredHeading (kLine, 0.05, {eps, 0.0});
        EXPECT_LE (l, left);
        EXPECT_GE (r, right);
        EXPECT_GE (l, 0.0);
        EXPECT_LE (r, std::numbers::pi);
        left = l;
        right = r;
    }
}

TEST (HeadingRateCommand, Examples)
{
    EXPECT_EQ (headingRateCommand (2.3, 1.0, 1.0), 0.0);
    EXPECT_NEAR (headingRateCommand (2.3, kHalfPi, 0.0), 2.3 * kHalfPi, 1e-15);
    EXPECT_NEAR (headingRateCommand (2.3, kHalfPi, 0.0), 3.6128315516282616, 1e-12);
    EXPECT_NEAR (headingRateCommand (2.3, 0.1, 2 * std::numbers::pi - 0.1), 0.46, 1e-12);
}

namespace
{
    // One vehicle flying the guidance law alone (no neighbours, constant speed).
    RunSummary singleVehicle (const PathSpec& path, double x0, double psi0, double tEnd)
    {
        Scenario sc;
        sc.path = path;
        sc.n_uavs = 1;
        sc.t_end = tEnd;
        sc.poses = {{x0 + path.xAt (0.0), 0.0, psi0}};
        return run (sc).summary;
    }
} // namespace

TEST (GuidanceClosedLoop, SingleVehicleReachesStraightPathFromAnyOffset)
{
    for (int i = -20; i <= 20; ++i)
        for (double psi0 : {0.0, kHalfPi, -kHalfPi, std::numbers::pi})
        {
            const RunSummary s = singleVehicle (kLine, i, psi0, 40.0);
            ASSERT_FALSE (s.error) << s.error_message;
            ASSERT_TRUE (s.time_to_path) << "eps0 = " << i << " psi0 = " << psi0;
            EXPECT_LT (*s.time_to_path, 40.0);
            EXPECT_LT (s.final_max_abs_epsilon, 0.05);
        }
}

TEST (GuidanceClosedLoop, SingleVehicleOnSinusoidSettlesAtCurvatureLag)
{
    // With heading-loop lag the steady tracking error on the A=5, k=0.075 sinusoid peaks near
    // 0.114 m, above the 0.05 m on-path tolerance; the vehicle still reaches the tolerance band
    // at the straighter parts of the curve.
    const RunSummary s = singleVehicle (kWave, -10.0, kHalfPi, 60.0);
    ASSERT_FALSE (s.error) << s.error_message;
    ASSERT_TRUE (s.time_to_path);
    EXPECT_LT (*s.time_to_path, 40.0);

    Scenario sc;
    sc.path = kWave;
    sc.n_uavs = 1;
    sc.t_end = 60.0;
    sc.output_decimation = 1;
    sc.poses = {{-10.0, 0.0, kHalfPi}};
    const RunResult r = run (sc);
    double peak = 0.0;
    for (const auto& f : r.frames)
        if (f.t >= 40.0)
            peak = std::max (peak, std::abs (f.uavs[0].epsilon));
    EXPECT_GT (peak, 0.09);
    EXPECT_LT (peak, 0.13);
}
