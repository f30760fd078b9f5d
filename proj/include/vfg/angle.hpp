#pragma once
/**
 * @file   angle.hpp
 * @brief  Angle helpers.
 */

#include <cmath>
#include <numbers>

namespace vfg
{
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

    /// Wrap an angle to the interval (−π, π].
    [[nodiscard]] inline double wrapAngle (double angle) noexcept
    {
        double a = std::remainder (angle, kTwoPi);
        if (a <= -kPi)
            a += kTwoPi;
        return a;
    }
} // namespace vfg
