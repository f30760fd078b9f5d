#pragma once
/**
 * @file   guidance.hpp
 * @brief  Arcsine vector-field guidance and the proportional heading loop.
 */

#include <vfg/angle.hpp>
#include <vfg/path.hpp>

#include <cmath>

namespace vfg
{
    struct GuidanceParams
    {
        double k_g = 0.05;   ///< guidance gain [1/m²]
        double k_psi = 2.3;  ///< heading loop gain [1/s]

        friend bool operator== (const GuidanceParams&, const GuidanceParams&) = default;
    };

    /**
     * @brief Heading offset χᵒ = π/2 − asin(1 / (1 + k_g ε²)), in [0, π/2).
     *
     * Evaluated as acos(u) = atan2(√(x(2+x)), 1) with x = k_g ε², which is the same function
     * without the cancellation of π/2 − asin(u) near u = 1.
     */
    [[nodiscard]] inline double offsetAngle (double k_g, double eps) noexcept
    {
        const double x = k_g * eps * eps;
        return std::atan2 (std::sqrt (x * (2.0 + x)), 1.0);
    }

    /// Desired heading ψᵈᵉˢ: χᵖ − χᵒ for ε ≤ 0, χᵖ + χᵒ for ε > 0. Not wrapped.
    [[nodiscard]] inline double desiredHeading (const PathSpec& path, double k_g, Position2D p) noexcept
    {
        const double eps = crossTrackError (path, p);
        const double chiP = tangentDirection (path, p);
        const double chiO = offsetAngle (k_g, eps);
        return eps <= 0.0 ? chiP - chiO : chiP + chiO;
    }

    /// ω_path = k_ψ · wrap(ψᵈᵉˢ − ψ).
    [[nodiscard]] inline double headingRateCommand (double k_psi, double psiDes, double psi) noexcept
    {
        return k_psi * wrapAngle (psiDes - psi);
    }
} // namespace vfg
