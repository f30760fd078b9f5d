#pragma once
/**
 * @file   avoidance.hpp
 * @brief  Rotational repulsion between vehicles and the closed-form two-vehicle analysis.
 *
 * The analysis helpers (range rate, range acceleration, critical separation and gain
 * bounds) assume both vehicles fly at the same speed v and turn only under repulsion.
 */

#include <vfg/angle.hpp>
#include <vfg/error.hpp>
#include <vfg/state.hpp>

#include <cmath>
#include <span>
#include <string>

namespace vfg
{
    /// Separations below this are treated as a collision that already happened.
    inline constexpr double kCoincidenceGuard = 1e-9;

    /// |sin φ| below this on both vehicles counts as line-of-sight degenerate.
    inline constexpr double kDegenerateSin = 1e-12;

    struct AvoidanceParams
    {
        double k_r = 11.0;    ///< repulsion gain [m²/s]; 0 disables repulsion
        double R_s = 1.5;     ///< activation radius [m]
        double d_safe = 0.4;  ///< safety distance [m]

        friend bool operator== (const AvoidanceParams&, const AvoidanceParams&) = default;
    };

    struct PairGeometry
    {
        double d = 0.0;      ///< separation d_ij
        double beta = 0.0;   ///< bearing from i to j
        double phi_i = 0.0;  ///< lead angle β − ψ_i, wrapped
        double phi_j = 0.0;  ///< lead angle β − ψ_j, wrapped
    };

    [[nodiscard]] inline PairGeometry pairGeometry (const UavState& i, const UavState& j)
    {
        const double dx = j.x - i.x;
        const double dy = j.y - i.y;
        PairGeometry g;
        g.d = std::hypot (dx, dy);
        if (g.d < kCoincidenceGuard)
            throw Error (ErrorCode::CoincidentPositions, "vehicles " + std::to_string (i.id) + " and " + std::to_string (j.id) + " coincide");
        g.beta = std::atan2 (dy, dx);
        g.phi_i = wrapAngle (g.beta - i.psi);
        g.phi_j = wrapAngle (g.beta - j.psi);
        return g;
    }

    /// Repulsion magnitude Ω = k_r (1/d − 1/R_s); zero at and beyond R_s.
    [[nodiscard]] inline double repulsionWeight (const AvoidanceParams& params, double d) noexcept
    {
        if (d > params.R_s)
            return 0.0;
        return params.k_r * (1.0 / d - 1.0 / params.R_s);
    }

    /**
     * @brief ω_rep = −Σ_{d_ij ≤ R_s} k_r (1/d_ij − 1/R_s) sin(β_ij − ψ_i).
     *
     * Neighbours beyond R_s are ignored. The caller excludes @p self from @p neighbors.
     */
    [[nodiscard]] inline double repulsionCommand (const AvoidanceParams& params, const UavState& self, std::span<const UavState> neighbors)
    {
        double omega = 0.0;
        for (const auto& other : neighbors)
        {
            const double d = std::hypot (other.x - self.x, other.y - self.y);
            if (d > params.R_s)
                continue;
            const PairGeometry g = pairGeometry (self, other);
            omega -= repulsionWeight (params, g.d) * std::sin (g.phi_i);
        }
        return omega;
    }

    [[nodiscard]] inline double totalHeadingRate (double omegaPath, double omegaRep) noexcept { return omegaPath + omegaRep; }

    /// ḋ = v (cos φ_j − cos φ_i).
    [[nodiscard]] inline double rangeRate (double v, const PairGeometry& g) noexcept { return v * (std::cos (g.phi_j) - std::cos (g.phi_i)); }

    /// d̈ = −(v²/d)(sin φ_j − sin φ_i)² + v Ω (sin²φ_i + sin²φ_j), valid while repulsion is active.
    [[nodiscard]] inline double rangeAccel (double v, double k_r, double R_s, const PairGeometry& g)
    {
        if (!(g.d > 0.0) || g.d > R_s)
            throw Error (ErrorCode::DomainError, "range acceleration needs 0 < d <= R_s (d = " + std::to_string (g.d) + ")");
        const double si = std::sin (g.phi_i);
        const double sj = std::sin (g.phi_j);
        const double omega = k_r * (1.0 / g.d - 1.0 / R_s);
        return -(v * v / g.d) * (sj - si) * (sj - si) + v * omega * (si * si + sj * sj);
    }

    namespace detail
    {
        // (sin φ_j − sin φ_i)² / (sin²φ_i + sin²φ_j), which lies in [0, 2].
        [[nodiscard]] inline double leadAngleRatio (const PairGeometry& g)
        {
            const double si = std::sin (g.phi_i);
            const double sj = std::sin (g.phi_j);
            if (std::abs (si) < kDegenerateSin && std::abs (sj) < kDegenerateSin)
                throw Error (ErrorCode::DegenerateGeometry, "both headings lie on the line of sight");
            return (sj - si) * (sj - si) / (si * si + sj * sj);
        }

        inline void requireSafetyBelowRadius (double R_s, double d_safe)
        {
            if (!(R_s > d_safe) || !(d_safe >= 0.0))
                throw Error (ErrorCode::InvalidParams, "need R_s > d_safe >= 0 (R_s = " + std::to_string (R_s) + ", d_safe = " + std::to_string (d_safe) + ")");
        }
    } // namespace detail

    /// Separation d* at which the range acceleration changes sign. Negative when k_r is small.
    [[nodiscard]] inline double criticalSeparation (double v, double k_r, double R_s, const PairGeometry& g)
    {
        return R_s * (1.0 - v * detail::leadAngleRatio (g) / k_r);
    }

    /// Geometry-free gain bound 2 v R_s / (R_s − d_safe).
    [[nodiscard]] inline double sufficientGain (double v, double R_s, double d_safe)
    {
        detail::requireSafetyBelowRadius (R_s, d_safe);
        return 2.0 * v * R_s / (R_s - d_safe);
    }

    /// Gain needed for one engagement geometry; never exceeds sufficientGain.
    [[nodiscard]] inline double geometryGainBound (double v, double R_s, double d_safe, const PairGeometry& g)
    {
        detail::requireSafetyBelowRadius (R_s, d_safe);
        return v * R_s / (R_s - d_safe) * detail::leadAngleRatio (g);
    }
} // namespace vfg
