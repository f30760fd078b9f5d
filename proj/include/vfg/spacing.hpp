#pragma once
/**
 * @file   spacing.hpp
 * @brief  Predecessor-following spacing control along the path.
 *
 * The chain is ordered by arc-length parameter at t = 0: index 0 is the leader (furthest
 * along the path) and every other vehicle regulates against the one directly ahead of it.
 */

#include <vfg/angle.hpp>
#include <vfg/path.hpp>
#include <vfg/state.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace vfg
{
    struct SpacingParams
    {
        double v_nom = 3.0;  ///< leader speed and follower set point [m/s]
        double kappa = 1.0;  ///< speed authority, 0 < κ < v_nom [m/s]
        double d_eq = 4.0;   ///< desired arc-length gap [m]

        friend bool operator== (const SpacingParams&, const SpacingParams&) = default;
    };

    /// Vehicle ids from leader (front) to tail.
    struct ChainOrder
    {
        std::vector<int> ids;

        [[nodiscard]] int leader () const { return ids.front (); }
    };

    /// Sort by descending s(y(0)); equal s goes to the lower id first.
    [[nodiscard]] inline ChainOrder establishOrder (const PathSpec& path, std::span<const UavState> states)
    {
        struct Key
        {
            double s;
            int id;
        };
        std::vector<Key> keys;
        keys.reserve (states.size ());
        for (const auto& st : states)
            keys.push_back ({arcLength (path, st.y), st.id});
        std::stable_sort (keys.begin (), keys.end (), [] (const Key& l, const Key& r) {
            if (l.s != r.s)
                return l.s > r.s;
            return l.id < r.id;
        });
        ChainOrder order;
        order.ids.reserve (keys.size ());
        for (const auto& k : keys)
            order.ids.push_back (k.id);
        return order;
    }

    /// Literal spacing error s_self − s_pred − d_eq.
    [[nodiscard]] constexpr double spacingError (double sSelf, double sPred, double dEq) noexcept { return sSelf - sPred - dEq; }

    /**
     * @brief Spacing error used by the closed loop: s_self − (s_pred − d_eq).
     *
     * Positive when the follower sits ahead of its slot d_eq behind the predecessor, so the
     * speed law v_nom − κ tanh(Δ) slows it down. With the predecessor ahead this is the sign
     * under which Δ̇ = v_self − v_pred makes the chain converge.
     */
    [[nodiscard]] constexpr double chainSpacingError (double sSelf, double sPred, double dEq) noexcept { return sSelf - sPred + dEq; }

    /// Leader: v_nom. Follower: v_nom − κ tanh(Δ), strictly inside (v_nom − κ, v_nom + κ).
    [[nodiscard]] inline double speedCommand (const SpacingParams& params, double delta, bool isLeader) noexcept
    {
        if (isLeader)
            return params.v_nom;
        return params.v_nom - params.kappa * std::tanh (delta);
    }

    /// V = ½ Σ Δ² over the followers.
    [[nodiscard]] inline double lyapunovValue (std::span<const double> deltas) noexcept
    {
        return 0.5 * std::accumulate (deltas.begin (), deltas.end (), 0.0, [] (double acc, double d) { return acc + d * d; });
    }

    /// ṡ = v cos(ψ − χᵖ), the velocity component along the path tangent.
    [[nodiscard]] inline double pathProgressRate (double v, double psi, double chiP) noexcept { return v * std::cos (wrapAngle (psi - chiP)); }
} // namespace vfg
