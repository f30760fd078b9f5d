#pragma once
/**
 * @file   engagement.hpp
 * @brief  Two-vehicle closed loop under pure rotational repulsion, and the Monte-Carlo
 *         certification harness built on it.
 *
 * Each vehicle flies at a constant speed and turns at ψ̇ = ω_rep only (no path term), which
 * is the setting of the collision-avoidance analysis. The loop is integrated with classical
 * RK4, re-evaluating the repulsion at every stage.
 */

#include <vfg/avoidance.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace vfg
{
    struct EngagementResult
    {
        double min_separation = std::numeric_limits<double>::infinity ();
        double time_of_min = 0.0;
        double duration = 0.0;
        bool collided = false;  ///< separation fell below the coincidence guard
    };

    struct EngagementSettings
    {
        double dt = 1e-3;
        double t_max = 20.0;
    };

    namespace detail
    {
        using PairState = std::array<double, 6>;  // x_i, y_i, ψ_i, x_j, y_j, ψ_j

        [[nodiscard]] inline double pairSeparation (const PairState& s) noexcept { return std::hypot (s[3] - s[0], s[4] - s[1]); }

        [[nodiscard]] inline PairState pairDerivative (const AvoidanceParams& p, const PairState& s, double vi, double vj, bool& coincident)
        {
            const double dx = s[3] - s[0];
            const double dy = s[4] - s[1];
            const double d = std::hypot (dx, dy);
            double wi = 0.0;
            double wj = 0.0;
            if (d < kCoincidenceGuard)
                coincident = true;
            else if (d <= p.R_s)
            {
                const double beta = std::atan2 (dy, dx);
                const double w = repulsionWeight (p, d);
                wi = -w * std::sin (beta - s[2]);
                wj = -w * std::sin (beta + kPi - s[5]);
            }
            return {vi * std::cos (s[2]), vi * std::sin (s[2]), wi, vj * std::cos (s[5]), vj * std::sin (s[5]), wj};
        }

        [[nodiscard]] inline PairState pairRk4 (const AvoidanceParams& p, const PairState& s, double vi, double vj, double dt, bool& coincident)
        {
            auto axpy = [] (const PairState& a, const PairState& b, double h) {
                PairState r;
                for (std::size_t k = 0; k < r.size (); ++k)
                    r[k] = a[k] + h * b[k];
                return r;
            };
            const PairState k1 = pairDerivative (p, s, vi, vj, coincident);
            const PairState k2 = pairDerivative (p, axpy (s, k1, dt / 2), vi, vj, coincident);
            const PairState k3 = pairDerivative (p, axpy (s, k2, dt / 2), vi, vj, coincident);
            const PairState k4 = pairDerivative (p, axpy (s, k3, dt), vi, vj, coincident);
            PairState out;
            for (std::size_t k = 0; k < out.size (); ++k)
                out[k] = s[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
            return out;
        }
    } // namespace detail

    /// Closed-loop pair trajectory sampled every step; positions and headings of both vehicles.
    struct EngagementTrace
    {
        std::vector<double> t;
        std::vector<UavState> a;
        std::vector<UavState> b;
    };

    /// Integrate the pair for @p steps steps of @p dt and return every state.
    [[nodiscard]] inline EngagementTrace traceEngagement (const AvoidanceParams& params, const UavState& a, const UavState& b, double dt, int steps)
    {
        EngagementTrace trace;
        detail::PairState s{a.x, a.y, a.psi, b.x, b.y, b.psi};
        bool coincident = false;
        for (int n = 0; n <= steps; ++n)
        {
            trace.t.push_back (n * dt);
            trace.a.push_back ({a.id, s[0], s[1], s[2], a.v});
            trace.b.push_back ({b.id, s[3], s[4], s[5], b.v});
            if (n < steps)
                s = detail::pairRk4 (params, s, a.v, b.v, dt, coincident);
        }
        if (coincident)
            throw Error (ErrorCode::CoincidentPositions, "engagement trace passed through a coincidence");
        return trace;
    }

    /**
     * @brief Fly two vehicles (speeds a.v and b.v) until they separate beyond R_s or t_max.
     *
     * Returns the minimum separation over the run.
     */
    [[nodiscard]] inline EngagementResult simulateEngagement (const AvoidanceParams& params, const UavState& a, const UavState& b, EngagementSettings settings = {})
    {
        EngagementResult r;
        detail::PairState s{a.x, a.y, a.psi, b.x, b.y, b.psi};
        double t = 0.0;
        double d = detail::pairSeparation (s);
        r.min_separation = d;
        bool coincident = false;
        while (t < settings.t_max)
        {
            const double prev = d;
            s = detail::pairRk4 (params, s, a.v, b.v, settings.dt, coincident);
            t += settings.dt;
            d = detail::pairSeparation (s);
            if (coincident)
            {
                r.collided = true;
                r.min_separation = 0.0;
                r.time_of_min = t;
                break;
            }
            if (d < r.min_separation)
            {
                r.min_separation = d;
                r.time_of_min = t;
            }
            if (d > params.R_s && d > prev)
                break;
        }
        r.duration = t;
        return r;
    }

    /// One sampled two-vehicle geometry at separation R_s with a closing range rate.
    struct EngagementSample
    {
        UavState a;
        UavState b;
        PairGeometry geometry;
        bool near_degenerate = false;  ///< both |sin φ| within 1e−6 of zero
    };

    /// Flag threshold for geometries close to the line-of-sight degeneracy.
    inline constexpr double kNearDegenerateSin = 1e-6;

    /**
     * @brief Draw an engagement: a at the origin, b at distance R_s with uniform bearing, both
     *        headings uniform; rejected until the pair is closing.
     */
    template <typename Rng> [[nodiscard]] EngagementSample sampleEngagement (Rng& rng, double R_s, double v_a, double v_b)
    {
        std::uniform_real_distribution<double> angle (-kPi, kPi);
        for (;;)
        {
            EngagementSample s;
            const double beta = angle (rng);
            s.a = {0, 0.0, 0.0, wrapAngle (angle (rng)), v_a};
            s.b = {1, R_s * std::cos (beta), R_s * std::sin (beta), wrapAngle (angle (rng)), v_b};
            s.geometry = pairGeometry (s.a, s.b);
            const double closing = v_b * std::cos (s.geometry.phi_j) - v_a * std::cos (s.geometry.phi_i);
            if (!(closing < 0.0))
                continue;
            s.near_degenerate = std::abs (std::sin (s.geometry.phi_i)) < kNearDegenerateSin && std::abs (std::sin (s.geometry.phi_j)) < kNearDegenerateSin;
            return s;
        }
    }

    struct CertifyRequest
    {
        double v = 3.0;
        double R_s = 1.5;
        double d_safe = 0.4;
        double k_r = 11.0;
        int n_samples = 1000;
        unsigned long long seed = 1;
        double speed_skew = 0.0;  ///< κ; when > 0 also fly every geometry at v + κ vs v − κ
        EngagementSettings settings{};
    };

    struct CertifyReport
    {
        double sufficient_gain = 0.0;
        bool gain_ok = false;
        int samples = 0;
        int near_degenerate = 0;
        int violations = 0;  ///< non-degenerate samples with min separation <= d_safe
        double worst_min_separation = std::numeric_limits<double>::infinity ();
        EngagementSample worst;
        std::vector<double> min_separations;  ///< per non-degenerate sample, in sample order
        double skew_worst_min_separation = std::numeric_limits<double>::quiet_NaN ();
        bool certified = false;
    };

    [[nodiscard]] inline CertifyReport certify (const CertifyRequest& req)
    {
        if (!(req.v > 0.0))
            throw Error (ErrorCode::InvalidParams, "v must be > 0");
        if (!(req.k_r >= 0.0))
            throw Error (ErrorCode::InvalidParams, "k_r must be >= 0");
        if (req.n_samples < 1)
            throw Error (ErrorCode::InvalidParams, "n_samples must be >= 1");
        if (!(req.speed_skew >= 0.0) || !(req.speed_skew < req.v))
            throw Error (ErrorCode::InvalidParams, "speed skew must lie in [0, v)");

        CertifyReport rep;
        rep.sufficient_gain = sufficientGain (req.v, req.R_s, req.d_safe);
        rep.gain_ok = req.k_r > rep.sufficient_gain;
        const AvoidanceParams params{req.k_r, req.R_s, req.d_safe};

        std::mt19937_64 rng (req.seed);
        for (int n = 0; n < req.n_samples; ++n)
        {
            EngagementSample s = sampleEngagement (rng, req.R_s, req.v, req.v);
            ++rep.samples;
            if (s.near_degenerate)
            {
                ++rep.near_degenerate;
                continue;
            }
            const EngagementResult r = simulateEngagement (params, s.a, s.b, req.settings);
            rep.min_separations.push_back (r.min_separation);
            if (r.min_separation <= req.d_safe)
                ++rep.violations;
            if (r.min_separation < rep.worst_min_separation)
            {
                rep.worst_min_separation = r.min_separation;
                rep.worst = s;
            }
            if (req.speed_skew > 0.0)
            {
                UavState fast = s.a;
                UavState slow = s.b;
                fast.v = req.v + req.speed_skew;
                slow.v = req.v - req.speed_skew;
                const double closing = slow.v * std::cos (s.geometry.phi_j) - fast.v * std::cos (s.geometry.phi_i);
                if (closing < 0.0)
                {
                    const EngagementResult rs = simulateEngagement (params, fast, slow, req.settings);
                    if (std::isnan (rep.skew_worst_min_separation) || rs.min_separation < rep.skew_worst_min_separation)
                        rep.skew_worst_min_separation = rs.min_separation;
                }
            }
        }
        rep.certified = rep.gain_ok && rep.violations == 0 && !rep.min_separations.empty ();
        return rep;
    }
} // namespace vfg
