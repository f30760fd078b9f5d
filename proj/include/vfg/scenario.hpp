#pragma once
/**
 * @file   scenario.hpp
 * @brief  Scenario description, validation, and initial-condition sampling.
 */

#include <vfg/avoidance.hpp>
#include <vfg/error.hpp>
#include <vfg/guidance.hpp>
#include <vfg/path.hpp>
#include <vfg/spacing.hpp>
#include <vfg/state.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace vfg
{
    enum class HeadingPolicy
    {
        UniformRandom,
        PathTangent,
        Fixed,
    };

    /// When the controls are re-evaluated inside one integration step.
    enum class ControlUpdate
    {
        Step,   ///< once per step, held constant over the four RK4 stages
        Stage,  ///< at every RK4 stage
    };

    struct InitRegion
    {
        double x_min = -20.0;
        double x_max = 20.0;
        double y_min = -20.0;
        double y_max = 20.0;

        friend bool operator== (const InitRegion&, const InitRegion&) = default;
    };

    /// Explicit initial pose; overrides sampling when the scenario lists any.
    struct InitialPose
    {
        double x = 0.0;
        double y = 0.0;
        double psi = 0.0;

        friend bool operator== (const InitialPose&, const InitialPose&) = default;
    };

    struct Scenario
    {
        PathSpec path = PathSpec::straightLine ();
        int n_uavs = 15;
        InitRegion init_region{};
        HeadingPolicy init_heading = HeadingPolicy::UniformRandom;
        double fixed_heading = 0.0;                  ///< used when init_heading is Fixed
        std::optional<double> min_init_separation;   ///< defaults to R_s
        std::uint64_t rng_seed = 1;
        GuidanceParams guidance{};
        std::optional<double> max_omega;             ///< optional |ω| clamp [rad/s]
        AvoidanceParams avoidance{};
        SpacingParams spacing{};
        std::optional<double> spacing_gate;          ///< follower runs the speed law only while |ε| < gate
        double dt = 0.01;
        double t_end = 40.0;
        int output_decimation = 10;
        ControlUpdate control_update = ControlUpdate::Stage;
        std::vector<InitialPose> poses;

        [[nodiscard]] double minInitSeparation () const { return min_init_separation.value_or (avoidance.R_s); }

        friend bool operator== (const Scenario&, const Scenario&) = default;
    };

    namespace detail
    {
        [[noreturn]] inline void rejectKey (const std::string& key, const std::string& constraint)
        {
            throw Error (ErrorCode::ConfigError, key + ": " + constraint);
        }

        inline void requireFinite (const std::string& key, double v)
        {
            if (!std::isfinite (v))
                rejectKey (key, "must be finite");
        }
    } // namespace detail

    /// Throws ConfigError naming the first offending key.
    inline void validateScenario (const Scenario& sc)
    {
        using detail::rejectKey;
        using detail::requireFinite;

        if (sc.path.kind () == PathKind::Sinusoid)
        {
            if (!(sc.path.amplitude () > 0.0))
                rejectKey ("path.amplitude", "must be > 0");
            if (!(sc.path.frequency () > 0.0))
                rejectKey ("path.frequency", "must be > 0");
        }
        if (!(sc.guidance.k_g > 0.0) || !std::isfinite (sc.guidance.k_g))
            rejectKey ("guidance.k_g", "must be > 0");
        if (!(sc.guidance.k_psi > 0.0) || !std::isfinite (sc.guidance.k_psi))
            rejectKey ("guidance.k_psi", "must be > 0");
        if (sc.max_omega && !(*sc.max_omega > 0.0))
            rejectKey ("guidance.max_omega", "must be > 0 when set");

        requireFinite ("avoidance.k_r", sc.avoidance.k_r);
        if (!(sc.avoidance.k_r >= 0.0))
            rejectKey ("avoidance.k_r", "must be >= 0");
        if (!(sc.avoidance.d_safe > 0.0))
            rejectKey ("avoidance.d_safe", "must be > 0");
        requireFinite ("avoidance.R_s", sc.avoidance.R_s);
        if (!(sc.avoidance.R_s > sc.avoidance.d_safe))
            rejectKey ("avoidance.R_s", "must be > d_safe");

        requireFinite ("spacing.v_nom", sc.spacing.v_nom);
        if (!(sc.spacing.v_nom > 0.0))
            rejectKey ("spacing.v_nom", "must be > 0");
        if (!(sc.spacing.kappa > 0.0) || !(sc.spacing.kappa < sc.spacing.v_nom))
            rejectKey ("spacing.kappa", "must satisfy 0 < kappa < v_nom");
        if (!(sc.spacing.d_eq > 0.0) || !std::isfinite (sc.spacing.d_eq))
            rejectKey ("spacing.d_eq", "must be > 0");
        if (sc.spacing_gate && !(*sc.spacing_gate > 0.0))
            rejectKey ("spacing.spacing_gate", "must be > 0 when set");

        if (!(sc.dt > 0.0) || !std::isfinite (sc.dt))
            rejectKey ("sim.dt", "must be > 0");
        if (!(sc.t_end > sc.dt) || !std::isfinite (sc.t_end))
            rejectKey ("sim.t_end", "must be > dt");
        if (sc.output_decimation < 1)
            rejectKey ("sim.output_decimation", "must be >= 1");

        if (sc.n_uavs < 1)
            rejectKey ("init.n_uavs", "must be >= 1");
        const auto& r = sc.init_region;
        for (double v : {r.x_min, r.x_max, r.y_min, r.y_max})
            requireFinite ("init region", v);
        if (!(r.x_max > r.x_min))
            rejectKey ("init.x_max", "must be > x_min");
        if (!(r.y_max > r.y_min))
            rejectKey ("init.y_max", "must be > y_min");
        if (sc.min_init_separation && !(*sc.min_init_separation >= 0.0))
            rejectKey ("init.min_init_separation", "must be >= 0");
        if (sc.init_heading == HeadingPolicy::Fixed)
            requireFinite ("init.init_heading", sc.fixed_heading);
        if (!sc.poses.empty () && static_cast<int> (sc.poses.size ()) != sc.n_uavs)
            rejectKey ("init.poses", "must list exactly n_uavs poses");
        for (const auto& p : sc.poses)
            if (!std::isfinite (p.x) || !std::isfinite (p.y) || !std::isfinite (p.psi))
                rejectKey ("init.poses", "must be finite");
    }

    /// Non-fatal configuration concerns.
    [[nodiscard]] inline std::vector<std::string> scenarioWarnings (const Scenario& sc)
    {
        std::vector<std::string> out;
        if (sc.n_uavs > 1 && !(sc.spacing.d_eq > sc.avoidance.R_s))
            out.push_back ("spacing.d_eq <= avoidance.R_s: consecutive vehicles will sit inside each other's repulsion radius at equilibrium");
        const auto& av = sc.avoidance;
        if (sc.n_uavs > 1 && av.R_s > av.d_safe)
        {
            if (av.k_r <= sufficientGain (sc.spacing.v_nom, av.R_s, av.d_safe))
                out.push_back ("avoidance.k_r is not above the equal-speed sufficient gain 2 v_nom R_s / (R_s - d_safe)");
            else if (av.k_r <= sufficientGain (sc.spacing.v_nom + sc.spacing.kappa, av.R_s, av.d_safe))
                out.push_back ("avoidance.k_r does not cover the sufficient gain at v_nom + kappa (transient speed skew)");
        }
        return out;
    }

    /// Straight-line preset: 15 vehicles in a ±20 m square, nominal gains.
    [[nodiscard]] inline Scenario straightLinePreset ()
    {
        return Scenario{};
    }

    /// Sinusoid preset A = 5 m, k = 0.075 rad/m, 60 s horizon.
    [[nodiscard]] inline Scenario sinusoidPreset ()
    {
        Scenario sc;
        sc.path = PathSpec::sinusoid (5.0, 0.075);
        sc.t_end = 60.0;
        return sc;
    }

    /**
     * @brief Initial states for a scenario.
     *
     * Explicit poses are used verbatim. Otherwise positions are drawn uniformly in the region
     * from mt19937_64(rng_seed), whole batches being redrawn until every pair is at least
     * min_init_separation apart; headings follow the scenario policy. Vehicle ids are 0..n−1.
     */
    [[nodiscard]] inline std::vector<UavState> sampleInitialStates (const Scenario& sc)
    {
        validateScenario (sc);
        std::vector<UavState> states (static_cast<std::size_t> (sc.n_uavs));
        if (!sc.poses.empty ())
        {
            for (std::size_t i = 0; i < states.size (); ++i)
                states[i] = {static_cast<int> (i), sc.poses[i].x, sc.poses[i].y, wrapAngle (sc.poses[i].psi), sc.spacing.v_nom};
            return states;
        }

        std::mt19937_64 rng (sc.rng_seed);
        std::uniform_real_distribution<double> ux (sc.init_region.x_min, sc.init_region.x_max);
        std::uniform_real_distribution<double> uy (sc.init_region.y_min, sc.init_region.y_max);
        const double sep = sc.minInitSeparation ();

        constexpr int kMaxRejectedBatches = 10000;
        int rejected = 0;
        for (;;)
        {
            for (std::size_t i = 0; i < states.size (); ++i)
            {
                states[i].id = static_cast<int> (i);
                states[i].x = ux (rng);
                states[i].y = uy (rng);
            }
            bool ok = true;
            for (std::size_t i = 0; i < states.size () && ok; ++i)
                for (std::size_t j = i + 1; j < states.size () && ok; ++j)
                    ok = std::hypot (states[i].x - states[j].x, states[i].y - states[j].y) >= sep;
            if (ok)
                break;
            if (++rejected >= kMaxRejectedBatches)
                throw Error (ErrorCode::SamplingExhausted, "could not place " + std::to_string (sc.n_uavs) + " vehicles " + std::to_string (sep) + " m apart in the init region");
        }

        std::uniform_real_distribution<double> uh (-kPi, kPi);
        for (auto& s : states)
        {
            switch (sc.init_heading)
            {
            case HeadingPolicy::UniformRandom: s.psi = wrapAngle (uh (rng)); break;
            case HeadingPolicy::PathTangent: s.psi = wrapAngle (tangentDirection (sc.path, s.position ())); break;
            case HeadingPolicy::Fixed: s.psi = wrapAngle (sc.fixed_heading); break;
            }
            s.v = sc.spacing.v_nom;
        }
        return states;
    }
} // namespace vfg
