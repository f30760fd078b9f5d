#pragma once
/**
 * @file   sim.hpp
 * @brief  Fixed-step multi-vehicle simulation: control evaluation, RK4 integration, metrics.
 *
 * Every control quantity for every vehicle is computed from one frozen snapshot of the world,
 * so the update is synchronous and independent of vehicle order.
 */

#include <vfg/angle.hpp>
#include <vfg/avoidance.hpp>
#include <vfg/error.hpp>
#include <vfg/guidance.hpp>
#include <vfg/path.hpp>
#include <vfg/scenario.hpp>
#include <vfg/spacing.hpp>
#include <vfg/state.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vfg
{
    /// Cross-track threshold that counts a vehicle as on the path.
    inline constexpr double kOnPathTolerance = 0.05;

    /// Control quantities for one vehicle at one snapshot.
    struct UavControl
    {
        double epsilon = 0.0;
        double chi_p = 0.0;
        double psi_des = 0.0;
        double omega_path = 0.0;
        double omega_rep = 0.0;
        double omega_total = 0.0;  ///< ω_path + ω_rep before any clamp
        double omega_applied = 0.0;
        double s = 0.0;
        double delta = 0.0;  ///< chain spacing error; 0 for the leader
        double v = 0.0;
    };

    struct UavTelemetry
    {
        int id = 0;
        double x = 0.0;
        double y = 0.0;
        double psi = 0.0;
        double v = 0.0;
        double epsilon = 0.0;
        double s = 0.0;
        double delta = 0.0;
        double omega_path = 0.0;
        double omega_rep = 0.0;
        double omega_total = 0.0;
        double dist_to_path = 0.0;
    };

    struct FrameRecord
    {
        double t = 0.0;
        std::vector<UavTelemetry> uavs;
        double E_min = std::numeric_limits<double>::infinity ();
        double V = 0.0;
    };

    struct RunSummary
    {
        double min_E_over_run = std::numeric_limits<double>::infinity ();
        double final_max_abs_epsilon = 0.0;
        double final_max_abs_delta = 0.0;
        std::optional<double> time_to_path;  ///< first t with max|ε| < 0.05 m
        bool collision = false;
        double wall_time = 0.0;
        double t_final = 0.0;
        long steps = 0;
        std::optional<ErrorCode> error;
        std::string error_message;
    };

    struct RunResult
    {
        std::vector<FrameRecord> frames;
        RunSummary summary;
    };

    /// Minimum pairwise distance (𝓔). Needs at least two vehicles.
    [[nodiscard]] inline double metricsE (std::span<const UavState> world)
    {
        if (world.size () < 2)
            throw Error (ErrorCode::InsufficientAgents, "pairwise distance needs at least two vehicles");
        double best = std::numeric_limits<double>::infinity ();
        for (std::size_t i = 0; i < world.size (); ++i)
            for (std::size_t j = i + 1; j < world.size (); ++j)
                best = std::min (best, std::hypot (world[i].x - world[j].x, world[i].y - world[j].y));
        return best;
    }

    namespace detail
    {
        // Cubic Hermite position of one vehicle at fraction u of a step of length h.
        [[nodiscard]] inline Position2D hermite (const UavState& a, double va, const UavState& b, double vb, double h, double u) noexcept
        {
            const double u2 = u * u;
            const double u3 = u2 * u;
            const double h00 = 2 * u3 - 3 * u2 + 1;
            const double h10 = u3 - 2 * u2 + u;
            const double h01 = -2 * u3 + 3 * u2;
            const double h11 = u3 - u2;
            return {h00 * a.x + h10 * h * va * std::cos (a.psi) + h01 * b.x + h11 * h * vb * std::cos (b.psi),
                    h00 * a.y + h10 * h * va * std::sin (a.psi) + h01 * b.y + h11 * h * vb * std::sin (b.psi)};
        }
    } // namespace detail

    /**
     * @brief Minimum pairwise distance over one integration step, not only at its ends.
     *
     * Each trajectory is the cubic Hermite interpolant of the endpoint positions and velocities
     * (speeds @p v0, @p v1 along the headings). Pairs that cannot approach the endpoint minimum
     * within the step are skipped; the rest are scanned and refined by golden section.
     */
    [[nodiscard]] inline double minSeparationOverStep (std::span<const UavState> w0, std::span<const double> v0, std::span<const UavState> w1, std::span<const double> v1, double h)
    {
        const std::size_t n = w0.size ();
        double best = std::numeric_limits<double>::infinity ();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                best = std::min ({best, std::hypot (w0[i].x - w0[j].x, w0[i].y - w0[j].y), std::hypot (w1[i].x - w1[j].x, w1[i].y - w1[j].y)});

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
            {
                const double ends = std::min (std::hypot (w0[i].x - w0[j].x, w0[i].y - w0[j].y), std::hypot (w1[i].x - w1[j].x, w1[i].y - w1[j].y));
                const double reach = (std::abs (v0[i]) + std::abs (v0[j]) + std::abs (v1[i]) + std::abs (v1[j])) * h;
                if (ends - reach >= best)
                    continue;
                auto dist2 = [&] (double u) {
                    const Position2D a = detail::hermite (w0[i], v0[i], w1[i], v1[i], h, u);
                    const Position2D b = detail::hermite (w0[j], v0[j], w1[j], v1[j], h, u);
                    return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
                };
                constexpr int kScan = 16;
                int arg = 0;
                double low = std::numeric_limits<double>::infinity ();
                for (int k = 0; k <= kScan; ++k)
                    if (const double d = dist2 (static_cast<double> (k) / kScan); d < low)
                    {
                        low = d;
                        arg = k;
                    }
                const double lo = std::max (arg - 1, 0) / static_cast<double> (kScan);
                const double hi = std::min (arg + 1, kScan) / static_cast<double> (kScan);
                const double u = detail::goldenSectionMin (dist2, lo, hi, 1e-9);
                best = std::min (best, std::sqrt (std::min (low, dist2 (u))));
            }
        return best;
    }

    class Simulator
    {
      public:
        /// Samples the initial states from the scenario.
        explicit Simulator (Scenario scenario) : Simulator (scenario, sampleInitialStates (scenario)) {}

        Simulator (Scenario scenario, std::vector<UavState> initial) : scenario_ (std::move (scenario)), world_ (std::move (initial))
        {
            validateScenario (scenario_);
            if (world_.empty ())
                throw Error (ErrorCode::InvalidParams, "simulation needs at least one vehicle");
            order_ = establishOrder (scenario_.path, world_);
            predecessor_.assign (world_.size (), -1);
            std::vector<int> indexOfId;
            for (std::size_t k = 0; k < world_.size (); ++k)
            {
                const int id = world_[k].id;
                if (id < 0)
                    throw Error (ErrorCode::InvalidParams, "vehicle ids must be non-negative");
                if (static_cast<std::size_t> (id) >= indexOfId.size ())
                    indexOfId.resize (static_cast<std::size_t> (id) + 1, -1);
                if (indexOfId[static_cast<std::size_t> (id)] != -1)
                    throw Error (ErrorCode::InvalidParams, "duplicate vehicle id " + std::to_string (id));
                indexOfId[static_cast<std::size_t> (id)] = static_cast<int> (k);
            }
            for (std::size_t c = 1; c < order_.ids.size (); ++c)
            {
                const int self = indexOfId[static_cast<std::size_t> (order_.ids[c])];
                predecessor_[static_cast<std::size_t> (self)] = indexOfId[static_cast<std::size_t> (order_.ids[c - 1])];
            }
            for (auto& s : world_)
                s.psi = wrapAngle (s.psi);
            ctl_ = computeControls (world_);
            for (std::size_t k = 0; k < world_.size (); ++k)
                world_[k].v = ctl_[k].v;
        }

        [[nodiscard]] const Scenario& scenario () const noexcept { return scenario_; }
        [[nodiscard]] const std::vector<UavState>& states () const noexcept { return world_; }
        [[nodiscard]] const ChainOrder& order () const noexcept { return order_; }
        [[nodiscard]] double time () const noexcept { return t_; }
        [[nodiscard]] long stepCount () const noexcept { return steps_; }

        /// Minimum pairwise distance reached inside the last step (endpoints included).
        [[nodiscard]] double lastStepMinSeparation () const noexcept { return lastStepMin_; }

        /// Predecessor index into states() for each vehicle; −1 for the leader.
        [[nodiscard]] const std::vector<int>& predecessors () const noexcept { return predecessor_; }

        /// Controls evaluated at an arbitrary snapshot laid out like states().
        [[nodiscard]] std::vector<UavControl> computeControls (std::span<const UavState> world) const
        {
            const auto& sc = scenario_;
            std::vector<UavControl> out (world.size ());
            for (std::size_t i = 0; i < world.size (); ++i)
                out[i].s = arcLength (sc.path, world[i].y);

            std::vector<UavState> neighbors;
            neighbors.reserve (world.size ());
            for (std::size_t i = 0; i < world.size (); ++i)
            {
                const UavState& me = world[i];
                UavControl& c = out[i];
                c.epsilon = crossTrackError (sc.path, me.position ());
                c.chi_p = tangentDirection (sc.path, me.position ());
                c.psi_des = desiredHeading (sc.path, sc.guidance.k_g, me.position ());
                c.omega_path = headingRateCommand (sc.guidance.k_psi, c.psi_des, me.psi);

                neighbors.clear ();
                for (std::size_t j = 0; j < world.size (); ++j)
                    if (j != i)
                        neighbors.push_back (world[j]);
                c.omega_rep = sc.avoidance.k_r > 0.0 ? repulsionCommand (sc.avoidance, me, neighbors) : 0.0;
                c.omega_total = totalHeadingRate (c.omega_path, c.omega_rep);
                c.omega_applied = sc.max_omega ? std::clamp (c.omega_total, -*sc.max_omega, *sc.max_omega) : c.omega_total;

                const int pred = predecessor_[i];
                if (pred < 0)
                {
                    c.delta = 0.0;
                    c.v = speedCommand (sc.spacing, 0.0, true);
                }
                else
                {
                    c.delta = chainSpacingError (c.s, out[static_cast<std::size_t> (pred)].s, sc.spacing.d_eq);
                    const bool gated = sc.spacing_gate && !(std::abs (c.epsilon) < *sc.spacing_gate);
                    c.v = gated ? sc.spacing.v_nom : speedCommand (sc.spacing, c.delta, false);
                }
            }
            return out;
        }

        [[nodiscard]] const std::vector<UavControl>& controls () const noexcept { return ctl_; }

        /**
         * @brief Advance one step of classical RK4.
         *
         * Throws CollisionDetected after the step if any pair came within d_safe at any time
         * inside the step; the state is still advanced so the configuration can be inspected.
         */
        void step ()
        {
            const double dt = scenario_.dt;
            const std::size_t n = world_.size ();
            const std::vector<UavControl> c0 = ctl_;
            const std::vector<UavState> w0 = world_;

            using Deriv = std::vector<std::array<double, 3>>;
            auto derivative = [&] (std::span<const UavState> w, const std::vector<UavControl>& c) {
                Deriv d (n);
                for (std::size_t k = 0; k < n; ++k)
                    d[k] = {c[k].v * std::cos (w[k].psi), c[k].v * std::sin (w[k].psi), c[k].omega_applied};
                return d;
            };
            auto advance = [&] (const Deriv& d, double h) {
                std::vector<UavState> w = world_;
                for (std::size_t k = 0; k < n; ++k)
                {
                    w[k].x += h * d[k][0];
                    w[k].y += h * d[k][1];
                    w[k].psi += h * d[k][2];
                }
                return w;
            };
            const bool perStage = scenario_.control_update == ControlUpdate::Stage;
            auto stage = [&] (const std::vector<UavState>& w) { return derivative (w, perStage ? computeControls (w) : c0); };

            const Deriv k1 = derivative (world_, c0);
            const Deriv k2 = stage (advance (k1, dt / 2));
            const Deriv k3 = stage (advance (k2, dt / 2));
            const Deriv k4 = stage (advance (k3, dt));
            for (std::size_t k = 0; k < n; ++k)
            {
                world_[k].x += dt / 6.0 * (k1[k][0] + 2.0 * k2[k][0] + 2.0 * k3[k][0] + k4[k][0]);
                world_[k].y += dt / 6.0 * (k1[k][1] + 2.0 * k2[k][1] + 2.0 * k3[k][1] + k4[k][1]);
                world_[k].psi = wrapAngle (world_[k].psi + dt / 6.0 * (k1[k][2] + 2.0 * k2[k][2] + 2.0 * k3[k][2] + k4[k][2]));
                world_[k].v = c0[k].v;
            }
            ++steps_;
            t_ = steps_ * dt;
            ctl_ = computeControls (world_);

            if (n >= 2)
            {
                std::vector<double> v0 (n), v1 (n);
                for (std::size_t k = 0; k < n; ++k)
                {
                    v0[k] = c0[k].v;
                    v1[k] = ctl_[k].v;
                }
                lastStepMin_ = minSeparationOverStep (w0, v0, world_, v1, dt);
                if (lastStepMin_ <= scenario_.avoidance.d_safe)
                    throw Error (ErrorCode::CollisionDetected, "minimum separation " + std::to_string (lastStepMin_) + " m <= d_safe during the step ending at t = " + std::to_string (t_));
            }
        }

        /// Telemetry row set for the current state.
        [[nodiscard]] FrameRecord frame () const
        {
            const auto ctl = controls ();
            FrameRecord f;
            f.t = t_;
            f.uavs.reserve (world_.size ());
            std::vector<double> deltas;
            for (std::size_t k = 0; k < world_.size (); ++k)
            {
                const auto& s = world_[k];
                const auto& c = ctl[k];
                f.uavs.push_back ({s.id, s.x, s.y, s.psi, c.v, c.epsilon, c.s, c.delta, c.omega_path, c.omega_rep, c.omega_total, distanceToPath (scenario_.path, s.position ())});
                if (predecessor_[k] >= 0)
                    deltas.push_back (c.delta);
            }
            if (world_.size () >= 2)
                f.E_min = metricsE (world_);
            f.V = lyapunovValue (deltas);
            return f;
        }

      private:
        Scenario scenario_;
        std::vector<UavState> world_;
        ChainOrder order_;
        std::vector<int> predecessor_;
        std::vector<UavControl> ctl_;
        double lastStepMin_ = std::numeric_limits<double>::infinity ();
        double t_ = 0.0;
        long steps_ = 0;
    };

    namespace detail
    {
        inline void updateRunningSummary (RunSummary& sum, const Simulator& sim, const std::vector<UavControl>& ctl)
        {
            const auto& w = sim.states ();
            if (w.size () >= 2)
                sum.min_E_over_run = std::min ({sum.min_E_over_run, metricsE (w), sim.lastStepMinSeparation ()});
            double maxEps = 0.0;
            double maxDelta = 0.0;
            for (std::size_t k = 0; k < ctl.size (); ++k)
            {
                maxEps = std::max (maxEps, std::abs (ctl[k].epsilon));
                if (sim.predecessors ()[k] >= 0)
                    maxDelta = std::max (maxDelta, std::abs (ctl[k].delta));
            }
            if (!sum.time_to_path && maxEps < kOnPathTolerance)
                sum.time_to_path = sim.time ();
            sum.final_max_abs_epsilon = maxEps;
            sum.final_max_abs_delta = maxDelta;
            sum.t_final = sim.time ();
            sum.steps = sim.stepCount ();
        }
    } // namespace detail

    /// Number of integration steps covering [0, t_end].
    [[nodiscard]] inline long stepsFor (const Scenario& sc) { return std::lround (sc.t_end / sc.dt); }

    /**
     * @brief Run a scenario from given initial states to t_end.
     *
     * A frame is recorded at t = 0, every output_decimation steps, and at the final state.
     * Errors stop the run; the frames gathered so far (plus the failing state when it can be
     * evaluated) are returned with the error recorded in the summary.
     */
    [[nodiscard]] inline RunResult runFrom (const Scenario& scenario, std::vector<UavState> initial)
    {
        const auto start = std::chrono::steady_clock::now ();
        RunResult res;
        auto& sum = res.summary;
        std::optional<Simulator> sim;
        try
        {
            sim.emplace (scenario, std::move (initial));
            const long total = stepsFor (scenario);
            const long dec = scenario.output_decimation;
            detail::updateRunningSummary (sum, *sim, sim->controls ());
            res.frames.push_back (sim->frame ());
            for (long n = 1; n <= total; ++n)
            {
                sim->step ();
                detail::updateRunningSummary (sum, *sim, sim->controls ());
                if (n % dec == 0 || n == total)
                    res.frames.push_back (sim->frame ());
            }
        }
        catch (const Error& e)
        {
            sum.error = e.code ();
            sum.error_message = e.what ();
            if (sim)
            {
                sum.t_final = sim->time ();
                sum.steps = sim->stepCount ();
                if (sim->states ().size () >= 2)
                    sum.min_E_over_run = std::min ({sum.min_E_over_run, metricsE (sim->states ()), sim->lastStepMinSeparation ()});
                try
                {
                    if (res.frames.empty () || res.frames.back ().t != sim->time ())
                        res.frames.push_back (sim->frame ());
                }
                catch (const Error&)
                {
                }
            }
        }
        sum.collision = sum.min_E_over_run <= scenario.avoidance.d_safe;
        sum.wall_time = std::chrono::duration<double> (std::chrono::steady_clock::now () - start).count ();
        return res;
    }

    /// Run a scenario from its sampled (or explicit) initial states.
    [[nodiscard]] inline RunResult run (const Scenario& scenario)
    {
        std::vector<UavState> initial;
        try
        {
            initial = sampleInitialStates (scenario);
        }
        catch (const Error& e)
        {
            RunResult res;
            res.summary.error = e.code ();
            res.summary.error_message = e.what ();
            return res;
        }
        return runFrom (scenario, std::move (initial));
    }
} // namespace vfg
