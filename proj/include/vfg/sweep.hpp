#pragma once
/**
 * @file   sweep.hpp
 * @brief  One-parameter scenario sweeps run on a small thread pool.
 */

#include <vfg/error.hpp>
#include <vfg/scenario.hpp>
#include <vfg/sim.hpp>

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace vfg
{
    struct SweepRow
    {
        double value = 0.0;
        RunSummary summary;
    };

    namespace detail
    {
        using Setter = std::function<void (Scenario&, double)>;

        [[nodiscard]] inline int toInt (const std::string& name, double v)
        {
            if (v != std::floor (v) || std::abs (v) > 1e9)
                throw Error (ErrorCode::ConfigError, name + ": expected an integer value");
            return static_cast<int> (v);
        }

        [[nodiscard]] inline const std::map<std::string, Setter>& sweepSetters ()
        {
            static const std::map<std::string, Setter> setters{
                {"amplitude", [] (Scenario& s, double v) { s.path = PathSpec::sinusoid (v, s.path.frequency ()); }},
                {"frequency", [] (Scenario& s, double v) { s.path = PathSpec::sinusoid (s.path.amplitude (), v); }},
                {"k_g", [] (Scenario& s, double v) { s.guidance.k_g = v; }},
                {"k_psi", [] (Scenario& s, double v) { s.guidance.k_psi = v; }},
                {"max_omega", [] (Scenario& s, double v) { s.max_omega = v; }},
                {"k_r", [] (Scenario& s, double v) { s.avoidance.k_r = v; }},
                {"R_s", [] (Scenario& s, double v) { s.avoidance.R_s = v; }},
                {"d_safe", [] (Scenario& s, double v) { s.avoidance.d_safe = v; }},
                {"v_nom", [] (Scenario& s, double v) { s.spacing.v_nom = v; }},
                {"kappa", [] (Scenario& s, double v) { s.spacing.kappa = v; }},
                {"d_eq", [] (Scenario& s, double v) { s.spacing.d_eq = v; }},
                {"spacing_gate", [] (Scenario& s, double v) { s.spacing_gate = v; }},
                {"dt", [] (Scenario& s, double v) { s.dt = v; }},
                {"t_end", [] (Scenario& s, double v) { s.t_end = v; }},
                {"rng_seed",
                 [] (Scenario& s, double v) {
                     if (v < 0 || v != std::floor (v))
                         throw Error (ErrorCode::ConfigError, "rng_seed: expected a non-negative integer");
                     s.rng_seed = static_cast<std::uint64_t> (v);
                 }},
                {"n_uavs", [] (Scenario& s, double v) { s.n_uavs = toInt ("n_uavs", v); }},
                {"x_min", [] (Scenario& s, double v) { s.init_region.x_min = v; }},
                {"x_max", [] (Scenario& s, double v) { s.init_region.x_max = v; }},
                {"y_min", [] (Scenario& s, double v) { s.init_region.y_min = v; }},
                {"y_max", [] (Scenario& s, double v) { s.init_region.y_max = v; }},
                {"min_init_separation", [] (Scenario& s, double v) { s.min_init_separation = v; }},
            };
            return setters;
        }
    } // namespace detail

    [[nodiscard]] inline std::vector<std::string> sweepableParameters ()
    {
        std::vector<std::string> names;
        for (const auto& [name, setter] : detail::sweepSetters ())
            names.push_back (name);
        return names;
    }

    /// Set one numeric field. Accepts "k_r" or the sectioned form "avoidance.k_r".
    inline void applyParameter (Scenario& sc, std::string name, double value)
    {
        if (const auto dot = name.find ('.'); dot != std::string::npos)
            name = name.substr (dot + 1);
        const auto& setters = detail::sweepSetters ();
        const auto it = setters.find (name);
        if (it == setters.end ())
            throw Error (ErrorCode::ConfigError, name + ": not a sweepable scenario parameter");
        if ((name == "amplitude" || name == "frequency") && sc.path.kind () != PathKind::Sinusoid)
            throw Error (ErrorCode::ConfigError, name + ": only valid for a sinusoid path");
        it->second (sc, value);
    }

    /// Threads for sweeps: SIM_THREADS if set and positive, otherwise hardware concurrency.
    [[nodiscard]] inline unsigned sweepThreads ()
    {
        if (const char* env = std::getenv ("SIM_THREADS"))
        {
            const int n = std::atoi (env);
            if (n > 0)
                return static_cast<unsigned> (n);
        }
        return std::max (1u, std::thread::hardware_concurrency ());
    }

    /**
     * @brief Run one simulation per value. Rows come back in input order.
     *
     * Every scenario is built and validated before any run starts, so a bad value fails fast.
     */
    [[nodiscard]] inline std::vector<SweepRow> runSweep (const Scenario& base, const std::string& parameter, const std::vector<double>& values, unsigned threads = sweepThreads ())
    {
        if (values.empty ())
            throw Error (ErrorCode::ConfigError, "sweep: no values given");
        std::vector<Scenario> scenarios;
        scenarios.reserve (values.size ());
        for (double v : values)
        {
            Scenario sc = base;
            applyParameter (sc, parameter, v);
            validateScenario (sc);
            scenarios.push_back (std::move (sc));
        }

        std::vector<SweepRow> rows (values.size ());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < values.size (); i = next++)
                rows[i] = {values[i], run (scenarios[i]).summary};
        };
        const unsigned n = std::max (1u, std::min<unsigned> (threads, static_cast<unsigned> (values.size ())));
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n; ++t)
            pool.emplace_back (worker);
        worker ();
        return rows;
    }
} // namespace vfg
