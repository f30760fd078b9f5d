#pragma once
/**
 * @file   telemetry.hpp
 * @brief  Telemetry and run-summary serialisation.
 *
 * CSV: one row per vehicle per recorded frame, LF line endings, numbers at 17 significant
 * digits. JSONL: one object per frame carrying the same fields.
 */

#include <vfg/config.hpp>
#include <vfg/sim.hpp>

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

namespace vfg
{
    inline constexpr std::string_view kCsvHeader = "t,id,x,y,psi,v,epsilon,s,delta,omega_path,omega_rep,omega_total,dist_to_path,E_min,V";

    inline void writeCsv (std::ostream& os, const std::vector<FrameRecord>& frames)
    {
        os << kCsvHeader << '\n';
        char buf[512];
        for (const auto& f : frames)
            for (const auto& u : f.uavs)
            {
                std::snprintf (buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", f.t, u.id, u.x, u.y, u.psi, u.v, u.epsilon, u.s, u.delta, u.omega_path,
                               u.omega_rep, u.omega_total, u.dist_to_path, f.E_min, f.V);
                os << buf;
            }
    }

    namespace detail
    {
        // JSON has no infinity; an undefined pairwise minimum (one vehicle) is written as null.
        [[nodiscard]] inline nlohmann::json finiteOrNull (double v) { return std::isfinite (v) ? nlohmann::json (v) : nlohmann::json (nullptr); }
    } // namespace detail

    inline void writeJsonl (std::ostream& os, const std::vector<FrameRecord>& frames)
    {
        for (const auto& f : frames)
        {
            nlohmann::json uavs = nlohmann::json::array ();
            for (const auto& u : f.uavs)
                uavs.push_back ({{"id", u.id},
                                 {"x", u.x},
                                 {"y", u.y},
                                 {"psi", u.psi},
                                 {"v", u.v},
                                 {"epsilon", u.epsilon},
                                 {"s", u.s},
                                 {"delta", u.delta},
                                 {"omega_path", u.omega_path},
                                 {"omega_rep", u.omega_rep},
                                 {"omega_total", u.omega_total},
                                 {"dist_to_path", u.dist_to_path}});
            const nlohmann::json frame{{"t", f.t}, {"uavs", std::move (uavs)}, {"E_min", detail::finiteOrNull (f.E_min)}, {"V", f.V}};
            os << frame.dump () << '\n';
        }
    }

    /// INI-style run report: the summary plus the run metadata needed to reproduce it.
    inline void writeSummary (std::ostream& os, const Scenario& sc, const RunSummary& s)
    {
        using detail::formatDouble;
        os << "[summary]\n";
        os << "min_E_over_run = " << formatDouble (s.min_E_over_run) << "\n";
        os << "final_max_abs_epsilon = " << formatDouble (s.final_max_abs_epsilon) << "\n";
        os << "final_max_abs_delta = " << formatDouble (s.final_max_abs_delta) << "\n";
        os << "time_to_path = " << (s.time_to_path ? formatDouble (*s.time_to_path) : std::string ("never")) << "\n";
        os << "collision = " << (s.collision ? "true" : "false") << "\n";
        os << "t_final = " << formatDouble (s.t_final) << "\n";
        os << "steps = " << s.steps << "\n";
        os << "wall_time = " << formatDouble (s.wall_time) << "\n";
        os << "error = " << (s.error ? std::string (toString (*s.error)) : std::string ("none")) << "\n";
        if (s.error)
            os << "error_message = " << s.error_message << "\n";
        os << "\n[run]\n";
        os << "n_uavs = " << sc.n_uavs << "\n";
        os << "rng_seed = " << sc.rng_seed << "\n";
        os << "dt = " << formatDouble (sc.dt) << "\n";
        os << "t_end = " << formatDouble (sc.t_end) << "\n";
        os << "control_update = " << (sc.control_update == ControlUpdate::Stage ? "stage" : "step") << "\n";
        os << "integrator = rk4\n";
        os << "spacing_convention = delta = s_self - s_pred + d_eq; v = v_nom - kappa * tanh(delta); predecessor is the vehicle directly ahead\n";
        os << "on_path_tolerance = " << formatDouble (kOnPathTolerance) << "\n";
    }
} // namespace vfg
