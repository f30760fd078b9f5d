#pragma once
/**
 * @file   config.hpp
 * @brief  Scenario file reader and writer.
 *
 * INI-style sections [path] [guidance] [avoidance] [spacing] [sim] [init] with snake_case
 * keys. Unknown sections or keys are rejected. Numbers are written in shortest round-trip
 * form so a written file parses back to an identical Scenario.
 */

#include <vfg/error.hpp>
#include <vfg/scenario.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace vfg
{
    namespace detail
    {
        [[nodiscard]] inline std::string trim (std::string_view s)
        {
            const auto b = s.find_first_not_of (" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of (" \t\r\n");
            return std::string (s.substr (b, e - b + 1));
        }

        [[nodiscard]] inline double parseDouble (const std::string& key, std::string_view text)
        {
            const std::string t = trim (text);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars (t.data (), t.data () + t.size (), v);
            if (t.empty () || ec != std::errc{} || ptr != t.data () + t.size ())
                throw Error (ErrorCode::ConfigError, key + ": expected a number, got '" + t + "'");
            return v;
        }

        template <typename Int> [[nodiscard]] Int parseInteger (const std::string& key, std::string_view text)
        {
            const std::string t = trim (text);
            Int v{};
            const auto [ptr, ec] = std::from_chars (t.data (), t.data () + t.size (), v);
            if (t.empty () || ec != std::errc{} || ptr != t.data () + t.size ())
                throw Error (ErrorCode::ConfigError, key + ": expected an integer, got '" + t + "'");
            return v;
        }

        /// Shortest text that parses back to exactly @p v.
        [[nodiscard]] inline std::string formatDouble (double v)
        {
            char buf[40];
            const auto res = std::to_chars (buf, buf + sizeof buf, v);
            return std::string (buf, res.ptr);
        }

        [[nodiscard]] inline std::vector<InitialPose> parsePoses (const std::string& key, std::string_view text)
        {
            std::vector<InitialPose> out;
            std::string_view rest = text;
            while (!rest.empty ())
            {
                const auto semi = rest.find (';');
                const std::string item = trim (rest.substr (0, semi));
                rest = semi == std::string_view::npos ? std::string_view{} : rest.substr (semi + 1);
                if (item.empty ())
                    continue;
                std::istringstream is (item);
                std::string a, b, c, extra;
                if (!(is >> a >> b >> c) || (is >> extra))
                    throw Error (ErrorCode::ConfigError, key + ": each pose is 'x y psi', got '" + item + "'");
                out.push_back ({parseDouble (key, a), parseDouble (key, b), parseDouble (key, c)});
            }
            return out;
        }

        [[nodiscard]] inline HeadingPolicy parseHeading (const std::string& key, const std::string& text, double& fixedHeading)
        {
            if (text == "uniform_random")
                return HeadingPolicy::UniformRandom;
            if (text == "path_tangent")
                return HeadingPolicy::PathTangent;
            if (text.rfind ("fixed:", 0) == 0)
            {
                fixedHeading = parseDouble (key, std::string_view (text).substr (6));
                return HeadingPolicy::Fixed;
            }
            throw Error (ErrorCode::ConfigError, key + ": expected uniform_random, path_tangent or fixed:<radians>, got '" + text + "'");
        }
    } // namespace detail

    /// Parse a scenario document. Throws ConfigError naming the offending key.
    [[nodiscard]] inline Scenario parseScenario (std::istream& in)
    {
        namespace pt = boost::property_tree;
        using detail::parseDouble;

        pt::ptree tree;
        try
        {
            pt::read_ini (in, tree);
        }
        catch (const pt::ini_parser_error& e)
        {
            throw Error (ErrorCode::ConfigError, std::string ("malformed scenario file: ") + e.message () + " (line " + std::to_string (e.line ()) + ")");
        }

        const std::map<std::string, std::set<std::string>> allowed{
            {"path", {"type", "amplitude", "frequency"}},
            {"guidance", {"k_g", "k_psi", "max_omega"}},
            {"avoidance", {"k_r", "R_s", "d_safe"}},
            {"spacing", {"v_nom", "kappa", "d_eq", "spacing_gate"}},
            {"sim", {"dt", "t_end", "rng_seed", "output_decimation", "control_update"}},
            {"init", {"n_uavs", "x_min", "x_max", "y_min", "y_max", "init_heading", "min_init_separation", "poses"}},
        };
        for (const auto& [section, body] : tree)
        {
            const auto it = allowed.find (section);
            if (it == allowed.end ())
            {
                if (!body.data ().empty ())
                    throw Error (ErrorCode::ConfigError, section + ": keys must live inside a [section]");
                throw Error (ErrorCode::ConfigError, "[" + section + "]: unknown section");
            }
            for (const auto& [key, value] : body)
            {
                (void) value;
                if (!it->second.contains (key))
                    throw Error (ErrorCode::ConfigError, section + "." + key + ": unknown key");
            }
        }

        Scenario sc;
        auto get = [&] (const std::string& section, const std::string& key) -> std::optional<std::string> {
            if (auto v = tree.get_optional<std::string> (pt::ptree::path_type (section + "/" + key, '/')))
                return detail::trim (*v);
            return std::nullopt;
        };
        auto num = [&] (const std::string& section, const std::string& key, double& target) {
            if (auto v = get (section, key))
                target = parseDouble (section + "." + key, *v);
        };
        auto optNum = [&] (const std::string& section, const std::string& key, std::optional<double>& target) {
            if (auto v = get (section, key))
                target = parseDouble (section + "." + key, *v);
        };

        const std::string type = get ("path", "type").value_or ("straight");
        if (type == "straight")
        {
            if (get ("path", "amplitude") || get ("path", "frequency"))
                throw Error (ErrorCode::ConfigError, "path.amplitude: only valid for type = sinusoid");
            sc.path = PathSpec::straightLine ();
        }
        else if (type == "sinusoid")
        {
            double a = 0.0;
            double k = 0.0;
            if (!get ("path", "amplitude"))
                throw Error (ErrorCode::ConfigError, "path.amplitude: required for type = sinusoid");
            if (!get ("path", "frequency"))
                throw Error (ErrorCode::ConfigError, "path.frequency: required for type = sinusoid");
            num ("path", "amplitude", a);
            num ("path", "frequency", k);
            if (!(a > 0.0))
                throw Error (ErrorCode::ConfigError, "path.amplitude: must be > 0");
            if (!(k > 0.0))
                throw Error (ErrorCode::ConfigError, "path.frequency: must be > 0");
            sc.path = PathSpec::sinusoid (a, k);
        }
        else
            throw Error (ErrorCode::ConfigError, "path.type: expected straight or sinusoid, got '" + type + "'");

        num ("guidance", "k_g", sc.guidance.k_g);
        num ("guidance", "k_psi", sc.guidance.k_psi);
        optNum ("guidance", "max_omega", sc.max_omega);
        num ("avoidance", "k_r", sc.avoidance.k_r);
        num ("avoidance", "R_s", sc.avoidance.R_s);
        num ("avoidance", "d_safe", sc.avoidance.d_safe);
        num ("spacing", "v_nom", sc.spacing.v_nom);
        num ("spacing", "kappa", sc.spacing.kappa);
        num ("spacing", "d_eq", sc.spacing.d_eq);
        optNum ("spacing", "spacing_gate", sc.spacing_gate);
        num ("sim", "dt", sc.dt);
        num ("sim", "t_end", sc.t_end);
        if (auto v = get ("sim", "rng_seed"))
            sc.rng_seed = detail::parseInteger<std::uint64_t> ("sim.rng_seed", *v);
        if (auto v = get ("sim", "output_decimation"))
            sc.output_decimation = detail::parseInteger<int> ("sim.output_decimation", *v);
        if (auto v = get ("sim", "control_update"))
        {
            if (*v == "stage")
                sc.control_update = ControlUpdate::Stage;
            else if (*v == "step")
                sc.control_update = ControlUpdate::Step;
            else
                throw Error (ErrorCode::ConfigError, "sim.control_update: expected stage or step, got '" + *v + "'");
        }
        if (auto v = get ("init", "n_uavs"))
            sc.n_uavs = detail::parseInteger<int> ("init.n_uavs", *v);
        num ("init", "x_min", sc.init_region.x_min);
        num ("init", "x_max", sc.init_region.x_max);
        num ("init", "y_min", sc.init_region.y_min);
        num ("init", "y_max", sc.init_region.y_max);
        if (auto v = get ("init", "init_heading"))
            sc.init_heading = detail::parseHeading ("init.init_heading", *v, sc.fixed_heading);
        optNum ("init", "min_init_separation", sc.min_init_separation);
        if (auto v = get ("init", "poses"))
            sc.poses = detail::parsePoses ("init.poses", *v);

        validateScenario (sc);
        return sc;
    }

    [[nodiscard]] inline Scenario parseScenario (const std::string& text)
    {
        std::istringstream in (text);
        return parseScenario (in);
    }

    [[nodiscard]] inline Scenario loadScenario (const std::string& filePath)
    {
        std::ifstream in (filePath);
        if (!in)
            throw Error (ErrorCode::ConfigError, "cannot open scenario file '" + filePath + "'");
        return parseScenario (in);
    }

    /// Commented scenario document that parses back to @p sc.
    [[nodiscard]] inline std::string formatScenario (const Scenario& sc)
    {
        using detail::formatDouble;
        std::ostringstream os;
        os << "# Scenario file. All quantities SI (m, s, rad).\n\n";
        os << "[path]\n# straight (x = 0) or sinusoid (x = amplitude * sin(frequency * y))\n";
        if (sc.path.kind () == PathKind::StraightLine)
            os << "type = straight\n";
        else
            os << "type = sinusoid\namplitude = " << formatDouble (sc.path.amplitude ()) << "\nfrequency = " << formatDouble (sc.path.frequency ()) << "\n";

        os << "\n[guidance]\n# vector-field gain [1/m^2] and heading-loop gain [1/s]\n";
        os << "k_g = " << formatDouble (sc.guidance.k_g) << "\nk_psi = " << formatDouble (sc.guidance.k_psi) << "\n";
        if (sc.max_omega)
            os << "max_omega = " << formatDouble (*sc.max_omega) << "\n";
        else
            os << "# max_omega = 5.0\n";

        os << "\n[avoidance]\n# repulsion gain [m^2/s], activation radius and safety distance [m]\n";
        os << "k_r = " << formatDouble (sc.avoidance.k_r) << "\nR_s = " << formatDouble (sc.avoidance.R_s) << "\nd_safe = " << formatDouble (sc.avoidance.d_safe) << "\n";

        os << "\n[spacing]\n# nominal speed and speed authority [m/s], arc-length gap [m]\n";
        os << "v_nom = " << formatDouble (sc.spacing.v_nom) << "\nkappa = " << formatDouble (sc.spacing.kappa) << "\nd_eq = " << formatDouble (sc.spacing.d_eq) << "\n";
        if (sc.spacing_gate)
            os << "spacing_gate = " << formatDouble (*sc.spacing_gate) << "\n";
        else
            os << "# spacing_gate = 0.5\n";

        os << "\n[sim]\n# control_update: stage (re-evaluate at every RK4 stage) or step (hold over the step)\n";
        os << "dt = " << formatDouble (sc.dt) << "\nt_end = " << formatDouble (sc.t_end) << "\nrng_seed = " << sc.rng_seed << "\noutput_decimation = " << sc.output_decimation
           << "\ncontrol_update = " << (sc.control_update == ControlUpdate::Stage ? "stage" : "step") << "\n";

        os << "\n[init]\n# init_heading: uniform_random, path_tangent or fixed:<radians>\n";
        os << "n_uavs = " << sc.n_uavs << "\nx_min = " << formatDouble (sc.init_region.x_min) << "\nx_max = " << formatDouble (sc.init_region.x_max) << "\ny_min = " << formatDouble (sc.init_region.y_min)
           << "\ny_max = " << formatDouble (sc.init_region.y_max) << "\n";
        switch (sc.init_heading)
        {
        case HeadingPolicy::UniformRandom: os << "init_heading = uniform_random\n"; break;
        case HeadingPolicy::PathTangent: os << "init_heading = path_tangent\n"; break;
        case HeadingPolicy::Fixed: os << "init_heading = fixed:" << formatDouble (sc.fixed_heading) << "\n"; break;
        }
        if (sc.min_init_separation)
            os << "min_init_separation = " << formatDouble (*sc.min_init_separation) << "\n";
        else
            os << "# min_init_separation defaults to R_s\n";
        if (!sc.poses.empty ())
        {
            os << "# explicit 'x y psi' poses separated by ';' (overrides sampling)\nposes = ";
            for (std::size_t i = 0; i < sc.poses.size (); ++i)
                os << (i ? "; " : "") << formatDouble (sc.poses[i].x) << " " << formatDouble (sc.poses[i].y) << " " << formatDouble (sc.poses[i].psi);
            os << "\n";
        }
        return os.str ();
    }
} // namespace vfg
