// Command-line front end: run | sweep | certify | scaffold.
//
// Exit codes: 0 success, 1 configuration or runtime error, 2 the run or certification
// completed but a safety or convergence criterion failed.

#include <vfg/config.hpp>
#include <vfg/engagement.hpp>
#include <vfg/sim.hpp>
#include <vfg/svg.hpp>
#include <vfg/sweep.hpp>
#include <vfg/telemetry.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{
    constexpr int kExitOk = 0;
    constexpr int kExitError = 1;
    constexpr int kExitCriterion = 2;

    std::ofstream openOutput (const fs::path& p)
    {
        std::ofstream out (p, std::ios::binary);
        if (!out)
            throw vfg::Error (vfg::ErrorCode::ConfigError, "cannot write '" + p.string () + "'");
        return out;
    }

    void printWarnings (const vfg::Scenario& sc)
    {
        for (const auto& w : vfg::scenarioWarnings (sc))
            std::cerr << "warning: " << w << "\n";
    }

    std::vector<double> parseValueList (const std::string& text)
    {
        std::vector<double> values;
        std::stringstream ss (text);
        std::string item;
        while (std::getline (ss, item, ','))
        {
            const std::string t = vfg::detail::trim (item);
            if (t.empty ())
                continue;
            values.push_back (vfg::detail::parseDouble ("--values", t));
        }
        return values;
    }

    std::string fmt (double v) { return vfg::detail::formatDouble (v); }

    struct RunOptions
    {
        std::string scenario;
        std::string out_dir = ".";
        std::string format = "csv";
        std::optional<unsigned long long> seed;
        std::optional<int> decimation;
        bool svg = false;
    };

    int cmdRun (const RunOptions& o)
    {
        vfg::Scenario sc = vfg::loadScenario (o.scenario);
        if (o.seed)
            sc.rng_seed = *o.seed;
        if (o.decimation)
            sc.output_decimation = *o.decimation;
        vfg::validateScenario (sc);
        printWarnings (sc);

        const vfg::RunResult res = vfg::run (sc);
        const auto& s = res.summary;
        if (s.error && *s.error != vfg::ErrorCode::CollisionDetected)
            throw vfg::Error (*s.error, s.error_message);

        const fs::path dir (o.out_dir);
        fs::create_directories (dir);
        if (o.format == "csv")
        {
            auto out = openOutput (dir / "telemetry.csv");
            vfg::writeCsv (out, res.frames);
        }
        else
        {
            auto out = openOutput (dir / "telemetry.jsonl");
            vfg::writeJsonl (out, res.frames);
        }
        {
            auto out = openOutput (dir / "summary.ini");
            vfg::writeSummary (out, sc, s);
        }
        if (o.svg)
        {
            auto traj = openOutput (dir / "trajectories.svg");
            vfg::writeTrajectorySvg (traj, res.frames, sc.path);
            auto series = openOutput (dir / "timeseries.svg");
            vfg::writeTimeSeriesSvg (series, res.frames, sc.avoidance.d_safe);
        }

        vfg::writeSummary (std::cout, sc, s);
        if (s.collision)
        {
            std::cerr << "collision: minimum separation " << fmt (s.min_E_over_run) << " m <= d_safe " << fmt (sc.avoidance.d_safe) << " m\n";
            return kExitCriterion;
        }
        if (s.final_max_abs_epsilon >= vfg::kOnPathTolerance || s.final_max_abs_delta >= vfg::kOnPathTolerance)
        {
            std::cerr << "not converged: final max|epsilon| = " << fmt (s.final_max_abs_epsilon) << " m, final max|delta| = " << fmt (s.final_max_abs_delta) << " m (tolerance "
                      << fmt (vfg::kOnPathTolerance) << " m)\n";
            return kExitCriterion;
        }
        return kExitOk;
    }

    struct SweepOptions
    {
        std::string scenario;
        std::string parameter;
        std::string values;
        std::string out_dir = ".";
    };

    int cmdSweep (const SweepOptions& o)
    {
        const vfg::Scenario base = vfg::loadScenario (o.scenario);
        const auto values = parseValueList (o.values);
        const auto rows = vfg::runSweep (base, o.parameter, values);

        std::ostringstream table;
        table << "value,min_E,collision,time_to_path,final_max_abs_delta,error\n";
        for (const auto& r : rows)
        {
            const auto& s = r.summary;
            table << fmt (r.value) << "," << fmt (s.min_E_over_run) << "," << (s.collision ? "true" : "false") << "," << (s.time_to_path ? fmt (*s.time_to_path) : std::string ("never")) << ","
                  << fmt (s.final_max_abs_delta) << "," << (s.error ? std::string (vfg::toString (*s.error)) : std::string ("none")) << "\n";
        }
        fs::create_directories (o.out_dir);
        auto out = openOutput (fs::path (o.out_dir) / "sweep.csv");
        out << table.str ();
        std::cout << table.str ();
        return kExitOk;
    }

    struct CertifyOptions
    {
        double v = 3.0;
        double R_s = 1.5;
        double d_safe = 0.4;
        double k_r = 11.0;
        int n_samples = 1000;
        unsigned long long seed = 1;
        double kappa = 0.0;
    };

    int cmdCertify (const CertifyOptions& o)
    {
        vfg::CertifyRequest req;
        req.v = o.v;
        req.R_s = o.R_s;
        req.d_safe = o.d_safe;
        req.k_r = o.k_r;
        req.n_samples = o.n_samples;
        req.seed = o.seed;
        req.speed_skew = o.kappa;
        const vfg::CertifyReport rep = vfg::certify (req);

        std::vector<double> sorted = rep.min_separations;
        std::sort (sorted.begin (), sorted.end ());
        auto quantile = [&] (double q) { return sorted.empty () ? std::numeric_limits<double>::quiet_NaN () : sorted[static_cast<std::size_t> (q * (sorted.size () - 1))]; };

        std::cout << "[certify]\n";
        std::cout << "sufficient_gain = " << fmt (rep.sufficient_gain) << "\n";
        std::cout << "k_r = " << fmt (o.k_r) << "\n";
        std::cout << "gain_exceeds_bound = " << (rep.gain_ok ? "true" : "false") << "\n";
        std::cout << "samples = " << rep.samples << "\n";
        std::cout << "near_degenerate = " << rep.near_degenerate << "\n";
        std::cout << "violations = " << rep.violations << "\n";
        std::cout << "min_separation_min = " << fmt (quantile (0.0)) << "\n";
        std::cout << "min_separation_p01 = " << fmt (quantile (0.01)) << "\n";
        std::cout << "min_separation_p50 = " << fmt (quantile (0.5)) << "\n";
        std::cout << "min_separation_max = " << fmt (quantile (1.0)) << "\n";
        if (!rep.min_separations.empty ())
        {
            std::cout << "worst_bearing = " << fmt (rep.worst.geometry.beta) << "\n";
            std::cout << "worst_lead_angle_a = " << fmt (rep.worst.geometry.phi_i) << "\n";
            std::cout << "worst_lead_angle_b = " << fmt (rep.worst.geometry.phi_j) << "\n";
        }
        if (o.kappa > 0.0)
            std::cout << "speed_skew_worst_min_separation = " << fmt (rep.skew_worst_min_separation) << "\n";
        std::cout << "certified = " << (rep.certified ? "true" : "false") << "\n";
        return rep.certified ? kExitOk : kExitCriterion;
    }

    int cmdScaffold (const std::string& preset, const std::string& out)
    {
        const vfg::Scenario sc = preset == "sinusoid" ? vfg::sinusoidPreset () : vfg::straightLinePreset ();
        const std::string text = vfg::formatScenario (sc);
        if (out.empty ())
            std::cout << text;
        else
        {
            auto f = openOutput (out);
            f << text;
        }
        return kExitOk;
    }
} // namespace

int main (int argc, char** argv)
{
    CLI::App app{"Vector-field guidance swarm simulator"};
    app.require_subcommand (1);

    RunOptions runOpt;
    auto* run = app.add_subcommand ("run", "Simulate a scenario file and write telemetry");
    run->add_option ("scenario", runOpt.scenario, "Scenario file")->required ();
    run->add_option ("-o,--out", runOpt.out_dir, "Output directory");
    run->add_option ("--format", runOpt.format, "Telemetry format")->check (CLI::IsMember ({"csv", "jsonl"}));
    run->add_option ("--seed", runOpt.seed, "Override the RNG seed");
    run->add_option ("--decimation", runOpt.decimation, "Log every n-th step")->check (CLI::PositiveNumber);
    run->add_flag ("--svg", runOpt.svg, "Also write trajectory and time-series plots");

    SweepOptions sweepOpt;
    auto* sweep = app.add_subcommand ("sweep", "Run one simulation per parameter value");
    sweep->add_option ("scenario", sweepOpt.scenario, "Scenario file")->required ();
    sweep->add_option ("--param", sweepOpt.parameter, "Parameter name, e.g. k_r or avoidance.k_r")->required ();
    sweep->add_option ("--values", sweepOpt.values, "Comma-separated values")->required ();
    sweep->add_option ("-o,--out", sweepOpt.out_dir, "Output directory");

    CertifyOptions certOpt;
    auto* cert = app.add_subcommand ("certify", "Check the repulsion gain against the two-vehicle bound");
    cert->add_option ("--v", certOpt.v, "Vehicle speed [m/s]");
    cert->add_option ("--R_s", certOpt.R_s, "Activation radius [m]");
    cert->add_option ("--d_safe", certOpt.d_safe, "Safety distance [m]");
    cert->add_option ("--k_r", certOpt.k_r, "Repulsion gain [m^2/s]");
    cert->add_option ("--n_samples", certOpt.n_samples, "Monte-Carlo geometries");
    cert->add_option ("--seed", certOpt.seed, "RNG seed");
    cert->add_option ("--kappa", certOpt.kappa, "Also fly each geometry at v+kappa against v-kappa");

    std::string preset = "straight";
    std::string scaffoldOut;
    auto* scaffold = app.add_subcommand ("scaffold", "Print a commented scenario template");
    scaffold->add_option ("--preset", preset, "Preset")->check (CLI::IsMember ({"straight", "sinusoid"}));
    scaffold->add_option ("-o,--out", scaffoldOut, "Write to file instead of stdout");

    try
    {
        app.parse (argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit (e);
        return code == 0 ? kExitOk : kExitError;
    }

    try
    {
        if (*run)
            return cmdRun (runOpt);
        if (*sweep)
            return cmdSweep (sweepOpt);
        if (*cert)
            return cmdCertify (certOpt);
        if (*scaffold)
            return cmdScaffold (preset, scaffoldOut);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what () << "\n";
        return kExitError;
    }
    return kExitError;
}
