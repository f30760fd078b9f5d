#pragma once
/**
 * @file   svg.hpp
 * @brief  Static SVG plots of a run: trajectories and stacked time series.
 */

#include <vfg/sim.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace vfg
{
    namespace detail
    {
        struct Box
        {
            double lo = std::numeric_limits<double>::infinity ();
            double hi = -std::numeric_limits<double>::infinity ();

            void add (double v)
            {
                if (!std::isfinite (v))
                    return;
                lo = std::min (lo, v);
                hi = std::max (hi, v);
            }
            void pad ()
            {
                if (!std::isfinite (lo))
                {
                    lo = 0.0;
                    hi = 1.0;
                }
                if (hi - lo < 1e-9)
                {
                    lo -= 0.5;
                    hi += 0.5;
                }
                const double m = 0.05 * (hi - lo);
                lo -= m;
                hi += m;
            }
        };

        [[nodiscard]] inline std::string colour (int id)
        {
            static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
            return palette[static_cast<std::size_t> (id) % 10];
        }

        [[nodiscard]] inline std::string num (double v)
        {
            char buf[32];
            std::snprintf (buf, sizeof buf, "%.2f", v);
            return buf;
        }
    } // namespace detail

    /// x–y trajectories with start (circle) and end (square) markers over the reference path.
    inline void writeTrajectorySvg (std::ostream& os, const std::vector<FrameRecord>& frames, const PathSpec& path)
    {
        using detail::num;
        constexpr double W = 800.0, H = 800.0, M = 50.0;
        detail::Box bx, by;
        std::map<int, std::vector<std::pair<double, double>>> tracks;
        for (const auto& f : frames)
            for (const auto& u : f.uavs)
            {
                bx.add (u.x);
                by.add (u.y);
                tracks[u.id].emplace_back (u.x, u.y);
            }
        bx.add (-1.0);
        bx.add (1.0);
        if (path.kind () == PathKind::Sinusoid)
        {
            bx.add (-path.amplitude ());
            bx.add (path.amplitude ());
        }
        bx.pad ();
        by.pad ();
        const double scale = std::min ((W - 2 * M) / (bx.hi - bx.lo), (H - 2 * M) / (by.hi - by.lo));
        auto sx = [&] (double x) { return M + (x - bx.lo) * scale; };
        auto sy = [&] (double y) { return H - M - (y - by.lo) * scale; };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << M << "\" y=\"25\" font-family=\"sans-serif\" font-size=\"16\">Trajectories (x [m] horizontal, y [m] vertical)</text>\n";

        os << "<polyline fill=\"none\" stroke=\"black\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\" points=\"";
        for (int k = 0; k <= 400; ++k)
        {
            const double y = by.lo + (by.hi - by.lo) * k / 400.0;
            os << num (sx (path.xAt (y))) << "," << num (sy (y)) << " ";
        }
        os << "\"/>\n";

        for (const auto& [id, pts] : tracks)
        {
            const std::string c = detail::colour (id);
            os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.2\" points=\"";
            for (const auto& [x, y] : pts)
                os << num (sx (x)) << "," << num (sy (y)) << " ";
            os << "\"/>\n";
            os << "<circle cx=\"" << num (sx (pts.front ().first)) << "\" cy=\"" << num (sy (pts.front ().second)) << "\" r=\"4\" fill=\"" << c << "\"/>\n";
            os << "<rect x=\"" << num (sx (pts.back ().first) - 4) << "\" y=\"" << num (sy (pts.back ().second) - 4) << "\" width=\"8\" height=\"8\" fill=\"" << c << "\"/>\n";
            os << "<text x=\"" << num (sx (pts.front ().first) + 6) << "\" y=\"" << num (sy (pts.front ().second) - 6) << "\" font-family=\"sans-serif\" font-size=\"10\">U" << id << "</text>\n";
        }
        os << "</svg>\n";
    }

    /// Four stacked panels: ω_total, v, Δ per vehicle, and the pairwise minimum 𝓔.
    inline void writeTimeSeriesSvg (std::ostream& os, const std::vector<FrameRecord>& frames, double dSafe)
    {
        using detail::num;
        constexpr double W = 900.0, PH = 200.0, M = 60.0;
        struct Panel
        {
            std::string title;
            std::function<double (const UavTelemetry&)> perUav;
        };
        const std::vector<Panel> panels{
            {"omega [rad/s]", [] (const UavTelemetry& u) { return u.omega_total; }},
            {"v [m/s]", [] (const UavTelemetry& u) { return u.v; }},
            {"spacing error [m]", [] (const UavTelemetry& u) { return u.delta; }},
        };
        const double H = PH * 4 + M;
        detail::Box bt;
        for (const auto& f : frames)
            bt.add (f.t);
        if (!std::isfinite (bt.lo))
            bt = {0.0, 1.0};
        if (bt.hi - bt.lo < 1e-12)
            bt.hi = bt.lo + 1.0;
        auto sx = [&] (double t) { return M + (t - bt.lo) / (bt.hi - bt.lo) * (W - 2 * M); };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

        auto axes = [&] (double top, const std::string& title, const detail::Box& b) {
            os << "<rect x=\"" << M << "\" y=\"" << top + 20 << "\" width=\"" << W - 2 * M << "\" height=\"" << PH - 40 << "\" fill=\"none\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << M << "\" y=\"" << top + 15 << "\" font-family=\"sans-serif\" font-size=\"13\">" << title << "  [" << num (b.lo) << ", " << num (b.hi) << "]</text>\n";
        };

        for (std::size_t p = 0; p < panels.size (); ++p)
        {
            const double top = p * PH;
            detail::Box b;
            std::map<int, std::vector<std::pair<double, double>>> series;
            for (const auto& f : frames)
                for (const auto& u : f.uavs)
                {
                    const double v = panels[p].perUav (u);
                    b.add (v);
                    series[u.id].emplace_back (f.t, v);
                }
            b.pad ();
            axes (top, panels[p].title, b);
            auto sy = [&] (double v) { return top + PH - 20 - (v - b.lo) / (b.hi - b.lo) * (PH - 40); };
            for (const auto& [id, pts] : series)
            {
                os << "<polyline fill=\"none\" stroke=\"" << detail::colour (id) << "\" stroke-width=\"1\" points=\"";
                for (const auto& [t, v] : pts)
                    os << num (sx (t)) << "," << num (sy (v)) << " ";
                os << "\"/>\n";
            }
        }

        const double top = 3 * PH;
        detail::Box b;
        for (const auto& f : frames)
            b.add (f.E_min);
        b.add (dSafe);
        b.add (0.0);
        b.pad ();
        axes (top, "minimum pairwise distance E [m] (red: d_safe)", b);
        auto sy = [&] (double v) { return top + PH - 20 - (v - b.lo) / (b.hi - b.lo) * (PH - 40); };
        os << "<line x1=\"" << M << "\" x2=\"" << W - M << "\" y1=\"" << num (sy (dSafe)) << "\" y2=\"" << num (sy (dSafe)) << "\" stroke=\"red\" stroke-dasharray=\"5,3\"/>\n";
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
        for (const auto& f : frames)
            if (std::isfinite (f.E_min))
                os << num (sx (f.t)) << "," << num (sy (f.E_min)) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" font-family=\"sans-serif\" font-size=\"13\">t [s]</text>\n";
        os << "</svg>\n";
    }
} // namespace vfg
