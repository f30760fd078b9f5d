#pragma once

#include <vfg/path.hpp>

namespace vfg
{
    /// Planar unicycle state. psi is kept in (−π, π]; v is the last commanded speed.
    struct UavState
    {
        int id = 0;
        double x = 0.0;
        double y = 0.0;
        double psi = 0.0;
        double v = 0.0;

        [[nodiscard]] Position2D position () const noexcept { return {x, y}; }

        friend bool operator== (const UavState&, const UavState&) = default;
    };
} // namespace vfg
