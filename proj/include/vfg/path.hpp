#pragma once
/**
 * @file   path.hpp
 * @brief  Reference-path geometry for the straight line x = 0 and the sinusoid x = A sin(k y).
 *
 * Both path families are graphs over the y axis, so every query is keyed on the
 * ordinate of the vehicle. The sign of the cross-track error is negative to the
 * left of the path (smaller x).
 */

#include <vfg/angle.hpp>
#include <vfg/error.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace vfg
{
    struct Position2D
    {
        double x = 0.0;
        double y = 0.0;

        friend bool operator== (const Position2D&, const Position2D&) = default;
    };

    enum class PathKind
    {
        StraightLine,
        Sinusoid,
    };

    /**
     * @brief Reference path description.
     *
     * Construct through the named factories; the sinusoid factory validates A > 0 and k > 0
     * and caches the arc length of one half period so that arc-length queries far from the
     * origin cost a single short quadrature.
     */
    class PathSpec
    {
      public:
        PathSpec () = default;

        [[nodiscard]] static PathSpec straightLine () { return PathSpec{}; }

        [[nodiscard]] static PathSpec sinusoid (double amplitude, double frequency)
        {
            if (!(amplitude > 0.0) || !std::isfinite (amplitude))
                throw Error (ErrorCode::InvalidParams, "sinusoid amplitude must be > 0 (got " + std::to_string (amplitude) + ")");
            if (!(frequency > 0.0) || !std::isfinite (frequency))
                throw Error (ErrorCode::InvalidParams, "sinusoid frequency must be > 0 (got " + std::to_string (frequency) + ")");
            PathSpec p;
            p.kind_ = PathKind::Sinusoid;
            p.amplitude_ = amplitude;
            p.frequency_ = frequency;
            p.halfPeriodLength_ = p.integrateSpeed (0.0, p.halfPeriod ());
            return p;
        }

        [[nodiscard]] PathKind kind () const noexcept { return kind_; }
        [[nodiscard]] double amplitude () const noexcept { return amplitude_; }
        [[nodiscard]] double frequency () const noexcept { return frequency_; }

        /// Period of the arc-length integrand, π/k.
        [[nodiscard]] double halfPeriod () const noexcept { return kPi / frequency_; }

        /// |d(path point)/dy| = √(1 + (A k cos k y)²).
        [[nodiscard]] double speedAt (double y) const noexcept
        {
            if (kind_ == PathKind::StraightLine)
                return 1.0;
            const double slope = amplitude_ * frequency_ * std::cos (frequency_ * y);
            return std::sqrt (1.0 + slope * slope);
        }

        /// Abscissa of the path at ordinate y.
        [[nodiscard]] double xAt (double y) const noexcept
        {
            return kind_ == PathKind::StraightLine ? 0.0 : amplitude_ * std::sin (frequency_ * y);
        }

        [[nodiscard]] double halfPeriodLength () const noexcept { return halfPeriodLength_; }

        /// Adaptive Gauss–Kronrod (15-point) integral of speedAt over [a, b].
        [[nodiscard]] double integrateSpeed (double a, double b) const
        {
            if (a == b)
                return 0.0;
            auto f = [this] (double t) { return speedAt (t); };
            return boost::math::quadrature::gauss_kronrod<double, 15>::integrate (f, a, b, 15, 1e-12);
        }

        friend bool operator== (const PathSpec& l, const PathSpec& r) noexcept
        {
            return l.kind_ == r.kind_ && l.amplitude_ == r.amplitude_ && l.frequency_ == r.frequency_;
        }

      private:
        PathKind kind_ = PathKind::StraightLine;
        double amplitude_ = 0.0;
        double frequency_ = 0.0;
        double halfPeriodLength_ = 0.0;
    };

    /// Signed horizontal deviation from the path: x − x_path(y).
    [[nodiscard]] inline double crossTrackError (const PathSpec& path, Position2D p) noexcept { return p.x - path.xAt (p.y); }

    /**
     * @brief Heading of the path tangent at ordinate p.y, in (0, π).
     *
     * Four-quadrant form of tan⁻¹(1 / (A k cos k y)), continuous where the cosine vanishes.
     */
    [[nodiscard]] inline double tangentDirection (const PathSpec& path, Position2D p) noexcept
    {
        if (path.kind () == PathKind::StraightLine)
            return kPi / 2.0;
        return std::atan2 (1.0, path.amplitude () * path.frequency () * std::cos (path.frequency () * p.y));
    }

    /**
     * @brief Arc-length parameter s(y) measured from y = 0.
     *
     * The integrand is even with period π/k, so s is odd and s(y) = q·S + ∫₀ʳ for |y| = qπ/k + r.
     */
    [[nodiscard]] inline double arcLength (const PathSpec& path, double y)
    {
        if (path.kind () == PathKind::StraightLine)
            return y;
        const double ay = std::abs (y);
        const double period = path.halfPeriod ();
        const double q = std::floor (ay / period);
        const double r = ay - q * period;
        const double s = q * path.halfPeriodLength () + path.integrateSpeed (0.0, r);
        return std::copysign (s, y);
    }

    namespace detail
    {
        // Golden-section minimisation of f on [a, b].
        template <typename F> [[nodiscard]] double goldenSectionMin (F&& f, double a, double b, double tol)
        {
            const double invPhi = (std::sqrt (5.0) - 1.0) / 2.0;
            double c = b - invPhi * (b - a);
            double d = a + invPhi * (b - a);
            double fc = f (c);
            double fd = f (d);
            while (b - a > tol)
            {
                if (fc < fd)
                {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - invPhi * (b - a);
                    fc = f (c);
                }
                else
                {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + invPhi * (b - a);
                    fd = f (d);
                }
            }
            return 0.5 * (a + b);
        }
    } // namespace detail

    /**
     * @brief Minimum Euclidean distance from p to the path.
     *
     * Sinusoid: 1024-point scan of y' over p.y ± one spatial period 2π/k, then golden-section
     * refinement around the best sample to 1e−8 m. The candidate y' = p.y is always included,
     * so the result never exceeds |crossTrackError|.
     */
    [[nodiscard]] inline double distanceToPath (const PathSpec& path, Position2D p)
    {
        if (path.kind () == PathKind::StraightLine)
            return std::abs (p.x);

        auto sq = [&] (double yp) {
            const double dx = p.x - path.xAt (yp);
            const double dy = p.y - yp;
            return dx * dx + dy * dy;
        };

        constexpr int kSamples = 1024;
        const double span = 2.0 * kTwoPi / path.frequency ();
        const double lo = p.y - 0.5 * span;
        const double step = span / (kSamples - 1);
        int best = 0;
        double bestVal = std::numeric_limits<double>::infinity ();
        for (int i = 0; i < kSamples; ++i)
        {
            const double v = sq (lo + step * i);
            if (v < bestVal)
            {
                bestVal = v;
                best = i;
            }
        }
        const double a = lo + step * std::max (best - 1, 0);
        const double b = lo + step * std::min (best + 1, kSamples - 1);
        const double yStar = detail::goldenSectionMin (sq, a, b, 1e-8);
        const double refined = std::min ({sq (yStar), bestVal, sq (p.y)});
        return std::sqrt (refined);
    }
} // namespace vfg
