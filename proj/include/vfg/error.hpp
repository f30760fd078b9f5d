#pragma once
/**
 * @file   error.hpp
 * @brief  Exception type shared by every vfg module.
 */

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfg
{
    /// Failure categories surfaced by the library.
    enum class ErrorCode
    {
        CoincidentPositions,
        DomainError,
        DegenerateGeometry,
        InvalidParams,
        SamplingExhausted,
        CollisionDetected,
        InsufficientAgents,
        ConfigError,
    };

    [[nodiscard]] constexpr std::string_view toString (ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::CoincidentPositions: return "CoincidentPositions";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::SamplingExhausted: return "SamplingExhausted";
        case ErrorCode::CollisionDetected: return "CollisionDetected";
        case ErrorCode::InsufficientAgents: return "InsufficientAgents";
        case ErrorCode::ConfigError: return "ConfigError";
        }
        return "Unknown";
    }

    class Error : public std::runtime_error
    {
      public:
        Error (ErrorCode code, const std::string& what) : std::runtime_error (std::string (toString (code)) + ": " + what), code_ (code) {}

        [[nodiscard]] ErrorCode code () const noexcept { return code_; }

      private:
        ErrorCode code_;
    };
} // namespace vfg
