#pragma once

/**
    \file
    \brief exception types raised by the cpn library

    Every failure is reported as an exception derived from cpn::Error. The CLI maps these onto exit codes and
    report records; library callers can catch the specific type they care about.
*/

#include <stdexcept>
#include <string>

namespace cpn {

struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// jet / matrix substrate
struct ShapeError : Error
{
    using Error::Error;
};

struct DivisionByZeroAtBasePoint : Error
{
    using Error::Error;
};

struct JetOrderError : Error
{
    using Error::Error;
};

// seeds
struct InvalidDimension : Error
{
    using Error::Error;
};

struct ParseError : Error
{
    ParseError(std::string const& what, int line = 0, std::string field = {})
        : Error{format(what, line, field)}, line{line}, field{std::move(field)}
    {}

    int line;
    std::string field;

private:
    static auto format(std::string const& what, int line, std::string const& field) -> std::string
    {
        auto msg = std::string{"parse error"};
        if (line > 0) msg += " at line " + std::to_string(line);
        if (!field.empty()) msg += " (field '" + field + "')";
        return msg + ": " + what;
    }
};

// projector ladder
struct ZeroVectorError : Error
{
    using Error::Error;
};

struct DegenerateSeedError : Error
{
    DegenerateSeedError(std::string const& what, int rung) : Error{what}, rung{rung} {}
    int rung;
};

struct LadderEndError : Error
{
    using Error::Error;
};

struct InvalidProjectorError : Error
{
    using Error::Error;
};

struct RungError : Error
{
    using Error::Error;
};

// spectral problem
struct SpectralPoleError : Error
{
    using Error::Error;
};

// surfaces and geometry
struct InconsistentSurfaceError : Error
{
    using Error::Error;
};

struct DegenerateMetricError : Error
{
    using Error::Error;
};

struct QuadratureError : Error
{
    QuadratureError(std::string const& what, double partial_value, double error_estimate)
        : Error{what}, partial_value{partial_value}, error_estimate{error_estimate}
    {}
    double partial_value;
    double error_estimate;
};

// cli
struct ConfigError : Error
{
    using Error::Error;
};

} // namespace cpn
