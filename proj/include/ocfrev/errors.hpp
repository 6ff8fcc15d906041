#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocfrev
{

struct error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Malformed surface syntax. `position` is a byte offset into the input.
class parse_error : public error
{
    std::size_t _position;

public:
    parse_error( std::size_t position, const std::string& message )
        : error( "parse error at " + std::to_string( position ) + ": " + message ), _position{ position } {}

    [[nodiscard]] std::size_t position() const { return _position; }
};

struct unknown_atom : parse_error
{
    unknown_atom( std::size_t position, const std::string& name )
        : parse_error( position, "unknown atom '" + name + "'" ) {}
};

struct signature_too_large : error
{
    using error::error;
};

struct signature_mismatch : error
{
    using error::error;
};

struct invalid_ocf : error
{
    using error::error;
};

struct not_elementary : error
{
    using error::error;
};

struct budget_exceeded : error
{
    using error::error;
};

} // namespace ocfrev
