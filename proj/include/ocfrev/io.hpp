#pragma once

// Belief base files.
//
//   signature: b, f, p
//   ocf:
//   b f p = 2
//   b f !p = 0
//   ...
//
// One row per world, every atom exactly once per row, rows in any order.
// Blank lines and lines starting with '#' are ignored. The JSON form is
//   { "signature": ["b", "f", "p"], "ranks": { "b f p": 2, ... } }

#include "revision.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ocfrev
{

// Syntax problem in a belief base or flag value; `line` is 1-based, 0 if not line-related.
class format_error : public error
{
    std::size_t _line;

public:
    format_error( std::size_t line, const std::string& message )
        : error( line == 0 ? message : "line " + std::to_string( line ) + ": " + message ), _line{ line } {}

    [[nodiscard]] std::size_t line() const { return _line; }
};

namespace detail
{

inline std::string_view trim( std::string_view s )
{
    while ( !s.empty() && ( s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && ( s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ) )
        s.remove_suffix( 1 );
    return s;
}

inline std::vector< std::string_view > split( std::string_view s, char sep )
{
    std::vector< std::string_view > out;
    std::size_t start = 0;
    while ( true )
    {
        auto pos = s.find( sep, start );
        out.push_back( trim( s.substr( start, pos == std::string_view::npos ? std::string_view::npos : pos - start ) ) );
        if ( pos == std::string_view::npos )
            break;
        start = pos + 1;
    }
    return out;
}

inline std::optional< rank_value > parse_int( std::string_view s )
{
    s = trim( s );
    rank_value v = 0;
    const char* first = s.data();
    if ( !s.empty() && s.front() == '+' )
        ++first;
    auto [ ptr, ec ] = std::from_chars( first, s.data() + s.size(), v );
    if ( s.empty() || ec != std::errc{} || ptr != s.data() + s.size() )
        return std::nullopt;
    return v;
}

// "b !f p" -> world. Syntax problems are format errors, a missing or repeated atom makes the row invalid.
inline world parse_world( std::string_view text, const signature& sig, std::size_t line )
{
    world w;
    std::vector< bool > seen( sig.size(), false );
    std::istringstream in{ std::string( text ) };
    std::string lit;
    while ( in >> lit )
    {
        bool positive = true;
        std::string_view name = lit;
        if ( name.front() == '!' )
        {
            positive = false;
            name.remove_prefix( 1 );
        }
        if ( !is_identifier( name ) )
            throw format_error( line, "malformed literal '" + lit + "'" );
        auto idx = sig.index_of( name );
        if ( idx < 0 )
            throw format_error( line, "unknown atom '" + std::string( name ) + "'" );
        if ( seen[ static_cast< std::size_t >( idx ) ] )
            throw invalid_ocf( "line " + std::to_string( line ) + ": atom '" + std::string( name ) +
                               "' occurs twice in world '" + std::string( text ) + "'" );
        seen[ static_cast< std::size_t >( idx ) ] = true;
        if ( positive )
            w.bits |= 1U << idx;
    }
    for ( std::size_t i = 0; i < sig.size(); ++i )
        if ( !seen[ i ] )
            throw invalid_ocf( "line " + std::to_string( line ) + ": world '" + std::string( text ) + "' lacks atom '" +
                               sig.name( i ) + "'" );
    return w;
}

class table_builder
{
    const signature& _sig;
    std::vector< rank_value > _ranks;
    std::vector< bool > _set;

public:
    explicit table_builder( const signature& sig )
        : _sig{ sig }, _ranks( sig.world_count(), 0 ), _set( sig.world_count(), false ) {}

    void add( world w, rank_value r, std::size_t line )
    {
        if ( _set[ w.bits ] )
            throw invalid_ocf( "line " + std::to_string( line ) + ": world '" + to_string( w, _sig ) + "' listed twice" );
        if ( r < 0 )
            throw invalid_ocf( "line " + std::to_string( line ) + ": negative rank " + std::to_string( r ) );
        _set[ w.bits ] = true;
        _ranks[ w.bits ] = r;
    }

    ocf finish() const
    {
        for ( auto w : display_order( _sig ) )
            if ( !_set[ w.bits ] )
                throw invalid_ocf( "missing row for world '" + to_string( w, _sig ) + "'" );
        return ocf( _sig, _ranks );
    }
};

inline signature make_signature( const std::vector< std::string >& atoms, std::size_t line )
{
    try
    {
        return signature( atoms );
    }
    catch ( const signature_too_large& )
    {
        throw;
    }
    catch ( const error& e )
    {
        throw format_error( line, e.what() );
    }
}

} // namespace detail

inline ocf parse_base_json( const std::string& text )
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse( text );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw format_error( 0, std::string( "invalid JSON: " ) + e.what() );
    }
    if ( !doc.is_object() || !doc.contains( "signature" ) || !doc.contains( "ranks" ) || !doc[ "signature" ].is_array() ||
         !doc[ "ranks" ].is_object() )
        throw format_error( 0, "expected an object with 'signature' (array) and 'ranks' (object)" );
    std::vector< std::string > atoms;
    for ( const auto& a : doc[ "signature" ] )
    {
        if ( !a.is_string() )
            throw format_error( 0, "signature entries must be strings" );
        atoms.push_back( a.get< std::string >() );
    }
    const auto sig = detail::make_signature( atoms, 0 );
    detail::table_builder table( sig );
    for ( const auto& [ key, value ] : doc[ "ranks" ].items() )
    {
        if ( !value.is_number_integer() )
            throw format_error( 0, "rank of '" + key + "' is not an integer" );
        table.add( detail::parse_world( key, sig, 0 ), value.get< rank_value >(), 0 );
    }
    return table.finish();
}

inline ocf parse_base_text( const std::string& text )
{
    std::istringstream in( text );
    std::string raw;
    std::size_t line_no = 0;
    std::optional< signature > sig;
    bool in_table = false;
    std::optional< detail::table_builder > table;

    while ( std::getline( in, raw ) )
    {
        ++line_no;
        auto line = detail::trim( raw );
        if ( line.empty() || line.front() == '#' )
            continue;
        if ( !sig )
        {
            constexpr std::string_view key = "signature:";
            if ( line.substr( 0, key.size() ) != key )
                throw format_error( line_no, "expected 'signature: a, b, ...'" );
            std::vector< std::string > atoms;
            for ( auto a : detail::split( line.substr( key.size() ), ',' ) )
                atoms.emplace_back( a );
            sig = detail::make_signature( atoms, line_no );
            continue;
        }
        if ( !in_table )
        {
            if ( line != "ocf:" )
                throw format_error( line_no, "expected 'ocf:'" );
            in_table = true;
            table.emplace( *sig );
            continue;
        }
        auto eq = line.find( '=' );
        if ( eq == std::string_view::npos )
            throw format_error( line_no, "expected '<world> = <rank>'" );
        auto r = detail::parse_int( line.substr( eq + 1 ) );
        if ( !r )
            throw format_error( line_no, "rank is not an integer" );
        table->add( detail::parse_world( line.substr( 0, eq ), *sig, line_no ), *r, line_no );
    }
    if ( !sig )
        throw format_error( 0, "missing 'signature:' line" );
    if ( !table )
        throw format_error( 0, "missing 'ocf:' section" );
    return table->finish();
}

// Dispatches on the first non-blank character: '{' selects JSON.
inline ocf parse_base( const std::string& text )
{
    auto body = detail::trim( text );
    while ( !body.empty() && ( body.front() == '\n' ) )
        body = detail::trim( body.substr( 1 ) );
    if ( !body.empty() && body.front() == '{' )
        return parse_base_json( text );
    return parse_base_text( text );
}

inline ocf read_base( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
        throw format_error( 0, "cannot open '" + path + "'" );
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_base( buf.str() );
}

inline std::string write_base_text( const ocf& kappa )
{
    std::string out = "signature: ";
    for ( std::size_t i = 0; i < kappa.sig().size(); ++i )
    {
        if ( i > 0 )
            out += ", ";
        out += kappa.sig().name( i );
    }
    out += "\nocf:\n";
    for ( auto w : display_order( kappa.sig() ) )
        out += to_string( w, kappa.sig() ) + " = " + std::to_string( kappa( w ) ) + "\n";
    return out;
}

// Ranks keyed by world string. nlohmann's default object type sorts keys, so
// an ordered_json is used to keep display order.
inline nlohmann::ordered_json ranks_json( const ocf& kappa )
{
    nlohmann::ordered_json ranks = nlohmann::ordered_json::object();
    for ( auto w : display_order( kappa.sig() ) )
        ranks[ to_string( w, kappa.sig() ) ] = kappa( w );
    return ranks;
}

inline nlohmann::ordered_json write_base_json( const ocf& kappa )
{
    nlohmann::ordered_json doc;
    doc[ "signature" ] = kappa.sig().atoms();
    doc[ "ranks" ] = ranks_json( kappa );
    return doc;
}

// "g1+=-2..0,g1-=0..2" applied on top of `base`; indices are 1-based positions in cond(Ψ).
inline bounds parse_bounds( std::string_view text, bounds base )
{
    if ( detail::trim( text ).empty() )
        return base;
    for ( auto item : detail::split( text, ',' ) )
    {
        auto fail = [&]( const std::string& why ) -> format_error {
            return format_error( 0, "bad bound '" + std::string( item ) + "': " + why );
        };
        auto eq = item.find( '=' );
        if ( eq == std::string_view::npos || eq < 3 || item.front() != 'g' )
            throw fail( "expected gI+=LO..HI or gI-=LO..HI" );
        const char sign = item[ eq - 1 ];
        if ( sign != '+' && sign != '-' )
            throw fail( "variable must end in '+' or '-'" );
        auto idx = detail::parse_int( item.substr( 1, eq - 2 ) );
        if ( !idx || *idx < 1 || static_cast< std::size_t >( *idx ) > base.size() )
            throw fail( "conditional index out of range 1.." + std::to_string( base.size() ) );
        auto range = item.substr( eq + 1 );
        auto dots = range.find( ".." );
        if ( dots == std::string_view::npos )
            throw fail( "expected LO..HI" );
        auto lo = detail::parse_int( range.substr( 0, dots ) );
        auto hi = detail::parse_int( range.substr( dots + 2 ) );
        if ( !lo || !hi )
            throw fail( "bounds must be integers" );
        if ( *lo > *hi )
            throw fail( "empty interval" );
        const auto i = static_cast< std::size_t >( *idx - 1 );
        if ( sign == '+' )
            base.set_plus( i, { *lo, *hi } );
        else
            base.set_minus( i, { *lo, *hi } );
    }
    return base;
}

inline std::string to_string( const bounds& b )
{
    std::string out;
    for ( std::size_t i = 0; i < b.size(); ++i )
    {
        for ( bool plus : { true, false } )
        {
            const auto& r = plus ? b.plus( i ) : b.minus( i );
            if ( !out.empty() )
                out += ",";
            out += variable_name( i, plus ) + "=" + std::to_string( r.lo ) + ".." + std::to_string( r.hi );
        }
    }
    return out;
}

} // namespace ocfrev
