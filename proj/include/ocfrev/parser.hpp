#pragma once

// Surface syntax:
//   formula     := implication
//   implication := disjunction [ "->" implication ]
//   disjunction := conjunction { "|" conjunction }
//   conjunction := unary { "&" unary }
//   unary       := "!" unary | atom | "top" | "bot" | "(" formula ")"
//
//   conditional := "(" formula "|" formula ")"   exactly one top-level bar
//   descriptor  := [ molecular { "," molecular } ]
//   molecular   := mconj { "|" mconj }
//   mconj       := munary { "&" munary }
//   munary      := "!" munary | "B(" body ")" | "(" molecular ")"
//   body        := formula | formula "|" formula   ("B(A)" means "B(A | top)")

#include "descriptor.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ocfrev
{

namespace detail
{

enum class token_kind
{
    ident,
    bang,
    amp,
    bar,
    arrow,
    lparen,
    rparen,
    comma,
    end,
};

struct token
{
    token_kind kind;
    std::string text;
    std::size_t pos;
};

inline std::vector< token > tokenize( std::string_view src )
{
    std::vector< token > out;
    std::size_t i = 0;
    while ( i < src.size() )
    {
        const char c = src[ i ];
        if ( c == ' ' || c == '\t' || c == '\n' || c == '\r' )
        {
            ++i;
            continue;
        }
        auto single = [&]( token_kind k ) {
            out.push_back( { k, std::string( 1, c ), i } );
            ++i;
        };
        switch ( c )
        {
        case '!': single( token_kind::bang ); continue;
        case '&': single( token_kind::amp ); continue;
        case '|': single( token_kind::bar ); continue;
        case '(': single( token_kind::lparen ); continue;
        case ')': single( token_kind::rparen ); continue;
        case ',': single( token_kind::comma ); continue;
        case '-':
            if ( i + 1 < src.size() && src[ i + 1 ] == '>' )
            {
                out.push_back( { token_kind::arrow, "->", i } );
                i += 2;
                continue;
            }
            throw parse_error( i, "expected '->'" );
        default: break;
        }
        auto word_start = []( char ch ) { return ( ch >= 'a' && ch <= 'z' ) || ( ch >= 'A' && ch <= 'Z' ) || ch == '_'; };
        if ( word_start( c ) )
        {
            std::size_t j = i + 1;
            while ( j < src.size() && ( word_start( src[ j ] ) || ( src[ j ] >= '0' && src[ j ] <= '9' ) ) )
                ++j;
            out.push_back( { token_kind::ident, std::string( src.substr( i, j - i ) ), i } );
            i = j;
            continue;
        }
        throw parse_error( i, std::string( "unexpected character '" ) + c + "'" );
    }
    out.push_back( { token_kind::end, "", src.size() } );
    return out;
}

class parser
{
    const std::vector< token >& _toks;
    const signature& _sig;
    std::size_t _pos;
    std::size_t _end; // index of the token that terminates the current range

public:
    parser( const std::vector< token >& toks, const signature& sig, std::size_t begin, std::size_t end )
        : _toks{ toks }, _sig{ sig }, _pos{ begin }, _end{ end } {}

    [[nodiscard]] bool at_end() const { return _pos >= _end; }
    [[nodiscard]] std::size_t position() const { return _pos; }

    const token& peek() const { return _toks[ std::min( _pos, _end ) ]; }

    bool accept( token_kind k )
    {
        if ( !at_end() && _toks[ _pos ].kind == k )
        {
            ++_pos;
            return true;
        }
        return false;
    }

    void expect( token_kind k, const char* what )
    {
        if ( !accept( k ) )
            fail( std::string( "expected " ) + what );
    }

    [[noreturn]] void fail( const std::string& message ) const
    {
        const auto& t = peek();
        if ( at_end() || t.kind == token_kind::end )
            throw parse_error( t.pos, message + ", found end of input" );
        throw parse_error( t.pos, message + ", found '" + t.text + "'" );
    }

    void expect_end()
    {
        if ( !at_end() )
            fail( "unexpected trailing input" );
    }

    // Index of the rparen matching the lparen at `open`.
    [[nodiscard]] std::size_t matching( std::size_t open ) const
    {
        int depth = 0;
        for ( std::size_t i = open; i < _end; ++i )
        {
            if ( _toks[ i ].kind == token_kind::lparen )
                ++depth;
            else if ( _toks[ i ].kind == token_kind::rparen && --depth == 0 )
                return i;
        }
        throw parse_error( _toks[ open ].pos, "unbalanced '('" );
    }

    [[nodiscard]] std::vector< std::size_t > top_level_bars( std::size_t begin, std::size_t end ) const
    {
        std::vector< std::size_t > bars;
        int depth = 0;
        for ( std::size_t i = begin; i < end; ++i )
        {
            switch ( _toks[ i ].kind )
            {
            case token_kind::lparen: ++depth; break;
            case token_kind::rparen: --depth; break;
            case token_kind::bar:
                if ( depth == 0 )
                    bars.push_back( i );
                break;
            default: break;
            }
        }
        return bars;
    }

    formula parse_formula()
    {
        auto lhs = parse_disjunction();
        if ( accept( token_kind::arrow ) )
            return formula::implies( lhs, parse_formula() );
        return lhs;
    }

    formula parse_disjunction()
    {
        auto f = parse_conjunction();
        while ( accept( token_kind::bar ) )
            f = f || parse_conjunction();
        return f;
    }

    formula parse_conjunction()
    {
        auto f = parse_unary();
        while ( accept( token_kind::amp ) )
            f = f && parse_unary();
        return f;
    }

    formula parse_unary()
    {
        if ( accept( token_kind::bang ) )
            return !parse_unary();
        if ( accept( token_kind::lparen ) )
        {
            auto f = parse_formula();
            expect( token_kind::rparen, "')'" );
            return f;
        }
        const auto& t = peek();
        if ( at_end() || t.kind != token_kind::ident )
            fail( "expected atom, 'top', 'bot', '!' or '('" );
        ++_pos;
        if ( t.text == "top" )
            return formula::top();
        if ( t.text == "bot" )
            return formula::bot();
        auto idx = _sig.index_of( t.text );
        if ( idx < 0 )
            throw unknown_atom( t.pos, t.text );
        return formula::atom( static_cast< std::size_t >( idx ) );
    }

    // Parses a whole token range [begin, end) as a formula.
    formula formula_in( std::size_t begin, std::size_t end )
    {
        if ( begin >= end )
            throw parse_error( _toks[ begin ].pos, "empty formula" );
        parser sub( _toks, _sig, begin, end );
        auto f = sub.parse_formula();
        sub.expect_end();
        return f;
    }

    // Body of a conditional between its parentheses; no bar means "(A | top)".
    conditional conditional_in( std::size_t begin, std::size_t end )
    {
        auto bars = top_level_bars( begin, end );
        if ( bars.size() > 1 )
            throw parse_error( _toks[ bars[ 1 ] ].pos,
                               "more than one top-level '|' in conditional; parenthesize disjunctions" );
        if ( bars.empty() )
            return { formula_in( begin, end ), formula::top() };
        return { formula_in( begin, bars[ 0 ] ), formula_in( bars[ 0 ] + 1, end ) };
    }

    molecular parse_molecular()
    {
        auto m = parse_molecular_conjunction();
        while ( accept( token_kind::bar ) )
            m = m || parse_molecular_conjunction();
        return m;
    }

    molecular parse_molecular_conjunction()
    {
        auto m = parse_molecular_unary();
        while ( accept( token_kind::amp ) )
            m = m && parse_molecular_unary();
        return m;
    }

    molecular parse_molecular_unary()
    {
        if ( accept( token_kind::bang ) )
            return !parse_molecular_unary();
        if ( !at_end() && peek().kind == token_kind::lparen )
        {
            ++_pos;
            auto m = parse_molecular();
            expect( token_kind::rparen, "')'" );
            return m;
        }
        if ( !at_end() && peek().kind == token_kind::ident && peek().text == "B" )
        {
            ++_pos;
            if ( at_end() || peek().kind != token_kind::lparen )
                fail( "expected '(' after 'B'" );
            const auto open = _pos;
            const auto close = matching( open );
            auto c = conditional_in( open + 1, close );
            _pos = close + 1;
            return molecular::belief( std::move( c ) );
        }
        fail( "expected 'B(', '!' or '(' in descriptor" );
    }
};

} // namespace detail

inline formula parse_formula( std::string_view text, const signature& sig )
{
    auto toks = detail::tokenize( text );
    detail::parser p( toks, sig, 0, toks.size() - 1 );
    return p.formula_in( 0, toks.size() - 1 );
}

// "(B | A)"; a bare "B | A" and a barless "(A)" (read as (A | top)) are accepted too.
inline conditional parse_conditional( std::string_view text, const signature& sig )
{
    auto toks = detail::tokenize( text );
    const auto end = toks.size() - 1;
    detail::parser p( toks, sig, 0, end );
    if ( end == 0 )
        throw parse_error( 0, "empty conditional" );
    if ( toks[ 0 ].kind == detail::token_kind::lparen && p.matching( 0 ) == end - 1 )
        return p.conditional_in( 1, end - 1 );
    return p.conditional_in( 0, end );
}

// Comma-separated list of conditionals, as taken by `--conds`.
inline std::vector< conditional > parse_conditional_list( std::string_view text, const signature& sig )
{
    auto toks = detail::tokenize( text );
    const auto end = toks.size() - 1;
    detail::parser p( toks, sig, 0, end );
    std::vector< conditional > out;
    std::size_t i = 0;
    while ( i < end )
    {
        if ( toks[ i ].kind != detail::token_kind::lparen )
            throw parse_error( toks[ i ].pos, "expected '(' to start a conditional" );
        const auto close = p.matching( i );
        out.push_back( p.conditional_in( i + 1, close ) );
        i = close + 1;
        if ( i < end )
        {
            if ( toks[ i ].kind != detail::token_kind::comma )
                throw parse_error( toks[ i ].pos, "expected ','" );
            ++i;
            if ( i == end )
                throw parse_error( toks[ i ].pos, "trailing ','" );
        }
    }
    return out;
}

inline descriptor parse_descriptor( std::string_view text, const signature& sig )
{
    auto toks = detail::tokenize( text );
    detail::parser p( toks, sig, 0, toks.size() - 1 );
    std::vector< molecular > elements;
    if ( p.at_end() )
        return descriptor( sig );
    do
        elements.push_back( p.parse_molecular() );
    while ( p.accept( detail::token_kind::comma ) );
    p.expect_end();
    return descriptor( sig, elements );
}

} // namespace ocfrev
