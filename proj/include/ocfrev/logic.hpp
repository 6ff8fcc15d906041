#pragma once

#include "errors.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ocfrev
{

inline constexpr std::size_t default_max_atoms = 16;

inline bool is_identifier( std::string_view s )
{
    if ( s.empty() )
        return false;
    auto alpha = []( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || c == '_'; };
    auto digit = []( char c ) { return c >= '0' && c <= '9'; };
    if ( !alpha( s.front() ) )
        return false;
    return std::all_of( s.begin(), s.end(), [&]( char c ) { return alpha( c ) || digit( c ); } );
}

// Ordered set of atom names. Declaration order fixes the bit layout of worlds:
// bit i of a world is the truth value of atoms()[i].
class signature
{
    std::vector< std::string > _atoms;

public:
    signature() = default;

    explicit signature( std::vector< std::string > atoms, std::size_t max_atoms = default_max_atoms )
        : _atoms{ std::move( atoms ) }
    {
        if ( _atoms.empty() )
            throw error( "signature must not be empty" );
        if ( _atoms.size() > max_atoms )
            throw signature_too_large( "signature has " + std::to_string( _atoms.size() ) +
                                       " atoms, limit is " + std::to_string( max_atoms ) );
        for ( std::size_t i = 0; i < _atoms.size(); ++i )
        {
            const auto& name = _atoms[ i ];
            if ( !is_identifier( name ) || name == "top" || name == "bot" )
                throw error( "invalid atom name '" + name + "'" );
            if ( std::find( _atoms.begin(), _atoms.begin() + static_cast< std::ptrdiff_t >( i ), name ) !=
                 _atoms.begin() + static_cast< std::ptrdiff_t >( i ) )
                throw error( "duplicate atom '" + name + "'" );
        }
    }

    [[nodiscard]] std::size_t size() const { return _atoms.size(); }
    [[nodiscard]] std::size_t world_count() const { return std::size_t{ 1 } << _atoms.size(); }
    [[nodiscard]] const std::vector< std::string >& atoms() const { return _atoms; }
    [[nodiscard]] const std::string& name( std::size_t i ) const { return _atoms[ i ]; }

    [[nodiscard]] std::ptrdiff_t index_of( std::string_view name ) const
    {
        auto it = std::find( _atoms.begin(), _atoms.end(), name );
        return it == _atoms.end() ? -1 : it - _atoms.begin();
    }

    friend bool operator==( const signature&, const signature& ) = default;
};

// A propositional interpretation. Worlds are totally ordered by their bit pattern.
struct world
{
    std::uint32_t bits = 0;

    [[nodiscard]] bool holds( std::size_t atom ) const { return ( ( bits >> atom ) & 1U ) != 0; }
    [[nodiscard]] std::size_t index() const { return bits; }

    friend auto operator<=>( world, world ) = default;
};

// "b f !p" style rendering, one literal per atom in declaration order.
inline std::string to_string( world w, const signature& sig )
{
    std::string out;
    for ( std::size_t i = 0; i < sig.size(); ++i )
    {
        if ( i > 0 )
            out += ' ';
        if ( !w.holds( i ) )
            out += '!';
        out += sig.name( i );
    }
    return out;
}

// Row order used for all printed world tables: first atom varies slowest and
// positive literals come first (b f p, b f !p, b !f p, ...).
inline std::vector< world > display_order( const signature& sig )
{
    const auto n = sig.size();
    std::vector< world > out;
    out.reserve( sig.world_count() );
    for ( std::uint32_t k = 0; k < sig.world_count(); ++k )
    {
        world w;
        for ( std::size_t i = 0; i < n; ++i )
            if ( ( ( k >> ( n - 1 - i ) ) & 1U ) == 0 )
                w.bits |= 1U << i;
        out.push_back( w );
    }
    return out;
}

// Explicit set of worlds over a fixed signature size.
class world_set
{
    std::vector< std::uint64_t > _words;
    std::size_t _universe = 0;

    void trim()
    {
        if ( _universe % 64 != 0 && !_words.empty() )
            _words.back() &= ( std::uint64_t{ 1 } << ( _universe % 64 ) ) - 1;
    }

public:
    world_set() = default;
    explicit world_set( std::size_t universe ) : _words( ( universe + 63 ) / 64, 0 ), _universe{ universe } {}

    static world_set all( std::size_t universe )
    {
        world_set s( universe );
        std::fill( s._words.begin(), s._words.end(), ~std::uint64_t{ 0 } );
        s.trim();
        return s;
    }

    [[nodiscard]] std::size_t universe() const { return _universe; }
    [[nodiscard]] bool contains( world w ) const { return ( ( _words[ w.bits / 64 ] >> ( w.bits % 64 ) ) & 1U ) != 0; }
    void insert( world w ) { _words[ w.bits / 64 ] |= std::uint64_t{ 1 } << ( w.bits % 64 ); }

    [[nodiscard]] std::size_t size() const
    {
        std::size_t n = 0;
        for ( auto word : _words )
            n += static_cast< std::size_t >( std::popcount( word ) );
        return n;
    }
    [[nodiscard]] bool empty() const
    {
        return std::all_of( _words.begin(), _words.end(), []( auto w ) { return w == 0; } );
    }

    // Members in ascending world order.
    [[nodiscard]] std::vector< world > elements() const
    {
        std::vector< world > out;
        for ( std::size_t i = 0; i < _words.size(); ++i )
        {
            auto word = _words[ i ];
            while ( word != 0 )
            {
                auto bit = static_cast< std::uint32_t >( std::countr_zero( word ) );
                out.push_back( world{ static_cast< std::uint32_t >( i * 64 ) + bit } );
                word &= word - 1;
            }
        }
        return out;
    }

    [[nodiscard]] bool subset_of( const world_set& other ) const
    {
        assert( _universe == other._universe );
        for ( std::size_t i = 0; i < _words.size(); ++i )
            if ( ( _words[ i ] & ~other._words[ i ] ) != 0 )
                return false;
        return true;
    }

    friend world_set operator&( world_set a, const world_set& b )
    {
        for ( std::size_t i = 0; i < a._words.size(); ++i )
            a._words[ i ] &= b._words[ i ];
        return a;
    }
    friend world_set operator|( world_set a, const world_set& b )
    {
        for ( std::size_t i = 0; i < a._words.size(); ++i )
            a._words[ i ] |= b._words[ i ];
        return a;
    }
    friend world_set operator~( world_set a )
    {
        for ( auto& w : a._words )
            w = ~w;
        a.trim();
        return a;
    }

    friend bool operator==( const world_set&, const world_set& ) = default;
    friend auto operator<=>( const world_set&, const world_set& ) = default;
};

enum class connective
{
    atom,
    top,
    bot,
    negation,
    conjunction,
    disjunction,
    implication,
};

// Immutable propositional formula. Atoms refer to signature positions.
class formula
{
    struct node
    {
        connective kind;
        std::size_t atom = 0;
        std::shared_ptr< const node > left;
        std::shared_ptr< const node > right;
    };

    std::shared_ptr< const node > _node;

    explicit formula( std::shared_ptr< const node > n ) : _node{ std::move( n ) } {}

    static formula make( connective kind, const formula& l, const formula& r )
    {
        return formula( std::make_shared< const node >( node{ kind, 0, l._node, r._node } ) );
    }

public:
    formula() : formula( top() ) {}

    static formula atom( std::size_t index ) { return formula( std::make_shared< const node >( node{ connective::atom, index, {}, {} } ) ); }
    static formula top() { return formula( std::make_shared< const node >( node{ connective::top, 0, {}, {} } ) ); }
    static formula bot() { return formula( std::make_shared< const node >( node{ connective::bot, 0, {}, {} } ) ); }

    friend formula operator!( const formula& f )
    {
        return formula( std::make_shared< const node >( node{ connective::negation, 0, f._node, {} } ) );
    }
    friend formula operator&&( const formula& l, const formula& r ) { return make( connective::conjunction, l, r ); }
    friend formula operator||( const formula& l, const formula& r ) { return make( connective::disjunction, l, r ); }
    static formula implies( const formula& l, const formula& r ) { return make( connective::implication, l, r ); }

    [[nodiscard]] connective kind() const { return _node->kind; }
    [[nodiscard]] std::size_t atom_index() const { return _node->atom; }
    [[nodiscard]] formula operand() const { return formula( _node->left ); }
    [[nodiscard]] formula left() const { return formula( _node->left ); }
    [[nodiscard]] formula right() const { return formula( _node->right ); }

    [[nodiscard]] bool eval( world w ) const
    {
        switch ( kind() )
        {
        case connective::atom: return w.holds( _node->atom );
        case connective::top: return true;
        case connective::bot: return false;
        case connective::negation: return !left().eval( w );
        case connective::conjunction: return left().eval( w ) && right().eval( w );
        case connective::disjunction: return left().eval( w ) || right().eval( w );
        case connective::implication: return !left().eval( w ) || right().eval( w );
        }
        return false;
    }

    // Largest atom index referenced plus one.
    [[nodiscard]] std::size_t atom_bound() const
    {
        switch ( kind() )
        {
        case connective::atom: return _node->atom + 1;
        case connective::top:
        case connective::bot: return 0;
        case connective::negation: return left().atom_bound();
        default: return std::max( left().atom_bound(), right().atom_bound() );
        }
    }
};

inline bool eval( const formula& f, world w ) { return f.eval( w ); }

inline world_set models( const formula& f, const signature& sig )
{
    if ( f.atom_bound() > sig.size() )
        throw signature_mismatch( "formula refers to atoms outside the signature" );
    world_set out( sig.world_count() );
    for ( std::uint32_t bits = 0; bits < sig.world_count(); ++bits )
        if ( f.eval( world{ bits } ) )
            out.insert( world{ bits } );
    return out;
}

namespace detail
{

inline int precedence( connective k )
{
    switch ( k )
    {
    case connective::implication: return 1;
    case connective::disjunction: return 2;
    case connective::conjunction: return 3;
    case connective::negation: return 4;
    default: return 5;
    }
}

inline void print( const formula& f, const signature& sig, int context, std::string& out )
{
    const int prec = precedence( f.kind() );
    const bool parens = prec < context;
    if ( parens )
        out += '(';
    switch ( f.kind() )
    {
    case connective::atom: out += sig.name( f.atom_index() ); break;
    case connective::top: out += "top"; break;
    case connective::bot: out += "bot"; break;
    case connective::negation:
        out += '!';
        print( f.operand(), sig, prec, out );
        break;
    case connective::conjunction:
        print( f.left(), sig, prec, out );
        out += " & ";
        print( f.right(), sig, prec + 1, out );
        break;
    case connective::disjunction:
        print( f.left(), sig, prec, out );
        out += " | ";
        print( f.right(), sig, prec + 1, out );
        break;
    case connective::implication:
        // right associative
        print( f.left(), sig, prec + 1, out );
        out += " -> ";
        print( f.right(), sig, prec, out );
        break;
    }
    if ( parens )
        out += ')';
}

} // namespace detail

// Renders in the input grammar; the result re-parses to the same model set.
inline std::string to_string( const formula& f, const signature& sig )
{
    std::string out;
    detail::print( f, sig, 0, out );
    return out;
}

// (B|A): "if A then usually B".
struct conditional
{
    formula consequent;
    formula antecedent;

    [[nodiscard]] formula verification() const { return antecedent && consequent; }
    [[nodiscard]] formula falsification() const { return antecedent && !consequent; }
};

// Semantic identity of a conditional: its verifying and falsifying world sets.
struct conditional_key
{
    world_set verifying;
    world_set falsifying;

    friend bool operator==( const conditional_key&, const conditional_key& ) = default;
    friend auto operator<=>( const conditional_key&, const conditional_key& ) = default;
};

inline conditional_key key_of( const conditional& c, const signature& sig )
{
    return { models( c.verification(), sig ), models( c.falsification(), sig ) };
}

inline bool equivalent( const conditional& a, const conditional& b, const signature& sig )
{
    return key_of( a, sig ) == key_of( b, sig );
}

inline std::string to_string( const conditional& c, const signature& sig )
{
    // A disjunction on either side would collide with the separator bar.
    auto side = [&]( const formula& f ) {
        return f.kind() == connective::disjunction || f.kind() == connective::implication
                   ? "(" + to_string( f, sig ) + ")"
                   : to_string( f, sig );
    };
    return "(" + side( c.consequent ) + " | " + side( c.antecedent ) + ")";
}

enum class verdict
{
    verifies,
    falsifies,
    not_applicable,
};

inline verdict verdict_of( const conditional& c, world w )
{
    if ( !c.antecedent.eval( w ) )
        return verdict::not_applicable;
    return c.consequent.eval( w ) ? verdict::verifies : verdict::falsifies;
}

inline char to_char( verdict v )
{
    switch ( v )
    {
    case verdict::verifies: return 'v';
    case verdict::falsifies: return 'f';
    case verdict::not_applicable: return '-';
    }
    return '?';
}

} // namespace ocfrev
