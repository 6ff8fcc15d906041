#pragma once

#include "logic.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ocfrev
{

using rank_value = std::int64_t;

// Rank of a formula: a natural number, or infinity for unsatisfiable formulas.
class rank
{
    rank_value _value = 0;
    bool _infinite = false;

    constexpr rank( rank_value v, bool inf ) : _value{ v }, _infinite{ inf } {}

public:
    constexpr rank() = default;
    constexpr rank( rank_value v ) : _value{ v } {} // NOLINT(google-explicit-constructor)

    static constexpr rank infinity() { return { 0, true }; }

    [[nodiscard]] constexpr bool is_infinite() const { return _infinite; }
    [[nodiscard]] constexpr rank_value value() const { return _value; }

    // ∞ absorbs finite shifts.
    friend constexpr rank operator+( rank r, rank_value shift ) { return r._infinite ? r : rank( r._value + shift ); }

    friend constexpr bool operator==( rank a, rank b )
    {
        return a._infinite == b._infinite && ( a._infinite || a._value == b._value );
    }
    friend constexpr std::strong_ordering operator<=>( rank a, rank b )
    {
        if ( a._infinite || b._infinite )
            return a._infinite <=> b._infinite;
        return a._value <=> b._value;
    }
};

inline std::string to_string( rank r ) { return r.is_infinite() ? "inf" : std::to_string( r.value() ); }

// Ordinal conditional function: a finite rank for every world, at least one world at rank 0.
class ocf
{
    signature _sig;
    std::vector< rank_value > _ranks; // indexed by world bits

public:
    ocf( signature sig, std::vector< rank_value > ranks ) : _sig{ std::move( sig ) }, _ranks{ std::move( ranks ) }
    {
        if ( _ranks.size() != _sig.world_count() )
            throw invalid_ocf( "rank table has " + std::to_string( _ranks.size() ) + " entries, expected " +
                               std::to_string( _sig.world_count() ) );
        bool has_zero = false;
        for ( auto r : _ranks )
        {
            if ( r < 0 )
                throw invalid_ocf( "negative rank " + std::to_string( r ) );
            has_zero = has_zero || r == 0;
        }
        if ( !has_zero )
            throw invalid_ocf( "no world has rank 0" );
    }

    static ocf uniform( const signature& sig ) { return ocf( sig, std::vector< rank_value >( sig.world_count(), 0 ) ); }

    [[nodiscard]] const signature& sig() const { return _sig; }
    [[nodiscard]] const std::vector< rank_value >& table() const { return _ranks; }
    [[nodiscard]] rank_value operator()( world w ) const { return _ranks[ w.bits ]; }
    [[nodiscard]] rank_value max_rank() const { return *std::max_element( _ranks.begin(), _ranks.end() ); }

    friend bool operator==( const ocf&, const ocf& ) = default;
};

inline rank rank_of( const ocf& kappa, const world_set& worlds )
{
    rank best = rank::infinity();
    for ( auto w : worlds.elements() )
        best = std::min( best, rank( kappa( w ) ) );
    return best;
}

// κ(A) = min κ over Mod(A); ∞ when A is unsatisfiable.
inline rank rank_of( const ocf& kappa, const formula& f ) { return rank_of( kappa, models( f, kappa.sig() ) ); }

// κ ⊨ (B|A) iff κ(AB) < κ(AB̄).
inline bool accepts( const ocf& kappa, const conditional& c )
{
    return rank_of( kappa, c.verification() ) < rank_of( kappa, c.falsification() );
}

inline world_set belief_models( const ocf& kappa )
{
    world_set out( kappa.sig().world_count() );
    for ( std::uint32_t bits = 0; bits < kappa.sig().world_count(); ++bits )
        if ( kappa( world{ bits } ) == 0 )
            out.insert( world{ bits } );
    return out;
}

inline bool believes( const ocf& kappa, const formula& f )
{
    return belief_models( kappa ).subset_of( models( f, kappa.sig() ) );
}

// Membership in the (infinite) set of conditional beliefs of κ.
inline bool accepts_conditional_belief( const ocf& kappa, const conditional& c ) { return accepts( kappa, c ); }

// Disjunction of the complete conjunctions of the rank-0 worlds, in display order.
inline std::string belief_formula( const ocf& kappa )
{
    const auto& sig = kappa.sig();
    const auto beliefs = belief_models( kappa );
    if ( beliefs.size() == sig.world_count() )
        return "top";
    std::string out;
    for ( auto w : display_order( sig ) )
    {
        if ( !beliefs.contains( w ) )
            continue;
        if ( !out.empty() )
            out += " | ";
        out += '(';
        for ( std::size_t i = 0; i < sig.size(); ++i )
        {
            if ( i > 0 )
                out += " & ";
            if ( !w.holds( i ) )
                out += '!';
            out += sig.name( i );
        }
        out += ')';
    }
    return out;
}

} // namespace ocfrev
