#pragma once

#include <ocfrev/ocfrev.hpp>

#include <random>
#include <string>
#include <vector>

namespace fixtures
{

using namespace ocfrev;

inline signature penguin_sig() { return signature( { "b", "f", "p" } ); }

// Ranks given in display order (first atom slowest, positive literal first).
inline ocf from_display( const signature& sig, const std::vector< rank_value >& ranks )
{
    std::vector< rank_value > table( sig.world_count() );
    const auto order = display_order( sig );
    for ( std::size_t k = 0; k < order.size(); ++k )
        table[ order[ k ].bits ] = ranks.at( k );
    return ocf( sig, table );
}

inline std::vector< rank_value > display_ranks( const ocf& kappa )
{
    std::vector< rank_value > out;
    for ( auto w : display_order( kappa.sig() ) )
        out.push_back( kappa( w ) );
    return out;
}

inline ocf kappa_p() { return from_display( penguin_sig(), { 2, 0, 1, 1, 4, 0, 2, 0 } ); }
inline ocf kappa_p_revised() { return from_display( penguin_sig(), { 1, 2, 1, 3, 3, 0, 2, 0 } ); }

inline world w( const signature& sig, const std::string& text ) { return detail::parse_world( text, sig, 0 ); }

inline const char* penguin_psi = "B(p|b), !B(f|p), !B(!f|p)";

inline std::vector< conditional > penguin_conds( const signature& sig )
{
    return parse_conditional_list( "(p|b),(f|p),(!f|p)", sig );
}

inline bounds example7_bounds()
{
    bounds b( 3, { 0, 0 } );
    b.set_plus( 0, { -2, 0 } );
    b.set_minus( 0, { 0, 2 } );
    b.set_plus( 1, { -1, 1 } );
    b.set_minus( 1, { -1, 1 } );
    return b;
}

inline ocf random_ocf( const signature& sig, rank_value max_rank, std::mt19937& rng )
{
    std::uniform_int_distribution< rank_value > dist( 0, max_rank );
    std::vector< rank_value > table( sig.world_count() );
    for ( auto& r : table )
        r = dist( rng );
    table[ std::uniform_int_distribution< std::size_t >( 0, table.size() - 1 )( rng ) ] = 0;
    return ocf( sig, table );
}

// Random formula over the first `atoms` atoms.
inline formula random_formula( std::size_t atoms, int depth, std::mt19937& rng )
{
    std::uniform_int_distribution< int > pick( 0, depth <= 0 ? 2 : 7 );
    switch ( pick( rng ) )
    {
    case 0:
    case 1:
        return formula::atom( std::uniform_int_distribution< std::size_t >( 0, atoms - 1 )( rng ) );
    case 2:
        return std::uniform_int_distribution< int >( 0, 9 )( rng ) == 0 ? formula::top() : formula::atom( 0 );
    case 3:
        return !random_formula( atoms, depth - 1, rng );
    case 4:
        return random_formula( atoms, depth - 1, rng ) && random_formula( atoms, depth - 1, rng );
    case 5:
        return random_formula( atoms, depth - 1, rng ) || random_formula( atoms, depth - 1, rng );
    case 6:
        return formula::implies( random_formula( atoms, depth - 1, rng ), random_formula( atoms, depth - 1, rng ) );
    default:
        return std::uniform_int_distribution< int >( 0, 3 )( rng ) == 0 ? formula::bot()
                                                                         : !formula::atom( atoms - 1 );
    }
}

// Random elementary descriptor: `n` literals over random conditionals.
inline descriptor random_elementary( const signature& sig, std::size_t n, std::mt19937& rng )
{
    std::vector< molecular > elems;
    for ( std::size_t k = 0; k < n; ++k )
    {
        conditional c{ random_formula( sig.size(), 1, rng ), random_formula( sig.size(), 1, rng ) };
        if ( std::uniform_int_distribution< int >( 0, 3 )( rng ) == 0 )
            c.antecedent = formula::top();
        auto m = molecular::belief( c );
        elems.push_back( std::bernoulli_distribution( 0.5 )( rng ) ? m : !m );
    }
    return descriptor( sig, elems );
}

} // namespace fixtures
