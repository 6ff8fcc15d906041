#pragma once

// Exhaustive cross-validation of the revision constraints on small signatures.

#include "revision.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace ocfrev
{

inline constexpr std::size_t default_enumeration_budget = 10'000'000;

// (max_rank + 1)^|Ω| − max_rank^|Ω|, or nullopt past `limit`.
inline std::optional< std::size_t > ocf_count( const signature& sig, rank_value max_rank,
                                               std::size_t limit = default_enumeration_budget )
{
    long double all = std::pow( static_cast< long double >( max_rank + 1 ), sig.world_count() );
    long double without_zero = std::pow( static_cast< long double >( max_rank ), sig.world_count() );
    long double n = all - without_zero;
    if ( n > static_cast< long double >( limit ) )
        return std::nullopt;
    return static_cast< std::size_t >( std::llround( n ) );
}

// Calls `visit` for every OCF with ranks in [0, max_rank], in lexicographic
// order of the rank table (world 0 first, last world varying fastest).
inline std::size_t enumerate_ocfs( const signature& sig, rank_value max_rank, const std::function< void( const ocf& ) >& visit,
                                   std::size_t budget = default_enumeration_budget )
{
    if ( max_rank < 0 )
        throw error( "max_rank must be non-negative" );
    if ( !ocf_count( sig, max_rank, budget ) )
        throw budget_exceeded( "enumeration of ranking functions over " + std::to_string( sig.world_count() ) +
                               " worlds with ranks up to " + std::to_string( max_rank ) + " exceeds " +
                               std::to_string( budget ) );
    const auto n = sig.world_count();
    std::vector< rank_value > table( n, 0 );
    std::size_t visited = 0;
    while ( true )
    {
        if ( std::find( table.begin(), table.end(), 0 ) != table.end() )
        {
            visit( ocf( sig, table ) );
            ++visited;
        }
        std::size_t j = n;
        while ( j > 0 && table[ j - 1 ] == max_rank )
            table[ --j ] = 0;
        if ( j == 0 )
            break;
        ++table[ j - 1 ];
    }
    return visited;
}

inline std::vector< ocf > enumerate_ocfs( const signature& sig, rank_value max_rank,
                                          std::size_t budget = default_enumeration_budget )
{
    std::vector< ocf > out;
    enumerate_ocfs( sig, max_rank, [&]( const ocf& k ) { out.push_back( k ); }, budget );
    return out;
}

struct completeness_violation
{
    ocf posterior;
    std::string reason;
};

struct completeness_report
{
    std::size_t enumerated = 0;
    std::size_t satisfying = 0;      // κ° ⊩ Ψ
    std::size_t representable = 0;   // ... and conditional-preserving w.r.t. cond(Ψ)
    std::size_t non_integral = 0;    // witnesses that needed the integer-point search
    std::vector< completeness_violation > violations;
    // Smallest box covering every integer witness found, per flat variable (γ1+, γ1-, ...).
    std::vector< interval > needed_box;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

// For every enumerated κ° that satisfies Ψ and is conditional-preserving
// w.r.t. cond(Ψ), an integer witness γ must satisfy the constraint system and
// induce exactly κ°.
inline completeness_report make_completeness_report( const ocf& kappa, const descriptor& psi, rank_value max_rank,
                                                     std::size_t budget = default_enumeration_budget )
{
    const auto problem = build_csp( kappa, psi );
    const cross_checker check( kappa, psi );
    const pcp_system system( kappa.sig(), problem.conds() );

    completeness_report report;
    report.enumerated = enumerate_ocfs(
        kappa.sig(), max_rank,
        [&]( const ocf& post ) {
            if ( !check.holds_in( post ) )
                return;
            ++report.satisfying;
            if ( !system.representable( kappa, post ) )
                return;
            ++report.representable;
            const auto witness = system.analyze( kappa, post ).witness;
            if ( !witness )
            {
                report.violations.push_back( { post, "fast and full representability checks disagree" } );
                return;
            }
            if ( !witness->particular_is_integral() )
                ++report.non_integral;
            const auto point = integer_point( *witness, max_rank + kappa.max_rank() + 1 );
            if ( !point )
            {
                report.violations.push_back( { post, "no integer witness" } );
                return;
            }
            if ( !satisfies_all( problem, point->gamma ) )
            {
                report.violations.push_back( { post, "witness violates the constraint system" } );
                return;
            }
            const auto ind = problem.induce( point->gamma.flat() );
            if ( !( ind.posterior == post ) || ind.kappa0 != point->kappa0 )
            {
                report.violations.push_back( { post, "witness induces a different ranking function" } );
                return;
            }
            const auto flat = point->gamma.flat();
            if ( report.needed_box.empty() )
                for ( auto v : flat )
                    report.needed_box.push_back( { v, v } );
            for ( std::size_t k = 0; k < flat.size(); ++k )
            {
                report.needed_box[ k ].lo = std::min( report.needed_box[ k ].lo, flat[ k ] );
                report.needed_box[ k ].hi = std::max( report.needed_box[ k ].hi, flat[ k ] );
            }
        },
        budget );
    return report;
}

} // namespace ocfrev
