#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ocfrev;
using fixtures::w;

namespace
{

const signature sig = fixtures::penguin_sig();
const ocf kp = fixtures::kappa_p();
const ocf kpr = fixtures::kappa_p_revised();

descriptor d( const char* text ) { return parse_descriptor( text, sig ); }
gamma_vector g( std::vector< rank_value > flat ) { return gamma_vector::from_flat( flat ); }

std::vector< std::vector< rank_value > > flats( const std::vector< solution >& s )
{
    std::vector< std::vector< rank_value > > out;
    for ( const auto& x : s )
        out.push_back( x.gamma.flat() );
    return out;
}

TEST( BuildCsp, PenguinConstraints )
{
    auto problem = build_csp( kp, d( fixtures::penguin_psi ) );
    ASSERT_EQ( problem.constraints().size(), 3u );
    ASSERT_EQ( problem.conds().size(), 3u );
    EXPECT_EQ( problem.variable_count(), 6u );
    const auto& c = problem.constraints();
    EXPECT_TRUE( c[ 0 ].positive );
    EXPECT_FALSE( c[ 1 ].positive );
    EXPECT_FALSE( c[ 2 ].positive );
    for ( std::size_t k = 0; k < 3; ++k )
        EXPECT_EQ( c[ k ].index, k );
    // V and F of (f|p)
    EXPECT_EQ( c[ 1 ].verifying.size(), 2u );
    EXPECT_TRUE( c[ 1 ].verifying.contains( w( sig, "b f p" ) ) );
    EXPECT_TRUE( c[ 1 ].verifying.contains( w( sig, "!b f p" ) ) );
    EXPECT_TRUE( c[ 1 ].falsifying.contains( w( sig, "b !f p" ) ) );
    EXPECT_TRUE( ( c[ 1 ].verifying & c[ 1 ].falsifying ).empty() );
}

TEST( BuildCsp, EmptyAndNonElementary )
{
    auto problem = build_csp( kp, d( "" ) );
    EXPECT_TRUE( problem.constraints().empty() );
    EXPECT_THROW( build_csp( kp, d( "B(!b) | B(p)" ) ), not_elementary );
    EXPECT_THROW( build_csp( kp, parse_descriptor( "B(a)", signature( { "a" } ) ) ), signature_mismatch );
}

TEST( BuildCsp, SharedConditionalGetsOneIndex )
{
    auto problem = build_csp( kp, d( "B(p|b), !B(b&p|b)" ) );
    ASSERT_EQ( problem.conds().size(), 1u );
    ASSERT_EQ( problem.constraints().size(), 2u );
    EXPECT_EQ( problem.constraints()[ 1 ].index, 0u );
    EXPECT_TRUE( solve( problem, default_bounds( kp, 1 ) ).empty() );
}

TEST( EvalConstraint, PenguinPoints )
{
    auto problem = build_csp( kp, d( fixtures::penguin_psi ) );
    auto at = [ & ]( const gamma_vector& x ) {
        std::vector< bool > v;
        for ( std::size_t k = 0; k < 3; ++k )
            v.push_back( eval_constraint( problem, k, x ) );
        return v;
    };
    EXPECT_EQ( at( g( { 0, 2, -1, 0, 0, 0 } ) ), ( std::vector< bool >{ true, true, true } ) );
    // at the origin: minV − minF is 1 − 0, 2 − 1 and 1 − 2
    EXPECT_EQ( at( gamma_vector( 3 ) ), ( std::vector< bool >{ false, true, false } ) );
    EXPECT_FALSE( holds( d( fixtures::penguin_psi ), induced_ocf( kp, problem.conds(), gamma_vector( 3 ) ) ) );

    // the standalone form agrees
    for ( std::size_t k = 0; k < 3; ++k )
        EXPECT_EQ( eval_constraint( problem.constraints()[ k ], kp, problem.conds(), g( { 0, 2, -1, 0, 0, 0 } ) ),
                   eval_constraint( problem, k, g( { 0, 2, -1, 0, 0, 0 } ) ) );
}

TEST( EvalConstraint, InfinityConvention )
{
    // V empty
    auto pos = build_csp( kp, d( "B(b|bot)" ) );
    auto neg = build_csp( kp, d( "!B(b|bot)" ) );
    // F empty, V not
    auto pos_f = build_csp( kp, d( "B(top|b)" ) );
    auto neg_f = build_csp( kp, d( "!B(top|b)" ) );
    for ( rank_value a = -3; a <= 3; ++a )
        for ( rank_value b = -3; b <= 3; ++b )
        {
            EXPECT_FALSE( eval_constraint( pos, 0, g( { a, b } ) ) );
            EXPECT_TRUE( eval_constraint( neg, 0, g( { a, b } ) ) );
            EXPECT_TRUE( eval_constraint( pos_f, 0, g( { a, b } ) ) );
            EXPECT_FALSE( eval_constraint( neg_f, 0, g( { a, b } ) ) );
        }
}

TEST( Solve, NineSolutions )
{
    auto sols = solve( kp, d( fixtures::penguin_psi ), fixtures::example7_bounds() );
    const std::vector< std::vector< rank_value > > expected = {
        { -2, 0, -1, 0, 0, 0 }, { -2, 1, -1, 0, 0, 0 }, { -2, 1, 0, 1, 0, 0 }, { -2, 2, -1, 0, 0, 0 },
        { -2, 2, 0, 1, 0, 0 },  { -1, 1, -1, 0, 0, 0 }, { -1, 2, -1, 0, 0, 0 }, { -1, 2, 0, 1, 0, 0 },
        { 0, 2, -1, 0, 0, 0 } };
    EXPECT_EQ( flats( sols ), expected );
    ASSERT_EQ( sols.size(), 9u );
    EXPECT_EQ( sols.back().posterior, kpr );
    EXPECT_EQ( sols.back().kappa0, 0 );
    const auto psi = d( fixtures::penguin_psi );
    for ( const auto& s : sols )
    {
        EXPECT_TRUE( cross_check( s, kp, psi ) );
        EXPECT_EQ( s.posterior, induced_ocf( kp, cond_of( psi ), s.gamma ) );
        EXPECT_TRUE( fixtures::example7_bounds().contains( s.gamma ) );
    }
}

TEST( Solve, DegenerateDescriptors )
{
    auto empty = solve( kp, d( "" ), bounds() );
    ASSERT_EQ( empty.size(), 1u );
    EXPECT_EQ( empty[ 0 ].posterior, kp );
    EXPECT_EQ( empty[ 0 ].kappa0, 0 );
    EXPECT_EQ( empty[ 0 ].gamma.size(), 0u );

    // same conditional, zero box
    auto zero = solve( kp, d( "!B(p|top)" ), bounds( 1, { 0, 0 } ) );
    ASSERT_EQ( zero.size(), 1u );
    EXPECT_EQ( zero[ 0 ].posterior, kp );

    const signature a( { "a" } );
    auto contra = parse_descriptor( "B(a), !B(a)", a );
    EXPECT_TRUE( solve( ocf::uniform( a ), contra, bounds( 1, { -6, 6 } ) ).empty() );
    EXPECT_TRUE( solve( kp, d( "B(b|bot)" ), bounds( 1, { -6, 6 } ) ).empty() );
    EXPECT_EQ( solve( kp, d( "!B(b|bot)" ), bounds( 1, { -1, 1 } ) ).size(), 9u );
}

TEST( Solve, MaxSolutionsBudget )
{
    solve_options opts;
    opts.max_solutions = 5;
    EXPECT_THROW( solve( kp, d( fixtures::penguin_psi ), fixtures::example7_bounds(), opts ), budget_exceeded );
    opts.max_solutions = 9;
    EXPECT_EQ( solve( kp, d( fixtures::penguin_psi ), fixtures::example7_bounds(), opts ).size(), 9u );
}

TEST( Solve, DedupPosteriors )
{
    const auto psi = d( fixtures::penguin_psi );
    auto all = solve( kp, psi, bounds( 3, { -2, 2 } ) );
    solve_options opts;
    opts.dedup_posteriors = true;
    auto unique = solve( kp, psi, bounds( 3, { -2, 2 } ), opts );
    std::set< std::vector< rank_value > > tables;
    for ( const auto& s : all )
        tables.insert( s.posterior.table() );
    EXPECT_EQ( unique.size(), tables.size() );
    EXPECT_LT( unique.size(), all.size() );
    for ( std::size_t k = 1; k < unique.size(); ++k )
        EXPECT_LT( unique[ k - 1 ].gamma, unique[ k ].gamma );
}

TEST( DefaultBounds, Examples )
{
    auto b = default_bounds( kp, d( fixtures::penguin_psi ) );
    ASSERT_EQ( b.size(), 3u );
    for ( std::size_t v = 0; v < 6; ++v )
        EXPECT_EQ( b[ v ], ( interval{ -7, 7 } ) );
    auto u = default_bounds( ocf::uniform( sig ), 1 );
    EXPECT_EQ( u[ 0 ], ( interval{ -1, 1 } ) );
    EXPECT_EQ( u[ 1 ], ( interval{ -1, 1 } ) );

    auto over = parse_bounds( "g1+=-2..0,g2-=5..5", b );
    EXPECT_EQ( over.plus( 0 ), ( interval{ -2, 0 } ) );
    EXPECT_EQ( over.minus( 1 ), ( interval{ 5, 5 } ) );
    EXPECT_EQ( over.minus( 0 ), ( interval{ -7, 7 } ) );
    EXPECT_THROW( b.set_plus( 0, { 1, 0 } ), error );
}

TEST( Revise, ChoiceFunctions )
{
    const auto psi = d( fixtures::penguin_psi );
    const auto box = fixtures::example7_bounds();

    auto lex = revise( kp, psi, box );
    ASSERT_TRUE( lex.chosen );
    EXPECT_EQ( lex.chosen->gamma.flat(), ( std::vector< rank_value >{ -2, 0, -1, 0, 0, 0 } ) );
    EXPECT_EQ( lex.candidates.size(), 9u );

    auto min_sum = revise( kp, psi, box, selection_policy::min_sum );
    ASSERT_TRUE( min_sum.chosen );
    EXPECT_EQ( min_sum.chosen->gamma.abs_sum(), 3 );
    EXPECT_EQ( min_sum.chosen->gamma.flat(), ( std::vector< rank_value >{ -2, 0, -1, 0, 0, 0 } ) );

    auto pick = revise( kp, psi, box, prefer_posterior( kpr ) );
    ASSERT_TRUE( pick.chosen );
    EXPECT_EQ( pick.chosen->posterior, kpr );

    // target not admissible: fall back
    auto fallback = revise( kp, psi, box, prefer_posterior( kp ) );
    ASSERT_TRUE( fallback.chosen );
    EXPECT_EQ( fallback.chosen->gamma, lex.chosen->gamma );

    const signature a( { "a" } );
    auto none = revise( ocf::uniform( a ), parse_descriptor( "B(a), !B(a)", a ), bounds( 1, { -3, 3 } ) );
    EXPECT_FALSE( none.chosen );
    EXPECT_TRUE( none.candidates.empty() );

    EXPECT_THROW( revise( kp, d( "B(!b) | B(p)" ), bounds( 2, { 0, 0 } ) ), not_elementary );
}

TEST( Revise, AlreadySatisfiedKeepsPrior )
{
    const auto psi = d( "B(f|b), !B(b|f)" );
    ASSERT_TRUE( holds( psi, kp ) );
    auto r = revise( kp, psi, default_bounds( kp, psi ), selection_policy::min_sum );
    ASSERT_TRUE( r.chosen );
    EXPECT_EQ( r.chosen->gamma.abs_sum(), 0 );
    EXPECT_EQ( r.chosen->posterior, kp );
}

TEST( Revise, SuccessConditions )
{
    for ( const char* text : { "B(b|p)", "!B(f|b)", "!B(f|p), !B(!f|p)", "B(!p)", "!B(!p)" } )
    {
        const auto psi = d( text );
        auto r = revise( kp, psi, default_bounds( kp, psi ), selection_policy::min_sum );
        ASSERT_TRUE( r.chosen ) << text;
        for ( const auto& m : psi.elements() )
        {
            auto lit = as_literal( m );
            ASSERT_TRUE( lit );
            EXPECT_EQ( accepts( r.chosen->posterior, lit->cond ), lit->positive ) << text;
        }
    }
}

TEST( CrossCheck, RejectsBadSolutions )
{
    const auto psi = d( fixtures::penguin_psi );
    const cross_checker fast( kp, psi );
    solution unchanged{ gamma_vector( 3 ), kp, 0 };
    EXPECT_FALSE( cross_check( unchanged, kp, psi ) );
    EXPECT_FALSE( fast( unchanged ) );

    auto t = kpr.table();
    t[ w( sig, "b f !p" ).bits ] += 1;
    solution tampered{ g( { 0, 2, -1, 0, 0, 0 } ), ocf( sig, t ), 0 };
    EXPECT_TRUE( holds( psi, tampered.posterior ) );
    EXPECT_FALSE( cross_check( tampered, kp, psi ) );
    EXPECT_FALSE( fast( tampered ) );

    solution good{ g( { 0, 2, -1, 0, 0, 0 } ), kpr, 0 };
    EXPECT_TRUE( cross_check( good, kp, psi ) );
    EXPECT_TRUE( fast( good ) );
}

class RevisionProperties : public ::testing::Test
{
protected:
    std::mt19937 rng{ 77 };
    signature s{ { "a", "b", "c" } };
};

TEST_F( RevisionProperties, PruningAndThreadsDoNotChangeResults )
{
    for ( int trial = 0; trial < 60; ++trial )
    {
        const auto k = fixtures::random_ocf( s, 4, rng );
        const auto psi = fixtures::random_elementary( s, 1 + trial % 3, rng );
        const auto problem = build_csp( k, psi );
        const bounds box( problem.conds().size(), { -2, 2 } );
        solve_options base;
        auto reference = solve( problem, box, base );
        solve_options no_prune;
        no_prune.prune = false;
        solve_options threaded;
        threaded.threads = 4;
        auto a = solve( problem, box, no_prune );
        auto b = solve( problem, box, threaded );
        EXPECT_EQ( flats( a ), flats( reference ) );
        EXPECT_EQ( flats( b ), flats( reference ) );
        for ( std::size_t j = 1; j < reference.size(); ++j )
            EXPECT_LT( reference[ j - 1 ].gamma, reference[ j ].gamma );
        // repeated run
        EXPECT_EQ( flats( solve( problem, box, base ) ), flats( reference ) );
    }
}

TEST_F( RevisionProperties, EnlargingTheBoxKeepsSolutions )
{
    for ( int trial = 0; trial < 40; ++trial )
    {
        const auto k = fixtures::random_ocf( s, 4, rng );
        const auto psi = fixtures::random_elementary( s, 1 + trial % 3, rng );
        const auto problem = build_csp( k, psi );
        const auto n = problem.conds().size();
        bounds small( n, { -1, 1 } );
        small.set_plus( 0, { 0, 1 } );
        const bounds large( n, { -2, 2 } );
        auto inner = flats( solve( problem, small ) );
        auto outer = flats( solve( problem, large ) );
        for ( const auto& x : inner )
            EXPECT_TRUE( std::binary_search( outer.begin(), outer.end(), x ) );
    }
}

// With a uniform prior and positive literals only, the admissible successors
// include every falsification-penalty ranking that accepts all conditionals.
TEST( Revision, UniformPriorPositiveLiterals )
{
    const signature ab( { "a", "b" } );
    const auto prior = ocf::uniform( ab );
    const auto psi = parse_descriptor( "B(b|a), B(a)", ab );
    const auto conds = cond_of( psi );
    auto sols = solve( prior, psi, bounds( 2, { -3, 3 } ) );
    ASSERT_FALSE( sols.empty() );
    std::set< std::vector< rank_value > > tables;
    for ( const auto& x : sols )
    {
        EXPECT_TRUE( holds( psi, x.posterior ) );
        tables.insert( x.posterior.table() );
    }
    for ( rank_value e1 = 0; e1 <= 2; ++e1 )
        for ( rank_value e2 = 0; e2 <= 2; ++e2 )
        {
            std::vector< rank_value > t( 4 );
            for ( std::uint32_t bits = 0; bits < 4; ++bits )
            {
                const world x{ bits };
                t[ bits ] = ( verdict_of( conds[ 0 ], x ) == verdict::falsifies ? e1 : 0 ) +
                            ( verdict_of( conds[ 1 ], x ) == verdict::falsifies ? e2 : 0 );
            }
            const ocf k( ab, t );
            if ( holds( psi, k ) )
            {
                EXPECT_TRUE( tables.count( t ) ) << e1 << " " << e2;
            }
        }
}

} // namespace
