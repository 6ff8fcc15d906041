#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ocfrev;

namespace
{

TEST( EnumerateOcfs, Counts )
{
    const signature a( { "a" } );
    auto one = enumerate_ocfs( a, 1 );
    ASSERT_EQ( one.size(), 3u );
    EXPECT_EQ( one[ 0 ].table(), ( std::vector< rank_value >{ 0, 0 } ) );
    EXPECT_EQ( one[ 1 ].table(), ( std::vector< rank_value >{ 0, 1 } ) );
    EXPECT_EQ( one[ 2 ].table(), ( std::vector< rank_value >{ 1, 0 } ) );

    const signature ab( { "a", "b" } );
    EXPECT_EQ( enumerate_ocfs( ab, 1 ).size(), 15u );
    EXPECT_EQ( ocf_count( ab, 1 ), 15u );
    auto zero = enumerate_ocfs( ab, 0 );
    ASSERT_EQ( zero.size(), 1u );
    EXPECT_EQ( zero[ 0 ], ocf::uniform( ab ) );
}

TEST( EnumerateOcfs, ExhaustiveAndDistinct )
{
    const signature ab( { "a", "b" } );
    for ( rank_value m = 0; m <= 3; ++m )
    {
        std::set< std::vector< rank_value > > seen;
        auto n = enumerate_ocfs( ab, m, [ & ]( const ocf& k ) { seen.insert( k.table() ); } );
        EXPECT_EQ( n, seen.size() );
        EXPECT_EQ( n, *ocf_count( ab, m ) );
    }
}

TEST( EnumerateOcfs, Budget )
{
    const signature abcd( { "a", "b", "c", "d" } );
    EXPECT_FALSE( ocf_count( abcd, 4 ) );
    EXPECT_THROW( enumerate_ocfs( abcd, 4, []( const ocf& ) {} ), budget_exceeded );
    EXPECT_THROW( enumerate_ocfs( abcd, 1, []( const ocf& ) {}, 100 ), budget_exceeded );
}

TEST( Completeness, UniformTwoAtoms )
{
    const signature ab( { "a", "b" } );
    auto report = make_completeness_report( ocf::uniform( ab ), parse_descriptor( "B(b|a)", ab ), 2 );
    EXPECT_EQ( report.enumerated, 65u );
    EXPECT_GT( report.representable, 0u );
    EXPECT_TRUE( report.ok() );
    ASSERT_EQ( report.needed_box.size(), 2u );
    for ( const auto& r : report.needed_box )
    {
        EXPECT_GE( r.lo, -2 );
        EXPECT_LE( r.hi, 2 );
    }
}

TEST( Completeness, ContradictoryIsVacuous )
{
    const signature ab( { "a", "b" } );
    auto report = make_completeness_report( ocf::uniform( ab ), parse_descriptor( "B(b|a), !B(b|a)", ab ), 2 );
    EXPECT_EQ( report.satisfying, 0u );
    EXPECT_EQ( report.representable, 0u );
    EXPECT_TRUE( report.ok() );
    EXPECT_TRUE( report.needed_box.empty() );
}

TEST( Completeness, RandomSmallInstances )
{
    std::mt19937 rng( 13 );
    const signature ab( { "a", "b" } );
    for ( int trial = 0; trial < 40; ++trial )
    {
        const auto k = fixtures::random_ocf( ab, 3, rng );
        const auto psi = fixtures::random_elementary( ab, 1 + trial % 3, rng );
        auto report = make_completeness_report( k, psi, 3 );
        EXPECT_TRUE( report.ok() ) << to_string( psi );
        // every integer witness is found by the solver over the needed box
        if ( report.representable > 0 )
        {
            const auto n = cond_of( psi ).size();
            bounds box( n, { 0, 0 } );
            for ( std::size_t i = 0; i < n; ++i )
            {
                box.set_plus( i, report.needed_box[ 2 * i ] );
                box.set_minus( i, report.needed_box[ 2 * i + 1 ] );
            }
            std::set< std::vector< rank_value > > posteriors;
            for ( const auto& s : solve( k, psi, box ) )
                posteriors.insert( s.posterior.table() );
            const cross_checker check( k, psi );
            enumerate_ocfs( ab, 3, [ & ]( const ocf& post ) {
                if ( check.holds_in( post ) && pcp_representable( k, post, cond_of( psi ) ) )
                {
                    EXPECT_TRUE( posteriors.count( post.table() ) );
                }
            } );
        }
    }
}

} // namespace
