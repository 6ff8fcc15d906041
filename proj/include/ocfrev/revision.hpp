#pragma once

// Conditional descriptor revision for elementary descriptors.
//
// For Ψ with cond(Ψ) = (B1|A1)..(Bn|An), each literal on (Bi|Ai) becomes
//   γi- − γi+  >  min_{ω ⊨ AiBi} (κ(ω) + Σ_{j≠i} shift_j(ω))
//               − min_{ω ⊨ AiB̄i} (κ(ω) + Σ_{j≠i} shift_j(ω))     (positive)
// and the same with ≤ for a negative literal. Every solution γ induces a
// posterior κγ that accepts exactly what Ψ demands and is
// conditional-preserving w.r.t. cond(Ψ).

#include "descriptor.hpp"
#include "pcp.hpp"

#include <functional>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace ocfrev
{

struct literal_constraint
{
    std::size_t index; // position in cond_of(Ψ)
    bool positive;
    world_set verifying;  // Mod(Ai ∧ Bi)
    world_set falsifying; // Mod(Ai ∧ ¬Bi)
};

// CR_D(κ, Ψ) together with the per-world lookup tables the solver needs.
class csp
{
    ocf _kappa;
    std::vector< conditional > _conds;
    std::vector< literal_constraint > _constraints;
    // _column[w][i]: flat variable index world w receives from conditional i, or -1.
    std::vector< std::vector< int > > _column;
    std::vector< std::vector< world > > _verifying;
    std::vector< std::vector< world > > _falsifying;

public:
    csp( ocf kappa, std::vector< conditional > conds, std::vector< literal_constraint > constraints )
        : _kappa{ std::move( kappa ) }, _conds{ std::move( conds ) }, _constraints{ std::move( constraints ) }
    {
        const auto& sig = _kappa.sig();
        _column.assign( sig.world_count(), std::vector< int >( _conds.size(), -1 ) );
        for ( std::uint32_t bits = 0; bits < sig.world_count(); ++bits )
            for ( std::size_t i = 0; i < _conds.size(); ++i )
            {
                auto v = verdict_of( _conds[ i ], world{ bits } );
                if ( v != verdict::not_applicable )
                    _column[ bits ][ i ] = static_cast< int >( 2 * i + ( v == verdict::verifies ? 0 : 1 ) );
            }
        for ( const auto& c : _constraints )
        {
            if ( c.index >= _conds.size() )
                throw error( "constraint refers to a conditional outside cond(Psi)" );
            _verifying.push_back( c.verifying.elements() );
            _falsifying.push_back( c.falsifying.elements() );
        }
    }

    [[nodiscard]] const ocf& kappa() const { return _kappa; }
    [[nodiscard]] const std::vector< conditional >& conds() const { return _conds; }
    [[nodiscard]] const std::vector< literal_constraint >& constraints() const { return _constraints; }
    [[nodiscard]] std::size_t variable_count() const { return 2 * _conds.size(); }
    [[nodiscard]] const std::vector< int >& columns( world w ) const { return _column[ w.bits ]; }
    [[nodiscard]] const std::vector< world >& verifying( std::size_t k ) const { return _verifying[ k ]; }
    [[nodiscard]] const std::vector< world >& falsifying( std::size_t k ) const { return _falsifying[ k ]; }

    // induce() using the precomputed verdict table.
    [[nodiscard]] induced induce( const std::vector< rank_value >& flat ) const
    {
        const auto& sig = _kappa.sig();
        std::vector< rank_value > raw( sig.world_count() );
        rank_value lowest = std::numeric_limits< rank_value >::max();
        for ( std::uint32_t bits = 0; bits < sig.world_count(); ++bits )
        {
            rank_value r = _kappa( world{ bits } );
            for ( auto col : _column[ bits ] )
                if ( col >= 0 )
                    r += flat[ static_cast< std::size_t >( col ) ];
            raw[ bits ] = r;
            lowest = std::min( lowest, r );
        }
        for ( auto& r : raw )
            r -= lowest;
        return { ocf( sig, std::move( raw ) ), -lowest };
    }
};

inline csp build_csp( const ocf& kappa, const descriptor& psi )
{
    if ( !( kappa.sig() == psi.sig() ) )
        throw signature_mismatch( "descriptor and ranking function use different signatures" );
    if ( !is_elementary( psi ) )
        throw not_elementary( "descriptor is not a set of literals: " + to_string( psi ) );
    auto conds = cond_of( psi );
    std::vector< literal_constraint > constraints;
    for ( const auto& m : psi.elements() )
    {
        const auto lit = *as_literal( m );
        std::size_t index = 0;
        while ( !equivalent( conds[ index ], lit.cond, psi.sig() ) )
            ++index;
        constraints.push_back( { index, lit.positive, models( lit.cond.verification(), psi.sig() ),
                                 models( lit.cond.falsification(), psi.sig() ) } );
    }
    return csp( kappa, std::move( conds ), std::move( constraints ) );
}

namespace detail
{

// min over `worlds` of κ(ω) + Σ_{j≠i} γ contributions, ∞ for an empty set.
template< typename Columns >
rank min_side( const ocf& kappa, const std::vector< world >& worlds, std::size_t i, const Columns& columns_of,
               const std::vector< rank_value >& flat )
{
    rank best = rank::infinity();
    for ( auto w : worlds )
    {
        rank_value v = kappa( w );
        const auto& cols = columns_of( w );
        for ( std::size_t j = 0; j < cols.size(); ++j )
            if ( j != i && cols[ j ] >= 0 )
                v += flat[ static_cast< std::size_t >( cols[ j ] ) ];
        best = std::min( best, rank( v ) );
    }
    return best;
}

inline bool compare_sides( bool positive, rank_value lhs, rank min_v, rank min_f )
{
    if ( positive )
    {
        if ( min_v.is_infinite() )
            return false;
        if ( min_f.is_infinite() )
            return true;
        return lhs > min_v.value() - min_f.value();
    }
    if ( min_v.is_infinite() )
        return true;
    if ( min_f.is_infinite() )
        return false;
    return lhs <= min_v.value() - min_f.value();
}

} // namespace detail

// Evaluates one constraint of the system at a full assignment.
inline bool eval_constraint( const csp& problem, std::size_t k, const gamma_vector& gamma )
{
    const auto& c = problem.constraints()[ k ];
    const auto flat = gamma.flat();
    auto columns_of = [&]( world w ) -> const std::vector< int >& { return problem.columns( w ); };
    const auto min_v = detail::min_side( problem.kappa(), problem.verifying( k ), c.index, columns_of, flat );
    const auto min_f = detail::min_side( problem.kappa(), problem.falsifying( k ), c.index, columns_of, flat );
    return detail::compare_sides( c.positive, gamma[ c.index ].minus - gamma[ c.index ].plus, min_v, min_f );
}

// Standalone form: evaluates the constraint for `c` against κ and the conditional list directly.
inline bool eval_constraint( const literal_constraint& c, const ocf& kappa, const std::vector< conditional >& conds,
                             const gamma_vector& gamma )
{
    std::vector< std::vector< int > > table( kappa.sig().world_count(), std::vector< int >( conds.size(), -1 ) );
    for ( std::uint32_t bits = 0; bits < kappa.sig().world_count(); ++bits )
        for ( std::size_t j = 0; j < conds.size(); ++j )
        {
            auto v = verdict_of( conds[ j ], world{ bits } );
            if ( v != verdict::not_applicable )
                table[ bits ][ j ] = static_cast< int >( 2 * j + ( v == verdict::verifies ? 0 : 1 ) );
        }
    auto columns_of = [&]( world w ) -> const std::vector< int >& { return table[ w.bits ]; };
    const auto flat = gamma.flat();
    const auto min_v = detail::min_side( kappa, c.verifying.elements(), c.index, columns_of, flat );
    const auto min_f = detail::min_side( kappa, c.falsifying.elements(), c.index, columns_of, flat );
    return detail::compare_sides( c.positive, gamma[ c.index ].minus - gamma[ c.index ].plus, min_v, min_f );
}

inline bool satisfies_all( const csp& problem, const gamma_vector& gamma )
{
    for ( std::size_t k = 0; k < problem.constraints().size(); ++k )
        if ( !eval_constraint( problem, k, gamma ) )
            return false;
    return true;
}

struct interval
{
    rank_value lo = 0;
    rank_value hi = 0;

    friend bool operator==( const interval&, const interval& ) = default;
};

// Closed integer range per constraint variable, addressed by name (γi+ / γi-), never by position.
class bounds
{
    std::vector< interval > _plus;
    std::vector< interval > _minus;

public:
    bounds() = default;
    bounds( std::size_t n, interval all ) : _plus( n, all ), _minus( n, all ) {}

    [[nodiscard]] std::size_t size() const { return _plus.size(); }
    [[nodiscard]] const interval& plus( std::size_t i ) const { return _plus[ i ]; }
    [[nodiscard]] const interval& minus( std::size_t i ) const { return _minus[ i ]; }

    void set_plus( std::size_t i, interval r ) { _plus.at( i ) = check( r ); }
    void set_minus( std::size_t i, interval r ) { _minus.at( i ) = check( r ); }

    // Flat variable order (γ1+, γ1-, ...).
    [[nodiscard]] const interval& operator[]( std::size_t var ) const
    {
        return var % 2 == 0 ? _plus[ var / 2 ] : _minus[ var / 2 ];
    }

    [[nodiscard]] bool contains( const gamma_vector& g ) const
    {
        if ( g.size() != size() )
            return false;
        for ( std::size_t i = 0; i < size(); ++i )
            if ( g[ i ].plus < _plus[ i ].lo || g[ i ].plus > _plus[ i ].hi || g[ i ].minus < _minus[ i ].lo ||
                 g[ i ].minus > _minus[ i ].hi )
                return false;
        return true;
    }

    friend bool operator==( const bounds&, const bounds& ) = default;

private:
    static interval check( interval r )
    {
        if ( r.lo > r.hi )
            throw error( "empty bound interval " + std::to_string( r.lo ) + ".." + std::to_string( r.hi ) );
        return r;
    }
};

// Heuristic box [−(κmax + n), κmax + n] for every variable. Covering all
// acceptance-distinct outcomes is not guaranteed.
inline bounds default_bounds( const ocf& kappa, std::size_t n )
{
    const rank_value k = kappa.max_rank() + static_cast< rank_value >( n );
    return bounds( n, { -k, k } );
}

inline bounds default_bounds( const ocf& kappa, const descriptor& psi )
{
    return default_bounds( kappa, cond_of( psi ).size() );
}

struct solution
{
    gamma_vector gamma;
    ocf posterior; // κγ
    rank_value kappa0;
};

struct solve_options
{
    bool prune = true;
    unsigned threads = 1;         // 0 picks hardware concurrency
    std::size_t max_solutions = 0; // 0 = unlimited; exceeding it throws budget_exceeded
    bool dedup_posteriors = false; // keep only the lexicographically first γ per distinct κγ
};

namespace detail
{

class enumerator
{
    const csp& _problem;
    const bounds& _box;
    const solve_options& _opts;
    std::vector< rank_value > _flat;
    std::vector< solution > _out;

    struct range
    {
        rank_value lo;
        rank_value hi;
    };

    [[nodiscard]] range var_range( std::size_t var, std::size_t assigned ) const
    {
        if ( var < assigned )
            return { _flat[ var ], _flat[ var ] };
        return { _box[ var ].lo, _box[ var ].hi };
    }

    // Range of min over `worlds` of κ(ω) + Σ_{j≠i} contributions under the partial assignment.
    [[nodiscard]] std::optional< range > side_range( const std::vector< world >& worlds, std::size_t i,
                                                     std::size_t assigned ) const
    {
        if ( worlds.empty() )
            return std::nullopt;
        range out{ std::numeric_limits< rank_value >::max(), std::numeric_limits< rank_value >::max() };
        for ( auto w : worlds )
        {
            rank_value lo = _problem.kappa()( w );
            rank_value hi = lo;
            const auto& cols = _problem.columns( w );
            for ( std::size_t j = 0; j < cols.size(); ++j )
            {
                if ( j == i || cols[ j ] < 0 )
                    continue;
                auto r = var_range( static_cast< std::size_t >( cols[ j ] ), assigned );
                lo += r.lo;
                hi += r.hi;
            }
            out.lo = std::min( out.lo, lo );
            out.hi = std::min( out.hi, hi );
        }
        return out;
    }

    // False if some constraint cannot be satisfied by any completion.
    [[nodiscard]] bool feasible( std::size_t assigned ) const
    {
        const auto& constraints = _problem.constraints();
        for ( std::size_t k = 0; k < constraints.size(); ++k )
        {
            const auto& c = constraints[ k ];
            auto v = side_range( _problem.verifying( k ), c.index, assigned );
            auto f = side_range( _problem.falsifying( k ), c.index, assigned );
            if ( c.positive && !v )
                return false;
            if ( !c.positive && v && !f )
                return false;
            if ( !v || !f )
                continue;
            const auto gp = var_range( 2 * c.index, assigned );
            const auto gm = var_range( 2 * c.index + 1, assigned );
            const rank_value lhs_lo = gm.lo - gp.hi;
            const rank_value lhs_hi = gm.hi - gp.lo;
            const rank_value rhs_lo = v->lo - f->hi;
            const rank_value rhs_hi = v->hi - f->lo;
            if ( c.positive && lhs_hi <= rhs_lo )
                return false;
            if ( !c.positive && lhs_lo > rhs_hi )
                return false;
        }
        return true;
    }

    void leaf()
    {
        auto gamma = gamma_vector::from_flat( _flat );
        if ( !satisfies_all( _problem, gamma ) )
            return;
        auto ind = _problem.induce( _flat );
        _out.push_back( { std::move( gamma ), std::move( ind.posterior ), ind.kappa0 } );
        if ( _opts.max_solutions != 0 && _out.size() > _opts.max_solutions )
            throw budget_exceeded( "more than " + std::to_string( _opts.max_solutions ) + " solutions" );
    }

    void descend( std::size_t var )
    {
        if ( _opts.prune && !feasible( var ) )
            return;
        if ( var == _flat.size() )
        {
            leaf();
            return;
        }
        for ( rank_value v = _box[ var ].lo; v <= _box[ var ].hi; ++v )
        {
            _flat[ var ] = v;
            descend( var + 1 );
        }
    }

public:
    enumerator( const csp& problem, const bounds& box, const solve_options& opts )
        : _problem{ problem }, _box{ box }, _opts{ opts }, _flat( problem.variable_count(), 0 ) {}

    // All solutions with the first variable fixed to `first` (or everything when there are no variables).
    std::vector< solution > run( std::optional< rank_value > first )
    {
        if ( first )
        {
            _flat[ 0 ] = *first;
            if ( !_opts.prune || feasible( 0 ) )
                descend( 1 );
        }
        else
            descend( 0 );
        return std::move( _out );
    }
};

} // namespace detail

// Every γ in the box satisfying all constraints, with its induced posterior,
// in lexicographic (γ1+, γ1-, ..., γn+, γn-) order.
inline std::vector< solution > solve( const csp& problem, const bounds& box, const solve_options& opts = {} )
{
    if ( box.size() != problem.conds().size() )
        throw error( "bounds cover " + std::to_string( box.size() ) + " conditionals, system has " +
                     std::to_string( problem.conds().size() ) );

    std::vector< solution > all;
    if ( problem.variable_count() == 0 )
        all = detail::enumerator( problem, box, opts ).run( std::nullopt );
    else
    {
        const auto first = box[ 0 ];
        unsigned threads = opts.threads == 0 ? std::max( 1U, std::thread::hardware_concurrency() ) : opts.threads;
        std::vector< rank_value > values;
        for ( rank_value v = first.lo; v <= first.hi; ++v )
            values.push_back( v );
        std::vector< std::vector< solution > > parts( values.size() );
        if ( threads <= 1 || values.size() <= 1 )
        {
            for ( std::size_t k = 0; k < values.size(); ++k )
                parts[ k ] = detail::enumerator( problem, box, opts ).run( values[ k ] );
        }
        else
        {
            // Workers take first-variable values round-robin; merging by value keeps lexicographic order.
            std::vector< std::future< void > > jobs;
            for ( unsigned t = 0; t < threads && t < values.size(); ++t )
                jobs.push_back( std::async( std::launch::async, [ &, t ] {
                    for ( std::size_t k = t; k < values.size(); k += threads )
                        parts[ k ] = detail::enumerator( problem, box, opts ).run( values[ k ] );
                } ) );
            for ( auto& j : jobs )
                j.get();
        }
        for ( auto& p : parts )
            for ( auto& s : p )
                all.push_back( std::move( s ) );
        if ( opts.max_solutions != 0 && all.size() > opts.max_solutions )
            throw budget_exceeded( "more than " + std::to_string( opts.max_solutions ) + " solutions" );
    }

    if ( opts.dedup_posteriors )
    {
        std::vector< solution > unique;
        std::map< std::vector< rank_value >, bool > seen;
        for ( auto& s : all )
            if ( seen.emplace( s.posterior.table(), true ).second )
                unique.push_back( std::move( s ) );
        all = std::move( unique );
    }
    return all;
}

inline std::vector< solution > solve( const ocf& kappa, const descriptor& psi, const bounds& box,
                                      const solve_options& opts = {} )
{
    return solve( build_csp( kappa, psi ), box, opts );
}

// Choice function over the admissible successors; returns an index into the list.
using choice_function = std::function< std::optional< std::size_t >( const std::vector< solution >& ) >;

enum class selection_policy
{
    lex,     // first in lexicographic γ order
    min_sum, // minimal Σ|γ|, ties broken lexicographically
};

inline choice_function make_choice( selection_policy policy )
{
    switch ( policy )
    {
    case selection_policy::lex:
        return []( const std::vector< solution >& s ) -> std::optional< std::size_t > {
            if ( s.empty() )
                return std::nullopt;
            return 0;
        };
    case selection_policy::min_sum:
        return []( const std::vector< solution >& s ) -> std::optional< std::size_t > {
            std::optional< std::size_t > best;
            for ( std::size_t k = 0; k < s.size(); ++k )
                if ( !best || s[ k ].gamma.abs_sum() < s[ *best ].gamma.abs_sum() )
                    best = k;
            return best;
        };
    }
    return {};
}

// Picks a specific posterior whenever it is admissible.
inline choice_function prefer_posterior( ocf target, choice_function fallback = make_choice( selection_policy::lex ) )
{
    return [ target = std::move( target ), fallback = std::move( fallback ) ](
               const std::vector< solution >& s ) -> std::optional< std::size_t > {
        for ( std::size_t k = 0; k < s.size(); ++k )
            if ( s[ k ].posterior == target )
                return k;
        return fallback( s );
    };
}

struct revision_result
{
    std::vector< solution > candidates;
    std::optional< solution > chosen; // empty: no admissible successor
};

inline revision_result revise( const ocf& kappa, const descriptor& psi, const bounds& box, const choice_function& choose,
                               const solve_options& opts = {} )
{
    revision_result out;
    out.candidates = solve( kappa, psi, box, opts );
    if ( auto k = choose( out.candidates ) )
        out.chosen = out.candidates.at( *k );
    return out;
}

inline revision_result revise( const ocf& kappa, const descriptor& psi, const bounds& box,
                               selection_policy policy = selection_policy::lex, const solve_options& opts = {} )
{
    return revise( kappa, psi, box, make_choice( policy ), opts );
}

// Validates a solution without the constraint algebra: Ψ must hold in the
// posterior and the change must be conditional-preserving w.r.t. cond(Ψ).
inline bool cross_check( const solution& s, const ocf& kappa, const descriptor& psi )
{
    return holds( psi, s.posterior ) && pcp_representable( kappa, s.posterior, cond_of( psi ) ).has_value();
}

// cross_check for many solutions of one (κ, Ψ): conditional world sets and the
// linear system are prepared once.
class cross_checker
{
    ocf _kappa;
    struct literal
    {
        bool positive;
        std::vector< world > verifying;
        std::vector< world > falsifying;
    };
    std::vector< std::optional< literal > > _literals; // empty entry: non-literal element
    descriptor _psi;
    pcp_system _system;

public:
    cross_checker( ocf kappa, descriptor psi )
        : _kappa{ std::move( kappa ) }, _psi{ psi }, _system( _psi.sig(), cond_of( _psi ) )
    {
        for ( const auto& m : _psi.elements() )
        {
            if ( auto lit = as_literal( m ) )
                _literals.push_back( literal{ lit->positive, models( lit->cond.verification(), _psi.sig() ).elements(),
                                              models( lit->cond.falsification(), _psi.sig() ).elements() } );
            else
                _literals.emplace_back();
        }
    }

    [[nodiscard]] bool holds_in( const ocf& posterior ) const
    {
        for ( std::size_t k = 0; k < _literals.size(); ++k )
        {
            if ( !_literals[ k ] )
            {
                if ( !holds( _psi.elements()[ k ], posterior ) )
                    return false;
                continue;
            }
            const auto& lit = *_literals[ k ];
            rank v = rank::infinity();
            rank f = rank::infinity();
            for ( auto w : lit.verifying )
                v = std::min( v, rank( posterior( w ) ) );
            for ( auto w : lit.falsifying )
                f = std::min( f, rank( posterior( w ) ) );
            if ( ( v < f ) != lit.positive )
                return false;
        }
        return true;
    }

    [[nodiscard]] bool operator()( const solution& s ) const
    {
        return holds_in( s.posterior ) && _system.representable( _kappa, s.posterior );
    }
};

} // namespace ocfrev
