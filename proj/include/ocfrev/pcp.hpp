#pragma once

// Principle of conditional preservation for OCF changes. A change κ → κ° is
// conditional-preserving w.r.t. (B1|A1)..(Bn|An) iff
//   κ°(ω) = κ0 + κ(ω) + Σ_{ω verifies i} γi+ + Σ_{ω falsifies i} γi-
// for some κ0, γi+, γi-. The additive form is decided exactly over the
// rationals; the multiset-balance formulation is available as a bounded check.

#include "ranking.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ocfrev
{

using rational = boost::multiprecision::cpp_rational;

// Shift applied to the verifying (plus) and falsifying (minus) worlds of one conditional.
struct impact
{
    rank_value plus = 0;
    rank_value minus = 0;

    friend bool operator==( const impact&, const impact& ) = default;
    friend auto operator<=>( const impact&, const impact& ) = default;
};

// (γ1+, γ1-, ..., γn+, γn-). The defaulted ordering is the lexicographic order on that tuple.
class gamma_vector
{
    std::vector< impact > _impacts;

public:
    gamma_vector() = default;
    explicit gamma_vector( std::size_t n ) : _impacts( n ) {}
    explicit gamma_vector( std::vector< impact > impacts ) : _impacts{ std::move( impacts ) } {}

    // Flat (γ1+, γ1-, γ2+, ...) order.
    static gamma_vector from_flat( const std::vector< rank_value >& flat )
    {
        gamma_vector g( flat.size() / 2 );
        for ( std::size_t i = 0; i < g.size(); ++i )
            g._impacts[ i ] = { flat[ 2 * i ], flat[ 2 * i + 1 ] };
        return g;
    }

    [[nodiscard]] std::size_t size() const { return _impacts.size(); }
    [[nodiscard]] const impact& operator[]( std::size_t i ) const { return _impacts[ i ]; }
    [[nodiscard]] impact& operator[]( std::size_t i ) { return _impacts[ i ]; }

    [[nodiscard]] std::vector< rank_value > flat() const
    {
        std::vector< rank_value > out;
        out.reserve( 2 * _impacts.size() );
        for ( const auto& g : _impacts )
        {
            out.push_back( g.plus );
            out.push_back( g.minus );
        }
        return out;
    }

    [[nodiscard]] rank_value abs_sum() const
    {
        rank_value s = 0;
        for ( const auto& g : _impacts )
            s += ( g.plus < 0 ? -g.plus : g.plus ) + ( g.minus < 0 ? -g.minus : g.minus );
        return s;
    }

    friend bool operator==( const gamma_vector&, const gamma_vector& ) = default;
    friend auto operator<=>( const gamma_vector&, const gamma_vector& ) = default;
};

// "g1+", "g1-", ... (1-based).
inline std::string variable_name( std::size_t cond_index, bool plus )
{
    return "g" + std::to_string( cond_index + 1 ) + ( plus ? "+" : "-" );
}

using shift_profile = std::vector< verdict >;

inline shift_profile profile_of( world w, const std::vector< conditional >& conds )
{
    shift_profile p;
    p.reserve( conds.size() );
    for ( const auto& c : conds )
        p.push_back( verdict_of( c, w ) );
    return p;
}

inline std::string to_string( const shift_profile& p )
{
    std::string s;
    for ( auto v : p )
        s += to_char( v );
    return s;
}

inline rank_value shift_of( world w, const std::vector< conditional >& conds, const gamma_vector& gamma )
{
    rank_value s = 0;
    for ( std::size_t i = 0; i < conds.size(); ++i )
    {
        switch ( verdict_of( conds[ i ], w ) )
        {
        case verdict::verifies: s += gamma[ i ].plus; break;
        case verdict::falsifies: s += gamma[ i ].minus; break;
        case verdict::not_applicable: break;
        }
    }
    return s;
}

struct induced
{
    ocf posterior;
    rank_value kappa0;
};

// κγ(ω) = κ0 + κ(ω) + shift(ω) with the κ0 that brings the minimum rank to exactly 0.
inline induced induce( const ocf& kappa, const std::vector< conditional >& conds, const gamma_vector& gamma )
{
    const auto& sig = kappa.sig();
    std::vector< rank_value > raw( sig.world_count() );
    for ( std::uint32_t bits = 0; bits < sig.world_count(); ++bits )
        raw[ bits ] = kappa( world{ bits } ) + shift_of( world{ bits }, conds, gamma );
    const rank_value kappa0 = -*std::min_element( raw.begin(), raw.end() );
    for ( auto& r : raw )
        r += kappa0;
    return { ocf( sig, std::move( raw ) ), kappa0 };
}

inline ocf induced_ocf( const ocf& kappa, const std::vector< conditional >& conds, const gamma_vector& gamma )
{
    return induce( kappa, conds, gamma ).posterior;
}

// Solution space of the additive representation. Variables are ordered
// κ0, γ1+, γ1-, ..., γn+, γn-.
class pcp_witness
{
public:
    struct equation
    {
        shift_profile profile;
        rank_value delta; // κ°(ω) − κ(ω) for every ω with this profile
    };

private:
    std::vector< equation > _equations;
    std::vector< rational > _particular;
    std::vector< std::size_t > _free;              // variable indices left unconstrained
    std::vector< std::vector< rational > > _basis; // one direction per free variable

public:
    pcp_witness( std::vector< equation > equations, std::vector< rational > particular, std::vector< std::size_t > free,
                 std::vector< std::vector< rational > > basis )
        : _equations{ std::move( equations ) }, _particular{ std::move( particular ) }, _free{ std::move( free ) },
          _basis{ std::move( basis ) } {}

    [[nodiscard]] std::size_t conditional_count() const { return ( _particular.size() - 1 ) / 2; }
    [[nodiscard]] const std::vector< equation >& equations() const { return _equations; }
    [[nodiscard]] const std::vector< rational >& particular() const { return _particular; }
    [[nodiscard]] const rational& kappa0() const { return _particular[ 0 ]; }
    [[nodiscard]] const rational& plus( std::size_t i ) const { return _particular[ 1 + 2 * i ]; }
    [[nodiscard]] const rational& minus( std::size_t i ) const { return _particular[ 2 + 2 * i ]; }
    [[nodiscard]] const std::vector< std::size_t >& free_variables() const { return _free; }
    [[nodiscard]] const std::vector< std::vector< rational > >& basis() const { return _basis; }

    [[nodiscard]] bool particular_is_integral() const
    {
        return std::all_of( _particular.begin(), _particular.end(),
                            []( const rational& r ) { return denominator( r ) == 1; } );
    }

    // True iff (κ0, γ) reproduces every profile class equation.
    [[nodiscard]] bool contains( const rational& kappa0, const std::vector< rational >& flat_gamma ) const
    {
        if ( flat_gamma.size() != 2 * conditional_count() )
            return false;
        for ( const auto& eq : _equations )
        {
            rational lhs = kappa0;
            for ( std::size_t i = 0; i < eq.profile.size(); ++i )
            {
                if ( eq.profile[ i ] == verdict::verifies )
                    lhs += flat_gamma[ 2 * i ];
                else if ( eq.profile[ i ] == verdict::falsifies )
                    lhs += flat_gamma[ 2 * i + 1 ];
            }
            if ( lhs != eq.delta )
                return false;
        }
        return true;
    }

    [[nodiscard]] bool contains( rank_value kappa0, const gamma_vector& gamma ) const
    {
        std::vector< rational > flat;
        for ( auto v : gamma.flat() )
            flat.emplace_back( v );
        return contains( rational( kappa0 ), flat );
    }
};

inline std::string variable_name_of_column( std::size_t column )
{
    if ( column == 0 )
        return "k0";
    return variable_name( ( column - 1 ) / 2, ( column - 1 ) % 2 == 0 );
}

// Why a change is not representable.
struct pcp_violation
{
    // Set when Δ differs inside one profile class.
    std::optional< shift_profile > profile;
    std::vector< std::pair< world, rank_value > > deltas; // members of that class with their Δ
    bool inconsistent_system = false;
};

struct pcp_analysis
{
    std::optional< pcp_witness > witness;
    std::optional< pcp_violation > violation;
};

namespace detail
{

// Gauss-Jordan elimination on the first `pivot_cols` columns; row operations
// act on the whole row. Returns the pivot column of each leading row.
inline std::vector< std::size_t > rref( std::vector< std::vector< rational > >& m, std::size_t pivot_cols )
{
    std::vector< std::size_t > pivots;
    std::size_t row = 0;
    for ( std::size_t col = 0; col < pivot_cols && row < m.size(); ++col )
    {
        std::size_t sel = row;
        while ( sel < m.size() && m[ sel ][ col ] == 0 )
            ++sel;
        if ( sel == m.size() )
            continue;
        std::swap( m[ sel ], m[ row ] );
        const rational p = m[ row ][ col ];
        for ( auto& x : m[ row ] )
            x /= p;
        for ( std::size_t r = 0; r < m.size(); ++r )
        {
            if ( r == row || m[ r ][ col ] == 0 )
                continue;
            const rational f = m[ r ][ col ];
            for ( std::size_t c = col; c < m[ r ].size(); ++c )
                m[ r ][ c ] -= f * m[ row ][ c ];
        }
        pivots.push_back( col );
        ++row;
    }
    return pivots;
}

} // namespace detail

// The additive-representation system for a fixed signature and conditional
// list: one equation per realized profile class,
//   κ0 + Σ_{P(i)=v} γi+ + Σ_{P(i)=f} γi- = Δ_P.
// The coefficient matrix is eliminated once; each query only needs the
// recorded row transformation applied to its Δ vector.
class pcp_system
{
    signature _sig;
    std::vector< conditional > _conds;
    std::vector< shift_profile > _profiles;   // realized classes, ascending
    std::vector< std::size_t > _class_of;     // world bits -> class
    std::size_t _cols = 0;                    // 1 + 2n
    std::vector< std::size_t > _pivots;
    std::vector< std::vector< rational > > _reduced;   // RREF of the coefficient matrix
    std::vector< std::vector< rational > > _transform; // T with T·A = RREF
    std::vector< std::vector< rank_value > > _transform_int;
    std::vector< rank_value > _scale; // _transform_int[r] = _scale[r] · _transform[r]

public:
    pcp_system( signature sig, std::vector< conditional > conds ) : _sig{ std::move( sig ) }, _conds{ std::move( conds ) }
    {
        std::map< shift_profile, std::size_t > index;
        std::vector< shift_profile > per_world;
        for ( std::uint32_t bits = 0; bits < _sig.world_count(); ++bits )
        {
            per_world.push_back( profile_of( world{ bits }, _conds ) );
            index.emplace( per_world.back(), 0 );
        }
        for ( auto& [ profile, id ] : index )
        {
            id = _profiles.size();
            _profiles.push_back( profile );
        }
        for ( const auto& p : per_world )
            _class_of.push_back( index.at( p ) );

        _cols = 1 + 2 * _conds.size();
        const auto k = _profiles.size();
        std::vector< std::vector< rational > > m;
        for ( std::size_t r = 0; r < k; ++r )
        {
            std::vector< rational > row( _cols + k, rational( 0 ) );
            row[ 0 ] = 1;
            for ( std::size_t i = 0; i < _conds.size(); ++i )
            {
                if ( _profiles[ r ][ i ] == verdict::verifies )
                    row[ 1 + 2 * i ] = 1;
                else if ( _profiles[ r ][ i ] == verdict::falsifies )
                    row[ 2 + 2 * i ] = 1;
            }
            row[ _cols + r ] = 1;
            m.push_back( std::move( row ) );
        }
        _pivots = detail::rref( m, _cols );
        for ( auto& row : m )
        {
            _reduced.emplace_back( row.begin(), row.begin() + static_cast< std::ptrdiff_t >( _cols ) );
            _transform.emplace_back( row.begin() + static_cast< std::ptrdiff_t >( _cols ), row.end() );
            boost::multiprecision::cpp_int lcm = 1;
            for ( const auto& t : _transform.back() )
                lcm = boost::multiprecision::lcm( lcm, denominator( t ) );
            std::vector< rank_value > ints;
            for ( const auto& t : _transform.back() )
                ints.push_back( static_cast< rank_value >( numerator( t ) * ( lcm / denominator( t ) ) ) );
            _transform_int.push_back( std::move( ints ) );
            _scale.push_back( static_cast< rank_value >( lcm ) );
        }
    }

    [[nodiscard]] const signature& sig() const { return _sig; }
    [[nodiscard]] const std::vector< conditional >& conds() const { return _conds; }
    [[nodiscard]] const std::vector< shift_profile >& profiles() const { return _profiles; }
    [[nodiscard]] std::size_t class_of( world w ) const { return _class_of[ w.bits ]; }
    [[nodiscard]] std::size_t rank() const { return _pivots.size(); }

    // Δ per class, or the offending class when Δ is not constant on it.
    [[nodiscard]] std::variant< std::vector< rank_value >, std::size_t > class_deltas( const ocf& kappa,
                                                                                     const ocf& posterior ) const
    {
        if ( !( kappa.sig() == _sig ) || !( posterior.sig() == _sig ) )
            throw signature_mismatch( "ranking functions do not match the conditional system's signature" );
        std::vector< rank_value > delta( _profiles.size(), 0 );
        std::vector< bool > seen( _profiles.size(), false );
        for ( std::uint32_t bits = 0; bits < _sig.world_count(); ++bits )
        {
            const auto c = _class_of[ bits ];
            const auto d = posterior( world{ bits } ) - kappa( world{ bits } );
            if ( !seen[ c ] )
            {
                seen[ c ] = true;
                delta[ c ] = d;
            }
            else if ( delta[ c ] != d )
                return c;
        }
        return delta;
    }

    [[nodiscard]] bool consistent( const std::vector< rank_value >& delta ) const
    {
        for ( std::size_t r = rank(); r < _transform_int.size(); ++r )
        {
            __int128 acc = 0;
            for ( std::size_t c = 0; c < delta.size(); ++c )
                acc += static_cast< __int128 >( _transform_int[ r ][ c ] ) * delta[ c ];
            if ( acc != 0 )
                return false;
        }
        return true;
    }

    [[nodiscard]] bool representable( const ocf& kappa, const ocf& posterior ) const
    {
        auto deltas = class_deltas( kappa, posterior );
        if ( deltas.index() != 0 )
            return false;
        return consistent( std::get< 0 >( deltas ) );
    }

    [[nodiscard]] pcp_analysis analyze( const ocf& kappa, const ocf& posterior ) const
    {
        auto deltas = class_deltas( kappa, posterior );
        if ( deltas.index() == 1 )
        {
            const auto c = std::get< 1 >( deltas );
            pcp_violation v{ _profiles[ c ], {}, false };
            for ( std::uint32_t bits = 0; bits < _sig.world_count(); ++bits )
                if ( _class_of[ bits ] == c )
                    v.deltas.emplace_back( world{ bits }, posterior( world{ bits } ) - kappa( world{ bits } ) );
            return { std::nullopt, v };
        }
        const auto& delta = std::get< 0 >( deltas );
        if ( !consistent( delta ) )
            return { std::nullopt, pcp_violation{ std::nullopt, {}, true } };

        std::vector< pcp_witness::equation > equations;
        for ( std::size_t c = 0; c < _profiles.size(); ++c )
            equations.push_back( { _profiles[ c ], delta[ c ] } );

        std::vector< rational > particular( _cols, rational( 0 ) );
        for ( std::size_t r = 0; r < rank(); ++r )
        {
            rational v = 0;
            for ( std::size_t c = 0; c < delta.size(); ++c )
                v += _transform[ r ][ c ] * delta[ c ];
            particular[ _pivots[ r ] ] = v;
        }

        std::vector< std::size_t > free;
        std::vector< std::vector< rational > > basis;
        for ( std::size_t col = 0; col < _cols; ++col )
        {
            if ( std::find( _pivots.begin(), _pivots.end(), col ) != _pivots.end() )
                continue;
            free.push_back( col );
            std::vector< rational > dir( _cols, rational( 0 ) );
            dir[ col ] = 1;
            for ( std::size_t r = 0; r < rank(); ++r )
                dir[ _pivots[ r ] ] = -_reduced[ r ][ col ];
            basis.push_back( std::move( dir ) );
        }
        return { pcp_witness( std::move( equations ), std::move( particular ), std::move( free ), std::move( basis ) ),
                 std::nullopt };
    }
};

inline pcp_analysis analyze_pcp( const ocf& kappa, const ocf& posterior, const std::vector< conditional >& conds )
{
    if ( !( kappa.sig() == posterior.sig() ) )
        throw signature_mismatch( "prior and posterior use different signatures" );
    return pcp_system( kappa.sig(), conds ).analyze( kappa, posterior );
}

inline std::optional< pcp_witness > pcp_representable( const ocf& kappa, const ocf& posterior,
                                                       const std::vector< conditional >& conds )
{
    return analyze_pcp( kappa, posterior, conds ).witness;
}

struct integer_witness
{
    rank_value kappa0;
    gamma_vector gamma;
};

// Searches the witness space for an all-integer point, trying free-variable
// assignments in [-radius, radius] by increasing max-norm.
inline std::optional< integer_witness > integer_point( const pcp_witness& w, rank_value radius = 8 )
{
    const auto k = w.free_variables().size();
    auto assemble = [&]( const std::vector< rank_value >& t ) -> std::optional< integer_witness > {
        std::vector< rational > x = w.particular();
        for ( std::size_t j = 0; j < k; ++j )
            for ( std::size_t c = 0; c < x.size(); ++c )
                x[ c ] += w.basis()[ j ][ c ] * t[ j ];
        for ( const auto& v : x )
            if ( denominator( v ) != 1 )
                return std::nullopt;
        std::vector< rank_value > flat;
        for ( std::size_t c = 1; c < x.size(); ++c )
            flat.push_back( static_cast< rank_value >( numerator( x[ c ] ) ) );
        return integer_witness{ static_cast< rank_value >( numerator( x[ 0 ] ) ), gamma_vector::from_flat( flat ) };
    };

    for ( rank_value norm = 0; norm <= radius; ++norm )
    {
        // Odometer over [-norm, norm]^k, keeping only points on the shell of this norm.
        std::vector< rank_value > t( k, -norm );
        while ( true )
        {
            bool on_shell = k == 0 || std::any_of( t.begin(), t.end(), [&]( rank_value v ) { return v == norm || v == -norm; } );
            if ( on_shell )
                if ( auto p = assemble( t ) )
                    return p;
            std::size_t j = 0;
            while ( j < k && t[ j ] == norm )
                t[ j++ ] = -norm;
            if ( j == k )
                break;
            ++t[ j ];
        }
        if ( k == 0 )
            break;
    }
    return std::nullopt;
}

// Both sides of the balance equation for one pair of multisets:
// (Σκ(Ω1) − Σκ(Ω2), Σκ°(Ω1) − Σκ°(Ω2)).
inline std::pair< rank_value, rank_value > balance( const ocf& kappa, const ocf& posterior,
                                                   const std::vector< world >& omega1, const std::vector< world >& omega2 )
{
    rank_value before = 0;
    rank_value after = 0;
    for ( auto w : omega1 )
    {
        before += kappa( w );
        after += posterior( w );
    }
    for ( auto w : omega2 )
    {
        before -= kappa( w );
        after -= posterior( w );
    }
    return { before, after };
}

struct balance_counterexample
{
    std::vector< world > omega1;
    std::vector< world > omega2;
};

inline constexpr std::size_t default_multiset_budget = 5'000'000;

// Checks the balance condition for every pair of equal-size multisets of size
// m <= m_max with identical verify/falsify counts per conditional. Two
// multisets are balanced iff Σ(κ° − κ) agrees on them, so each count class
// only needs one representative. Returns the first unbalanced pair found.
inline std::optional< balance_counterexample > find_unbalanced( const ocf& kappa, const ocf& posterior,
                                                                const std::vector< conditional >& conds, std::size_t m_max,
                                                                std::size_t budget = default_multiset_budget )
{
    if ( !( kappa.sig() == posterior.sig() ) )
        throw signature_mismatch( "prior and posterior use different signatures" );
    const auto n_worlds = kappa.sig().world_count();
    const auto n = conds.size();

    std::vector< std::vector< int > > counts( n_worlds, std::vector< int >( 2 * n, 0 ) );
    std::vector< rank_value > delta( n_worlds );
    for ( std::uint32_t bits = 0; bits < n_worlds; ++bits )
    {
        const world w{ bits };
        for ( std::size_t i = 0; i < n; ++i )
        {
            auto v = verdict_of( conds[ i ], w );
            if ( v == verdict::verifies )
                counts[ bits ][ 2 * i ] = 1;
            else if ( v == verdict::falsifies )
                counts[ bits ][ 2 * i + 1 ] = 1;
        }
        delta[ bits ] = posterior( w ) - kappa( w );
    }

    std::size_t visited = 0;
    for ( std::size_t m = 1; m <= m_max; ++m )
    {
        std::map< std::vector< int >, std::pair< rank_value, std::vector< std::uint32_t > > > seen;
        std::vector< std::uint32_t > idx( m, 0 ); // non-decreasing world indices
        while ( true )
        {
            if ( ++visited > budget )
                throw budget_exceeded( "multiset enumeration exceeded " + std::to_string( budget ) + " multisets" );
            std::vector< int > key( 2 * n, 0 );
            rank_value sum = 0;
            for ( auto b : idx )
            {
                for ( std::size_t c = 0; c < 2 * n; ++c )
                    key[ c ] += counts[ b ][ c ];
                sum += delta[ b ];
            }
            auto [ it, inserted ] = seen.try_emplace( std::move( key ), sum, idx );
            if ( !inserted && it->second.first != sum )
            {
                balance_counterexample ce;
                for ( auto b : it->second.second )
                    ce.omega1.push_back( world{ b } );
                for ( auto b : idx )
                    ce.omega2.push_back( world{ b } );
                return ce;
            }

            std::size_t j = m;
            while ( j > 0 && idx[ j - 1 ] == n_worlds - 1 )
                --j;
            if ( j == 0 )
                break;
            const auto next = idx[ j - 1 ] + 1;
            for ( std::size_t r = j - 1; r < m; ++r )
                idx[ r ] = next;
        }
    }
    return std::nullopt;
}

inline bool pcp_check_definition( const ocf& kappa, const ocf& posterior, const std::vector< conditional >& conds,
                                  std::size_t m_max = 2, std::size_t budget = default_multiset_budget )
{
    return !find_unbalanced( kappa, posterior, conds, m_max, budget ).has_value();
}

} // namespace ocfrev
