#pragma once

#include "ranking.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ocfrev
{

enum class descriptor_connective
{
    belief, // atomic descriptor 𝔅(B|A)
    negation,
    conjunction,
    disjunction,
};

// Molecular descriptor: atomic descriptors combined with ¬, ∧, ∨.
class molecular
{
    struct node
    {
        descriptor_connective kind;
        std::optional< conditional > cond;
        std::shared_ptr< const node > left;
        std::shared_ptr< const node > right;
    };

    std::shared_ptr< const node > _node;

    explicit molecular( std::shared_ptr< const node > n ) : _node{ std::move( n ) } {}

public:
    static molecular belief( conditional c )
    {
        return molecular( std::make_shared< const node >( node{ descriptor_connective::belief, std::move( c ), {}, {} } ) );
    }
    friend molecular operator!( const molecular& m )
    {
        return molecular( std::make_shared< const node >( node{ descriptor_connective::negation, {}, m._node, {} } ) );
    }
    friend molecular operator&&( const molecular& l, const molecular& r )
    {
        return molecular( std::make_shared< const node >( node{ descriptor_connective::conjunction, {}, l._node, r._node } ) );
    }
    friend molecular operator||( const molecular& l, const molecular& r )
    {
        return molecular( std::make_shared< const node >( node{ descriptor_connective::disjunction, {}, l._node, r._node } ) );
    }

    [[nodiscard]] descriptor_connective kind() const { return _node->kind; }
    [[nodiscard]] const conditional& cond() const { return *_node->cond; }
    [[nodiscard]] molecular operand() const { return molecular( _node->left ); }
    [[nodiscard]] molecular left() const { return molecular( _node->left ); }
    [[nodiscard]] molecular right() const { return molecular( _node->right ); }
};

// 𝔅φ or ¬𝔅φ.
struct literal_view
{
    bool positive;
    conditional cond;
};

inline std::optional< literal_view > as_literal( const molecular& m )
{
    if ( m.kind() == descriptor_connective::belief )
        return literal_view{ true, m.cond() };
    if ( m.kind() == descriptor_connective::negation && m.operand().kind() == descriptor_connective::belief )
        return literal_view{ false, m.operand().cond() };
    return std::nullopt;
}

namespace detail
{

inline bool same_shape( const molecular& a, const molecular& b, const signature& sig )
{
    if ( a.kind() != b.kind() )
        return false;
    switch ( a.kind() )
    {
    case descriptor_connective::belief: return equivalent( a.cond(), b.cond(), sig );
    case descriptor_connective::negation: return same_shape( a.operand(), b.operand(), sig );
    default: return same_shape( a.left(), b.left(), sig ) && same_shape( a.right(), b.right(), sig );
    }
}

inline void collect_conditionals( const molecular& m, const signature& sig, std::vector< conditional >& out,
                                  std::vector< conditional_key >& seen )
{
    switch ( m.kind() )
    {
    case descriptor_connective::belief: {
        auto key = key_of( m.cond(), sig );
        if ( std::find( seen.begin(), seen.end(), key ) == seen.end() )
        {
            seen.push_back( std::move( key ) );
            out.push_back( m.cond() );
        }
        break;
    }
    case descriptor_connective::negation: collect_conditionals( m.operand(), sig, out, seen ); break;
    default:
        collect_conditionals( m.left(), sig, out, seen );
        collect_conditionals( m.right(), sig, out, seen );
        break;
    }
}

} // namespace detail

// Composite descriptor: a finite set of molecular descriptors read conjunctively.
// Element order is first occurrence; semantically identical elements are dropped.
class descriptor
{
    signature _sig;
    std::vector< molecular > _elements;

public:
    explicit descriptor( signature sig, const std::vector< molecular >& elements = {} ) : _sig{ std::move( sig ) }
    {
        for ( const auto& m : elements )
        {
            bool dup = std::any_of( _elements.begin(), _elements.end(),
                                    [&]( const molecular& e ) { return detail::same_shape( e, m, _sig ); } );
            if ( !dup )
                _elements.push_back( m );
        }
    }

    [[nodiscard]] const signature& sig() const { return _sig; }
    [[nodiscard]] const std::vector< molecular >& elements() const { return _elements; }
    [[nodiscard]] std::size_t size() const { return _elements.size(); }
    [[nodiscard]] bool empty() const { return _elements.empty(); }
};

inline bool holds( const molecular& m, const ocf& kappa )
{
    switch ( m.kind() )
    {
    case descriptor_connective::belief: return accepts_conditional_belief( kappa, m.cond() );
    case descriptor_connective::negation: return !holds( m.operand(), kappa );
    case descriptor_connective::conjunction: return holds( m.left(), kappa ) && holds( m.right(), kappa );
    case descriptor_connective::disjunction: return holds( m.left(), kappa ) || holds( m.right(), kappa );
    }
    return false;
}

inline bool holds( const descriptor& psi, const ocf& kappa )
{
    if ( !( psi.sig() == kappa.sig() ) )
        throw signature_mismatch( "descriptor and ranking function use different signatures" );
    return std::all_of( psi.elements().begin(), psi.elements().end(),
                        [&]( const molecular& m ) { return holds( m, kappa ); } );
}

inline bool is_elementary( const descriptor& psi )
{
    return std::all_of( psi.elements().begin(), psi.elements().end(),
                        []( const molecular& m ) { return as_literal( m ).has_value(); } );
}

// cond(Ψ): every conditional occurring in Ψ, first occurrence first, semantic duplicates removed.
inline std::vector< conditional > cond_of( const descriptor& psi )
{
    std::vector< conditional > out;
    std::vector< conditional_key > seen;
    for ( const auto& m : psi.elements() )
        detail::collect_conditionals( m, psi.sig(), out, seen );
    return out;
}

inline std::string to_string( const molecular& m, const signature& sig, int context = 0 )
{
    switch ( m.kind() )
    {
    case descriptor_connective::belief: {
        const auto& c = m.cond();
        if ( c.antecedent.kind() == connective::top )
        {
            const auto k = c.consequent.kind();
            const bool wrap = k == connective::disjunction || k == connective::implication;
            return wrap ? "B((" + to_string( c.consequent, sig ) + "))" : "B(" + to_string( c.consequent, sig ) + ")";
        }
        auto text = to_string( c, sig ); // "(B | A)"
        return "B" + text;
    }
    case descriptor_connective::negation: return "!" + to_string( m.operand(), sig, 3 );
    case descriptor_connective::conjunction: {
        auto s = to_string( m.left(), sig, 2 ) + " & " + to_string( m.right(), sig, 3 );
        return context > 2 ? "(" + s + ")" : s;
    }
    case descriptor_connective::disjunction: {
        auto s = to_string( m.left(), sig, 1 ) + " | " + to_string( m.right(), sig, 2 );
        return context > 1 ? "(" + s + ")" : s;
    }
    }
    return {};
}

inline std::string to_string( const descriptor& psi )
{
    std::string out;
    for ( const auto& m : psi.elements() )
    {
        if ( !out.empty() )
            out += ", ";
        out += to_string( m, psi.sig() );
    }
    return out;
}

} // namespace ocfrev
