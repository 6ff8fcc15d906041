#pragma once

// Command-line front end. Exit codes: 0 ok, 1 no admissible successor,
// 2 parse error, 3 invalid belief base, 4 unsupported descriptor, 5 budget exceeded.

#include "io.hpp"
#include "oracle.hpp"
#include "parser.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ocfrev::cli
{

enum exit_code : int
{
    ok = 0,
    no_solution = 1,
    parse_failure = 2,
    invalid_base = 3,
    unsupported_descriptor = 4,
    over_budget = 5,
};

using json = nlohmann::ordered_json;

namespace detail
{

inline std::string rational_string( const rational& r )
{
    return denominator( r ) == 1 ? numerator( r ).str() : numerator( r ).str() + "/" + denominator( r ).str();
}

inline std::string worlds_string( const std::vector< world >& worlds, const signature& sig )
{
    std::string out;
    for ( auto w : worlds )
    {
        if ( !out.empty() )
            out += ", ";
        out += to_string( w, sig );
    }
    return out;
}

// Worlds of a set in display order.
inline std::vector< world > ordered( const world_set& s, const signature& sig )
{
    std::vector< world > out;
    for ( auto w : display_order( sig ) )
        if ( s.contains( w ) )
            out.push_back( w );
    return out;
}

inline json gamma_json( const gamma_vector& g )
{
    json out = json::object();
    for ( std::size_t i = 0; i < g.size(); ++i )
    {
        out[ variable_name( i, true ) ] = g[ i ].plus;
        out[ variable_name( i, false ) ] = g[ i ].minus;
    }
    return out;
}

inline json solution_json( const solution& s )
{
    json out;
    out[ "gamma" ] = gamma_json( s.gamma );
    out[ "kappa0" ] = s.kappa0;
    out[ "posterior" ] = ranks_json( s.posterior );
    return out;
}

inline void print_solution( std::ostream& out, const std::string& label, const solution& s )
{
    out << label << ":";
    for ( std::size_t i = 0; i < s.gamma.size(); ++i )
        out << " " << variable_name( i, true ) << "=" << s.gamma[ i ].plus << " " << variable_name( i, false ) << "="
            << s.gamma[ i ].minus;
    out << " kappa0=" << s.kappa0 << "\n";
    for ( auto w : display_order( s.posterior.sig() ) )
        out << "  " << to_string( w, s.posterior.sig() ) << " = " << s.posterior( w ) << "\n";
}

inline std::string conditionals_string( const std::vector< conditional >& conds, const signature& sig )
{
    std::string out;
    for ( const auto& c : conds )
    {
        if ( !out.empty() )
            out += ", ";
        out += to_string( c, sig );
    }
    return out;
}

inline json conditionals_json( const std::vector< conditional >& conds, const signature& sig )
{
    json out = json::array();
    for ( const auto& c : conds )
        out.push_back( to_string( c, sig ) );
    return out;
}

} // namespace detail

struct options
{
    bool json = false;
};

inline int cmd_beliefs( const ocf& kappa, const options& opt, std::ostream& out )
{
    const auto worlds = detail::ordered( belief_models( kappa ), kappa.sig() );
    const auto formula_text = belief_formula( kappa );
    if ( opt.json )
    {
        json doc;
        doc[ "models" ] = json::array();
        for ( auto w : worlds )
            doc[ "models" ].push_back( to_string( w, kappa.sig() ) );
        doc[ "formula" ] = formula_text;
        out << doc.dump( 2 ) << "\n";
    }
    else
    {
        out << "models: " << detail::worlds_string( worlds, kappa.sig() ) << "\n";
        out << "formula: " << formula_text << "\n";
    }
    return ok;
}

inline int cmd_accepts( const ocf& kappa, const std::string& cond_text, const options& opt, std::ostream& out )
{
    const auto c = parse_conditional( cond_text, kappa.sig() );
    const auto v = rank_of( kappa, c.verification() );
    const auto f = rank_of( kappa, c.falsification() );
    const bool accepted = accepts( kappa, c );
    if ( opt.json )
    {
        json doc;
        doc[ "conditional" ] = to_string( c, kappa.sig() );
        doc[ "verification_rank" ] = to_string( v );
        doc[ "falsification_rank" ] = to_string( f );
        doc[ "accepted" ] = accepted;
        out << doc.dump( 2 ) << "\n";
    }
    else
    {
        out << "conditional: " << to_string( c, kappa.sig() ) << "\n";
        out << "verification_rank: " << to_string( v ) << "\n";
        out << "falsification_rank: " << to_string( f ) << "\n";
        out << "accepted: " << ( accepted ? "true" : "false" ) << "\n";
    }
    return ok;
}

inline int cmd_check( const ocf& kappa, const std::string& descriptor_text, const options& opt, std::ostream& out )
{
    const auto psi = parse_descriptor( descriptor_text, kappa.sig() );
    const bool result = holds( psi, kappa );
    if ( opt.json )
    {
        json doc;
        doc[ "descriptor" ] = to_string( psi );
        doc[ "elements" ] = json::array();
        for ( const auto& m : psi.elements() )
            doc[ "elements" ].push_back( { { "descriptor", to_string( m, psi.sig() ) }, { "holds", holds( m, kappa ) } } );
        doc[ "holds" ] = result;
        out << doc.dump( 2 ) << "\n";
    }
    else
    {
        out << "descriptor: " << to_string( psi ) << "\n";
        for ( const auto& m : psi.elements() )
            out << "  " << to_string( m, psi.sig() ) << ": " << ( holds( m, kappa ) ? "true" : "false" ) << "\n";
        out << "holds: " << ( result ? "true" : "false" ) << "\n";
    }
    return ok;
}

struct revise_options
{
    std::string bounds;
    std::optional< selection_policy > select;
    bool dedup = false;
    std::size_t max_solutions = 1'000'000;
    unsigned threads = 0;
    bool prune = true;
};

inline int cmd_revise( const ocf& kappa, const std::string& descriptor_text, const revise_options& ropt, const options& opt,
                       std::ostream& out )
{
    const auto psi = parse_descriptor( descriptor_text, kappa.sig() );
    const auto problem = build_csp( kappa, psi );
    const auto box = parse_bounds( ropt.bounds, default_bounds( kappa, problem.conds().size() ) );

    solve_options sopt;
    sopt.prune = ropt.prune;
    sopt.threads = ropt.threads;
    sopt.max_solutions = ropt.max_solutions;
    sopt.dedup_posteriors = ropt.dedup;
    const auto solutions = solve( problem, box, sopt );

    std::optional< std::size_t > chosen;
    if ( ropt.select )
        chosen = make_choice( *ropt.select )( solutions );
    const bool found = !solutions.empty();
    const char* status = found ? "ok" : "no admissible successor";

    if ( opt.json )
    {
        json doc;
        doc[ "descriptor" ] = to_string( psi );
        doc[ "conditionals" ] = detail::conditionals_json( problem.conds(), kappa.sig() );
        doc[ "bounds" ] = to_string( box );
        doc[ "status" ] = status;
        doc[ "count" ] = solutions.size();
        if ( ropt.select )
        {
            doc[ "select" ] = *ropt.select == selection_policy::lex ? "lex" : "min-sum";
            doc[ "selected" ] = chosen ? detail::solution_json( solutions[ *chosen ] ) : json();
        }
        else
        {
            doc[ "solutions" ] = json::array();
            for ( const auto& s : solutions )
                doc[ "solutions" ].push_back( detail::solution_json( s ) );
        }
        out << doc.dump( 2 ) << "\n";
    }
    else
    {
        out << "descriptor: " << to_string( psi ) << "\n";
        out << "conditionals: " << detail::conditionals_string( problem.conds(), kappa.sig() ) << "\n";
        out << "bounds: " << to_string( box ) << "\n";
        out << "status: " << status << "\n";
        out << "count: " << solutions.size() << "\n";
        if ( ropt.select )
        {
            out << "select: " << ( *ropt.select == selection_policy::lex ? "lex" : "min-sum" ) << "\n";
            if ( chosen )
                detail::print_solution( out, "selected", solutions[ *chosen ] );
        }
        else
        {
            for ( std::size_t k = 0; k < solutions.size(); ++k )
                detail::print_solution( out, "solution " + std::to_string( k + 1 ), solutions[ k ] );
        }
    }
    return found ? ok : no_solution;
}

inline int cmd_pcp_check( const ocf& prior, const ocf& posterior, const std::string& conds_text, std::size_t m_max,
                          const options& opt, std::ostream& out )
{
    if ( !( prior.sig() == posterior.sig() ) )
        throw signature_mismatch( "prior and posterior bases declare different signatures" );
    const auto conds = parse_conditional_list( conds_text, prior.sig() );
    const auto analysis = analyze_pcp( prior, posterior, conds );
    const auto unbalanced = find_unbalanced( prior, posterior, conds, m_max );
    const auto& sig = prior.sig();

    json doc;
    doc[ "conditionals" ] = detail::conditionals_json( conds, sig );
    doc[ "representable" ] = analysis.witness.has_value();
    if ( analysis.witness )
    {
        const auto& w = *analysis.witness;
        json witness = json::object();
        for ( std::size_t c = 0; c < w.particular().size(); ++c )
            witness[ variable_name_of_column( c ) ] = detail::rational_string( w.particular()[ c ] );
        doc[ "witness" ] = witness;
        json free = json::array();
        for ( auto c : w.free_variables() )
            free.push_back( variable_name_of_column( c ) );
        doc[ "free" ] = free;
    }
    else if ( analysis.violation )
    {
        const auto& v = *analysis.violation;
        json violation;
        if ( v.profile )
        {
            violation[ "profile" ] = to_string( *v.profile );
            json members = json::object();
            for ( auto x : display_order( sig ) )
                for ( const auto& [ w, d ] : v.deltas )
                    if ( w == x )
                        members[ to_string( w, sig ) ] = d;
            violation[ "deltas" ] = members;
        }
        else
            violation[ "inconsistent" ] = true;
        doc[ "violation" ] = violation;
    }
    doc[ "m_max" ] = m_max;
    doc[ "balanced" ] = !unbalanced.has_value();
    if ( unbalanced )
    {
        json pair;
        pair[ "omega1" ] = json::array();
        pair[ "omega2" ] = json::array();
        for ( auto w : unbalanced->omega1 )
            pair[ "omega1" ].push_back( to_string( w, sig ) );
        for ( auto w : unbalanced->omega2 )
            pair[ "omega2" ].push_back( to_string( w, sig ) );
        doc[ "unbalanced_pair" ] = pair;
    }

    if ( opt.json )
    {
        out << doc.dump( 2 ) << "\n";
        return ok;
    }
    out << "conditionals: " << detail::conditionals_string( conds, sig ) << "\n";
    out << "representable: " << ( analysis.witness ? "true" : "false" ) << "\n";
    if ( doc.contains( "witness" ) )
    {
        out << "witness:";
        for ( const auto& [ k, v ] : doc[ "witness" ].items() )
            out << " " << k << "=" << v.get< std::string >();
        out << "\nfree:";
        for ( const auto& v : doc[ "free" ] )
            out << " " << v.get< std::string >();
        out << "\n";
    }
    if ( doc.contains( "violation" ) )
    {
        const auto& v = doc[ "violation" ];
        if ( v.contains( "profile" ) )
        {
            out << "violation: profile " << v[ "profile" ].get< std::string >() << " has unequal shifts:";
            for ( const auto& [ k, d ] : v[ "deltas" ].items() )
                out << " [" << k << "] " << d.get< rank_value >();
            out << "\n";
        }
        else
            out << "violation: inconsistent shift equations\n";
    }
    out << "m_max: " << m_max << "\n";
    out << "balanced: " << ( unbalanced ? "false" : "true" ) << "\n";
    if ( unbalanced )
        out << "unbalanced_pair: {" << detail::worlds_string( unbalanced->omega1, sig ) << "} vs {"
            << detail::worlds_string( unbalanced->omega2, sig ) << "}\n";
    return ok;
}

inline int cmd_oracle( const ocf& kappa, const std::string& descriptor_text, rank_value max_rank, std::size_t budget,
                       const options& opt, std::ostream& out )
{
    const auto psi = parse_descriptor( descriptor_text, kappa.sig() );
    const auto report = make_completeness_report( kappa, psi, max_rank, budget );
    json doc;
    doc[ "descriptor" ] = to_string( psi );
    doc[ "max_rank" ] = max_rank;
    doc[ "enumerated" ] = report.enumerated;
    doc[ "satisfying" ] = report.satisfying;
    doc[ "representable" ] = report.representable;
    doc[ "non_integral" ] = report.non_integral;
    json box = json::object();
    for ( std::size_t k = 0; k < report.needed_box.size(); ++k )
        box[ variable_name( k / 2, k % 2 == 0 ) ] = std::to_string( report.needed_box[ k ].lo ) + ".." +
                                                   std::to_string( report.needed_box[ k ].hi );
    doc[ "needed_box" ] = box;
    doc[ "violations" ] = json::array();
    for ( const auto& v : report.violations )
        doc[ "violations" ].push_back( { { "reason", v.reason }, { "posterior", ranks_json( v.posterior ) } } );

    if ( opt.json )
    {
        out << doc.dump( 2 ) << "\n";
        return ok;
    }
    for ( const auto& key : { "descriptor", "max_rank", "enumerated", "satisfying", "representable", "non_integral" } )
    {
        const auto& v = doc[ key ];
        out << key << ": " << ( v.is_string() ? v.get< std::string >() : v.dump() ) << "\n";
    }
    out << "needed_box:";
    for ( const auto& [ k, v ] : box.items() )
        out << " " << k << "=" << v.get< std::string >();
    out << "\nviolations: " << report.violations.size() << "\n";
    for ( const auto& v : report.violations )
        out << "  " << v.reason << "\n" << write_base_text( v.posterior );
    return ok;
}

// Runs one CLI invocation and returns its exit code.
inline int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Conditional descriptor revision over ranking functions" };
    app.require_subcommand( 1 );
    options opt;

    std::string base_path, post_path, text, conds_text;
    revise_options ropt;
    std::string select_text;
    std::size_t m_max = 2;
    rank_value max_rank = 2;
    std::size_t budget = default_enumeration_budget;

    auto add_json = [&]( CLI::App* cmd ) { cmd->add_flag( "--json", opt.json, "Machine-readable output" ); };

    auto* beliefs = app.add_subcommand( "beliefs", "Print the most plausible worlds and the belief formula" );
    beliefs->add_option( "base", base_path, "Belief base file" )->required();
    add_json( beliefs );

    auto* accepts_cmd = app.add_subcommand( "accepts", "Test acceptance of a conditional" );
    accepts_cmd->add_option( "base", base_path, "Belief base file" )->required();
    accepts_cmd->add_option( "conditional", text, "Conditional, e.g. '(f|b)'" )->required();
    add_json( accepts_cmd );

    auto* check = app.add_subcommand( "check", "Test whether a descriptor holds" );
    check->add_option( "base", base_path, "Belief base file" )->required();
    check->add_option( "descriptor", text, "Descriptor, e.g. 'B(p|b), !B(f|p)'" )->required();
    add_json( check );

    auto* revise_cmd = app.add_subcommand( "revise", "Enumerate conditional descriptor revisions" );
    revise_cmd->add_option( "base", base_path, "Belief base file" )->required();
    revise_cmd->add_option( "descriptor", text, "Elementary descriptor" )->required();
    revise_cmd->add_option( "--bounds", ropt.bounds, "Per-variable bounds, e.g. 'g1+=-2..0,g1-=0..2'" );
    revise_cmd->add_option( "--select", select_text, "Print only the chosen solution" )
        ->check( CLI::IsMember( { "lex", "min-sum" } ) );
    revise_cmd->add_flag( "--dedup", ropt.dedup, "Drop solutions that induce an already listed posterior" );
    revise_cmd->add_option( "--max-solutions", ropt.max_solutions, "Fail with exit 5 beyond this many solutions (0 = no limit)" );
    revise_cmd->add_option( "--threads", ropt.threads, "Worker threads (0 = hardware concurrency)" );
    bool no_prune = false;
    revise_cmd->add_flag( "--no-prune", no_prune, "Disable interval pruning" );
    add_json( revise_cmd );

    auto* pcp = app.add_subcommand( "pcp-check", "Test conditional preservation of a change" );
    pcp->add_option( "prior", base_path, "Prior belief base file" )->required();
    pcp->add_option( "posterior", post_path, "Posterior belief base file" )->required();
    pcp->add_option( "--conds", conds_text, "Conditionals, e.g. '(p|b),(f|p)'" )->required();
    pcp->add_option( "--m-max", m_max, "Largest multiset size for the balance check" );
    add_json( pcp );

    auto* oracle = app.add_subcommand( "oracle", "Exhaustive completeness check against all bounded ranking functions" );
    oracle->add_option( "base", base_path, "Belief base file" )->required();
    oracle->add_option( "descriptor", text, "Elementary descriptor" )->required();
    oracle->add_option( "--max-rank", max_rank, "Largest rank of enumerated posteriors" );
    oracle->add_option( "--budget", budget, "Maximum number of enumerated ranking functions" );
    add_json( oracle );

    std::vector< std::string > argv_rev( args.rbegin(), args.rend() );
    try
    {
        app.parse( argv_rev );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e, out, err );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e, out, err );
        return parse_failure;
    }

    try
    {
        if ( beliefs->parsed() )
            return cmd_beliefs( read_base( base_path ), opt, out );
        if ( accepts_cmd->parsed() )
        {
            auto kappa = read_base( base_path );
            return cmd_accepts( kappa, text, opt, out );
        }
        if ( check->parsed() )
        {
            auto kappa = read_base( base_path );
            return cmd_check( kappa, text, opt, out );
        }
        if ( revise_cmd->parsed() )
        {
            auto kappa = read_base( base_path );
            if ( !select_text.empty() )
                ropt.select = select_text == "lex" ? selection_policy::lex : selection_policy::min_sum;
            ropt.prune = !no_prune;
            const int code = cmd_revise( kappa, text, ropt, opt, out );
            if ( code == no_solution )
                err << "no admissible successor\n";
            return code;
        }
        if ( pcp->parsed() )
        {
            auto prior = read_base( base_path );
            auto post = read_base( post_path );
            return cmd_pcp_check( prior, post, conds_text, m_max, opt, out );
        }
        if ( oracle->parsed() )
        {
            auto kappa = read_base( base_path );
            return cmd_oracle( kappa, text, max_rank, budget, opt, out );
        }
    }
    catch ( const parse_error& e )
    {
        err << "error: " << e.what() << "\n";
        return parse_failure;
    }
    catch ( const format_error& e )
    {
        err << "error: " << e.what() << "\n";
        return parse_failure;
    }
    catch ( const invalid_ocf& e )
    {
        err << "error: invalid belief base: " << e.what() << "\n";
        return invalid_base;
    }
    catch ( const signature_too_large& e )
    {
        err << "error: invalid belief base: " << e.what() << "\n";
        return invalid_base;
    }
    catch ( const not_elementary& e )
    {
        err << "error: " << e.what() << "\n";
        return unsupported_descriptor;
    }
    catch ( const budget_exceeded& e )
    {
        err << "error: budget exceeded: " << e.what() << "\n";
        return over_budget;
    }
    catch ( const signature_mismatch& e )
    {
        err << "error: " << e.what() << "\n";
        return invalid_base;
    }
    catch ( const error& e )
    {
        err << "error: " << e.what() << "\n";
        return parse_failure;
    }
    return parse_failure;
}

inline int run( int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr )
{
    std::vector< std::string > args( argv + 1, argv + argc );
    return run( args, out, err );
}

} // namespace ocfrev::cli
