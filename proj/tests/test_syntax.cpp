#include <ltlkit/closure.hpp>
#include <ltlkit/fuzz.hpp>
#include <ltlkit/parser.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace ltlkit;

namespace
{

Formula P( std::string_view s, Mode m = Mode::ltl ) { return parse_formula( s, m ); }

parse_error::Reason reason_of( std::string_view s, Mode m = Mode::ltl )
{
  try
  {
    parse_formula( s, m );
  }
  catch ( parse_error const& e )
  {
    return e.reason();
  }
  ADD_FAILURE() << "no error for " << s;
  return parse_error::Reason::syntax;
}

// Fixpoint by repeated full passes over a string-keyed set; no worklist.
std::set<std::string> naive_closure( Formula const& f, bool caret )
{
  std::vector<Formula> items{ f, eventually( weak_next( falsity() ) ) };
  std::set<std::string> seen;
  for ( auto const& g : items )
    seen.insert( to_string( g ) );
  bool grew = true;
  while ( grew )
  {
    grew = false;
    auto const snapshot = items;
    for ( auto const& g : snapshot )
    {
      std::vector<Formula> out;
      switch ( g.kind() )
      {
      case Kind::Not:
        out.push_back( g.arg() );
        break;
      case Kind::And:
        out = { g.lhs(), g.rhs() };
        break;
      case Kind::Next:
        out.push_back( g.arg() );
        if ( g.arg().kind() == Kind::Not )
          out.push_back( weak_next( g.arg().arg() ) );
        break;
      case Kind::Until:
        out = { g.lhs(), g.rhs(), neg( weak_next( neg( g ) ) ) };
        break;
      case Kind::AbsNext:
        if ( caret )
        {
          out.push_back( g.arg() );
          if ( g.arg().kind() == Kind::Not )
            out.push_back( abs_weak_next( g.arg().arg() ) );
        }
        break;
      case Kind::AbsUntil:
        if ( caret )
          out = { g.lhs(), g.rhs(), neg( abs_weak_next( neg( g ) ) ) };
        break;
      default:
        break;
      }
      for ( auto const& h : out )
        if ( seen.insert( to_string( h ) ).second )
        {
          items.push_back( h );
          grew = true;
        }
    }
  }
  std::set<std::string> full = seen;
  for ( auto const& g : items )
    full.insert( to_string( g.kind() == Kind::Not ? g.arg() : neg( g ) ) );
  return full;
}

} // namespace

TEST( Parser, PrintsCoreForms )
{
  EXPECT_EQ( to_string( P( "p & X q" ) ), "(p & X q)" );
  EXPECT_EQ( to_string( P( "p U q" ) ), "(p U q)" );
  EXPECT_EQ( to_string( P( "!p" ) ), "!(p)" );
  EXPECT_EQ( to_string( P( "true" ) ), "true" );
  EXPECT_EQ( to_string( P( "Xa p & (p Ua q)", Mode::caret ) ), "(Xa p & (p Ua q))" );
}

TEST( Parser, SugarDesugarsToCore )
{
  EXPECT_EQ( P( "false" ), neg( truth() ) );
  EXPECT_EQ( P( "p | q" ), neg( conj( neg( prop( "p" ) ), neg( prop( "q" ) ) ) ) );
  EXPECT_EQ( P( "p -> q" ), disj( neg( prop( "p" ) ), prop( "q" ) ) );
  EXPECT_EQ( P( "F p" ), until( truth(), prop( "p" ) ) );
  EXPECT_EQ( P( "G p" ), neg( until( truth(), neg( prop( "p" ) ) ) ) );
  EXPECT_EQ( P( "N p" ), neg( weak_next( neg( prop( "p" ) ) ) ) );
  EXPECT_EQ( P( "Na p", Mode::caret ), neg( abs_weak_next( neg( prop( "p" ) ) ) ) );
  EXPECT_EQ( P( "Fa p", Mode::caret ), abs_until( truth(), prop( "p" ) ) );
  EXPECT_EQ( P( "p <-> q" ), conj( implies( prop( "p" ), prop( "q" ) ), implies( prop( "q" ), prop( "p" ) ) ) );
}

TEST( Parser, Precedence )
{
  EXPECT_EQ( P( "p | q & r" ), P( "p | (q & r)" ) );
  EXPECT_EQ( P( "p -> q -> r" ), P( "p -> (q -> r)" ) );
  EXPECT_EQ( P( "p U q U r" ), P( "p U (q U r)" ) );
  EXPECT_EQ( P( "p & q U r" ), P( "p & (q U r)" ) );
  EXPECT_EQ( P( "X p U q" ), P( "(X p) U q" ) );
  EXPECT_EQ( P( "p & q & r" ), P( "(p & q) & r" ) );
  EXPECT_EQ( P( "p <-> q -> r" ), P( "p <-> (q -> r)" ) );
  EXPECT_EQ( P( "! p & q" ), P( "(!p) & q" ) );
}

TEST( Parser, Errors )
{
  EXPECT_EQ( reason_of( "Xp" ), parse_error::Reason::lexical );
  EXPECT_EQ( reason_of( "p $ q" ), parse_error::Reason::lexical );
  EXPECT_EQ( reason_of( "p &" ), parse_error::Reason::syntax );
  EXPECT_EQ( reason_of( "(p" ), parse_error::Reason::syntax );
  EXPECT_EQ( reason_of( "p q" ), parse_error::Reason::syntax );
  EXPECT_EQ( reason_of( "" ), parse_error::Reason::syntax );
  EXPECT_EQ( reason_of( "Xa p" ), parse_error::Reason::abstract_in_ltl );
  EXPECT_EQ( reason_of( "p Ua q" ), parse_error::Reason::abstract_in_ltl );
  EXPECT_NO_THROW( P( "Xa p", Mode::caret ) );
}

TEST( Parser, RoundTripProperty )
{
  for ( std::uint64_t s = 0; s < 2000; ++s )
  {
    GenConfig cfg;
    cfg.seed = s;
    cfg.max_formula_size = 15;
    cfg.mode = s % 2 ? Mode::caret : Mode::ltl;
    auto const f = gen_formula( cfg );
    auto const text = to_string( f );
    ASSERT_EQ( P( text, cfg.mode ), f ) << text;
    ASSERT_EQ( to_string( P( text, cfg.mode ) ), text );
  }
}

TEST( Formula, SizeAndSubstitution )
{
  auto const f = P( "p U X q" );
  EXPECT_EQ( f.size(), 4u );
  EXPECT_EQ( formula_size( truth() ), 1u );
  auto const g = substitute( P( "phi & X phi" ), { { "phi", P( "q U p" ) } } );
  EXPECT_EQ( g, P( "(q U p) & X (q U p)" ) );
  EXPECT_EQ( propositions( P( "q & p U q" ) ), ( std::vector<std::string>{ "p", "q" } ) );
  EXPECT_EQ( complement( neg( prop( "p" ) ) ), prop( "p" ) );
  EXPECT_EQ( complement( prop( "p" ) ), neg( prop( "p" ) ) );
}

TEST( Closure, MatchesNaiveFixpoint )
{
  for ( std::uint64_t s = 0; s < 500; ++s )
  {
    GenConfig cfg;
    cfg.seed = 1000 + s;
    cfg.max_formula_size = 9;
    cfg.mode = s % 3 == 0 ? Mode::caret : Mode::ltl;
    auto const f = gen_formula( cfg );
    auto const c = closure( f, cfg.mode );
    std::set<std::string> got;
    for ( auto const& g : c.members() )
      got.insert( to_string( g ) );
    ASSERT_EQ( got, naive_closure( f, cfg.mode == Mode::caret ) ) << to_string( f );
    ASSERT_LE( c.size(), c.size_bound() );
  }
}

TEST( Closure, ContainsSeedsAndIsNegationClosed )
{
  auto const f = P( "p U X !q" );
  auto const c = closure( f );
  EXPECT_TRUE( c.contains( f ) );
  EXPECT_TRUE( c.contains( final_ahead() ) );
  EXPECT_TRUE( c.contains( weak_next( prop( "q" ) ) ) );
  EXPECT_TRUE( c.contains( neg( weak_next( neg( f ) ) ) ) );
  for ( auto const& g : c.members() )
    EXPECT_TRUE( c.contains( complement( g ) ) ) << to_string( g );
  EXPECT_THROW( closure( P( "Xa p", Mode::caret ) ), std::invalid_argument );
  EXPECT_TRUE( closure( P( "Xa p", Mode::caret ), Mode::caret ).contains( prop( "p" ) ) );
}
