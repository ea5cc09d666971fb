#pragma once

#include "formula.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

namespace ltlkit
{

/*! \brief The closure set of a formula, seeding the tableau.

  `primary()` is the least set containing the seed and `true U X false`,
  closed under the decomposition rules (with the abstract mirrors in caret
  mode). `members()` adds the complement of every primary member.
  Both lists are sorted by the structural order, so subformulas precede
  the formulas they occur in.
*/
class ClosureSet
{
public:
  ClosureSet( Formula origin, Mode mode, std::vector<Formula> primary, std::vector<Formula> members )
    : origin_( std::move( origin ) ), mode_( mode ), primary_( std::move( primary ) ), members_( std::move( members ) ),
      bound_( 12 * ( origin_.size() + 4 ) )
  {
  }

  Formula const& origin() const { return origin_; }
  Mode mode() const { return mode_; }
  std::vector<Formula> const& primary() const { return primary_; }
  std::vector<Formula> const& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  /// Polynomial bound on size() fixed at construction.
  std::size_t size_bound() const { return bound_; }

  bool contains( Formula const& f ) const { return std::binary_search( members_.begin(), members_.end(), f ); }
  bool contains_primary( Formula const& f ) const { return std::binary_search( primary_.begin(), primary_.end(), f ); }

private:
  Formula origin_;
  Mode mode_;
  std::vector<Formula> primary_;
  std::vector<Formula> members_;
  std::size_t bound_;
};

/// `true U X false`: holds exactly where a final state is ahead.
inline Formula final_ahead() { return eventually( weak_next( falsity() ) ); }

inline ClosureSet closure( Formula const& f, Mode mode = Mode::ltl )
{
  if ( mode == Mode::ltl && has_abstract_operator( f ) )
    throw std::invalid_argument( "closure: abstract operator in ltl mode" );

  FormulaSet primary;
  std::deque<Formula> work;
  auto add = [&]( Formula const& g ) {
    if ( primary.insert( g ).second )
      work.push_back( g );
  };
  add( f );
  add( final_ahead() );

  while ( !work.empty() )
  {
    Formula const g = work.front();
    work.pop_front();
    switch ( g.kind() )
    {
    case Kind::Not:
    case Kind::Next:
    case Kind::AbsNext:
      add( g.arg() );
      if ( !g.is( Kind::Not ) && g.arg().is( Kind::Not ) )
        add( Formula::make_unary( g.kind(), g.arg().arg() ) );
      break;
    case Kind::And:
      add( g.lhs() );
      add( g.rhs() );
      break;
    case Kind::Until:
      add( g.lhs() );
      add( g.rhs() );
      add( strong_next( g ) );
      break;
    case Kind::AbsUntil:
      add( g.lhs() );
      add( g.rhs() );
      add( abs_strong_next( g ) );
      break;
    default:
      break;
    }
  }

  FormulaSet all( primary );
  for ( auto const& g : primary )
    all.insert( complement( g ) );

  return ClosureSet( f, mode, { primary.begin(), primary.end() }, { all.begin(), all.end() } );
}

} // namespace ltlkit
