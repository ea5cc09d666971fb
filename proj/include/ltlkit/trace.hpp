#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltlkit
{

/// Propositions true at a state.
using Valuation = std::set<std::string>;

enum class StateTag : unsigned char
{
  call,
  ret,
  internal,
};

inline std::string_view tag_name( StateTag t )
{
  switch ( t )
  {
  case StateTag::call:
    return "call";
  case StateTag::ret:
    return "ret";
  case StateTag::internal:
    return "int";
  }
  return "int";
}

struct StructuredState
{
  Valuation props;
  StateTag tag = StateTag::internal;

  friend bool operator==( StructuredState const&, StructuredState const& ) = default;
};

inline Valuation const& valuation_of( Valuation const& v ) { return v; }
inline Valuation const& valuation_of( StructuredState const& s ) { return s.props; }

class FiniteTrace
{
public:
  explicit FiniteTrace( std::vector<Valuation> states ) : states_( std::move( states ) )
  {
    if ( states_.empty() )
      throw std::invalid_argument( "finite trace needs at least one state" );
  }

  std::size_t length() const { return states_.size(); }
  std::size_t final_position() const { return states_.size() - 1; }
  std::vector<Valuation> const& states() const { return states_; }
  Valuation const& operator[]( std::size_t i ) const { return states_.at( i ); }

  friend bool operator==( FiniteTrace const&, FiniteTrace const& ) = default;

private:
  std::vector<Valuation> states_;
};

/*! \brief Ultimately periodic trace `prefix . loop^omega`.

  Positions are unbounded; position i at or past the prefix denotes the
  same state as its canonical representative in the first loop copy.
*/
template<class State>
class Lasso
{
public:
  using state_type = State;

  Lasso( std::vector<State> prefix, std::vector<State> loop ) : prefix_( std::move( prefix ) ), loop_( std::move( loop ) )
  {
    if ( loop_.empty() )
      throw std::invalid_argument( "lasso loop must be nonempty" );
  }

  std::vector<State> const& prefix() const { return prefix_; }
  std::vector<State> const& loop() const { return loop_; }
  std::size_t prefix_length() const { return prefix_.size(); }
  std::size_t loop_length() const { return loop_.size(); }

  /// Number of canonical positions (prefix plus one loop copy).
  std::size_t span() const { return prefix_.size() + loop_.size(); }

  std::size_t canonical( std::size_t i ) const
  {
    if ( i < prefix_.size() )
      return i;
    return prefix_.size() + ( i - prefix_.size() ) % loop_.size();
  }

  /// Canonical successor of a canonical position.
  std::size_t successor( std::size_t k ) const { return k + 1 < span() ? k + 1 : prefix_.size(); }

  State const& operator[]( std::size_t i ) const
  {
    auto const k = canonical( i );
    return k < prefix_.size() ? prefix_[k] : loop_[k - prefix_.size()];
  }

  friend bool operator==( Lasso const&, Lasso const& ) = default;

private:
  std::vector<State> prefix_;
  std::vector<State> loop_;
};

using LassoTrace = Lasso<Valuation>;
using StructuredLassoTrace = Lasso<StructuredState>;

template<class State>
std::size_t canonical_position( Lasso<State> const& t, std::size_t i )
{
  return t.canonical( i );
}

/// A position, or std::nullopt for "undefined".
using AbsPosition = std::optional<std::size_t>;

/*! \brief First unmatched return strictly after i.

  Scans the unrolling while tracking calls minus returns since i. A
  return seen at balance zero is the answer. Once the scan has covered a
  whole loop period without answering and the period did not lower the
  balance, later periods replay the same states at an equal or higher
  balance, so no answer exists.
*/
inline AbsPosition matching_return( StructuredLassoTrace const& t, std::size_t i )
{
  std::size_t const p = t.prefix_length();
  std::size_t const l = t.loop_length();
  std::size_t balance = 0;
  std::optional<std::size_t> period_start_balance;

  for ( std::size_t j = i + 1;; ++j )
  {
    if ( j >= p && ( j - p ) % l == 0 )
    {
      if ( period_start_balance && balance >= *period_start_balance )
        return std::nullopt;
      period_start_balance = balance;
    }
    switch ( t[j].tag )
    {
    case StateTag::ret:
      if ( balance == 0 )
        return j;
      --balance;
      break;
    case StateTag::call:
      ++balance;
      break;
    case StateTag::internal:
      break;
    }
  }
}

inline AbsPosition abstract_successor( StructuredLassoTrace const& t, std::size_t i )
{
  if ( t[i].tag == StateTag::call )
    return matching_return( t, i );
  if ( t[i + 1].tag == StateTag::ret )
    return std::nullopt;
  return i + 1;
}

struct ScanResult
{
  bool conclusive = false;
  std::size_t position = 0;
};

/// Literal scan of positions i+1 .. i+bound; inconclusive when the window runs out.
inline ScanResult brute_matching_return( StructuredLassoTrace const& t, std::size_t i, std::size_t bound )
{
  if ( bound == 0 )
    throw std::invalid_argument( "scan bound must be positive" );
  std::size_t calls = 0, rets = 0;
  for ( std::size_t j = i + 1; j <= i + bound; ++j )
  {
    if ( t[j].tag == StateTag::ret && calls == rets )
      return { true, j };
    if ( t[j].tag == StateTag::call )
      ++calls;
    else if ( t[j].tag == StateTag::ret )
      ++rets;
  }
  return { false, 0 };
}

} // namespace ltlkit
