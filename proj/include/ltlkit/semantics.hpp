#pragma once

#include "formula.hpp"
#include "trace.hpp"
#include "trace_io.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace ltlkit
{

class semantic_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

namespace detail
{

/// Until over a functional successor graph: walk until the right operand
/// holds, the left fails, the successor is missing, or a cycle closes.
inline std::vector<char> until_on_graph( std::vector<char> const& lhs, std::vector<char> const& rhs,
                                         std::vector<std::optional<std::size_t>> const& succ )
{
  std::size_t const n = succ.size();
  std::vector<char> out( n, 0 );
  for ( std::size_t start = 0; start < n; ++start )
  {
    std::size_t k = start;
    for ( std::size_t steps = 0; steps <= n; ++steps )
    {
      if ( rhs[k] )
      {
        out[start] = 1;
        break;
      }
      if ( !lhs[k] || !succ[k] )
        break;
      k = *succ[k];
    }
  }
  return out;
}

inline bool labels( Valuation const& v, std::string const& p ) { return v.count( p ) != 0; }

inline bool labels( StructuredState const& s, std::string const& p )
{
  return s.props.count( p ) != 0 || p == tag_name( s.tag );
}

} // namespace detail

/*! \brief Memoized satisfaction over one trace.

  Truth tables are filled per subformula over the canonical positions
  (all positions of a finite trace; prefix plus one loop copy of a
  lasso). Entries never change once computed.
*/
template<class Trace>
class EvalContext;

template<>
class EvalContext<FiniteTrace>
{
public:
  explicit EvalContext( FiniteTrace const& t ) : trace_( t ) {}

  std::size_t positions() const { return trace_.length(); }

  std::vector<char> const& table( Formula const& f )
  {
    if ( auto it = memo_.find( f ); it != memo_.end() )
      return it->second;
    std::size_t const n = trace_.length();
    std::vector<char> val( n, 0 );
    switch ( f.kind() )
    {
    case Kind::True:
      val.assign( n, 1 );
      break;
    case Kind::Prop:
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = detail::labels( trace_[i], f.name() );
      break;
    case Kind::Not:
    {
      auto const& a = table( f.arg() );
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = !a[i];
      break;
    }
    case Kind::And:
    {
      auto const& a = table( f.lhs() );
      auto const& b = table( f.rhs() );
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = a[i] && b[i];
      break;
    }
    case Kind::Next:
    {
      auto const& a = table( f.arg() );
      val[n - 1] = 1;
      for ( std::size_t i = 0; i + 1 < n; ++i )
        val[i] = a[i + 1];
      break;
    }
    case Kind::Until:
    {
      auto const& a = table( f.lhs() );
      auto const& b = table( f.rhs() );
      val[n - 1] = b[n - 1];
      for ( std::size_t i = n - 1; i-- > 0; )
        val[i] = b[i] || ( a[i] && val[i + 1] );
      break;
    }
    case Kind::AbsNext:
    case Kind::AbsUntil:
      throw semantic_error( "abstract operators are not defined on plain traces" );
    }
    return memo_.emplace( f, std::move( val ) ).first->second;
  }

  bool holds( Formula const& f, std::size_t i )
  {
    if ( i >= trace_.length() )
      throw std::out_of_range( "position " + std::to_string( i ) + " is past the final state" );
    return table( f )[i];
  }

private:
  FiniteTrace const& trace_;
  FormulaMap<std::vector<char>> memo_;
};

template<class State>
class EvalContext<Lasso<State>>
{
  static constexpr bool structured = std::is_same_v<State, StructuredState>;

public:
  explicit EvalContext( Lasso<State> const& t ) : trace_( t )
  {
    std::size_t const n = t.span();
    next_.resize( n );
    for ( std::size_t k = 0; k < n; ++k )
      next_[k] = t.successor( k );
    if constexpr ( structured )
    {
      abs_next_.resize( n );
      for ( std::size_t k = 0; k < n; ++k )
        if ( auto j = abstract_successor( t, k ) )
          abs_next_[k] = t.canonical( *j );
    }
  }

  std::size_t positions() const { return trace_.span(); }

  std::vector<char> const& table( Formula const& f )
  {
    if ( auto it = memo_.find( f ); it != memo_.end() )
      return it->second;
    std::size_t const n = trace_.span();
    std::vector<char> val( n, 0 );
    switch ( f.kind() )
    {
    case Kind::True:
      val.assign( n, 1 );
      break;
    case Kind::Prop:
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = detail::labels( trace_[i], f.name() );
      break;
    case Kind::Not:
    {
      auto const& a = table( f.arg() );
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = !a[i];
      break;
    }
    case Kind::And:
    {
      auto const& a = table( f.lhs() );
      auto const& b = table( f.rhs() );
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = a[i] && b[i];
      break;
    }
    case Kind::Next:
    {
      auto const& a = table( f.arg() );
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = a[*next_[i]];
      break;
    }
    case Kind::Until:
    {
      auto const& a = table( f.lhs() );
      auto const& b = table( f.rhs() );
      val = detail::until_on_graph( a, b, next_ );
      break;
    }
    case Kind::AbsNext:
    {
      if constexpr ( !structured )
        throw semantic_error( "abstract operators need a structured trace" );
      auto const& a = table( f.arg() );
      for ( std::size_t i = 0; i < n; ++i )
        val[i] = !abs_next_[i] || a[*abs_next_[i]];
      break;
    }
    case Kind::AbsUntil:
    {
      if constexpr ( !structured )
        throw semantic_error( "abstract operators need a structured trace" );
      auto const& a = table( f.lhs() );
      auto const& b = table( f.rhs() );
      val = detail::until_on_graph( a, b, abs_next_ );
      break;
    }
    }
    return memo_.emplace( f, std::move( val ) ).first->second;
  }

  bool holds( Formula const& f, std::size_t i ) { return table( f )[trace_.canonical( i )]; }

private:
  Lasso<State> const& trace_;
  std::vector<std::optional<std::size_t>> next_;
  std::vector<std::optional<std::size_t>> abs_next_;
  FormulaMap<std::vector<char>> memo_;
};

inline bool eval_ltl( FiniteTrace const& t, std::size_t i, Formula const& f )
{
  return EvalContext<FiniteTrace>( t ).holds( f, i );
}

inline bool eval_ltl( LassoTrace const& t, std::size_t i, Formula const& f )
{
  return EvalContext<LassoTrace>( t ).holds( f, i );
}

inline bool eval_caret( StructuredLassoTrace const& t, std::size_t i, Formula const& f )
{
  return EvalContext<StructuredLassoTrace>( t ).holds( f, i );
}

/// Truth at every canonical position of the trace.
template<class Trace>
bool eval_everywhere( Trace const& t, Formula const& f )
{
  EvalContext<Trace> ctx( t );
  for ( char v : ctx.table( f ) )
    if ( !v )
      return false;
  return true;
}

/// First canonical position where f fails, if any.
template<class Trace>
std::optional<std::size_t> first_failure( Trace const& t, Formula const& f )
{
  EvalContext<Trace> ctx( t );
  auto const& tab = ctx.table( f );
  for ( std::size_t i = 0; i < tab.size(); ++i )
    if ( !tab[i] )
      return i;
  return std::nullopt;
}

/// Dispatches on the trace class; caret mode requires a structured lasso.
inline bool eval_at( AnyTrace const& t, std::size_t i, Formula const& f, Mode mode )
{
  return std::visit(
      [&]( auto const& tr ) -> bool {
        using T = std::decay_t<decltype( tr )>;
        if constexpr ( std::is_same_v<T, StructuredLassoTrace> )
        {
          if ( mode != Mode::caret )
            throw semantic_error( "structured traces are evaluated in caret mode" );
          return eval_caret( tr, i, f );
        }
        else
        {
          if ( mode != Mode::ltl )
            throw semantic_error( "caret mode needs a structured lasso trace" );
          return eval_ltl( tr, i, f );
        }
      },
      t );
}

} // namespace ltlkit
