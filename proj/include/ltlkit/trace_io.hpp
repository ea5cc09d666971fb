#pragma once

#include "trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltlkit
{

class trace_format_error : public std::runtime_error
{
public:
  trace_format_error( std::size_t line, std::string const& what )
    : std::runtime_error( "line " + std::to_string( line ) + ": " + what ), line_( line )
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

using AnyTrace = std::variant<FiniteTrace, LassoTrace, StructuredLassoTrace>;

namespace detail
{

inline bool valid_identifier( std::string_view w )
{
  if ( w.empty() || !( ( w[0] >= 'a' && w[0] <= 'z' ) || w[0] == '_' ) )
    return false;
  for ( char c : w )
    if ( !( ( c >= 'a' && c <= 'z' ) || ( c >= '0' && c <= '9' ) || c == '_' ) )
      return false;
  return w != "true" && w != "false";
}

inline std::string format_valuation( Valuation const& v )
{
  if ( v.empty() )
    return "-";
  std::string out;
  for ( auto const& p : v )
  {
    if ( !out.empty() )
      out += ' ';
    out += p;
  }
  return out;
}

inline std::string format_state( Valuation const& v ) { return format_valuation( v ); }

inline std::string format_state( StructuredState const& s )
{
  return "@" + std::string( tag_name( s.tag ) ) + " " + format_valuation( s.props );
}

} // namespace detail

/*! \brief Reads the line-oriented trace format.

  One state per line: an optional `@call`/`@ret`/`@int` tag, then
  proposition names or a lone `-`. A `loop:` line splits prefix from
  loop; without it the trace is finite. Tagged traces must be lassos.
*/
inline AnyTrace parse_trace( std::string_view text )
{
  std::vector<StructuredState> prefix, loop;
  bool seen_loop = false;
  std::optional<bool> tagged;

  std::istringstream in{ std::string( text ) };
  std::string line;
  std::size_t lineno = 0;
  while ( std::getline( in, line ) )
  {
    ++lineno;
    std::istringstream words( line );
    std::vector<std::string> tokens;
    for ( std::string w; words >> w; )
      tokens.push_back( w );
    if ( tokens.empty() || tokens.front()[0] == '#' )
      continue;
    if ( tokens.size() == 1 && tokens.front() == "loop:" )
    {
      if ( seen_loop )
        throw trace_format_error( lineno, "duplicate 'loop:' separator" );
      seen_loop = true;
      continue;
    }

    StructuredState state;
    std::size_t k = 0;
    bool const has_tag = tokens[0][0] == '@';
    if ( tagged && *tagged != has_tag )
      throw trace_format_error( lineno, "tags must appear on every state or on none" );
    tagged = has_tag;
    if ( has_tag )
    {
      auto const& t = tokens[0];
      if ( t == "@call" )
        state.tag = StateTag::call;
      else if ( t == "@ret" )
        state.tag = StateTag::ret;
      else if ( t == "@int" )
        state.tag = StateTag::internal;
      else
        throw trace_format_error( lineno, "unknown tag '" + t + "'" );
      k = 1;
    }
    if ( k == tokens.size() )
      throw trace_format_error( lineno, "state has no propositions; write '-' for the empty set" );
    if ( tokens.size() == k + 1 && tokens[k] == "-" )
    {
      // empty valuation
    }
    else
    {
      for ( ; k < tokens.size(); ++k )
      {
        if ( !detail::valid_identifier( tokens[k] ) )
          throw trace_format_error( lineno, "invalid proposition '" + tokens[k] + "'" );
        state.props.insert( tokens[k] );
      }
    }
    ( seen_loop ? loop : prefix ).push_back( std::move( state ) );
  }

  if ( seen_loop && loop.empty() )
    throw trace_format_error( lineno, "loop section is empty" );
  if ( !seen_loop && prefix.empty() )
    throw trace_format_error( lineno, "trace has no states" );

  if ( tagged.value_or( false ) )
  {
    if ( !seen_loop )
      throw trace_format_error( lineno, "structured traces must be infinite (add a 'loop:' section)" );
    return StructuredLassoTrace( std::move( prefix ), std::move( loop ) );
  }

  auto strip = []( std::vector<StructuredState>& v ) {
    std::vector<Valuation> out;
    out.reserve( v.size() );
    for ( auto& s : v )
      out.push_back( std::move( s.props ) );
    return out;
  };
  if ( seen_loop )
    return LassoTrace( strip( prefix ), strip( loop ) );
  return FiniteTrace( strip( prefix ) );
}

inline AnyTrace load_trace( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw std::runtime_error( "cannot open trace file '" + path + "'" );
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace( buf.str() );
}

inline std::string format_trace( FiniteTrace const& t )
{
  std::string out;
  for ( auto const& s : t.states() )
    out += detail::format_state( s ) + "\n";
  return out;
}

template<class State>
std::string format_trace( Lasso<State> const& t )
{
  std::string out;
  for ( auto const& s : t.prefix() )
    out += detail::format_state( s ) + "\n";
  out += "loop:\n";
  for ( auto const& s : t.loop() )
    out += detail::format_state( s ) + "\n";
  return out;
}

inline std::string format_trace( AnyTrace const& t )
{
  return std::visit( []( auto const& x ) { return format_trace( x ); }, t );
}

} // namespace ltlkit
