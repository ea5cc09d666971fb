#pragma once

#include "parser.hpp"
#include "proof.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ltlkit
{

class proof_format_error : public std::runtime_error
{
public:
  proof_format_error( std::size_t line, std::string const& what )
    : std::runtime_error( "line " + std::to_string( line ) + ": " + what ), line_( line )
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

namespace detail
{

inline std::string trim( std::string const& s )
{
  auto b = s.find_first_not_of( " \t\r" );
  if ( b == std::string::npos )
    return {};
  auto e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1 );
}

inline std::string metavariable_name( std::string const& raw )
{
  if ( raw == "φ" || raw == "phi" )
    return "phi";
  if ( raw == "ψ" || raw == "psi" )
    return "psi";
  return raw;
}

inline std::size_t parse_index( std::string const& s, std::size_t line )
{
  if ( s.empty() || s.find_first_not_of( "0123456789" ) != std::string::npos )
    throw proof_format_error( line, "expected a step number, found '" + s + "'" );
  return std::stoul( s );
}

inline Justification parse_justification( std::string const& text, Mode mode, std::size_t line )
{
  std::istringstream in( text );
  std::string head;
  in >> head;
  std::vector<std::string> args;
  if ( head != "axiom" )
    for ( std::string a; in >> a; )
      args.push_back( a );

  auto want = [&]( std::size_t n ) {
    if ( args.size() != n )
      throw proof_format_error( line, "'" + head + "' takes " + std::to_string( n ) + " step number(s)" );
  };

  if ( head == "taut" )
  {
    want( 0 );
    return Taut{};
  }
  if ( head == "mp" )
  {
    want( 2 );
    return ModusPonens{ parse_index( args[0], line ), parse_index( args[1], line ) };
  }
  if ( head == "gen-x" )
  {
    want( 1 );
    return GenNext{ parse_index( args[0], line ) };
  }
  if ( head == "ind-u" )
  {
    want( 1 );
    return IndUntil{ parse_index( args[0], line ) };
  }
  if ( head == "gen-xa" )
  {
    want( 1 );
    return GenAbsNext{ parse_index( args[0], line ) };
  }
  if ( head == "ind-ua" )
  {
    want( 1 );
    return IndAbsUntil{ parse_index( args[0], line ) };
  }
  if ( head != "axiom" )
    throw proof_format_error( line, "unknown justification '" + head + "'" );

  AxiomInstance inst;
  std::string rest;
  std::getline( in, rest );
  static std::regex const bind_re( R"(\bbind\s+(phi|psi|φ|ψ)\s*=)" );

  std::vector<std::pair<std::string, std::size_t>> marks; // metavariable, offset of its formula
  std::vector<std::size_t> starts;
  for ( auto it = std::sregex_iterator( rest.begin(), rest.end(), bind_re ); it != std::sregex_iterator(); ++it )
  {
    starts.push_back( static_cast<std::size_t>( it->position() ) );
    marks.emplace_back( metavariable_name( ( *it )[1] ), static_cast<std::size_t>( it->position() + it->length() ) );
  }
  std::string const head_part = rest.substr( 0, starts.empty() ? rest.size() : starts.front() );
  std::istringstream hp( head_part );
  if ( !( hp >> inst.schema ) )
    throw proof_format_error( line, "axiom justification needs a schema name" );
  for ( std::string kv; hp >> kv; )
  {
    auto eq = kv.find( '=' );
    if ( eq == std::string::npos || eq == 0 )
      throw proof_format_error( line, "expected key=value, found '" + kv + "'" );
    auto const value = kv.substr( eq + 1 );
    bool const negative = !value.empty() && value[0] == '-';
    auto const digits = negative ? value.substr( 1 ) : value;
    if ( digits.empty() || digits.find_first_not_of( "0123456789" ) != std::string::npos )
      throw proof_format_error( line, "parameter '" + kv.substr( 0, eq ) + "' needs an integer" );
    inst.params[kv.substr( 0, eq )] = std::stol( value );
  }
  for ( std::size_t k = 0; k < marks.size(); ++k )
  {
    std::size_t const end = k + 1 < marks.size() ? starts[k + 1] : rest.size();
    auto const ftext = rest.substr( marks[k].second, end - marks[k].second );
    if ( inst.bindings.count( marks[k].first ) )
      throw proof_format_error( line, "metavariable '" + marks[k].first + "' bound twice" );
    try
    {
      inst.bindings.emplace( marks[k].first, parse_formula( ftext, mode ) );
    }
    catch ( parse_error const& e )
    {
      throw proof_format_error( line, std::string( "in binding: " ) + e.what() );
    }
  }
  return inst;
}

} // namespace detail

/*! \brief Reads a proof script.

  First line `system: <id>`, then `<n>. <formula> ; <justification>`
  per step. Lines starting with `#` are comments.
*/
inline ProofScript parse_proof( std::string const& text )
{
  ProofScript script;
  bool have_system = false;
  std::istringstream in( text );
  std::string raw;
  std::size_t lineno = 0;
  static std::regex const step_re( R"(^\s*(\d+)\.\s*([^;]*);(.*)$)" );
  while ( std::getline( in, raw ) )
  {
    ++lineno;
    auto const line = detail::trim( raw );
    if ( line.empty() || line[0] == '#' )
      continue;
    if ( !have_system )
    {
      if ( line.rfind( "system:", 0 ) != 0 )
        throw proof_format_error( lineno, "first line must be 'system: <id>'" );
      try
      {
        script.system = parse_system( detail::trim( line.substr( 7 ) ) );
      }
      catch ( std::invalid_argument const& e )
      {
        throw proof_format_error( lineno, e.what() );
      }
      have_system = true;
      continue;
    }
    std::smatch m;
    if ( !std::regex_match( line, m, step_re ) )
      throw proof_format_error( lineno, "expected '<n>. <formula> ; <justification>'" );
    Mode const mode = script.system == SystemId::ax_cr ? Mode::caret : Mode::ltl;
    ProofStep step{ std::stoul( m[1] ), Formula{}, Taut{} };
    try
    {
      step.formula = parse_formula( m[2].str(), mode );
    }
    catch ( parse_error const& e )
    {
      throw proof_format_error( lineno, e.what() );
    }
    step.justification = detail::parse_justification( detail::trim( m[3] ), mode, lineno );
    script.steps.push_back( std::move( step ) );
  }
  if ( !have_system )
    throw proof_format_error( lineno, "missing 'system: <id>' line" );
  return script;
}

inline ProofScript load_proof( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw std::runtime_error( "cannot open proof file '" + path + "'" );
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_proof( buf.str() );
}

} // namespace ltlkit
