#pragma once

#include "formula.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltlkit
{

class parse_error : public std::runtime_error
{
public:
  enum class Reason
  {
    lexical,
    syntax,
    abstract_in_ltl,
  };

  parse_error( Reason reason, std::size_t position, std::string const& what )
    : std::runtime_error( what + " at offset " + std::to_string( position ) ), reason_( reason ), position_( position )
  {
  }

  Reason reason() const { return reason_; }
  std::size_t position() const { return position_; }

private:
  Reason reason_;
  std::size_t position_;
};

namespace detail
{

enum class Tok
{
  Ident,
  True,
  False,
  LParen,
  RParen,
  Not,
  And,
  Or,
  Implies,
  Iff,
  // temporal keywords
  X,
  N,
  F,
  G,
  U,
  Xa,
  Na,
  Fa,
  Ga,
  Ua,
  End,
};

struct Token
{
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool is_ident_start( char c ) { return ( c >= 'a' && c <= 'z' ) || c == '_'; }
inline bool is_ident_char( char c ) { return is_ident_start( c ) || ( c >= '0' && c <= '9' ); }

inline std::vector<Token> tokenize( std::string_view text )
{
  std::vector<Token> out;
  std::size_t i = 0;
  while ( i < text.size() )
  {
    char const c = text[i];
    if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      ++i;
      continue;
    }
    std::size_t const start = i;
    if ( c == '(' )
    {
      out.push_back( { Tok::LParen, "(", start } );
      ++i;
    }
    else if ( c == ')' )
    {
      out.push_back( { Tok::RParen, ")", start } );
      ++i;
    }
    else if ( c == '!' )
    {
      out.push_back( { Tok::Not, "!", start } );
      ++i;
    }
    else if ( c == '&' )
    {
      out.push_back( { Tok::And, "&", start } );
      ++i;
    }
    else if ( c == '|' )
    {
      out.push_back( { Tok::Or, "|", start } );
      ++i;
    }
    else if ( text.substr( i, 3 ) == "<->" )
    {
      out.push_back( { Tok::Iff, "<->", start } );
      i += 3;
    }
    else if ( text.substr( i, 2 ) == "->" )
    {
      out.push_back( { Tok::Implies, "->", start } );
      i += 2;
    }
    else if ( is_ident_start( c ) )
    {
      while ( i < text.size() && is_ident_char( text[i] ) )
        ++i;
      std::string word( text.substr( start, i - start ) );
      Tok kind = Tok::Ident;
      if ( word == "true" )
        kind = Tok::True;
      else if ( word == "false" )
        kind = Tok::False;
      out.push_back( { kind, std::move( word ), start } );
    }
    else if ( c >= 'A' && c <= 'Z' )
    {
      // operator keywords are a capital letter optionally followed by 'a'
      while ( i < text.size() && ( std::isalnum( static_cast<unsigned char>( text[i] ) ) || text[i] == '_' ) )
        ++i;
      std::string word( text.substr( start, i - start ) );
      static std::pair<char const*, Tok> const keywords[] = {
          { "X", Tok::X }, { "N", Tok::N }, { "F", Tok::F }, { "G", Tok::G }, { "U", Tok::U },
          { "Xa", Tok::Xa }, { "Na", Tok::Na }, { "Fa", Tok::Fa }, { "Ga", Tok::Ga }, { "Ua", Tok::Ua } };
      bool found = false;
      for ( auto const& [kw, kind] : keywords )
      {
        if ( word == kw )
        {
          out.push_back( { kind, word, start } );
          found = true;
          break;
        }
      }
      if ( !found )
        throw parse_error( parse_error::Reason::lexical, start, "unknown operator '" + word + "'" );
    }
    else
    {
      throw parse_error( parse_error::Reason::lexical, start, std::string( "unexpected character '" ) + c + "'" );
    }
  }
  out.push_back( { Tok::End, "", text.size() } );
  return out;
}

inline bool is_abstract_token( Tok t )
{
  return t == Tok::Xa || t == Tok::Na || t == Tok::Fa || t == Tok::Ga || t == Tok::Ua;
}

class Parser
{
public:
  Parser( std::string_view text, Mode mode ) : tokens_( tokenize( text ) ), mode_( mode )
  {
    if ( mode_ == Mode::ltl )
      for ( auto const& t : tokens_ )
        if ( is_abstract_token( t.kind ) )
          throw parse_error( parse_error::Reason::abstract_in_ltl, t.pos,
                             "abstract operator '" + t.text + "' is not allowed in ltl mode" );
  }

  Formula parse()
  {
    auto f = parse_iff();
    if ( peek().kind != Tok::End )
      fail( "unexpected '" + peek().text + "'" );
    return f;
  }

private:
  Token const& peek() const { return tokens_[pos_]; }
  Token const& advance() { return tokens_[pos_++]; }

  bool accept( Tok k )
  {
    if ( peek().kind != k )
      return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail( std::string const& msg ) const
  {
    throw parse_error( parse_error::Reason::syntax, peek().pos, msg.empty() || peek().kind == Tok::End ? "unexpected end of input" : msg );
  }

  Formula parse_iff()
  {
    auto f = parse_implies();
    while ( accept( Tok::Iff ) )
      f = iff( f, parse_implies() );
    return f;
  }

  Formula parse_implies()
  {
    auto f = parse_or();
    if ( accept( Tok::Implies ) )
      return implies( f, parse_implies() );
    return f;
  }

  Formula parse_or()
  {
    auto f = parse_and();
    while ( accept( Tok::Or ) )
      f = disj( f, parse_and() );
    return f;
  }

  Formula parse_and()
  {
    auto f = parse_until();
    while ( accept( Tok::And ) )
      f = conj( f, parse_until() );
    return f;
  }

  Formula parse_until()
  {
    auto f = parse_unary();
    if ( accept( Tok::U ) )
      return until( f, parse_until() );
    if ( accept( Tok::Ua ) )
      return abs_until( f, parse_until() );
    return f;
  }

  Formula parse_unary()
  {
    switch ( peek().kind )
    {
    case Tok::Not:
      advance();
      return neg( parse_unary() );
    case Tok::X:
      advance();
      return weak_next( parse_unary() );
    case Tok::N:
      advance();
      return strong_next( parse_unary() );
    case Tok::F:
      advance();
      return eventually( parse_unary() );
    case Tok::G:
      advance();
      return always( parse_unary() );
    case Tok::Xa:
      advance();
      return abs_weak_next( parse_unary() );
    case Tok::Na:
      advance();
      return abs_strong_next( parse_unary() );
    case Tok::Fa:
      advance();
      return abs_eventually( parse_unary() );
    case Tok::Ga:
      advance();
      return abs_always( parse_unary() );
    default:
      return parse_atom();
    }
  }

  Formula parse_atom()
  {
    switch ( peek().kind )
    {
    case Tok::True:
      advance();
      return truth();
    case Tok::False:
      advance();
      return falsity();
    case Tok::Ident:
      return prop( advance().text );
    case Tok::LParen:
    {
      advance();
      auto f = parse_iff();
      if ( !accept( Tok::RParen ) )
        fail( "expected ')'" );
      return f;
    }
    default:
      fail( "expected a formula, found '" + peek().text + "'" );
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Mode mode_;
};

} // namespace detail

/*! \brief Parses the ASCII formula grammar into the desugared core tree.

  Precedence from loosest to tightest: `<->`, `->` (right), `|`, `&`,
  `U`/`Ua` (right), then the prefix operators.
*/
inline Formula parse_formula( std::string_view text, Mode mode = Mode::ltl )
{
  return detail::Parser( text, mode ).parse();
}

} // namespace ltlkit
